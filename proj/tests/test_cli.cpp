#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rof/imaging.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("rofflow_cli_test_" + std::to_string(::getpid()) +
                                            "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(ROFFLOW_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string run_capture(const std::string& args, int& exit_code) {
    TempDir tmp;
    const std::string out_path = tmp.file("stdout.txt");
    const std::string cmd = std::string(ROFFLOW_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_constant_pgm(const std::string& path, int n, double value) {
    rof::Image img(n, n);
    for (auto& p : img.pixels) p = value;
    rof::write_pgm_file(img, path);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("") == 1);                       // missing subcommand
    CHECK(run("denoise") == 1);                // missing required flags
    CHECK(run("frobnicate") == 1);             // unknown subcommand
    CHECK(run("verify --suite no-such-suite") == 1);
}

TEST_CASE("denoise on a constant image is the identity") {
    TempDir tmp;
    write_constant_pgm(tmp.file("in.pgm"), 16, 128.0);
    const std::string csv = tmp.file("diag.csv");
    CHECK(run("denoise -i " + tmp.file("in.pgm") + " -o " + tmp.file("out.pgm") +
              " --csv " + csv + " --steps 3") == 0);
    CHECK(slurp(tmp.file("out.pgm")) == slurp(tmp.file("in.pgm")));

    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,energy_J,energy_E,inner_iters,step_norm,residual_inf");
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        ++rows;
        // one inner iteration per step on a constant image
        std::istringstream ls(line);
        std::string field;
        for (int c = 0; c < 4; ++c) std::getline(ls, field, ',');
        CHECK(field == "1");
    }
    CHECK(rows == 3);
}

TEST_CASE("denoise is deterministic and missing input exits 1") {
    TempDir tmp;
    write_constant_pgm(tmp.file("in.pgm"), 8, 100.0);
    CHECK(run("denoise -i " + tmp.file("in.pgm") + " -o " + tmp.file("a.pgm") + " --steps 2") == 0);
    CHECK(run("denoise -i " + tmp.file("in.pgm") + " -o " + tmp.file("b.pgm") + " --steps 2") == 0);
    CHECK(slurp(tmp.file("a.pgm")) == slurp(tmp.file("b.pgm")));
    CHECK(run("denoise -i " + tmp.file("missing.pgm") + " -o " + tmp.file("c.pgm")) == 1);
}

TEST_CASE("explicit diffusion subcommand") {
    TempDir tmp;
    write_constant_pgm(tmp.file("in.pgm"), 16, 77.0);
    CHECK(run("pm -i " + tmp.file("in.pgm") + " -o " + tmp.file("out.pgm") + " --steps 5") == 0);
    CHECK(slurp(tmp.file("out.pgm")) == slurp(tmp.file("in.pgm")));
    // dt far above the stability bound is a numerical failure
    CHECK(run("pm -i " + tmp.file("in.pgm") + " -o " + tmp.file("bad.pgm") + " --dt 1.0") == 2);
}

TEST_CASE("verification subcommand") {
    CHECK(run("verify --suite adjointness --size 8 --seed 7") == 0);
    int code = 0;
    const std::string out = run_capture("verify --suite adjointness --size 8 --seed 7", code);
    CHECK(code == 0);
    CHECK(out.find("pass") != std::string::npos);
    CHECK(out.find("adjointness") != std::string::npos);
}

TEST_CASE("psnr and noise subcommands") {
    TempDir tmp;
    write_constant_pgm(tmp.file("a.pgm"), 8, 50.0);
    int code = 0;
    const std::string out = run_capture("psnr " + tmp.file("a.pgm") + " " + tmp.file("a.pgm"), code);
    CHECK(code == 0);
    CHECK(out.find("inf") != std::string::npos);

    // zero sigma copies the file byte for byte
    CHECK(run("noise -i " + tmp.file("a.pgm") + " -o " + tmp.file("z.pgm") + " --sigma 0") == 0);
    CHECK(slurp(tmp.file("z.pgm")) == slurp(tmp.file("a.pgm")));

    // identical seeds give byte-identical noise
    CHECK(run("noise -i " + tmp.file("a.pgm") + " -o " + tmp.file("n1.pgm") +
              " --sigma 20 --seed 9") == 0);
    CHECK(run("noise -i " + tmp.file("a.pgm") + " -o " + tmp.file("n2.pgm") +
              " --sigma 20 --seed 9") == 0);
    CHECK(slurp(tmp.file("n1.pgm")) == slurp(tmp.file("n2.pgm")));
}

TEST_CASE("refinement study subcommand") {
    TempDir tmp;
    const std::string csv = tmp.file("study.csv");
    CHECK(run("study --levels 4 8 --T 0.2 --csv " + csv + " --source constant --lambda 1") == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "N,M,dt,dist_to_prev_level");
    std::string first, second;
    std::getline(in, first);
    std::getline(in, second);
    CHECK(first.substr(0, 2) == "4,");
    CHECK(second.substr(0, 2) == "8,");
    CHECK(second.find("0") != std::string::npos); // constant source: distance 0

    CHECK(run("study --levels 8 4 --csv " + tmp.file("bad.csv")) == 1); // not increasing
}

TEST_CASE("json config preloads flags and flags win") {
    TempDir tmp;
    write_constant_pgm(tmp.file("in.pgm"), 8, 60.0);
    {
        std::ofstream cfg(tmp.file("cfg.json"));
        cfg << "{\"denoise\": {\"steps\": 2, \"input\": \"" << tmp.file("in.pgm")
            << "\", \"output\": \"" << tmp.file("from_cfg.pgm") << "\"}}";
    }
    CHECK(run("--config " + tmp.file("cfg.json") + " denoise") == 0);
    CHECK(fs::exists(tmp.file("from_cfg.pgm")));

    // a command-line flag overrides the config value
    CHECK(run("--config " + tmp.file("cfg.json") + " denoise -o " + tmp.file("override.pgm")) == 0);
    CHECK(fs::exists(tmp.file("override.pgm")));

    // malformed config is a usage error
    {
        std::ofstream cfg(tmp.file("bad.json"));
        cfg << "{not json";
    }
    CHECK(run("--config " + tmp.file("bad.json") + " verify --suite adjointness") == 1);
}
