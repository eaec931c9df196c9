#include "rof/imaging.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rof {

namespace {

// Header tokenizer: whitespace separated, '#' starts a comment to end of line.
class PgmCursor {
public:
    explicit PgmCursor(const std::string& bytes) : s_(bytes) {}

    std::string next_token() {
        skip();
        std::string tok;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])))
            tok.push_back(s_[pos_++]);
        if (tok.empty()) throw ImageParseError("pgm: truncated header");
        return tok;
    }

    int next_int(const char* what) {
        const std::string tok = next_token();
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ImageParseError(std::string("pgm: bad ") + what + " '" + tok + "'");
        }
    }

    // P5: exactly one whitespace byte separates the header from the payload.
    std::size_t binary_payload_start() {
        if (pos_ >= s_.size() || !std::isspace(static_cast<unsigned char>(s_[pos_])))
            throw ImageParseError("pgm: missing separator before payload");
        return pos_ + 1;
    }

private:
    void skip() {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

Image read_pgm(const std::string& bytes) {
    PgmCursor cur(bytes);
    const std::string magic = cur.next_token();
    if (magic != "P2" && magic != "P5") throw ImageParseError("pgm: unsupported magic '" + magic + "'");
    const int w = cur.next_int("width");
    const int h = cur.next_int("height");
    if (w < 1 || h < 1) throw ImageParseError("pgm: non-positive dimensions");
    const int maxval = cur.next_int("maxval");
    if (maxval < 1) throw ImageParseError("pgm: non-positive maxval");
    if (maxval > 255) throw ImageParseError("pgm: maxval > 255 not supported");

    Image img(w, h);
    const std::size_t count = static_cast<std::size_t>(w) * h;
    if (magic == "P5") {
        const std::size_t start = cur.binary_payload_start();
        if (bytes.size() - start < count) throw ImageParseError("pgm: truncated payload");
        for (std::size_t k = 0; k < count; ++k)
            img.pixels[k] = static_cast<unsigned char>(bytes[start + k]);
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const int v = cur.next_int("pixel");
            if (v < 0 || v > maxval) throw ImageParseError("pgm: pixel out of range");
            img.pixels[k] = v;
        }
    }
    return img;
}

std::string write_pgm(const Image& img) {
    if (img.width < 1 || img.height < 1) throw std::invalid_argument("write_pgm: empty image");
    std::ostringstream out;
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::string payload;
    payload.reserve(img.pixels.size());
    for (double v : img.pixels) {
        double r = std::nearbyint(v); // round half to even
        if (r < 0.0) r = 0.0;
        if (r > 255.0) r = 255.0;
        payload.push_back(static_cast<char>(static_cast<unsigned char>(r)));
    }
    return out.str() + payload;
}

Image read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_pgm(buf.str());
}

void write_pgm_file(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    const std::string bytes = write_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

GridFunction image_to_grid(const Image& img) {
    if (img.width != img.height) throw std::invalid_argument("image_to_grid: image must be square");
    return GridFunction(img.width, img.pixels);
}

Image grid_to_image(const GridFunction& u) {
    Image img(u.n(), u.n());
    img.pixels = u.values();
    return img;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// k-th draw of a counter-based uniform stream, in (0, 1]
double uniform_at(std::uint64_t seed, std::uint64_t k) {
    const std::uint64_t z = mix64(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
    return ((z >> 11) + 1) * 0x1.0p-53;
}

} // namespace

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
    Image out = img;
    for (std::size_t k = 0; k < out.pixels.size(); ++k) {
        const double u1 = uniform_at(seed, 2 * k);
        const double u2 = uniform_at(seed, 2 * k + 1);
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        out.pixels[k] += sigma * z;
    }
    return out;
}

double psnr(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("psnr: image dimensions differ");
    double mse = 0.0;
    for (std::size_t k = 0; k < a.pixels.size(); ++k) {
        const double d = a.pixels[k] - b.pixels[k];
        mse += d * d;
    }
    mse /= static_cast<double>(a.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

Image synthetic_shapes(int size) {
    if (size < 8) throw std::invalid_argument("synthetic_shapes: size must be >= 8");
    Image img(size, size);
    for (int j = 0; j < size; ++j) {
        const double y = (j + 0.5) / size;
        for (int i = 0; i < size; ++i) {
            const double x = (i + 0.5) / size;
            double v = 64.0;
            if (x > 0.08 && x < 0.52 && y > 0.08 && y < 0.48) v = 200.0;   // big rectangle
            if (x > 0.60 && x < 0.92 && y > 0.55 && y < 0.93) v = 20.0;    // dark block
            const double dx = x - 0.76, dy = y - 0.26;
            if (dx * dx + dy * dy < 0.16 * 0.16) v = 235.0;                // disc
            if (y > 0.62 && y < 0.90 && x > 0.08 && x < 0.46)
                v = 130.0 + 18.0 * std::sin(10.0 * M_PI * x);              // wave band
            img(i, j) = v;
        }
    }
    return img;
}

} // namespace rof
