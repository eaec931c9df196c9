#ifndef ROF_VERIFY_HPP
#define ROF_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rof::verify {

struct Options {
    int size = 8;
    std::uint64_t seed = 1;
    int trials = 100;
};

struct Result {
    std::string suite;
    bool pass = false;
    std::string detail; ///< empty on pass
};

/// Names of all property suites, in execution order.
std::vector<std::string> suite_names();

/// Run one suite ("all" is not accepted here).
Result run_suite(const std::string& name, const Options& opts);

/// Run every suite.
std::vector<Result> run_all(const Options& opts);

} // namespace rof::verify

#endif
