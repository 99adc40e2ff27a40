#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parkfn::cli {

// Parsed command line. seed defaults to 0 so bare invocations are
// reproducible; method "auto" picks the strongest feasible method under
// each module's size guards.
struct RunConfig {
    std::string command;
    std::vector<int> n_values;  // tv/kolmogorov accept a comma-separated sweep
    int k = 1;
    int a = -1;  // -1: not set
    double c = 0.0;
    std::uint64_t seed = 0;
    long long samples = 0;
    std::string method = "auto";
    std::string format = "csv";  // csv | json
    std::string out;             // empty: stdout
    int threads = 1;
    bool count_only = false;
};

// Executes argv (without the program name) and writes one record set in
// the chosen format. Returns 0 on success, 2 on invalid arguments, 1 on a
// size-guard violation or runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parkfn::cli
