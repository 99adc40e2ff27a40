// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code is the number of
// failed criteria. --cli <path> points at the command-line binary used by
// the reproducibility criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "parkfn/cayley.hpp"
#include "parkfn/parking.hpp"
#include "parkfn/rng.hpp"
#include "parkfn/stats.hpp"
#include "parkfn/walks.hpp"

using namespace parkfn;

namespace {

int g_failures = 0;
std::string g_cli_path;

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail = "") {
    std::printf("[%s] %2d. %-28s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                seconds, detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(number, name, pass, seconds, detail);
}

bool counting(std::string& detail) {
    const std::array<long long, 7> expected = {1, 3, 16, 125, 1296, 16807, 262144};
    for (int n = 1; n <= 7; ++n) {
        const auto count = static_cast<long long>(parking::enumerate_parking(n).size());
        if (count != expected[n - 1]) {
            detail = "n=" + std::to_string(n) + " count " + std::to_string(count);
            return false;
        }
    }
    return true;
}

bool bijection(std::string& detail) {
    for (int m = 1; m <= 5; ++m) {
        std::vector<parking::ParkingFunction> image;
        std::vector<int> code(m - 1, 0);
        while (true) {
            image.push_back(cayley::tree_to_parking(cayley::prufer_decode({code})));
            int d = m - 2;
            while (d >= 0 && code[d] == m) code[d--] = 0;
            if (d < 0) break;
            ++code[d];
        }
        std::sort(image.begin(), image.end());
        if (std::adjacent_find(image.begin(), image.end()) != image.end()) {
            detail = "not injective at m=" + std::to_string(m);
            return false;
        }
        if (image != parking::enumerate_parking(m)) {
            detail = "image mismatch at m=" + std::to_string(m);
            return false;
        }
    }
    return true;
}

bool figure_vectors(std::string& detail) {
    const cayley::CayleyTree tree{{-1, 3, 3, 0, 0, 3, 0, 8, 6, 8}};
    if (cayley::prufer_encode(tree).code != std::vector<int>{8, 8, 6, 0, 3, 0, 3, 3}) {
        detail = "code mismatch";
        return false;
    }
    if (cayley::bfs_ranks(tree).parent_rank[5] != 2) {
        detail = "parent rank mismatch";
        return false;
    }
    if (cayley::tree_to_parking(tree).places != std::vector<int>{2, 2, 1, 1, 2, 1, 8, 4, 8}) {
        detail = "parking vector mismatch";
        return false;
    }
    return true;
}

bool dp_vs_oracle(std::string& detail) {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
        for (int k = 1; k <= std::min(n, 3); ++k) {
            const auto oracle = parking::oracle_joint_pmf(n, k);
            std::vector<int> tuple(k, 1);
            while (true) {
                worst = std::max(worst,
                                 std::abs(walks::joint_pmf(n, tuple) - oracle.prob(tuple)));
                int d = k - 1;
                while (d >= 0 && tuple[d] == n) tuple[d--] = 1;
                if (d < 0) break;
                ++tuple[d];
            }
        }
    }
    std::ostringstream os;
    os << "max |dp - oracle| = " << worst;
    detail = os.str();
    return worst <= 1e-10;
}

bool walk_identities(std::string& detail) {
    const auto close = [](double got, double expect) { return std::abs(got - expect) <= 1e-12; };
    if (!close(walks::conditioned_expectation(2, walks::WeightQuery{{{1, 1}}}), 4.0 / 3.0) ||
        !close(walks::conditioned_expectation(2, walks::WeightQuery{{{2, 1}}}), 2.0 / 3.0) ||
        !close(walks::conditioned_expectation(2, walks::WeightQuery{{{1, 2}}}), 2.0 / 3.0)) {
        detail = "E_2 identity failed";
        return false;
    }
    for (int n = 1; n <= 200; ++n) {
        const auto profile = walks::increment_mean_profile(n);
        for (int i = 1; i < n; ++i) {
            if (profile[i] > profile[i - 1] + 1e-12) {
                detail = "profile increases at n=" + std::to_string(n) + ", i=" + std::to_string(i);
                return false;
            }
        }
    }
    return true;
}

bool height_inequality(std::string& detail) {
    double worst_slack = 0.0;
    for (int n = 2; n <= 30; ++n) {
        const auto moments = walks::pair_increment_moments(n);
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                const double lhs = static_cast<double>(i) * j * moments.cross[i][j];
                const double rhs = walks::product_height_expectation(n, {i, j});
                worst_slack = std::max(worst_slack, lhs - rhs);
            }
        }
    }
    std::ostringstream os;
    os << "max (lhs - rhs) = " << worst_slack;
    detail = os.str();
    return worst_slack <= 1e-12;
}

bool cycle_lemma(std::string& detail) {
    // Exhaustive over compositions of n into n+1 cells for n <= 4.
    for (int n = 1; n <= 4; ++n) {
        std::vector<int> xs(n + 1, 0);
        const std::function<bool(int, int)> rec = [&](int pos, int left) -> bool {
            if (pos == n) {
                xs[pos] = left;
                int valid = 0;
                for (int rho = 0; rho <= n; ++rho) {
                    std::vector<int> rot(xs.begin() + rho, xs.end());
                    rot.insert(rot.end(), xs.begin(), xs.begin() + rho);
                    valid += walks::is_excursion(rot);
                }
                return valid == 1;
            }
            for (int v = 0; v <= left; ++v) {
                xs[pos] = v;
                if (!rec(pos + 1, left - v)) return false;
            }
            return true;
        };
        if (!rec(0, n)) {
            detail = "exhaustive failure at n=" + std::to_string(n);
            return false;
        }
    }
    const int n = 50;
    for (int rep = 0; rep < 10000; ++rep) {
        auto rng = RandomStream::derived(51, static_cast<std::uint64_t>(rep));
        const auto xs = walks::sample_conditioned_increments(n, rng);
        int valid = 0;
        for (int rho = 0; rho <= n; ++rho) {
            std::vector<int> rot(xs.begin() + rho, xs.end());
            rot.insert(rot.end(), xs.begin(), xs.begin() + rho);
            valid += walks::is_excursion(rot);
        }
        if (valid != 1) {
            detail = "random draw with " + std::to_string(valid) + " rotations";
            return false;
        }
    }
    return true;
}

bool sampler_exactness(std::string& detail) {
    std::ostringstream os;
    {
        const auto all = parking::enumerate_parking(3);
        std::vector<long long> observed(all.size(), 0);
        const long long m = 160000;
        for (long long r = 0; r < m; ++r) {
            auto rng = RandomStream::derived(101, static_cast<std::uint64_t>(r));
            const auto pf = cayley::sample_uniform_parking(3, rng);
            ++observed[std::lower_bound(all.begin(), all.end(), pf) - all.begin()];
        }
        const std::vector<double> expected(all.size(), static_cast<double>(m) / all.size());
        const double stat = stats::chi_square(observed, expected);
        const double crit = stats::chi_square_critical(static_cast<int>(all.size()) - 1, 1e-3);
        os << "gof " << stat << " < " << crit;
        if (stat >= crit) {
            detail = os.str();
            return false;
        }
    }
    {
        const int n = 50;
        const long long m = 100000;
        std::vector<long long> x1_count(n + 2, 0);
        std::vector<long long> mid_count(n + 1, 0);
        const int mid = n / 2;
        for (long long r = 0; r < m; ++r) {
            auto rng = RandomStream::derived(103, static_cast<std::uint64_t>(r));
            const auto path = walks::sample_excursion(n, rng);
            ++x1_count[path.x[0]];
            int s = 0;
            for (int j = 0; j < mid; ++j) s += path.x[j] - 1;
            ++mid_count[s];
        }
        const auto check_marginal = [&](const std::vector<double>& law,
                                        const std::vector<long long>& raw, const char* what) {
            std::vector<double> expected(law.size());
            for (std::size_t i = 0; i < law.size(); ++i) expected[i] = law[i] * m;
            std::vector<long long> observed(raw.begin(), raw.begin() + law.size());
            const auto [obs, exp] = stats::merge_low_expected_bins(observed, expected);
            const double stat = stats::chi_square(obs, exp);
            const double crit = stats::chi_square_critical(static_cast<int>(obs.size()) - 1, 1e-3);
            os << "; " << what << " " << stat << " < " << crit;
            return stat < crit;
        };
        const bool x1_ok = check_marginal(walks::increment_marginal(n, 1), x1_count, "X1");
        const bool mid_ok = check_marginal(walks::height_marginal(n, mid), mid_count, "S25");
        detail = os.str();
        return x1_ok && mid_ok;
    }
}

bool tv_scaling(std::string& detail) {
    std::vector<double> scaled;
    std::ostringstream os;
    for (int n : {50, 100, 200}) {
        const auto r = stats::tv_distance(n, 1, stats::Method::exact_dp);
        scaled.push_back(std::sqrt(static_cast<double>(n)) * r.value);
        os << "sqrt(n)*tv(" << n << ")=" << scaled.back() << " ";
    }
    detail = os.str();
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    return *hi <= 2.0 * *lo;
}

bool clt_probe(std::string& detail) {
    const auto r = stats::sum_clt_test(100000, 300, 2000, 2027, 2);
    std::ostringstream os;
    os << "ks = " << r.ks_distance;
    detail = os.str();
    return r.ks_distance < 0.05;
}

bool max_probe(std::string& detail) {
    const auto r = stats::max_exponential_test(100000, 1000, 2000, 2029, 2);
    std::ostringstream os;
    os << "ks = " << r.ks_distance;
    detail = os.str();
    return r.ks_distance < 0.05;
}

bool tail_probe(std::string& detail) {
    std::ostringstream os;
    {
        const auto r = stats::tail_comparison(20000, 0.5, 0, 50000, 2031, 2);
        if (r.lhs != 1.0 || r.rhs != 1.0) {
            detail = "a=0 sides not exactly 1";
            return false;
        }
    }
    for (int a : {1, 2}) {
        const auto r = stats::tail_comparison(20000, 0.5, a, 50000, 2031 + a, 2);
        const double gap = std::abs(r.lhs - r.rhs);
        const double band =
            3.0 * std::sqrt(r.lhs_stderr * r.lhs_stderr + r.rhs_stderr * r.rhs_stderr);
        os << "a=" << a << ": |" << r.lhs << " - " << r.rhs << "| = " << gap << " vs " << band
           << " (n'=" << r.approx_n << ") ";
        if (gap > band) {
            detail = os.str();
            return false;
        }
    }
    detail = os.str();
    return true;
}

std::string run_command(const std::string& cmd) {
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    pclose(pipe);
    return output;
}

bool reproducibility(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "no --cli path given";
        return false;
    }
    const std::string base = g_cli_path + " sample --n 50 --samples 3 --seed 9";
    if (run_command(base) != run_command(base)) {
        detail = "repeated invocation differs";
        return false;
    }
    const std::string mc = g_cli_path + " limit-sum --n 2000 --k 10 --samples 400 --seed 5";
    const auto t1 = run_command(mc + " --threads 1");
    const auto t3 = run_command(mc + " --threads 3");
    if (t1.empty() || t1 != t3) {
        detail = "worker count changed the output";
        return false;
    }
    const std::string tail_cmd =
        g_cli_path + " tail --n 500 --c 0.5 --a 1 --samples 2000 --seed 11";
    if (run_command(tail_cmd + " --threads 2") != run_command(tail_cmd + " --threads 1")) {
        detail = "tail output depends on workers";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
    }

    criterion(1, "counting", counting);
    criterion(2, "bijection", bijection);
    criterion(3, "figure-vectors", figure_vectors);
    criterion(4, "dp-vs-oracle", dp_vs_oracle);
    criterion(5, "walk-identities", walk_identities);
    criterion(6, "height-inequality", height_inequality);
    criterion(7, "cycle-lemma", cycle_lemma);
    criterion(8, "sampler-exactness", sampler_exactness);
    criterion(9, "tv-scaling", tv_scaling);
    criterion(10, "sum-clt", clt_probe);
    criterion(11, "max-exponential", max_probe);
    criterion(12, "tail-comparison", tail_probe);
    criterion(13, "reproducibility", reproducibility);

    if (g_failures == 0) {
        std::printf("all 13 criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", g_failures);
    }
    return g_failures;
}
