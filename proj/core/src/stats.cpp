#include "parkfn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "parkfn/cayley.hpp"
#include "parkfn/errors.hpp"
#include "parkfn/parallel.hpp"
#include "parkfn/parking.hpp"
#include "parkfn/walks.hpp"

namespace parkfn::stats {

std::string method_name(Method m) {
    switch (m) {
        case Method::exact_dp: return "exact-dp";
        case Method::exact_enumeration: return "exact-enumeration";
        case Method::monte_carlo: return "monte-carlo";
        case Method::auto_select: return "auto";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "exact-dp") return Method::exact_dp;
    if (name == "exact-enumeration") return Method::exact_enumeration;
    if (name == "monte-carlo") return Method::monte_carlo;
    if (name == "auto") return Method::auto_select;
    throw InvalidInputError("unknown method: " + name);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

double ks_statistic(const std::vector<double>& sample,
                    const std::function<double(double)>& cdf) {
    if (sample.empty()) throw InvalidInputError("ks_statistic: empty sample");
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / m,
                                 static_cast<double>(i + 1) / m - f));
    }
    return d;
}

double chi_square(const std::vector<long long>& observed, const std::vector<double>& expected) {
    if (observed.empty() || observed.size() != expected.size())
        throw InvalidInputError("chi_square: need matching nonempty vectors");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 5.0)
            throw InvalidInputError("chi_square: expected count below 5, merge bins first");
        const double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

double chi_square_critical(int dof, double significance) {
    if (dof < 1 || significance <= 0.0 || significance >= 1.0)
        throw InvalidInputError("chi_square_critical: bad dof or significance");
    return boost::math::quantile(boost::math::chi_squared(dof), 1.0 - significance);
}

std::pair<std::vector<long long>, std::vector<double>> merge_low_expected_bins(
    const std::vector<long long>& observed, const std::vector<double>& expected,
    double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw InvalidInputError("merge_low_expected_bins: need matching nonempty vectors");
    std::vector<long long> obs;
    std::vector<double> exp;
    long long o_acc = 0;
    double e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += observed[i];
        e_acc += expected[i];
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = 0;
            e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0) {
        if (exp.empty()) throw InvalidInputError("merge_low_expected_bins: total mass below threshold");
        obs.back() += o_acc;
        exp.back() += e_acc;
    }
    return {obs, exp};
}

namespace {

// Joint pmf of the first two places as a dense 1-based matrix.
std::vector<std::vector<double>> exact_pmf_k2(int n) {
    const auto moments = walks::pair_increment_moments(n);
    const double pairs = static_cast<double>(n) * (n - 1);
    std::vector<std::vector<double>> pmf(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            pmf[i][j] = (i == j ? moments.second_factorial[i] : moments.cross[i][j]) / pairs;
        }
    }
    return pmf;
}

// Dense k-dimensional pmf from the enumeration oracle, row-major over
// (i_1, ..., i_k) in [1, n]^k.
std::vector<double> oracle_pmf_dense(int n, int k) {
    const auto oracle = parking::oracle_joint_pmf(n, k);
    std::size_t cells = 1;
    for (int d = 0; d < k; ++d) cells *= static_cast<std::size_t>(n);
    std::vector<double> pmf(cells, 0.0);
    for (const auto& [tuple, count] : oracle.counts) {
        std::size_t idx = 0;
        for (int d = 0; d < k; ++d) idx = idx * n + (tuple[d] - 1);
        pmf[idx] = static_cast<double>(count) / static_cast<double>(oracle.denominator);
    }
    return pmf;
}

// In-place prefix sums along each axis: pmf becomes the joint CDF.
void cumulate_axes(std::vector<double>& grid, int n, int k) {
    std::size_t stride = 1;
    for (int d = 0; d < k; ++d) {
        for (std::size_t base = 0; base < grid.size(); ++base) {
            const std::size_t coord = (base / stride) % n;
            if (coord > 0) grid[base] += grid[base - stride];
        }
        stride *= static_cast<std::size_t>(n);
    }
}

std::vector<int> sample_prefix(int n, int k, std::uint64_t seed, long long replicate) {
    auto rng = RandomStream::derived(seed, static_cast<std::uint64_t>(replicate));
    const auto pf = cayley::sample_uniform_parking(n, rng);
    return std::vector<int>(pf.places.begin(), pf.places.begin() + k);
}

using TupleCounts = std::map<std::vector<int>, long long>;

// Plug-in estimator of the unnormalized TV sum from tuple counts.
double tv_from_counts(const TupleCounts& counts, long long samples, int n, int k) {
    const double u = std::pow(static_cast<double>(n), -k);
    double cells = std::pow(static_cast<double>(n), k);
    double value = 0.0;
    for (const auto& [tuple, c] : counts) {
        value += std::abs(static_cast<double>(c) / static_cast<double>(samples) - u);
        cells -= 1.0;
    }
    return value + cells * u;
}

void require_k_range(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw InvalidInputError("need 1 <= k <= n");
}

}  // namespace

DistanceReport tv_distance(int n, int k, Method method, const MonteCarloOptions& mc) {
    require_k_range(n, k);
    if (method == Method::auto_select) {
        if (k <= 2 && n <= 200) method = Method::exact_dp;
        else if (n <= 6) method = Method::exact_enumeration;
        else method = Method::monte_carlo;
    }

    DistanceReport report;
    report.n = n;
    report.k = k;
    report.method = method;

    if (method == Method::exact_dp) {
        if (k > 2 || n > 200)
            throw SizeLimitError("tv_distance: exact-dp limited to k <= 2, n <= 200");
        double value = 0.0;
        if (k == 1) {
            const auto means = walks::increment_mean_profile(n);
            for (int i = 1; i <= n; ++i) value += std::abs(means[i - 1] / n - 1.0 / n);
        } else {
            const auto pmf = exact_pmf_k2(n);
            const double u = 1.0 / (static_cast<double>(n) * n);
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) value += std::abs(pmf[i][j] - u);
            }
        }
        report.value = value;
        return report;
    }

    if (method == Method::exact_enumeration) {
        if (n > 6) throw SizeLimitError("tv_distance: exact-enumeration limited to n <= 6");
        const auto oracle = parking::oracle_joint_pmf(n, k);
        const double u = std::pow(static_cast<double>(n), -k);
        double cells = std::pow(static_cast<double>(n), k);
        double value = 0.0;
        for (const auto& [tuple, c] : oracle.counts) {
            value += std::abs(static_cast<double>(c) / static_cast<double>(oracle.denominator) - u);
            cells -= 1.0;
        }
        report.value = value + cells * u;
        return report;
    }

    // Monte Carlo: tuple counts overall plus ten replicate batches for a
    // spread-based standard error.
    const long long m = mc.samples;
    if (m < 100) throw InvalidInputError("tv_distance: monte-carlo needs samples >= 100");
    constexpr int kBatches = 10;
    std::vector<TupleCounts> batch_counts(kBatches);
    std::vector<long long> batch_sizes(kBatches, 0);
    std::mutex merge_mutex;
    parallel_chunks(m, mc.threads, [&](long long begin, long long end) {
        std::vector<TupleCounts> local(kBatches);
        std::vector<long long> local_sizes(kBatches, 0);
        for (long long r = begin; r < end; ++r) {
            const int b = static_cast<int>((r * kBatches) / m);
            ++local[b][sample_prefix(n, k, mc.seed, r)];
            ++local_sizes[b];
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (int b = 0; b < kBatches; ++b) {
            for (const auto& [tuple, c] : local[b]) batch_counts[b][tuple] += c;
            batch_sizes[b] += local_sizes[b];
        }
    });

    TupleCounts total;
    for (const auto& bc : batch_counts) {
        for (const auto& [tuple, c] : bc) total[tuple] += c;
    }
    report.value = tv_from_counts(total, m, n, k);
    report.samples = m;

    double mean = 0.0, sq = 0.0;
    for (int b = 0; b < kBatches; ++b) {
        const double v = tv_from_counts(batch_counts[b], batch_sizes[b], n, k);
        mean += v;
        sq += v * v;
    }
    mean /= kBatches;
    const double var = std::max(0.0, sq / kBatches - mean * mean);
    report.std_error = std::sqrt(var / kBatches);
    return report;
}

DistanceReport kolmogorov_distance(int n, int k, Method method, const MonteCarloOptions& mc) {
    require_k_range(n, k);
    if (method == Method::auto_select) {
        if (k <= 2 && n <= 200) method = Method::exact_dp;
        else if (n <= 6 && k <= 3) method = Method::exact_enumeration;
        else method = Method::monte_carlo;
    }

    DistanceReport report;
    report.n = n;
    report.k = k;
    report.method = method;

    if (method == Method::exact_dp) {
        if (k > 2 || n > 200)
            throw SizeLimitError("kolmogorov_distance: exact-dp limited to k <= 2, n <= 200");
        double value = 0.0;
        if (k == 1) {
            const auto means = walks::increment_mean_profile(n);
            double cdf = 0.0;
            for (int i = 1; i <= n; ++i) {
                cdf += means[i - 1] / n;
                value = std::max(value, std::abs(cdf - static_cast<double>(i) / n));
            }
        } else {
            auto grid = exact_pmf_k2(n);  // turned into a CDF in place
            for (int i = 1; i <= n; ++i) {
                for (int j = 1; j <= n; ++j) {
                    grid[i][j] += grid[i - 1][j] + grid[i][j - 1] - grid[i - 1][j - 1];
                    const double u = (static_cast<double>(i) * j) / (static_cast<double>(n) * n);
                    value = std::max(value, std::abs(grid[i][j] - u));
                }
            }
        }
        report.value = value;
        return report;
    }

    if (method == Method::exact_enumeration) {
        if (n > 6 || k > 3)
            throw SizeLimitError("kolmogorov_distance: exact-enumeration limited to n <= 6, k <= 3");
        auto grid = oracle_pmf_dense(n, k);
        cumulate_axes(grid, n, k);
        double value = 0.0;
        const double nk = std::pow(static_cast<double>(n), k);
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            double prod = 1.0;
            std::size_t rem = idx;
            for (int d = 0; d < k; ++d) {
                prod *= static_cast<double>(rem % n + 1);
                rem /= n;
            }
            value = std::max(value, std::abs(grid[idx] - prod / nk));
        }
        report.value = value;
        return report;
    }

    const long long m = mc.samples;
    if (m < 100) throw InvalidInputError("kolmogorov_distance: monte-carlo needs samples >= 100");
    report.samples = m;

    if (k == 1) {
        std::vector<long long> counts(n + 1, 0);
        std::mutex merge_mutex;
        parallel_chunks(m, mc.threads, [&](long long begin, long long end) {
            std::vector<long long> local(n + 1, 0);
            for (long long r = begin; r < end; ++r) ++local[sample_prefix(n, 1, mc.seed, r)[0]];
            std::lock_guard<std::mutex> lock(merge_mutex);
            for (int i = 0; i <= n; ++i) counts[i] += local[i];
        });
        double value = 0.0, f_at_max = 0.0;
        long long acc = 0;
        for (int i = 1; i <= n; ++i) {
            acc += counts[i];
            const double f = static_cast<double>(acc) / static_cast<double>(m);
            const double dev = std::abs(f - static_cast<double>(i) / n);
            if (dev > value) {
                value = dev;
                f_at_max = f;
            }
        }
        report.value = value;
        report.std_error = std::sqrt(f_at_max * (1.0 - f_at_max) / static_cast<double>(m));
        return report;
    }

    if (k == 2) {
        if (n > 2048)
            throw SizeLimitError("kolmogorov_distance: full-grid k=2 scan limited to n <= 2048");
        std::vector<std::vector<long long>> counts(n + 1, std::vector<long long>(n + 1, 0));
        std::mutex merge_mutex;
        parallel_chunks(m, mc.threads, [&](long long begin, long long end) {
            std::vector<std::vector<long long>> local(n + 1, std::vector<long long>(n + 1, 0));
            for (long long r = begin; r < end; ++r) {
                const auto t = sample_prefix(n, 2, mc.seed, r);
                ++local[t[0]][t[1]];
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= n; ++j) counts[i][j] += local[i][j];
            }
        });
        double value = 0.0, f_at_max = 0.0;
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                counts[i][j] += counts[i - 1][j] + counts[i][j - 1] - counts[i - 1][j - 1];
                const double f = static_cast<double>(counts[i][j]) / static_cast<double>(m);
                const double u = (static_cast<double>(i) * j) / (static_cast<double>(n) * n);
                const double dev = std::abs(f - u);
                if (dev > value) {
                    value = dev;
                    f_at_max = f;
                }
            }
        }
        report.value = value;
        report.std_error = std::sqrt(f_at_max * (1.0 - f_at_max) / static_cast<double>(m));
        return report;
    }

    // k >= 3: random-grid scan; the reported max is a lower bound on the
    // true sup over the n^k grid.
    long long grid_points = 100000;
    while (grid_points * m > 2000000000LL && grid_points > 1000) grid_points /= 2;
    report.grid_points = grid_points;

    std::vector<std::vector<int>> prefixes(m);
    parallel_chunks(m, mc.threads, [&](long long begin, long long end) {
        for (long long r = begin; r < end; ++r) prefixes[r] = sample_prefix(n, k, mc.seed, r);
    });
    std::vector<std::vector<int>> grid(grid_points, std::vector<int>(k));
    for (long long g = 0; g < grid_points; ++g) {
        auto rng = RandomStream::derived(mc.seed, static_cast<std::uint64_t>(m + g));
        for (int d = 0; d < k; ++d)
            grid[g][d] = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    }
    std::vector<double> dev(grid_points, 0.0);
    std::vector<double> fhat(grid_points, 0.0);
    parallel_chunks(grid_points, mc.threads, [&](long long begin, long long end) {
        for (long long g = begin; g < end; ++g) {
            long long below = 0;
            for (const auto& p : prefixes) {
                bool dominated = true;
                for (int d = 0; d < k; ++d) {
                    if (p[d] > grid[g][d]) {
                        dominated = false;
                        break;
                    }
                }
                below += dominated;
            }
            double u = 1.0;
            for (int d = 0; d < k; ++d) u *= static_cast<double>(grid[g][d]) / n;
            fhat[g] = static_cast<double>(below) / static_cast<double>(m);
            dev[g] = std::abs(fhat[g] - u);
        }
    });
    long long argmax = 0;
    for (long long g = 1; g < grid_points; ++g) {
        if (dev[g] > dev[argmax]) argmax = g;
    }
    report.value = dev[argmax];
    report.std_error = std::sqrt(fhat[argmax] * (1.0 - fhat[argmax]) / static_cast<double>(m));
    return report;
}

namespace {

LimitTestReport limit_test(const char* name, int n, int k, long long samples,
                           std::uint64_t seed, int threads, double threshold,
                           const std::function<double(const parking::ParkingFunction&)>& stat,
                           const std::function<double(double)>& cdf) {
    require_k_range(n, k);
    if (samples < 100) throw InvalidInputError("limit test: need samples >= 100");
    std::vector<double> values(samples);
    parallel_chunks(samples, threads, [&](long long begin, long long end) {
        for (long long r = begin; r < end; ++r) {
            auto rng = RandomStream::derived(seed, static_cast<std::uint64_t>(r));
            values[r] = stat(cayley::sample_uniform_parking(n, rng));
        }
    });
    LimitTestReport report;
    report.statistic = name;
    report.n = n;
    report.k = k;
    report.samples = samples;
    report.threshold = threshold;
    report.ks_distance = ks_statistic(values, cdf);
    report.pass = report.ks_distance < threshold;
    return report;
}

}  // namespace

LimitTestReport sum_clt_test(int n, int k, long long samples, std::uint64_t seed,
                             int threads, double threshold) {
    const double scale = std::sqrt(12.0 / k);
    return limit_test(
        "sum-clt", n, k, samples, seed, threads, threshold,
        [n, k, scale](const parking::ParkingFunction& pf) {
            const double sum = static_cast<double>(parking::statistic_sum(pf, k));
            return scale * (sum / n - k / 2.0);
        },
        normal_cdf);
}

LimitTestReport max_exponential_test(int n, int k, long long samples, std::uint64_t seed,
                                     int threads, double threshold) {
    return limit_test(
        "max-exponential", n, k, samples, seed, threads, threshold,
        [n, k](const parking::ParkingFunction& pf) {
            const double mx = static_cast<double>(parking::statistic_max(pf, k));
            return k * (1.0 - mx / n);
        },
        exponential_cdf);
}

namespace {

struct TailSide {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Mean of (1-c)^(a - S_{h-a}) over `samples` excursions at horizon h.
// Stream indices are offset by level so successive horizons use fresh,
// reproducible randomness.
TailSide tail_rhs_at_horizon(int horizon, double c, int a, long long samples,
                             std::uint64_t seed, int threads, int level) {
    std::vector<long long> counts(a + 1, 0);  // tally of S_{h-a} values
    std::mutex merge_mutex;
    parallel_chunks(samples, threads, [&](long long begin, long long end) {
        std::vector<long long> local(a + 1, 0);
        for (long long r = begin; r < end; ++r) {
            auto rng = RandomStream::derived(
                seed, (static_cast<std::uint64_t>(level) << 40) + static_cast<std::uint64_t>(r));
            const auto xs = walks::sample_conditioned_increments(horizon, rng);
            const int rho = walks::cycle_rotation(xs);
            // S_{h-a} of the rotated path, without materializing it.
            const int upto = horizon - a;
            long long s = 0;
            for (int i = 0; i < upto; ++i) s += xs[(rho + i) % (horizon + 1)] - 1;
            ++local[static_cast<int>(s)];
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (int v = 0; v <= a; ++v) counts[v] += local[v];
    });
    TailSide side;
    double sq = 0.0;
    for (int s = 0; s <= a; ++s) {
        const double v = std::pow(1.0 - c, a - s);
        const double w = static_cast<double>(counts[s]) / static_cast<double>(samples);
        side.estimate += w * v;
        sq += w * v * v;
    }
    const double var = std::max(0.0, sq - side.estimate * side.estimate);
    side.std_error = std::sqrt(var / static_cast<double>(samples));
    return side;
}

}  // namespace

TailReport tail_comparison(int n, double c, int a, long long samples, std::uint64_t seed,
                           int threads) {
    if (c <= 0.0 || c > 1.0) throw InvalidInputError("tail_comparison: c must be in (0, 1]");
    if (a < 0 || a > 20) throw SizeLimitError("tail_comparison: a limited to [0, 20]");
    if (samples < 100) throw InvalidInputError("tail_comparison: need samples >= 100");
    const int k = static_cast<int>(std::llround(c * n));
    if (k < 1 || k > n) throw InvalidInputError("tail_comparison: round(c*n) outside [1, n]");

    TailReport report;
    report.n = n;
    report.c = c;
    report.a = a;
    report.k = k;
    report.samples = samples;

    long long hits = 0;
    std::mutex merge_mutex;
    parallel_chunks(samples, threads, [&](long long begin, long long end) {
        long long local = 0;
        for (long long r = begin; r < end; ++r) {
            auto rng = RandomStream::derived(seed, static_cast<std::uint64_t>(r));
            const auto pf = cayley::sample_uniform_parking(n, rng);
            local += (n - parking::statistic_max(pf, k)) >= a;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        hits += local;
    });
    report.lhs = static_cast<double>(hits) / static_cast<double>(samples);
    report.lhs_stderr = std::sqrt(report.lhs * (1.0 - report.lhs) / static_cast<double>(samples));

    // Walk side: double the horizon until one doubling moves the estimate
    // by less than one standard error.
    int horizon = 512;
    int level = 0;
    TailSide prev = tail_rhs_at_horizon(horizon, c, a, samples, seed, threads, level++);
    while (true) {
        const int next_horizon = horizon * 2;
        const TailSide next = tail_rhs_at_horizon(next_horizon, c, a, samples, seed, threads, level++);
        const bool stable = std::abs(next.estimate - prev.estimate) <
                            std::max(next.std_error, 1e-12);
        horizon = next_horizon;
        prev = next;
        if (stable || horizon >= 65536) break;
    }
    report.rhs = prev.estimate;
    report.rhs_stderr = prev.std_error;
    report.approx_n = horizon;
    return report;
}

}  // namespace parkfn::stats
