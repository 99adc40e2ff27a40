#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Distances between the first k coordinates of a uniform parking function
// and k i.i.d. uniforms on [1, n], plus Monte Carlo harnesses for the
// limit statistics (normalized sum, normalized maximum, symmetric tail).
//
// Every Monte Carlo routine takes a base seed and derives one stream per
// replicate, so reports are bit-identical for any worker count.

namespace parkfn::stats {

enum class Method { exact_dp, exact_enumeration, monte_carlo, auto_select };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct MonteCarloOptions {
    long long samples = 10000;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct DistanceReport {
    int n = 0;
    int k = 0;
    double value = 0.0;
    Method method = Method::exact_dp;
    long long samples = 0;   // 0 when exact
    double std_error = 0.0;  // 0 when exact
    long long grid_points = 0;  // >0 when the max was scanned on a random grid
};

struct LimitTestReport {
    std::string statistic;  // "sum-clt" or "max-exponential"
    int n = 0;
    int k = 0;
    long long samples = 0;
    double ks_distance = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct TailReport {
    int n = 0;
    double c = 0.0;
    int a = 0;
    int k = 0;
    long long samples = 0;
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    double rhs_stderr = 0.0;
    int approx_n = 0;  // excursion horizon at which the estimate stabilized
};

// Sum over all k-tuples of |P(pi_n(1)=i_1, ..., pi_n(k)=i_k) - 1/n^k|,
// reported unnormalized: twice the conventional total-variation distance.
// exact-dp: k <= 2, n <= 200; exact-enumeration: n <= 6; otherwise MC.
DistanceReport tv_distance(int n, int k, Method method = Method::auto_select,
                           const MonteCarloOptions& mc = {});

// Max over the k-dimensional grid of |joint CDF - i_1...i_k / n^k|.
// exact-dp: k <= 2, n <= 200; exact-enumeration: n <= 6, k <= 3; MC scans
// the full grid for k <= 2 and a random grid (lower bound) for k >= 3.
DistanceReport kolmogorov_distance(int n, int k, Method method = Method::auto_select,
                                   const MonteCarloOptions& mc = {});

// Default pass threshold for the KS harnesses; an engineering default
// matched to ~2000 samples, not a theoretical constant.
inline constexpr double kDefaultKsThreshold = 0.05;

// KS distance between sqrt(12/k) * (sum of first k places / n - k/2) over
// `samples` draws and the standard normal CDF.
LimitTestReport sum_clt_test(int n, int k, long long samples, std::uint64_t seed,
                             int threads = 1, double threshold = kDefaultKsThreshold);

// KS distance between k * (1 - max of first k places / n) and Exp(1).
LimitTestReport max_exponential_test(int n, int k, long long samples, std::uint64_t seed,
                                     int threads = 1, double threshold = kDefaultKsThreshold);

// Two-sided comparison for the symmetric tail with k = round(c*n):
// lhs = empirical P(n - max of first k places >= a), rhs = empirical
// E[(1-c)^(a - S_{n'-a})] over excursions at an adaptively chosen horizon
// n' (doubled until one doubling moves the estimate by less than one
// standard error). Requires c in (0, 1] and a <= 20.
TailReport tail_comparison(int n, double c, int a, long long samples, std::uint64_t seed,
                           int threads = 1);

// One-sample Kolmogorov-Smirnov sup-distance of `sample` against `cdf`.
double ks_statistic(const std::vector<double>& sample,
                    const std::function<double(double)>& cdf);

// Pearson statistic sum (o-e)^2 / e. Requires matching nonempty vectors
// and every expected count >= 5.
double chi_square(const std::vector<long long>& observed, const std::vector<double>& expected);

// Upper critical value of the chi-squared distribution: the statistic
// exceeds it with probability `significance` under the null.
double chi_square_critical(int dof, double significance);

// Greedy left-to-right merge of adjacent bins until every expected count
// reaches min_expected (trailing remainder folds into the last bin).
std::pair<std::vector<long long>, std::vector<double>> merge_low_expected_bins(
    const std::vector<long long>& observed, const std::vector<double>& expected,
    double min_expected = 5.0);

double normal_cdf(double x);
double exponential_cdf(double x);

}  // namespace parkfn::stats
