#include "parkfn/walks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "parkfn/errors.hpp"

namespace parkfn::walks {

namespace {

// 1/x!; underflows to 0 past x ~ 170, far below double resolution of any
// row sum it could enter.
std::vector<double> inverse_factorials(int up_to) {
    std::vector<double> w(up_to + 1);
    w[0] = 1.0;
    for (int x = 1; x <= up_to; ++x) w[x] = w[x - 1] / x;
    return w;
}

// (x)_m = x(x-1)...(x-m+1) for integer x >= 0; zero when m > x.
double falling_factorial(int x, int m) {
    if (m > x) return 0.0;
    double f = 1.0;
    for (int i = 0; i < m; ++i) f *= x - i;
    return f;
}

void renormalize(std::vector<double>& row, double& log_scale) {
    const double m = *std::max_element(row.begin(), row.end());
    if (m <= 0.0) return;
    for (double& v : row) v /= m;
    log_scale += std::log(m);
}

// Forward transfer. step_factor(t, x) scales the step-x weight at time t;
// height_factor(t, h) scales row t at height h after the transfer.
template <class StepFactor, class HeightFactor>
DpTable dp_build_impl(int n, StepFactor step_factor, HeightFactor height_factor) {
    const auto w = inverse_factorials(n + 1);

    DpTable dp;
    dp.n = n;
    dp.rows.resize(n + 1);
    dp.log_scale.assign(n + 1, 0.0);
    dp.rows[0].assign(n + 1, 0.0);
    dp.rows[0][0] = 1.0;

    for (int t = 1; t <= n; ++t) {
        const auto& prev = dp.rows[t - 1];
        auto& cur = dp.rows[t];
        cur.assign(n - t + 1, 0.0);
        for (int hp = 0; hp < static_cast<int>(prev.size()); ++hp) {
            if (prev[hp] == 0.0) continue;
            const int x_max = n - t - hp + 1;
            for (int x = std::max(0, 1 - hp); x <= x_max; ++x) {
                cur[hp + x - 1] += prev[hp] * w[x] * step_factor(t, x);
            }
        }
        for (int h = 0; h < static_cast<int>(cur.size()); ++h) {
            cur[h] *= height_factor(t, h);
        }
        dp.log_scale[t] = dp.log_scale[t - 1];
        renormalize(cur, dp.log_scale[t]);
    }

    // Terminal step n+1: only x = 0 leads from height 0 to -1.
    dp.terminal = dp.rows[n][0] * step_factor(n + 1, 0);
    dp.terminal_log = dp.log_scale[n];
    return dp;
}

constexpr auto unit_step = [](int, int) { return 1.0; };
constexpr auto unit_height = [](int, int) { return 1.0; };

double log_total_mass(const DpTable& dp) {
    return std::log(dp.terminal) + dp.terminal_log;
}

}  // namespace

WeightQuery WeightQuery::from_indices(const std::vector<int>& indices) {
    if (indices.empty()) throw InvalidInputError("WeightQuery: empty index tuple");
    std::map<int, int> mult;
    for (int i : indices) {
        if (i < 1) throw InvalidInputError("WeightQuery: index must be >= 1");
        ++mult[i];
    }
    WeightQuery q;
    q.entries.assign(mult.begin(), mult.end());
    return q;
}

int WeightQuery::total_multiplicity() const {
    int k = 0;
    for (const auto& [index, m] : entries) k += m;
    return k;
}

int WeightQuery::multiplicity_at(int index) const {
    for (const auto& [i, m] : entries) {
        if (i == index) return m;
    }
    return 0;
}

double DpTable::absolute_terminal_probability() const {
    return terminal * std::exp(terminal_log - (n + 1));
}

DpTable dp_build(int n, const WeightQuery& query) {
    if (n < 1) throw InvalidInputError("dp_build: n must be >= 1");
    for (const auto& [index, m] : query.entries) {
        if (index < 1 || index > n + 1) throw InvalidInputError("dp_build: query index out of range");
        if (m < 1) throw InvalidInputError("dp_build: multiplicity must be >= 1");
    }
    return dp_build_impl(
        n,
        [&query](int t, int x) {
            const int m = query.multiplicity_at(t);
            return m == 0 ? 1.0 : falling_factorial(x, m);
        },
        unit_height);
}

DpTable dp_build_backward(int n) {
    if (n < 1) throw InvalidInputError("dp_build_backward: n must be >= 1");
    const auto w = inverse_factorials(n + 1);

    DpTable dp;
    dp.n = n;
    dp.rows.resize(n + 1);
    dp.log_scale.assign(n + 1, 0.0);
    dp.rows[n] = {1.0};

    for (int t = n - 1; t >= 0; --t) {
        const auto& next = dp.rows[t + 1];
        auto& cur = dp.rows[t];
        cur.assign(n - t + 1, 0.0);
        for (int h = 0; h < static_cast<int>(cur.size()); ++h) {
            const int x_max = n - t - h;
            for (int x = std::max(0, 1 - h); x <= x_max; ++x) {
                cur[h] += w[x] * next[h + x - 1];
            }
        }
        dp.log_scale[t] = dp.log_scale[t + 1];
        renormalize(cur, dp.log_scale[t]);
    }

    dp.terminal = dp.rows[0][0];
    dp.terminal_log = dp.log_scale[0];
    return dp;
}

double conditioned_expectation(int n, const WeightQuery& query) {
    const DpTable with = dp_build(n, query);
    if (with.terminal == 0.0) return 0.0;
    const DpTable without = dp_build(n);
    return with.terminal / without.terminal *
           std::exp(with.terminal_log - without.terminal_log);
}

double joint_pmf(int n, const std::vector<int>& indices) {
    const int k = static_cast<int>(indices.size());
    if (k < 1 || k > n) throw InvalidInputError("joint_pmf: need 1 <= k <= n");
    for (int i : indices) {
        if (i < 1 || i > n) throw InvalidInputError("joint_pmf: index out of [1, n]");
    }
    const auto query = WeightQuery::from_indices(indices);
    const DpTable with = dp_build(n, query);
    if (with.terminal == 0.0) return 0.0;
    const DpTable without = dp_build(n);
    double log_falling_n_k = 0.0;  // log (n)_k
    for (int i = 0; i < k; ++i) log_falling_n_k += std::log(static_cast<double>(n - i));
    return std::exp(log_total_mass(with) - log_total_mass(without) - log_falling_n_k);
}

double product_height_expectation(int n, const std::vector<int>& indices) {
    if (indices.empty()) throw InvalidInputError("product_height_expectation: empty tuple");
    for (int i : indices) {
        if (i < 1 || i > n)
            throw InvalidInputError("product_height_expectation: index out of [1, n]");
    }
    const auto query = WeightQuery::from_indices(indices);
    const DpTable with = dp_build_impl(n, unit_step, [&query](int t, int h) {
        const int m = query.multiplicity_at(t);
        return m == 0 ? 1.0 : std::pow(static_cast<double>(h + t), m);
    });
    if (with.terminal == 0.0) return 0.0;
    const DpTable without = dp_build(n);
    return std::exp(log_total_mass(with) - log_total_mass(without));
}

double cdf_symmetric(int n, int k, int a) {
    if (k < 1 || k > n) throw InvalidInputError("cdf_symmetric: need 1 <= k <= n");
    if (a < 0 || a > n - 1) throw InvalidInputError("cdf_symmetric: need 0 <= a <= n-1");
    const int t0 = n - a;
    // (h + n - a)_k / (n)_k, folded into the table so both sides stay scaled.
    const auto ratio = [n, k, t0](int t, int h) {
        if (t != t0) return 1.0;
        double r = 1.0;
        for (int i = 0; i < k; ++i) {
            const int f = h + t0 - i;
            if (f <= 0) return 0.0;
            r *= static_cast<double>(f) / static_cast<double>(n - i);
        }
        return r;
    };
    const DpTable with = dp_build_impl(n, unit_step, ratio);
    if (with.terminal == 0.0) return 0.0;
    const DpTable without = dp_build(n);
    return std::exp(log_total_mass(with) - log_total_mass(without));
}

namespace {

std::vector<double> normalized(std::vector<double> v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    return v;
}

// Unnormalized law of X_t from matched forward/backward rows.
std::vector<double> increment_weights(const DpTable& fwd, const DpTable& bwd, int n, int t) {
    const auto w = inverse_factorials(n + 1);
    if (t == n + 1) return {1.0};
    const auto& prev = fwd.rows[t - 1];
    const auto& next = bwd.rows[t];
    std::vector<double> out(n - t + 2, 0.0);
    for (int hp = 0; hp < static_cast<int>(prev.size()); ++hp) {
        if (prev[hp] == 0.0) continue;
        const int x_max = n - t - hp + 1;
        for (int x = std::max(0, 1 - hp); x <= x_max; ++x) {
            out[x] += prev[hp] * w[x] * next[hp + x - 1];
        }
    }
    return out;
}

}  // namespace

std::vector<double> height_marginal(int n, int t) {
    if (t < 0 || t > n) throw InvalidInputError("height_marginal: t out of [0, n]");
    const DpTable fwd = dp_build(n);
    const DpTable bwd = dp_build_backward(n);
    std::vector<double> v(fwd.rows[t].size());
    for (std::size_t h = 0; h < v.size(); ++h) v[h] = fwd.rows[t][h] * bwd.rows[t][h];
    return normalized(std::move(v));
}

std::vector<double> increment_marginal(int n, int t) {
    if (t < 1 || t > n + 1) throw InvalidInputError("increment_marginal: t out of [1, n+1]");
    const DpTable fwd = dp_build(n);
    const DpTable bwd = dp_build_backward(n);
    return normalized(increment_weights(fwd, bwd, n, t));
}

std::vector<double> increment_mean_profile(int n) {
    const DpTable fwd = dp_build(n);
    const DpTable bwd = dp_build_backward(n);
    std::vector<double> means(n + 1);
    for (int t = 1; t <= n + 1; ++t) {
        const auto law = normalized(increment_weights(fwd, bwd, n, t));
        double mean = 0.0;
        for (std::size_t x = 0; x < law.size(); ++x) mean += static_cast<double>(x) * law[x];
        means[t - 1] = mean;
    }
    return means;
}

PairMoments pair_increment_moments(int n) {
    const DpTable fwd = dp_build(n);
    const DpTable bwd = dp_build_backward(n);
    const auto w = inverse_factorials(n + 1);
    const double log_total = log_total_mass(fwd);

    PairMoments out;
    out.cross.assign(n + 1, std::vector<double>(n + 1, 0.0));
    out.second_factorial.assign(n + 1, 0.0);

    for (int t = 1; t <= n; ++t) {
        const auto law = normalized(increment_weights(fwd, bwd, n, t));
        double m2 = 0.0;
        for (std::size_t x = 2; x < law.size(); ++x) {
            m2 += static_cast<double>(x) * static_cast<double>(x - 1) * law[x];
        }
        out.second_factorial[t] = m2;
    }

    for (int i = 1; i < n; ++i) {
        const DpTable fi = dp_build(n, WeightQuery{{{i, 1}}});
        for (int j = i + 1; j <= n; ++j) {
            const auto& prev = fi.rows[j - 1];
            const auto& next = bwd.rows[j];
            double acc = 0.0;
            for (int hp = 0; hp < static_cast<int>(prev.size()); ++hp) {
                if (prev[hp] == 0.0) continue;
                const int x_max = n - j - hp + 1;
                for (int x = std::max(1, 1 - hp); x <= x_max; ++x) {
                    acc += prev[hp] * w[x] * x * next[hp + x - 1];
                }
            }
            if (acc <= 0.0) continue;
            const double value =
                std::exp(std::log(acc) + fi.log_scale[j - 1] + bwd.log_scale[j] - log_total);
            out.cross[i][j] = out.cross[j][i] = value;
        }
    }
    return out;
}

std::vector<std::vector<double>> first_two_increments_law(int n) {
    if (n < 2) throw InvalidInputError("first_two_increments_law: n must be >= 2");
    const DpTable bwd = dp_build_backward(n);
    const auto w = inverse_factorials(n + 1);
    std::vector<std::vector<double>> joint(n + 1, std::vector<double>(n + 1, 0.0));
    double total = 0.0;
    for (int x1 = 1; x1 <= n; ++x1) {
        for (int x2 = std::max(0, 2 - x1); x1 + x2 - 2 <= n - 2; ++x2) {
            const double v = w[x1] * w[x2] * bwd.rows[2][x1 + x2 - 2];
            joint[x1][x2] = v;
            total += v;
        }
    }
    for (auto& row : joint) {
        for (double& v : row) v /= total;
    }
    return joint;
}

std::vector<int> sample_conditioned_increments(int n, RandomStream& rng) {
    if (n < 1) throw InvalidInputError("sample_conditioned_increments: n must be >= 1");
    std::vector<int> counts(n + 1, 0);
    for (int ball = 0; ball < n; ++ball) {
        ++counts[rng.uniform_below(static_cast<std::uint64_t>(n) + 1)];
    }
    return counts;
}

bool is_excursion(const std::vector<int>& xs) {
    const int len = static_cast<int>(xs.size());
    if (len < 2) return false;
    long long s = 0;
    for (int m = 0; m < len; ++m) {
        if (xs[m] < 0) return false;
        s += xs[m] - 1;
        if (m < len - 1 && s < 0) return false;
    }
    return s == -1;
}

int cycle_rotation(const std::vector<int>& xs) {
    const int len = static_cast<int>(xs.size());
    if (len == 0) throw InvalidInputError("cycle_rotation: empty sequence");
    long long sum = 0;
    for (int x : xs) {
        if (x < 0) throw InvalidInputError("cycle_rotation: entries must be >= 0");
        sum += x - 1;
    }
    if (sum != -1) throw InvalidInputError("cycle_rotation: increments must sum to -1");

    long long s = 0;
    long long best = 0;
    int argmin = 0;  // first m in [1, len] attaining the minimum of S_m
    for (int m = 1; m <= len; ++m) {
        s += xs[m - 1] - 1;
        if (s < best) {
            best = s;
            argmin = m;
        }
    }
    return argmin % len;
}

ExcursionPath sample_excursion(int n, RandomStream& rng) {
    const auto xs = sample_conditioned_increments(n, rng);
    const int rho = cycle_rotation(xs);
    ExcursionPath path;
    path.x.reserve(xs.size());
    path.x.assign(xs.begin() + rho, xs.end());
    path.x.insert(path.x.end(), xs.begin(), xs.begin() + rho);
    return path;
}

}  // namespace parkfn::walks
