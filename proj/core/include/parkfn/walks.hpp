#pragma once

#include <vector>

#include "parkfn/rng.hpp"

// Random walk with i.i.d. Poisson(1) steps X_i, S_m = sum_{i<=m} (X_i - 1),
// conditioned on hitting -1 for the first time at m = n+1 (an excursion of
// length n+1, equivalently sum X_i = n with all partial sums S_m >= 0 for
// m <= n).
//
// Expectations under this conditioning are computed exactly by a forward
// transfer table over (time, height). The Poisson step weight is stored as
// 1/x!; the global factor e^{-(n+1)} cancels in every conditioned ratio.
// Each row is renormalized by its maximum with the log of the factor
// accumulated, so tables stay in double range for n in the thousands.
// Heights at time t are confined to [0, n-t]: larger heights cannot reach
// -1 by time n+1 and contribute nothing.

namespace parkfn::walks {

// Increments (X_1, ..., X_{n+1}) of one excursion.
struct ExcursionPath {
    std::vector<int> x;

    int horizon() const { return static_cast<int>(x.size()) - 1; }
};

// Per-step falling-factorial weights: at step `index`, the transfer is
// weighted by (X_index)_multiplicity. Indices distinct and >= 1.
struct WeightQuery {
    std::vector<std::pair<int, int>> entries;  // (index, multiplicity), sorted

    // Collapses a plain index tuple (repeats allowed) into multiplicities.
    static WeightQuery from_indices(const std::vector<int>& indices);

    int total_multiplicity() const;
    int multiplicity_at(int index) const;
};

// Transfer table for the conditioned walk. rows[t][h] is the accumulated
// weight of paths at (time t, height h), scaled so that the true value is
// rows[t][h] * exp(log_scale[t]). terminal is the mass at (n+1, -1).
struct DpTable {
    int n = 0;
    std::vector<std::vector<double>> rows;
    std::vector<double> log_scale;
    double terminal = 0.0;
    double terminal_log = 0.0;

    // P(tau_{-1} = n+1) with the dropped e^{-(n+1)} factor restored.
    // Meaningful for the empty-query forward table at small n.
    double absolute_terminal_probability() const;
};

// Forward table; step i carries weight p(x) * (x)_m for entries (i, m) of
// the query, p(x) = 1/x!. Query indices must lie in [1, n+1].
DpTable dp_build(int n, const WeightQuery& query = {});

// Companion backward table (empty weights): rows[t][h] accumulates the
// weight of completions from (t, h) down to (n+1, -1).
DpTable dp_build_backward(int n);

// E_n[ prod_s (X_{j_s})_{m_s} ] as a ratio of terminal masses.
double conditioned_expectation(int n, const WeightQuery& query);

// Exact joint law of the first parking places:
// P(pi_n(1)=i_1, ..., pi_n(k)=i_k) = (n-k)!/n! * E_n[ prod (X_{j_s})_{m_s} ].
// Indices in [1, n], repeats allowed, k <= n.
double joint_pmf(int n, const std::vector<int>& indices);

// E_n[ prod_j (S_{i_j} + i_j) ], indices in [1, n], repeats allowed.
double product_height_expectation(int n, const std::vector<int>& indices);

// P(pi_n(1) <= n-a, ..., pi_n(k) <= n-a) = (n-k)!/n! * E_n[(S_{n-a}+n-a)_k],
// 0 <= a <= n-1, 1 <= k <= n.
double cdf_symmetric(int n, int k, int a);

// Law of S_t under the conditioning, t in [0, n]; entry h is P(S_t = h).
std::vector<double> height_marginal(int n, int t);

// Law of X_t, t in [1, n+1]; entry x is P(X_t = x).
std::vector<double> increment_marginal(int n, int t);

// E_n[X_t] for t = 1..n+1 (index t-1), from one forward/backward pass.
std::vector<double> increment_mean_profile(int n);

// cross[i][j] = E_n[X_i X_j] for distinct i, j in [1, n];
// second_factorial[i] = E_n[(X_i)_2]. Used for exact k=2 joint laws.
struct PairMoments {
    std::vector<std::vector<double>> cross;
    std::vector<double> second_factorial;
};
PairMoments pair_increment_moments(int n);

// Joint law of (X_1, X_2), n >= 2; entry [x1][x2] is P(X_1=x1, X_2=x2).
std::vector<std::vector<double>> first_two_increments_law(int n);

// Multinomial(n; n+1 equal cells): the law of (X_1, ..., X_{n+1}) given
// sum X_i = n, before the positivity conditioning.
std::vector<int> sample_conditioned_increments(int n, RandomStream& rng);

// True iff xs satisfies the excursion invariants (sum n, S_m >= 0, m <= n).
bool is_excursion(const std::vector<int>& xs);

// The unique rotation offset rho in [0, len-1] such that
// (x_{rho+1}, ..., x_len, x_1, ..., x_rho) is an excursion. Requires
// nonnegative entries with sum(x_i - 1) = -1.
int cycle_rotation(const std::vector<int>& xs);

// Exact draw from the conditioned law: multinomial increments rotated at
// the first minimum of the partial sums.
ExcursionPath sample_excursion(int n, RandomStream& rng);

}  // namespace parkfn::walks
