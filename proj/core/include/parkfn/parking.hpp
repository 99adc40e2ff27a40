#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace parkfn::parking {

// A parking function of size n: places[i] is the spot preferred by car i+1,
// 1-based values in [1, n] whose nondecreasing rearrangement p satisfies
// p[i] <= i+1 for every 0-based i.
struct ParkingFunction {
    std::vector<int> places;

    int size() const { return static_cast<int>(places.size()); }
    bool operator==(const ParkingFunction&) const = default;
    auto operator<=>(const ParkingFunction&) const = default;
};

// Exact joint law of the first k coordinates of a uniform parking function
// of size n, as counts over a common denominator (n+1)^(n-1).
struct ExactPmf {
    int n = 0;
    int k = 0;
    std::uint64_t denominator = 0;
    std::map<std::vector<int>, std::uint64_t> counts;

    double prob(const std::vector<int>& tuple) const;
};

// True iff `places` is a parking function. Entries below 1 yield false.
// Throws InvalidInputError on an empty sequence.
bool is_parking(const std::vector<int>& places);

// All parking functions of size n in lexicographic order, each exactly once.
// Guard: 1 <= n <= 8 (there are (n+1)^(n-1) of them).
std::vector<ParkingFunction> enumerate_parking(int n);

// Exact law of (pi_n(1), ..., pi_n(k)) by full enumeration.
// Guard: 1 <= k <= n <= 7.
ExactPmf oracle_joint_pmf(int n, int k);

// Sum / max of the first k places. Throws on k outside [1, size].
long long statistic_sum(const ParkingFunction& p, int k);
int statistic_max(const ParkingFunction& p, int k);

}  // namespace parkfn::parking
