#include "parkfn/parking.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "parkfn/errors.hpp"

namespace parkfn::parking {

double ExactPmf::prob(const std::vector<int>& tuple) const {
    auto it = counts.find(tuple);
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(denominator);
}

bool is_parking(const std::vector<int>& places) {
    if (places.empty()) throw InvalidInputError("is_parking: empty sequence");
    std::vector<int> sorted(places);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 1 || sorted[i] > static_cast<int>(i) + 1) return false;
    }
    return true;
}

namespace {

// Nondecreasing profiles b with b[i] <= i+1 are exactly the sorted parking
// functions; every parking function is a permutation of one of them.
void visit_sorted_profiles(int n, std::vector<int>& profile,
                           const std::function<void(const std::vector<int>&)>& visit) {
    const int pos = static_cast<int>(profile.size());
    if (pos == n) {
        visit(profile);
        return;
    }
    const int lo = profile.empty() ? 1 : profile.back();
    for (int v = lo; v <= pos + 1; ++v) {
        profile.push_back(v);
        visit_sorted_profiles(n, profile, visit);
        profile.pop_back();
    }
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::vector<ParkingFunction> enumerate_parking(int n) {
    if (n < 1 || n > 8) throw SizeLimitError("enumerate_parking: n must be in [1, 8]");
    std::vector<ParkingFunction> out;
    out.reserve(ipow(static_cast<std::uint64_t>(n) + 1, n - 1));
    std::vector<int> profile;
    visit_sorted_profiles(n, profile, [&](const std::vector<int>& sorted) {
        std::vector<int> perm(sorted);
        do {
            out.push_back(ParkingFunction{perm});
        } while (std::next_permutation(perm.begin(), perm.end()));
    });
    std::sort(out.begin(), out.end());
    return out;
}

ExactPmf oracle_joint_pmf(int n, int k) {
    if (n < 1 || n > 7) throw SizeLimitError("oracle_joint_pmf: n must be in [1, 7]");
    if (k < 1 || k > n) throw InvalidInputError("oracle_joint_pmf: k must be in [1, n]");
    ExactPmf pmf;
    pmf.n = n;
    pmf.k = k;
    const auto all = enumerate_parking(n);
    pmf.denominator = all.size();
    std::vector<int> prefix(k);
    for (const auto& p : all) {
        std::copy(p.places.begin(), p.places.begin() + k, prefix.begin());
        ++pmf.counts[prefix];
    }
    return pmf;
}

long long statistic_sum(const ParkingFunction& p, int k) {
    if (k < 1 || k > p.size()) throw InvalidInputError("statistic_sum: k out of range");
    long long s = 0;
    for (int i = 0; i < k; ++i) s += p.places[i];
    return s;
}

int statistic_max(const ParkingFunction& p, int k) {
    if (k < 1 || k > p.size()) throw InvalidInputError("statistic_max: k out of range");
    return *std::max_element(p.places.begin(), p.places.begin() + k);
}

}  // namespace parkfn::parking
