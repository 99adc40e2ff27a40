#include "parkfn/cayley.hpp"

#include <algorithm>
#include <queue>

#include "parkfn/errors.hpp"

namespace parkfn::cayley {

void validate_tree(const CayleyTree& t) {
    const int m = t.vertex_count();
    if (m < 1) throw InvalidTreeError("tree: no vertices");
    if (t.parent[0] != -1) throw InvalidTreeError("tree: vertex 0 must be the root");
    for (int v = 1; v < m; ++v) {
        if (t.parent[v] < 0 || t.parent[v] >= m)
            throw InvalidTreeError("tree: parent label out of range");
    }
    // Every vertex must reach 0; a cycle never does.
    std::vector<int> state(m, 0);  // 0 unseen, 1 in progress, 2 ok
    state[0] = 2;
    for (int v = 1; v < m; ++v) {
        int u = v;
        while (state[u] == 0) {
            state[u] = 1;
            u = t.parent[u];
        }
        if (state[u] == 1) throw InvalidTreeError("tree: cycle detected");
        u = v;
        while (state[u] == 1) {
            state[u] = 2;
            u = t.parent[u];
        }
    }
}

PruferCode prufer_encode(const CayleyTree& t) {
    validate_tree(t);
    const int m = t.vertex_count();
    if (m < 2) throw InvalidInputError("prufer_encode: need at least 2 vertices");

    std::vector<int> child_deg(m, 0);
    for (int v = 1; v < m; ++v) ++child_deg[t.parent[v]];

    // Max-heap of removable leaves; the root never qualifies.
    std::priority_queue<int> leaves;
    for (int v = 1; v < m; ++v) {
        if (child_deg[v] == 0) leaves.push(v);
    }

    PruferCode out;
    out.code.reserve(m - 2);
    for (int step = 0; step < m - 2; ++step) {
        const int leaf = leaves.top();
        leaves.pop();
        const int p = t.parent[leaf];
        out.code.push_back(p);
        if (--child_deg[p] == 0 && p != 0) leaves.push(p);
    }
    return out;
}

CayleyTree prufer_decode(const PruferCode& code) {
    const int m = static_cast<int>(code.code.size()) + 2;
    for (int p : code.code) {
        if (p < 0 || p >= m) throw InvalidCodeError("prufer_decode: entry out of range");
    }

    // Full parent record: the recorded code plus the implicit terminal 0.
    std::vector<int> parents(code.code);
    parents.push_back(0);

    std::vector<int> remaining(m, 0);  // future occurrences as a parent
    for (int p : parents) ++remaining[p];

    std::priority_queue<int> leaves;
    for (int v = 1; v < m; ++v) {
        if (remaining[v] == 0) leaves.push(v);
    }

    CayleyTree t;
    t.parent.assign(m, -1);
    for (int p : parents) {
        const int leaf = leaves.top();
        leaves.pop();
        t.parent[leaf] = p;
        if (--remaining[p] == 0 && p != 0) leaves.push(p);
    }
    return t;
}

namespace {

// Children lists in increasing label order (by construction, since labels
// are inserted in ascending order).
std::vector<std::vector<int>> children_of(const CayleyTree& t) {
    std::vector<std::vector<int>> children(t.vertex_count());
    for (int v = 1; v < t.vertex_count(); ++v) children[t.parent[v]].push_back(v);
    return children;
}

}  // namespace

BfsRanks bfs_ranks(const CayleyTree& t) {
    validate_tree(t);
    const int m = t.vertex_count();
    const auto children = children_of(t);

    BfsRanks out;
    out.rank.assign(m, 0);
    out.parent_rank.assign(m, 0);

    std::queue<int> frontier;
    frontier.push(0);
    int next_rank = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        out.rank[v] = next_rank++;
        for (int c : children[v]) frontier.push(c);
    }
    for (int v = 1; v < m; ++v) out.parent_rank[v] = out.rank[t.parent[v]];
    return out;
}

parking::ParkingFunction tree_to_parking(const CayleyTree& t) {
    const auto ranks = bfs_ranks(t);
    parking::ParkingFunction p;
    p.places.assign(ranks.parent_rank.begin() + 1, ranks.parent_rank.end());
    return p;
}

std::vector<int> child_counts(const CayleyTree& t) {
    const auto ranks = bfs_ranks(t);
    std::vector<int> counts(t.vertex_count(), 0);
    for (int v = 1; v < t.vertex_count(); ++v) ++counts[ranks.parent_rank[v] - 1];
    return counts;
}

CayleyTree sample_uniform_tree(int n, RandomStream& rng) {
    if (n < 1) throw InvalidInputError("sample_uniform_tree: n must be >= 1");
    PruferCode code;
    code.code.resize(n - 1);
    for (int& p : code.code) {
        p = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n) + 1));
    }
    return prufer_decode(code);
}

parking::ParkingFunction sample_uniform_parking(int n, RandomStream& rng) {
    const CayleyTree t = sample_uniform_tree(n, rng);
    return tree_to_parking(t);
}

}  // namespace parkfn::cayley
