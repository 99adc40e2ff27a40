#pragma once

#include <vector>

#include "parkfn/parking.hpp"
#include "parkfn/rng.hpp"

namespace parkfn::cayley {

// Rooted labeled tree on vertices {0, ..., n}, root 0. parent[i] is the
// parent label of vertex i for i >= 1; parent[0] is -1.
struct CayleyTree {
    std::vector<int> parent;

    int vertex_count() const { return static_cast<int>(parent.size()); }
    bool operator==(const CayleyTree&) const = default;
    auto operator<=>(const CayleyTree&) const = default;
};

// Largest-leaf-removal code of a tree on m vertices: length m-2, entries
// in [0, m-1]. The terminal entry 0 (the parent recorded when two vertices
// remain) is left implicit.
struct PruferCode {
    std::vector<int> code;

    bool operator==(const PruferCode&) const = default;
};

// Breadth-first ranks with children visited in increasing label order.
// rank[v] in [1, m] is the BFS position of vertex v (rank[0] == 1);
// parent_rank[i] = rank[parent[i]] for i >= 1 (parent_rank[0] unused, 0).
struct BfsRanks {
    std::vector<int> rank;
    std::vector<int> parent_rank;
};

// Throws InvalidTreeError unless parent describes a tree rooted at 0.
void validate_tree(const CayleyTree& t);

// Repeatedly remove the leaf with the biggest label and record its parent,
// stopping when two vertices remain. Requires >= 2 vertices.
PruferCode prufer_encode(const CayleyTree& t);

// Inverse of prufer_encode: the unique tree on code.size()+2 vertices with
// the given largest-leaf code. Throws InvalidCodeError on out-of-range
// entries.
CayleyTree prufer_decode(const PruferCode& code);

BfsRanks bfs_ranks(const CayleyTree& t);

// The parent-rank map t -> (parent_rank(1), ..., parent_rank(n)), a
// bijection onto the parking functions of size n = vertex_count - 1.
parking::ParkingFunction tree_to_parking(const CayleyTree& t);

// Entry i (0-based) counts the vertices whose parent has BFS rank i+1;
// entries sum to n.
std::vector<int> child_counts(const CayleyTree& t);

// Exactly uniform over all (n+1)^(n-1) parking functions of size n: a
// uniform code in [0,n]^(n-1) is decoded and mapped through the bijection.
parking::ParkingFunction sample_uniform_parking(int n, RandomStream& rng);

// Uniform tree in C_{n+1} (uniform code, decoded).
CayleyTree sample_uniform_tree(int n, RandomStream& rng);

}  // namespace parkfn::cayley
