#pragma once

#include <cstdint>
#include <vector>

#include "moatwalk/lattice.hpp"

namespace moatwalk::moat {

using lattice::LatticePoint3;

/// Bounded-step connectivity query. Step bounds are supplied as k^2 so every
/// adjacency decision is an exact integer comparison. In 2D the c coordinate
/// must be zero and membership follows the Gaussian prime rules; in 3D any
/// non-composite classification counts as a prime.
struct MoatQuery {
    int dimension = 2;  // 2 or 3
    uint64_t step_bound_sq = 2;
    LatticePoint3 start{1, 1, 0};
    uint64_t norm_bound = 10000;
};

struct Component {
    std::vector<LatticePoint3> members;  // BFS order: by level, lex within level
    std::vector<uint32_t> depth;         // BFS level per member
    LatticePoint3 farthest{};            // member with maximal (norm, lex)
    // True when the BFS closed without ever probing past norm_bound, i.e. the
    // component is certainly complete. False means the result is inconclusive.
    bool frontier_exhausted = false;
};

/// Breadth-first closure of the start under distance^2 <= k^2 adjacency among
/// primes with norm <= norm_bound. Deterministic member ordering.
/// Throws InvalidStartError when the start is not a prime of the requested
/// dimension and CapacityError past the desk-scale norm bounds
/// (10^8 in 2D, 10^6 in 3D).
Component explore(const MoatQuery& q);

struct ProfileRow {
    uint64_t step_bound_sq = 0;
    uint64_t size = 0;
    uint64_t farthest_norm = 0;
    bool exhausted = false;
};

/// One explore per step bound; bounds must be ascending.
std::vector<ProfileRow> moat_profile(int dimension, const LatticePoint3& start,
                                     uint64_t norm_bound,
                                     const std::vector<uint64_t>& k2_values);

}  // namespace moatwalk::moat
