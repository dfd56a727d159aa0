#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "moatwalk/geometry.hpp"
#include "moatwalk/lattice.hpp"

namespace moatwalk::store {

using lattice::LatticePoint3;

/// Ball of radius R = 10^A. Stored points are the positive-octant interior
/// primes with a^2+b^2+c^2 <= R^2.
struct BallSpec {
    uint32_t exponent = 1;
    bool octant_only = true;

    uint64_t radius() const {
        uint64_t r = 1;
        for (uint32_t i = 0; i < exponent; ++i) r *= 10;
        return r;
    }
    uint64_t radius_sq() const { return radius() * radius(); }

    friend bool operator==(const BallSpec&, const BallSpec&) = default;
};

inline constexpr int64_t kCellSide = 8;
inline constexpr uint32_t kMaxExponent = 6;

// Points pack into 21 bits per coordinate; packed order equals (a,b,c) lex
// order for octant points.
inline uint64_t pack_point(const LatticePoint3& p) {
    return uint64_t(p.a) << 42 | uint64_t(p.b) << 21 | uint64_t(p.c);
}
inline LatticePoint3 unpack_point(uint64_t v) {
    return LatticePoint3{int32_t(v >> 42 & 0x1fffff), int32_t(v >> 21 & 0x1fffff),
                         int32_t(v & 0x1fffff)};
}

/// Immutable, grid-bucketed set of interior 3D primes inside a ball.
/// Construction may run on several threads; contents are identical for every
/// thread count. Queries are read-only and safe to share.
class PrimeStore {
public:
    /// Exhaustive enumeration of the octant. Throws CapacityError when the
    /// exponent is beyond kMaxExponent or the cell grid would not fit desk
    /// scale (exponent > 3 with the fixed cell side).
    static PrimeStore build(const BallSpec& spec, unsigned threads = 0);

    /// Store with explicit contents (tests, cache loading). With validate set,
    /// every point must classify as Interior3D and lie inside the ball octant.
    static PrimeStore from_points(const BallSpec& spec,
                                  const std::vector<LatticePoint3>& points,
                                  bool validate = true);

    const BallSpec& spec() const { return spec_; }
    uint64_t count() const { return points_.size(); }

    /// Stored primes q with |q - center| <= r, sorted by (distance, lex).
    std::vector<LatticePoint3> query_ball(const LatticePoint3& center,
                                          double r) const;

    /// query_ball filtered to the non-positive side of the plane and to
    /// strictly positive forward progress from the center.
    std::vector<LatticePoint3> query_halfspace_ball(const LatticePoint3& center,
                                                    double r,
                                                    const GuidePlane& plane,
                                                    const Vec3i& forward) const;

    bool contains(const LatticePoint3& p) const;

    /// Cache format MWP3: header then the points as lex-sorted u32 triples.
    void save(std::ostream& out) const;
    static PrimeStore load(std::istream& in, bool verify = false);

    /// Cell-major packed points (lex-sorted within each cell).
    const std::vector<uint64_t>& packed() const { return points_; }

private:
    PrimeStore() = default;
    void index_cells(std::vector<uint64_t> lex_sorted_points);

    uint64_t cell_of(uint64_t packed) const;

    BallSpec spec_;
    uint64_t grid_dim_ = 0;
    std::vector<uint64_t> cell_start_;  // grid_dim_^3 + 1 offsets
    std::vector<uint64_t> points_;

    friend class StoreScan;
};

/// Flat iteration helper for oracles and coverage checks.
class StoreScan {
public:
    explicit StoreScan(const PrimeStore& s) : store_(s) {}
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (uint64_t v : store_.points_) fn(unpack_point(v));
    }

private:
    const PrimeStore& store_;
};

}  // namespace moatwalk::store
