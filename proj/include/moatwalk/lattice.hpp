#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace moatwalk::lattice {

/// Gaussian integer a+bi. Components must stay below 2^31 in magnitude so the
/// norm fits in 64 bits.
struct GaussianInt {
    int64_t a = 0;
    int64_t b = 0;

    uint64_t norm() const {
        return uint64_t(a * a) + uint64_t(b * b);
    }
};

/// Integer lattice point in Z^3.
struct LatticePoint3 {
    int32_t a = 0;
    int32_t b = 0;
    int32_t c = 0;

    uint64_t norm() const {
        return uint64_t(int64_t(a) * a) + uint64_t(int64_t(b) * b) +
               uint64_t(int64_t(c) * c);
    }
    friend auto operator<=>(const LatticePoint3&, const LatticePoint3&) = default;
};

enum class PrimeTag { Interior3D, BoundaryGaussian, Axis, Composite };

const char* to_string(PrimeTag tag);

/// Classification of a lattice point. `detail` carries the prime norm for
/// Interior3D, the 2D face norm for BoundaryGaussian, and the coordinate
/// magnitude for Axis.
struct PrimeClass {
    PrimeTag tag = PrimeTag::Composite;
    uint64_t norm = 0;
    int zero_axis = -1;  // BoundaryGaussian only: index of the zero coordinate
    uint64_t detail = 0;
};

/// Sorted-descending absolute-value form of a point, with the number of
/// distinct ordered permutations of its components.
struct CanonicalTriple {
    int32_t x = 0;  // x >= y >= z >= 0
    int32_t y = 0;
    int32_t z = 0;
    int multiplicity = 0;  // 3! / (repetition factorials): 1, 3 or 6

    friend auto operator<=>(const CanonicalTriple&, const CanonicalTriple&) = default;
};

/// Gaussian primality: both parts nonzero with prime norm, or one part zero
/// with the other a prime congruent to 3 mod 4.
bool classify_gaussian(const GaussianInt& p);

/// Three-dimensional prime classification. All coordinates nonzero: Interior3D
/// iff the norm is a prime not congruent to 7 mod 8. Exactly one zero:
/// BoundaryGaussian iff the remaining face point is a Gaussian prime. Exactly
/// two zeros: Axis iff the surviving magnitude is a prime congruent to 7 mod 8.
PrimeClass classify3(const LatticePoint3& p);

CanonicalTriple canonicalize(const LatticePoint3& p);

/// All canonical triples (x >= y >= z >= 0, x^2+y^2+z^2 = n) with their
/// ordered multiplicities, sorted ascending by (x, y, z). n <= 10^10.
std::vector<CanonicalTriple> ordered_representations(uint64_t n);

}  // namespace moatwalk::lattice
