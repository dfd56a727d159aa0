#include "moatwalk/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "moatwalk/ntheory.hpp"

namespace moatwalk::lattice {

const char* to_string(PrimeTag tag) {
    switch (tag) {
        case PrimeTag::Interior3D: return "Interior3D";
        case PrimeTag::BoundaryGaussian: return "BoundaryGaussian";
        case PrimeTag::Axis: return "Axis";
        case PrimeTag::Composite: return "Composite";
    }
    return "Composite";
}

bool classify_gaussian(const GaussianInt& p) {
    if (p.a != 0 && p.b != 0) return ntheory::is_prime(p.norm());
    if (p.a == 0 && p.b == 0) return false;
    uint64_t m = uint64_t(std::llabs(p.a != 0 ? p.a : p.b));
    return ntheory::is_prime(m) && m % 4 == 3;
}

PrimeClass classify3(const LatticePoint3& p) {
    PrimeClass out;
    out.norm = p.norm();
    int zeros = (p.a == 0) + (p.b == 0) + (p.c == 0);
    if (zeros == 0) {
        if (ntheory::is_prime(out.norm) && out.norm % 8 != 7) {
            out.tag = PrimeTag::Interior3D;
            out.detail = out.norm;
        }
        return out;
    }
    if (zeros == 1) {
        int zero_axis = p.a == 0 ? 0 : (p.b == 0 ? 1 : 2);
        int64_t u, v;
        if (zero_axis == 0) {
            u = p.b; v = p.c;
        } else if (zero_axis == 1) {
            u = p.c; v = p.a;
        } else {
            u = p.a; v = p.b;
        }
        if (classify_gaussian(GaussianInt{u, v})) {
            out.tag = PrimeTag::BoundaryGaussian;
            out.zero_axis = zero_axis;
            out.detail = uint64_t(u * u) + uint64_t(v * v);
        }
        return out;
    }
    if (zeros == 2) {
        uint64_t m = uint64_t(std::abs(int64_t(p.a)) + std::abs(int64_t(p.b)) +
                              std::abs(int64_t(p.c)));
        if (ntheory::is_prime(m) && m % 8 == 7) {
            out.tag = PrimeTag::Axis;
            out.detail = m;
        }
        return out;
    }
    return out;  // origin
}

namespace {

int multiset_multiplicity(int32_t x, int32_t y, int32_t z) {
    if (x == y && y == z) return 1;
    if (x == y || y == z || x == z) return 3;
    return 6;
}

}  // namespace

CanonicalTriple canonicalize(const LatticePoint3& p) {
    int32_t v[3] = {static_cast<int32_t>(std::llabs(p.a)),
                    static_cast<int32_t>(std::llabs(p.b)),
                    static_cast<int32_t>(std::llabs(p.c))};
    std::sort(v, v + 3, std::greater<int32_t>());
    return CanonicalTriple{v[0], v[1], v[2],
                           multiset_multiplicity(v[0], v[1], v[2])};
}

std::vector<CanonicalTriple> ordered_representations(uint64_t n) {
    if (n > 10000000000ULL)
        throw std::invalid_argument("ordered_representations caps n at 10^10");
    std::vector<CanonicalTriple> out;
    // x >= y >= z >= 0 forces 3x^2 >= n; ascending loops emit sorted output.
    uint64_t xhi = ntheory::isqrt(n);
    for (uint64_t x = ntheory::isqrt((n + 2) / 3); x <= xhi; ++x) {
        if (3 * x * x < n) continue;  // isqrt floor can undershoot the bound
        uint64_t rem = n - x * x;
        uint64_t yhi = std::min(x, ntheory::isqrt(rem));
        for (uint64_t y = rem == 0 ? 0 : ntheory::isqrt((rem + 1) / 2); y <= yhi; ++y) {
            if (2 * y * y < rem) continue;
            uint64_t zz = rem - y * y;
            uint64_t z = ntheory::isqrt(zz);
            if (z * z != zz || z > y) continue;
            out.push_back(CanonicalTriple{
                int32_t(x), int32_t(y), int32_t(z),
                multiset_multiplicity(int32_t(x), int32_t(y), int32_t(z))});
        }
    }
    return out;
}

}  // namespace moatwalk::lattice
