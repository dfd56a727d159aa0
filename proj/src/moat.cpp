#include "moatwalk/moat.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "moatwalk/errors.hpp"
#include "moatwalk/ntheory.hpp"

namespace moatwalk::moat {

namespace {

using ntheory::PrimeTable;

bool gaussian_member(int64_t x, int64_t y, uint64_t norm_bound,
                     const PrimeTable& sieve) {
    uint64_t n = uint64_t(x * x) + uint64_t(y * y);
    if (n > norm_bound) return false;
    if (x != 0 && y != 0) return sieve.contains(n);
    if (x == 0 && y == 0) return false;
    uint64_t m = uint64_t(x != 0 ? (x < 0 ? -x : x) : (y < 0 ? -y : y));
    return m % 4 == 3 && sieve.contains(m);
}

bool lattice3_member(int64_t x, int64_t y, int64_t z, uint64_t norm_bound,
                     const PrimeTable& sieve) {
    uint64_t n = uint64_t(x * x) + uint64_t(y * y) + uint64_t(z * z);
    if (n > norm_bound) return false;
    int zeros = (x == 0) + (y == 0) + (z == 0);
    if (zeros == 0) return sieve.contains(n) && n % 8 != 7;
    if (zeros == 1) return sieve.contains(n);  // the face pair is nonzero
    if (zeros == 2) {
        uint64_t m = uint64_t((x < 0 ? -x : x) + (y < 0 ? -y : y) +
                              (z < 0 ? -z : z));
        return m % 8 == 7 && sieve.contains(m);
    }
    return false;
}

// Offsets (dx,dy,dz) != 0 with squared length <= k2, in lex order.
std::vector<LatticePoint3> step_offsets(uint64_t k2, bool three_d) {
    std::vector<LatticePoint3> out;
    int64_t k = 0;
    while ((k + 1) * (k + 1) <= int64_t(k2)) ++k;
    for (int64_t dx = -k; dx <= k; ++dx)
        for (int64_t dy = -k; dy <= k; ++dy) {
            if (three_d) {
                for (int64_t dz = -k; dz <= k; ++dz) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    if (uint64_t(dx * dx + dy * dy + dz * dz) <= k2)
                        out.push_back({int32_t(dx), int32_t(dy), int32_t(dz)});
                }
            } else {
                if (dx == 0 && dy == 0) continue;
                if (uint64_t(dx * dx + dy * dy) <= k2)
                    out.push_back({int32_t(dx), int32_t(dy), 0});
            }
        }
    return out;
}

// Visited set over [-B, B]^dim: dense bitmap when it fits, hashing otherwise.
class Visited {
public:
    Visited(int64_t B, bool three_d) : B_(B), W_(2 * B + 1), three_d_(three_d) {
        uint64_t cells = three_d_ ? uint64_t(W_) * W_ * W_ : uint64_t(W_) * W_;
        if (cells <= (uint64_t(1) << 28)) {
            bits_.assign((cells + 63) / 64, 0);
        } else {
            hash_.reserve(1 << 16);
        }
    }

    // returns true if newly inserted
    bool insert(const LatticePoint3& p) {
        uint64_t key = index(p);
        if (!bits_.empty()) {
            uint64_t mask = uint64_t(1) << (key & 63);
            if (bits_[key >> 6] & mask) return false;
            bits_[key >> 6] |= mask;
            return true;
        }
        return hash_.insert(key).second;
    }

private:
    uint64_t index(const LatticePoint3& p) const {
        uint64_t i = uint64_t(p.a + B_) * uint64_t(W_) + uint64_t(p.b + B_);
        if (three_d_) i = i * uint64_t(W_) + uint64_t(p.c + B_);
        return i;
    }

    int64_t B_, W_;
    bool three_d_;
    std::vector<uint64_t> bits_;
    std::unordered_set<uint64_t> hash_;
};

}  // namespace

Component explore(const MoatQuery& q) {
    if (q.dimension != 2 && q.dimension != 3)
        throw std::invalid_argument("dimension must be 2 or 3");
    if (q.step_bound_sq < 1)
        throw std::invalid_argument("step bound k^2 must be positive");
    const bool three_d = q.dimension == 3;
    const uint64_t cap = three_d ? 1000000ull : 100000000ull;
    if (q.norm_bound < 2 || q.norm_bound > cap)
        throw CapacityError("norm bound out of range for dimension " +
                            std::to_string(q.dimension));
    if (!three_d && q.start.c != 0)
        throw InvalidStartError("2D starts must have c = 0");

    auto sieve = PrimeTable::build(q.norm_bound);
    auto member = [&](int64_t x, int64_t y, int64_t z) {
        return three_d ? lattice3_member(x, y, z, q.norm_bound, sieve)
                       : gaussian_member(x, y, q.norm_bound, sieve);
    };
    if (!member(q.start.a, q.start.b, q.start.c))
        throw InvalidStartError("start is not a prime inside the norm bound");

    const auto offsets = step_offsets(q.step_bound_sq, three_d);
    const int64_t B = int64_t(ntheory::isqrt(q.norm_bound));
    Visited visited(B, three_d);

    Component comp;
    comp.frontier_exhausted = true;
    visited.insert(q.start);
    std::vector<LatticePoint3> frontier{q.start};
    uint32_t level = 0;

    while (!frontier.empty()) {
        for (const auto& p : frontier) {
            comp.members.push_back(p);
            comp.depth.push_back(level);
        }
        std::vector<LatticePoint3> next;
        for (const auto& p : frontier) {
            for (const auto& d : offsets) {
                int64_t x = int64_t(p.a) + d.a;
                int64_t y = int64_t(p.b) + d.b;
                int64_t z = int64_t(p.c) + d.c;
                uint64_t n = uint64_t(x * x + y * y + z * z);
                if (n > q.norm_bound) {
                    // the component might continue past the bound
                    comp.frontier_exhausted = false;
                    continue;
                }
                if (!member(x, y, z)) continue;
                LatticePoint3 t{int32_t(x), int32_t(y), int32_t(z)};
                if (visited.insert(t)) next.push_back(t);
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
        ++level;
    }

    comp.farthest = comp.members.front();
    uint64_t best = comp.farthest.norm();
    for (const auto& p : comp.members) {
        uint64_t n = p.norm();
        if (n > best || (n == best && comp.farthest < p)) {
            best = n;
            comp.farthest = p;
        }
    }
    return comp;
}

std::vector<ProfileRow> moat_profile(int dimension, const LatticePoint3& start,
                                     uint64_t norm_bound,
                                     const std::vector<uint64_t>& k2_values) {
    if (!std::is_sorted(k2_values.begin(), k2_values.end()))
        throw std::invalid_argument("k^2 values must be ascending");
    std::vector<ProfileRow> rows;
    rows.reserve(k2_values.size());
    for (uint64_t k2 : k2_values) {
        MoatQuery q{dimension, k2, start, norm_bound};
        auto comp = explore(q);
        rows.push_back(ProfileRow{k2, comp.members.size(),
                                  comp.farthest.norm(), comp.frontier_exhausted});
    }
    return rows;
}

}  // namespace moatwalk::moat
