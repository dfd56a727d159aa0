#include "moatwalk/primestore.hpp"

#include <algorithm>
#include <utility>

#include "moatwalk/errors.hpp"
#include "moatwalk/ntheory.hpp"
#include "io_util.hpp"
#include "parallel.hpp"

namespace moatwalk::store {

namespace {

void validate_spec(const BallSpec& spec) {
    if (spec.exponent > kMaxExponent)
        throw CapacityError("ball exponent " + std::to_string(spec.exponent) +
                            " exceeds the cap of " + std::to_string(kMaxExponent));
    if (!spec.octant_only)
        throw CapacityError("only octant-restricted stores are supported");
}

uint64_t grid_dim_for(const BallSpec& spec) {
    return (spec.radius() >> 3) + 1;
}

void validate_grid(const BallSpec& spec) {
    uint64_t dim = grid_dim_for(spec);
    if (dim * dim * dim > (uint64_t(1) << 24))
        throw CapacityError(
            "cell grid too large for exponent " + std::to_string(spec.exponent) +
            "; the fixed cell side supports desk scale (A <= 3)");
}

}  // namespace

uint64_t PrimeStore::cell_of(uint64_t packed) const {
    uint64_t ax = (packed >> 42 & 0x1fffff) >> 3;
    uint64_t by = (packed >> 21 & 0x1fffff) >> 3;
    uint64_t cz = (packed & 0x1fffff) >> 3;
    return (ax * grid_dim_ + by) * grid_dim_ + cz;
}

PrimeStore PrimeStore::build(const BallSpec& spec, unsigned threads) {
    validate_spec(spec);
    validate_grid(spec);

    PrimeStore s;
    s.spec_ = spec;
    s.grid_dim_ = grid_dim_for(spec);
    uint64_t ncells = s.grid_dim_ * s.grid_dim_ * s.grid_dim_;
    s.cell_start_.assign(ncells + 1, 0);

    const uint64_t R = spec.radius();
    const uint64_t R2 = spec.radius_sq();
    if (R2 < 3) return s;  // smallest interior norm is 3

    auto sieve = ntheory::PrimeTable::build(R2, threads);
    const uint64_t* words = sieve.words().data();

    const uint64_t dim = s.grid_dim_;
    std::vector<std::vector<uint64_t>> slab_points(dim);
    std::vector<uint64_t> counts(ncells, 0);

    detail::parallel_blocks(dim, threads, [&](std::size_t slab) {
        uint64_t a_lo = std::max<uint64_t>(1, uint64_t(slab) * 8);
        uint64_t a_hi = std::min(R, uint64_t(slab) * 8 + 7);
        if (a_lo > a_hi) return;

        std::vector<std::pair<uint64_t, uint64_t>> found;  // (cell, packed)
        for (uint64_t a = a_lo; a <= a_hi; ++a) {
            uint64_t aa = a * a;
            if (aa + 2 > R2) break;
            uint64_t bmax = ntheory::isqrt(R2 - aa - 1);
            for (uint64_t b = 1; b <= bmax; ++b) {
                uint64_t sum2 = aa + b * b;
                uint64_t cmax = ntheory::isqrt(R2 - sum2);
                if (cmax == 0) continue;
                // Only odd norms can be prime; pick the parity of c accordingly.
                uint64_t c = (sum2 & 1) ? 2 : 1;
                uint64_t n = sum2 + c * c;
                uint64_t base = a << 42 | b << 21;
                while (c <= cmax) {
                    uint64_t bit = n >> 1;
                    if (words[bit >> 6] >> (bit & 63) & 1) {
                        uint64_t by = b >> 3, cz = c >> 3;
                        found.emplace_back((uint64_t(slab) * dim + by) * dim + cz,
                                           base | c);
                    }
                    n += 4 * c + 4;
                    c += 2;
                }
            }
        }
        std::sort(found.begin(), found.end());
        auto& out = slab_points[slab];
        out.reserve(found.size());
        for (const auto& [cell, packed] : found) {
            ++counts[cell];
            out.push_back(packed);
        }
    });

    uint64_t total = 0;
    for (uint64_t cell = 0; cell < ncells; ++cell) {
        s.cell_start_[cell] = total;
        total += counts[cell];
    }
    s.cell_start_[ncells] = total;

    s.points_.resize(total);
    detail::parallel_blocks(dim, threads, [&](std::size_t slab) {
        const auto& src = slab_points[slab];
        if (src.empty()) return;
        uint64_t dst = s.cell_start_[uint64_t(slab) * dim * dim];
        std::copy(src.begin(), src.end(), s.points_.begin() + std::ptrdiff_t(dst));
    });

    return s;
}

void PrimeStore::index_cells(std::vector<uint64_t> lex_sorted_points) {
    uint64_t ncells = grid_dim_ * grid_dim_ * grid_dim_;
    std::vector<uint64_t> counts(ncells, 0);
    for (uint64_t v : lex_sorted_points) ++counts[cell_of(v)];

    cell_start_.assign(ncells + 1, 0);
    uint64_t total = 0;
    for (uint64_t cell = 0; cell < ncells; ++cell) {
        cell_start_[cell] = total;
        total += counts[cell];
    }
    cell_start_[ncells] = total;

    // Stable distribution keeps each cell lex-sorted.
    points_.resize(total);
    std::vector<uint64_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (uint64_t v : lex_sorted_points) points_[cursor[cell_of(v)]++] = v;
}

PrimeStore PrimeStore::from_points(const BallSpec& spec,
                                   const std::vector<LatticePoint3>& points,
                                   bool validate) {
    validate_spec(spec);
    validate_grid(spec);

    PrimeStore s;
    s.spec_ = spec;
    s.grid_dim_ = grid_dim_for(spec);

    const uint64_t R = spec.radius();
    const uint64_t R2 = spec.radius_sq();
    std::vector<uint64_t> packed;
    packed.reserve(points.size());
    for (const auto& p : points) {
        if (validate) {
            bool octant = p.a >= 1 && p.b >= 1 && p.c >= 1 && uint64_t(p.a) <= R &&
                          uint64_t(p.b) <= R && uint64_t(p.c) <= R;
            if (!octant || p.norm() > R2 ||
                lattice::classify3(p).tag != lattice::PrimeTag::Interior3D)
                throw DomainError("point is not an interior prime inside the ball");
        }
        packed.push_back(pack_point(p));
    }
    std::sort(packed.begin(), packed.end());
    if (std::adjacent_find(packed.begin(), packed.end()) != packed.end())
        throw DomainError("duplicate store point");
    s.index_cells(std::move(packed));
    return s;
}

namespace {

struct Candidate {
    uint64_t dist_sq;
    uint64_t packed;
    friend bool operator<(const Candidate& l, const Candidate& r) {
        return l.dist_sq != r.dist_sq ? l.dist_sq < r.dist_sq
                                      : l.packed < r.packed;
    }
};

}  // namespace

std::vector<LatticePoint3> PrimeStore::query_ball(const LatticePoint3& center,
                                                  double r) const {
    return query_halfspace_ball(center, r, GuidePlane{{0, 0, 0}, 0},
                                Vec3i{0, 0, 0});
}

std::vector<LatticePoint3> PrimeStore::query_halfspace_ball(
    const LatticePoint3& center, double r, const GuidePlane& plane,
    const Vec3i& forward) const {
    std::vector<LatticePoint3> result;
    if (r < 0 || points_.empty()) return result;

    const int64_t R = int64_t(spec_.radius());
    const int64_t ri = int64_t(r);
    const bool use_plane = !(plane.normal == Vec3i{0, 0, 0});
    const bool use_forward = !(forward == Vec3i{0, 0, 0});
    const double r2 = r * r;

    int64_t lo[3], hi[3];
    const int64_t c[3] = {center.a, center.b, center.c};
    for (int d = 0; d < 3; ++d) {
        lo[d] = std::max<int64_t>(1, c[d] - ri);
        hi[d] = std::min<int64_t>(R, c[d] + ri);
        if (lo[d] > hi[d]) return result;
    }

    std::vector<Candidate> candidates;
    for (int64_t ax = lo[0] >> 3; ax <= hi[0] >> 3; ++ax)
        for (int64_t by = lo[1] >> 3; by <= hi[1] >> 3; ++by)
            for (int64_t cz = lo[2] >> 3; cz <= hi[2] >> 3; ++cz) {
                uint64_t cell =
                    (uint64_t(ax) * grid_dim_ + uint64_t(by)) * grid_dim_ +
                    uint64_t(cz);
                for (uint64_t i = cell_start_[cell]; i < cell_start_[cell + 1];
                     ++i) {
                    LatticePoint3 p = unpack_point(points_[i]);
                    int64_t dx = p.a - center.a;
                    int64_t dy = p.b - center.b;
                    int64_t dz = p.c - center.c;
                    uint64_t d2 = uint64_t(dx * dx + dy * dy + dz * dz);
                    if (double(d2) > r2) continue;
                    if (use_plane && plane.side(p) > 0) continue;
                    if (use_forward &&
                        forward.x * dx + forward.y * dy + forward.z * dz <= 0)
                        continue;
                    candidates.push_back(Candidate{d2, points_[i]});
                }
            }

    std::sort(candidates.begin(), candidates.end());
    result.reserve(candidates.size());
    for (const auto& cand : candidates) result.push_back(unpack_point(cand.packed));
    return result;
}

bool PrimeStore::contains(const LatticePoint3& p) const {
    const int64_t R = int64_t(spec_.radius());
    if (p.a < 1 || p.b < 1 || p.c < 1 || p.a > R || p.b > R || p.c > R)
        return false;
    uint64_t v = pack_point(p);
    uint64_t cell = cell_of(v);
    auto first = points_.begin() + std::ptrdiff_t(cell_start_[cell]);
    auto last = points_.begin() + std::ptrdiff_t(cell_start_[cell + 1]);
    auto it = std::lower_bound(first, last, v);
    return it != last && *it == v;
}

void PrimeStore::save(std::ostream& out) const {
    std::vector<uint64_t> sorted(points_);
    std::sort(sorted.begin(), sorted.end());

    out.write("MWP3", 4);
    detail::write_u32(out, 1);
    detail::write_u32(out, spec_.exponent);
    detail::write_u32(out, spec_.octant_only ? 1 : 0);
    detail::write_u64(out, sorted.size());
    for (uint64_t v : sorted) {
        LatticePoint3 p = unpack_point(v);
        detail::write_u32(out, uint32_t(p.a));
        detail::write_u32(out, uint32_t(p.b));
        detail::write_u32(out, uint32_t(p.c));
    }
    if (!out) throw CacheError("store cache write failed");
}

PrimeStore PrimeStore::load(std::istream& in, bool verify) {
    detail::expect_magic(in, "MWP3");
    uint32_t version = detail::read_u32(in);
    if (version != 1)
        throw CacheError("unsupported store cache version " +
                         std::to_string(version));
    BallSpec spec;
    spec.exponent = detail::read_u32(in);
    spec.octant_only = detail::read_u32(in) != 0;
    validate_spec(spec);
    validate_grid(spec);
    uint64_t count = detail::read_u64(in);

    PrimeStore s;
    s.spec_ = spec;
    s.grid_dim_ = grid_dim_for(spec);

    const uint64_t R = spec.radius();
    const uint64_t R2 = spec.radius_sq();
    std::vector<uint64_t> packed;
    packed.reserve(count);
    uint64_t prev = 0;
    for (uint64_t i = 0; i < count; ++i) {
        uint32_t a = detail::read_u32(in);
        uint32_t b = detail::read_u32(in);
        uint32_t cc = detail::read_u32(in);
        if (a < 1 || b < 1 || cc < 1 || a > R || b > R || cc > R)
            throw CacheError("store cache point outside the octant ball");
        LatticePoint3 p{int32_t(a), int32_t(b), int32_t(cc)};
        if (p.norm() > R2) throw CacheError("store cache point outside the ball");
        uint64_t v = pack_point(p);
        if (i > 0 && v <= prev) throw CacheError("store cache points not sorted");
        prev = v;
        packed.push_back(v);
    }

    if (verify) {
        auto sieve = ntheory::PrimeTable::build(std::max<uint64_t>(R2, 3));
        for (uint64_t v : packed) {
            LatticePoint3 p = unpack_point(v);
            uint64_t n = p.norm();
            if (!sieve.contains(n) || n % 8 == 7)
                throw CacheError("store cache point is not an interior prime");
        }
    }

    s.index_cells(std::move(packed));
    return s;
}

}  // namespace moatwalk::store
