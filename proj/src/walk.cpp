#include "moatwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "moatwalk/errors.hpp"

namespace moatwalk::walk {

using lattice::classify3;
using lattice::PrimeTag;
using store::pack_point;
using store::unpack_point;

namespace {

uint64_t dist_sq(const LatticePoint3& p, const LatticePoint3& q) {
    int64_t dx = int64_t(p.a) - q.a;
    int64_t dy = int64_t(p.b) - q.b;
    int64_t dz = int64_t(p.c) - q.c;
    return uint64_t(dx * dx + dy * dy + dz * dz);
}

int multiplicity_of(const LatticePoint3& p) {
    if (p.a == p.b && p.b == p.c) return 1;
    if (p.a == p.b || p.b == p.c || p.a == p.c) return 3;
    return 6;
}

}  // namespace

double search_radius(const LatticePoint3& p, const WalkConfig& cfg) {
    uint64_t norm = p.norm();
    if (norm < 2) norm = 2;
    double ln = std::log(double(norm));
    return std::max(cfg.min_radius, cfg.cramer_constant * ln * ln);
}

const char* to_string(Region region) {
    switch (region) {
        case Region::P1Lower: return "P1Lower";
        case Region::P1Upper: return "P1Upper";
        case Region::P2Lower: return "P2Lower";
        case Region::P2Upper: return "P2Upper";
        case Region::P3Lower: return "P3Lower";
        case Region::P3Upper: return "P3Upper";
    }
    return "P1Lower";
}

Region region_of(const LatticePoint3& p) {
    if (p.a >= p.b && p.b >= p.c) return Region::P1Lower;
    if (p.b >= p.a && p.a >= p.c) return Region::P1Upper;
    if (p.b >= p.c && p.c >= p.a) return Region::P2Lower;
    if (p.c >= p.b && p.b >= p.a) return Region::P2Upper;
    if (p.a >= p.c && p.c >= p.b) return Region::P3Lower;
    return Region::P3Upper;
}

PathResult extend_path(const LatticePoint3& start, const GuidePlane& plane,
                       const PrimeStore& store, const WalkConfig& cfg) {
    if (classify3(start).tag != PrimeTag::Interior3D)
        throw InvalidStartError("walk start must be an interior 3D prime");
    if (plane.side(start) > 0)
        throw RegionError("walk start lies above the guide plane");

    const Vec3i fwd = forward_direction(plane);
    const double fwd_len = std::sqrt(double(dot(fwd, fwd)));
    const double R = double(store.spec().radius());

    PathResult result;
    result.path.region = region_of(start);
    result.path.steps.push_back({start, 0.0});

    LatticePoint3 cur = start;
    for (;;) {
        const double r = search_radius(cur, cfg);
        if (std::sqrt(double(cur.norm())) >= R - r) break;

        LatticePoint3 next;
        bool found = false;
        auto ball = store.query_halfspace_ball(cur, r, plane, fwd);
        if (!ball.empty()) {
            next = ball.front();
            found = true;
        } else {
            // Coaxial tube, one radius-length segment per attempt. Segments
            // whose forward coordinate already exceeds R cannot contain
            // stored points, so the search is exhausted early.
            const double fwd_pos = double(dot(fwd, cur)) / fwd_len;
            for (uint32_t t = 1; t <= cfg.max_tube_extensions && !found; ++t) {
                const double ax_lo = double(t - 1) * r;
                const double ax_hi = double(t) * r;
                if (fwd_pos + ax_lo > R) break;
                const double reach = std::sqrt(ax_hi * ax_hi + r * r);
                for (const auto& q : store.query_ball(cur, reach)) {
                    if (plane.side(q) > 0) continue;
                    int64_t dx = int64_t(q.a) - cur.a;
                    int64_t dy = int64_t(q.b) - cur.b;
                    int64_t dz = int64_t(q.c) - cur.c;
                    double axial =
                        double(fwd.x * dx + fwd.y * dy + fwd.z * dz) / fwd_len;
                    if (axial <= ax_lo || axial > ax_hi) continue;
                    double d2 = double(uint64_t(dx * dx + dy * dy + dz * dz));
                    if (d2 - axial * axial > r * r) continue;
                    next = q;
                    found = true;
                    break;  // query_ball is (distance, lex)-sorted
                }
            }
        }
        if (!found) {
            result.moat = MoatEvent{cur, r, result.path.index};
            break;
        }
        result.path.steps.push_back({next, std::sqrt(double(dist_sq(cur, next)))});
        cur = next;
    }
    return result;
}

GuidePlane build_guide_plane(const Path& path, const GuidePlane& prev) {
    if (path.steps.empty())
        throw DomainError("cannot build a guide plane from an empty path");
    if (path.steps.size() < 2) return prev;

    struct Extreme {
        uint64_t absdot = 0;
        LatticePoint3 p;
    };
    auto better = [](const Extreme& l, const Extreme& r) {
        return l.absdot != r.absdot ? l.absdot > r.absdot : l.p < r.p;
    };
    Extreme first, second;
    bool have_first = false, have_second = false;
    for (const auto& step : path.steps) {
        int64_t sd = prev.side(step.point);
        Extreme e{uint64_t(sd < 0 ? -sd : sd), step.point};
        if (!have_first || better(e, first)) {
            if (have_first) {
                second = first;
                have_second = true;
            }
            first = e;
            have_first = true;
        } else if (!have_second || better(e, second)) {
            second = e;
            have_second = true;
        }
    }
    if (first.absdot == 0) return prev;  // the whole path lies on prev
    Vec3i n = cross(as_vec(first.p), as_vec(second.p));
    if (n == Vec3i{0, 0, 0}) return prev;  // extremes collinear with the origin
    n = orient_normal(primitive(n));
    return GuidePlane{n, prev.index + 1};
}

namespace {

// Wedge-restricted view of the store used by run_walk: the canonical
// representatives (a >= b >= c) of every permutation orbit, bucketed on the
// same cell grid, with per-cell counts of not-yet-covered entries.
class RepGrid {
public:
    explicit RepGrid(const PrimeStore& s) {
        R_ = int64_t(s.spec().radius());
        dim_ = (uint64_t(R_) >> 3) + 1;
        uint64_t ncells = dim_ * dim_ * dim_;

        std::vector<uint32_t> counts(ncells, 0);
        for (uint64_t v : s.packed()) {
            LatticePoint3 p = unpack_point(v);
            if (p.a >= p.b && p.b >= p.c) {
                reps_.push_back(v);
                ++counts[cell_of(v)];
            }
        }
        cell_start_.assign(ncells + 1, 0);
        uint64_t total = 0;
        for (uint64_t cell = 0; cell < ncells; ++cell) {
            cell_start_[cell] = total;
            total += counts[cell];
        }
        cell_start_[ncells] = total;

        mult_.resize(reps_.size());
        for (std::size_t i = 0; i < reps_.size(); ++i)
            mult_[i] = uint8_t(multiplicity_of(unpack_point(reps_[i])));

        covered_.assign((reps_.size() + 63) / 64, 0);
        cell_left_ = std::move(counts);
        left_total_ = reps_.size();

        std::vector<std::pair<uint64_t, uint32_t>> keyed(reps_.size());
        for (std::size_t i = 0; i < reps_.size(); ++i)
            keyed[i] = {unpack_point(reps_[i]).norm(), uint32_t(i)};
        std::sort(keyed.begin(), keyed.end(),
                  [this](const auto& l, const auto& r) {
                      if (l.first != r.first) return l.first < r.first;
                      return reps_[l.second] < reps_[r.second];
                  });
        order_.resize(keyed.size());
        for (std::size_t i = 0; i < keyed.size(); ++i) order_[i] = keyed[i].second;
    }

    uint64_t size() const { return reps_.size(); }
    uint64_t left() const { return left_total_; }
    uint64_t covered_weight() const { return covered_weight_; }
    const std::vector<uint32_t>& order() const { return order_; }
    LatticePoint3 point(uint32_t id) const { return unpack_point(reps_[id]); }

    bool is_covered(uint32_t id) const {
        return covered_[id >> 6] >> (id & 63) & 1;
    }

    // Idempotent; returns true when the id was newly covered.
    bool cover(uint32_t id) {
        if (is_covered(id)) return false;
        covered_[id >> 6] |= uint64_t(1) << (id & 63);
        --cell_left_[cell_of(reps_[id])];
        --left_total_;
        covered_weight_ += mult_[id];
        return true;
    }

    // Index of a packed point, if present.
    std::optional<uint32_t> find(uint64_t packed) const {
        LatticePoint3 p = unpack_point(packed);
        if (p.a < 1 || p.c < 1 || p.a > R_) return std::nullopt;
        uint64_t cell = cell_of(packed);
        auto first = reps_.begin() + std::ptrdiff_t(cell_start_[cell]);
        auto last = reps_.begin() + std::ptrdiff_t(cell_start_[cell + 1]);
        auto it = std::lower_bound(first, last, packed);
        if (it == last || *it != packed) return std::nullopt;
        return uint32_t(it - reps_.begin());
    }

    // Nearest uncovered representative in the forward quarter-ball below the
    // plane; ties break to the lex-smallest point. Cells are visited in
    // expanding Chebyshev shells with exact AABB distance pruning.
    std::optional<uint32_t> nearest_uncovered(const LatticePoint3& cur, double r,
                                              const GuidePlane& plane,
                                              const Vec3i& fwd) const {
        const double r2 = r * r;
        const int64_t cx = cur.a >> 3, cy = cur.b >> 3, cz = cur.c >> 3;

        uint64_t best_d2 = 0;
        uint64_t best_packed = 0;
        uint32_t best_id = 0;
        bool found = false;

        auto visit = [&](int64_t ax, int64_t by, int64_t az) {
            if (ax < 0 || by < 0 || az < 0 || ax >= int64_t(dim_) ||
                by >= int64_t(dim_) || az >= int64_t(dim_))
                return;
            uint64_t cell = (uint64_t(ax) * dim_ + uint64_t(by)) * dim_ + uint64_t(az);
            if (cell_left_[cell] == 0) return;
            int64_t mdx = axis_gap(cur.a, ax);
            int64_t mdy = axis_gap(cur.b, by);
            int64_t mdz = axis_gap(cur.c, az);
            uint64_t md2 = uint64_t(mdx * mdx + mdy * mdy + mdz * mdz);
            if (double(md2) > r2) return;
            if (found && md2 > best_d2) return;
            for (uint64_t i = cell_start_[cell]; i < cell_start_[cell + 1]; ++i) {
                if (is_covered(uint32_t(i))) continue;
                LatticePoint3 p = unpack_point(reps_[i]);
                int64_t dx = int64_t(p.a) - cur.a;
                int64_t dy = int64_t(p.b) - cur.b;
                int64_t dz = int64_t(p.c) - cur.c;
                uint64_t d2 = uint64_t(dx * dx + dy * dy + dz * dz);
                if (double(d2) > r2) continue;
                if (found &&
                    (d2 > best_d2 || (d2 == best_d2 && reps_[i] > best_packed)))
                    continue;
                if (fwd.x * dx + fwd.y * dy + fwd.z * dz <= 0) continue;
                if (plane.side(p) > 0) continue;
                best_d2 = d2;
                best_packed = reps_[i];
                best_id = uint32_t(i);
                found = true;
            }
        };

        for (int64_t s = 0;; ++s) {
            int64_t min_gap = s == 0 ? 0 : 8 * (s - 1) + 1;
            if (double(min_gap) * double(min_gap) > r2) break;
            if (found && uint64_t(min_gap) * uint64_t(min_gap) > best_d2) break;
            if (cx - s < 0 && cy - s < 0 && cz - s < 0 &&
                cx + s >= int64_t(dim_) && cy + s >= int64_t(dim_) &&
                cz + s >= int64_t(dim_))
                break;
            if (s == 0) {
                visit(cx, cy, cz);
                continue;
            }
            for (int64_t by = cy - s; by <= cy + s; ++by)
                for (int64_t az = cz - s; az <= cz + s; ++az) {
                    visit(cx - s, by, az);
                    visit(cx + s, by, az);
                }
            for (int64_t ax = cx - s + 1; ax <= cx + s - 1; ++ax) {
                for (int64_t az = cz - s; az <= cz + s; ++az) {
                    visit(ax, cy - s, az);
                    visit(ax, cy + s, az);
                }
                for (int64_t by = cy - s + 1; by <= cy + s - 1; ++by) {
                    visit(ax, by, cz - s);
                    visit(ax, by, cz + s);
                }
            }
        }
        if (!found) return std::nullopt;
        return best_id;
    }

    // Nearest uncovered representative inside tube segment t: axial distance
    // in ((t-1)r, tr], perpendicular distance <= r, below the plane.
    std::optional<uint32_t> tube_uncovered(const LatticePoint3& cur, double r,
                                           uint32_t t, const GuidePlane& plane,
                                           const Vec3i& fwd, double fwd_len) const {
        const double ax_lo = double(t - 1) * r;
        const double ax_hi = double(t) * r;
        const double ex = double(fwd.x) / fwd_len;
        const double ey = double(fwd.y) / fwd_len;
        const double ez = double(fwd.z) / fwd_len;

        const double c0[3] = {double(cur.a), double(cur.b), double(cur.c)};
        const double e[3] = {ex, ey, ez};
        int64_t lo_cell[3], hi_cell[3];
        for (int d = 0; d < 3; ++d) {
            double lo = c0[d] + std::min(e[d] * ax_lo, e[d] * ax_hi) - r;
            double hi = c0[d] + std::max(e[d] * ax_lo, e[d] * ax_hi) + r;
            lo_cell[d] = std::max<int64_t>(0, int64_t(std::floor(lo)) >> 3);
            hi_cell[d] = std::min<int64_t>(int64_t(dim_) - 1,
                                           int64_t(std::floor(hi)) >> 3);
            if (lo_cell[d] > hi_cell[d]) return std::nullopt;
        }

        uint64_t best_d2 = 0;
        uint64_t best_packed = 0;
        uint32_t best_id = 0;
        bool found = false;
        for (int64_t ax = lo_cell[0]; ax <= hi_cell[0]; ++ax)
            for (int64_t by = lo_cell[1]; by <= hi_cell[1]; ++by)
                for (int64_t az = lo_cell[2]; az <= hi_cell[2]; ++az) {
                    uint64_t cell =
                        (uint64_t(ax) * dim_ + uint64_t(by)) * dim_ + uint64_t(az);
                    if (cell_left_[cell] == 0) continue;
                    for (uint64_t i = cell_start_[cell]; i < cell_start_[cell + 1];
                         ++i) {
                        if (is_covered(uint32_t(i))) continue;
                        LatticePoint3 p = unpack_point(reps_[i]);
                        int64_t dx = int64_t(p.a) - cur.a;
                        int64_t dy = int64_t(p.b) - cur.b;
                        int64_t dz = int64_t(p.c) - cur.c;
                        uint64_t d2 = uint64_t(dx * dx + dy * dy + dz * dz);
                        if (found && (d2 > best_d2 ||
                                      (d2 == best_d2 && reps_[i] > best_packed)))
                            continue;
                        double axial =
                            double(fwd.x * dx + fwd.y * dy + fwd.z * dz) / fwd_len;
                        if (axial <= ax_lo || axial > ax_hi) continue;
                        if (double(d2) - axial * axial > r * r) continue;
                        if (plane.side(p) > 0) continue;
                        best_d2 = d2;
                        best_packed = reps_[i];
                        best_id = uint32_t(i);
                        found = true;
                    }
                }
        if (!found) return std::nullopt;
        return best_id;
    }

private:
    static int64_t axis_gap(int64_t coord, int64_t cell) {
        int64_t lo = cell * store::kCellSide;
        int64_t hi = lo + store::kCellSide - 1;
        if (coord < lo) return lo - coord;
        if (coord > hi) return coord - hi;
        return 0;
    }

    uint64_t cell_of(uint64_t packed) const {
        uint64_t ax = (packed >> 42 & 0x1fffff) >> 3;
        uint64_t by = (packed >> 21 & 0x1fffff) >> 3;
        uint64_t cz = (packed & 0x1fffff) >> 3;
        return (ax * dim_ + by) * dim_ + cz;
    }

    int64_t R_ = 0;
    uint64_t dim_ = 0;
    std::vector<uint64_t> cell_start_;
    std::vector<uint64_t> reps_;
    std::vector<uint8_t> mult_;
    std::vector<uint64_t> covered_;
    std::vector<uint32_t> cell_left_;
    std::vector<uint32_t> order_;
    uint64_t covered_weight_ = 0;
    uint64_t left_total_ = 0;
};

}  // namespace

WalkReport run_walk(const WalkConfig& cfg, const PrimeStore& store) {
    if (!(cfg.ball == store.spec()))
        throw SpecMismatchError("walk config ball spec does not match the store");

    WalkReport report;
    report.spec = store.spec();

    RepGrid grid(store);
    GuidePlane plane = GuidePlane::q0();
    std::size_t cursor = 0;
    const double R = double(store.spec().radius());

    while (grid.left() > 0) {
        while (grid.is_covered(grid.order()[cursor])) ++cursor;
        uint32_t start_id = grid.order()[cursor];
        LatticePoint3 start = grid.point(start_id);
        if (plane.side(start) > 0) plane = GuidePlane::q0();  // new sweep

        Path path;
        path.index = uint32_t(report.paths.size());
        path.region = Region::P1Lower;
        path.steps.push_back({start, 0.0});
        grid.cover(start_id);

        const Vec3i fwd = forward_direction(plane);
        const double fwd_len = std::sqrt(double(dot(fwd, fwd)));
        LatticePoint3 cur = start;
        std::optional<MoatEvent> moat;

        for (;;) {
            const double r = search_radius(cur, cfg);
            if (std::sqrt(double(cur.norm())) >= R - r) break;
            auto hit = grid.nearest_uncovered(cur, r, plane, fwd);
            if (!hit) {
                const double fwd_pos = double(dot(fwd, cur)) / fwd_len;
                for (uint32_t t = 1; t <= cfg.max_tube_extensions && !hit; ++t) {
                    if (fwd_pos + double(t - 1) * r > R) break;
                    hit = grid.tube_uncovered(cur, r, t, plane, fwd, fwd_len);
                }
            }
            if (!hit) {
                moat = MoatEvent{cur, r, path.index};
                break;
            }
            LatticePoint3 next = grid.point(*hit);
            path.steps.push_back({next, std::sqrt(double(dist_sq(cur, next)))});
            grid.cover(*hit);
            cur = next;
        }

        plane = build_guide_plane(path, plane);
        report.planes.push_back(plane);
        report.paths.push_back(std::move(path));
        if (moat) report.moat_events.push_back(*moat);
    }

    report.covered_count = grid.covered_weight();
    return report;
}

Coverage verify_coverage(const WalkReport& report, const PrimeStore& store) {
    if (!(report.spec == store.spec()))
        throw SpecMismatchError("report and store were built for different specs");

    RepGrid grid(store);
    for (const auto& path : report.paths)
        for (const auto& step : path.steps) {
            auto canon = lattice::canonicalize(step.point);
            auto id = grid.find(pack_point({canon.x, canon.y, canon.z}));
            if (id) grid.cover(*id);
        }

    Coverage cov;
    if (store.count() == 0) return cov;  // vacuous coverage of an empty store
    cov.ratio = double(grid.covered_weight()) / double(store.count());
    if (grid.covered_weight() != store.count()) {
        for (uint32_t id = 0; id < grid.size(); ++id) {
            if (grid.is_covered(id)) continue;
            LatticePoint3 p = grid.point(id);
            int32_t v[3] = {p.a, p.b, p.c};
            std::sort(v, v + 3);
            do {
                cov.uncovered.push_back({v[0], v[1], v[2]});
            } while (std::next_permutation(v, v + 3));
        }
        std::sort(cov.uncovered.begin(), cov.uncovered.end());
    }
    return cov;
}

void write_walk_jsonl(const WalkReport& report, std::ostream& out) {
    char buf[192];
    std::size_t ev = 0;
    for (const auto& path : report.paths) {
        for (std::size_t i = 0; i < path.steps.size(); ++i) {
            const auto& st = path.steps[i];
            int len = std::snprintf(
                buf, sizeof buf,
                "{\"path\":%u,\"seq\":%llu,\"point\":[%d,%d,%d],\"norm\":%llu,"
                "\"dist\":%.17g}\n",
                path.index, (unsigned long long)i, st.point.a, st.point.b,
                st.point.c, (unsigned long long)st.point.norm(), st.dist);
            out.write(buf, len);
        }
        while (ev < report.moat_events.size() &&
               report.moat_events[ev].path_index == path.index) {
            const auto& m = report.moat_events[ev];
            int len = std::snprintf(
                buf, sizeof buf,
                "{\"moat\":true,\"point\":[%d,%d,%d],\"radius\":%.17g}\n",
                m.point.a, m.point.b, m.point.c, m.radius);
            out.write(buf, len);
            ++ev;
        }
    }
}

StepGrowth step_growth(const WalkReport& report) {
    StepGrowth g;
    for (const auto& path : report.paths)
        for (std::size_t i = 1; i < path.steps.size(); ++i)
            g.samples.emplace_back(path.steps[i - 1].point.norm(),
                                   path.steps[i].dist);
    std::sort(g.samples.begin(), g.samples.end());
    if (g.samples.empty()) return g;

    std::size_t decile = std::max<std::size_t>(1, g.samples.size() / 10);
    for (std::size_t i = 0; i < decile; ++i)
        g.bottom_decile_max = std::max(g.bottom_decile_max, g.samples[i].second);
    for (std::size_t i = g.samples.size() - decile; i < g.samples.size(); ++i)
        g.top_decile_max = std::max(g.top_decile_max, g.samples[i].second);
    return g;
}

}  // namespace moatwalk::walk
