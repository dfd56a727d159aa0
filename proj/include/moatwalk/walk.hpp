#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "moatwalk/geometry.hpp"
#include "moatwalk/lattice.hpp"
#include "moatwalk/primestore.hpp"

namespace moatwalk::walk {

using lattice::LatticePoint3;
using store::BallSpec;
using store::PrimeStore;

struct WalkConfig {
    double cramer_constant = 1.0;   // C in C * (ln norm)^2
    double min_radius = 2.0;        // floor so the smallest prime can move
    uint32_t max_tube_extensions = 64;
    BallSpec ball;
};

/// Search sphere radius at a point: max(min_radius, C * (ln norm)^2).
double search_radius(const LatticePoint3& p, const WalkConfig& cfg);

/// The six symmetric wedges of the positive octant. The walk itself runs in
/// P1Lower (z smallest, a >= b, i.e. a >= b >= c); the others are its images
/// under coordinate permutation.
enum class Region : uint8_t {
    P1Lower,
    P1Upper,
    P2Lower,
    P2Upper,
    P3Lower,
    P3Upper,
};
const char* to_string(Region region);
Region region_of(const LatticePoint3& p);

struct PathStep {
    LatticePoint3 point;
    double dist = 0.0;  // Euclidean distance from the previous step; 0 at the start
};

struct Path {
    uint32_t index = 0;
    Region region = Region::P1Lower;
    std::vector<PathStep> steps;
};

struct MoatEvent {
    LatticePoint3 point;
    double radius = 0.0;
    uint32_t path_index = 0;
};

struct PathResult {
    Path path;
    std::optional<MoatEvent> moat;
};

/// One plane-guided path. Repeats: quarter-ball query below the plane with the
/// Cramer radius, step to the nearest prime (ties by lex order), coaxial tube
/// fallback when the ball is empty, moat event on exhaustion, normal stop
/// within one radius of the ball boundary.
/// Throws InvalidStartError unless the start is Interior3D and RegionError if
/// it lies strictly above the plane.
PathResult extend_path(const LatticePoint3& start, const GuidePlane& plane,
                       const PrimeStore& store, const WalkConfig& cfg);

/// Plane through the origin and the two path points farthest from `prev`
/// (ties by lex order). Returns `prev` for single-point paths, paths lying on
/// `prev`, and origin-collinear extremes. Throws DomainError on empty paths.
GuidePlane build_guide_plane(const Path& path, const GuidePlane& prev);

struct WalkReport {
    BallSpec spec;
    std::vector<Path> paths;
    std::vector<GuidePlane> planes;  // planes[k] is built from paths[k]
    std::vector<MoatEvent> moat_events;
    uint64_t covered_count = 0;  // distinct store points covered (orbit-expanded)
};

/// Full sweep of the canonical wedge starting at (1,1,1): alternates path
/// extension against the current plane with guide-plane construction; a new
/// sweep restarts from Q0 whenever the next uncovered prime sits above the
/// current plane. Paths step only on not-yet-covered canonical primes, so the
/// sweep terminates exactly when every orbit is covered.
WalkReport run_walk(const WalkConfig& cfg, const PrimeStore& store);

struct Coverage {
    double ratio = 1.0;
    std::vector<LatticePoint3> uncovered;
};

/// Fraction of store points whose canonical form appears in some path (the
/// walk covers one wedge; the other five follow by the coordinate-permutation
/// symmetry). Throws SpecMismatchError when report and store disagree.
Coverage verify_coverage(const WalkReport& report, const PrimeStore& store);

/// One JSON record per step:
///   {"path":k,"seq":i,"point":[a,b,c],"norm":n,"dist":d}
/// and per moat event: {"moat":true,"point":[a,b,c],"radius":r}.
void write_walk_jsonl(const WalkReport& report, std::ostream& out);

/// (start-norm, step-distance) samples plus the decile extremes used by the
/// step-growth observation.
struct StepGrowth {
    std::vector<std::pair<uint64_t, double>> samples;  // sorted by start norm
    double bottom_decile_max = 0.0;
    double top_decile_max = 0.0;
};
StepGrowth step_growth(const WalkReport& report);

}  // namespace moatwalk::walk
