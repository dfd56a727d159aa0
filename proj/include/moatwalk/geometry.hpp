#pragma once

#include <cstdint>
#include <numeric>

#include "moatwalk/lattice.hpp"

namespace moatwalk {

struct Vec3i {
    int64_t x = 0;
    int64_t y = 0;
    int64_t z = 0;

    friend bool operator==(const Vec3i&, const Vec3i&) = default;
    Vec3i operator-() const { return {-x, -y, -z}; }
};

inline int64_t dot(const Vec3i& u, const Vec3i& v) {
    return u.x * v.x + u.y * v.y + u.z * v.z;
}

inline int64_t dot(const Vec3i& u, const lattice::LatticePoint3& p) {
    return u.x * p.a + u.y * p.b + u.z * p.c;
}

inline Vec3i cross(const Vec3i& u, const Vec3i& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z,
            u.x * v.y - u.y * v.x};
}

inline Vec3i as_vec(const lattice::LatticePoint3& p) {
    return {p.a, p.b, p.c};
}

/// Divides out the gcd of the components; zero vector stays zero.
inline Vec3i primitive(Vec3i v) {
    uint64_t g = std::gcd(std::gcd(uint64_t(v.x < 0 ? -v.x : v.x),
                                   uint64_t(v.y < 0 ? -v.y : v.y)),
                          uint64_t(v.z < 0 ? -v.z : v.z));
    if (g > 1) {
        v.x /= int64_t(g);
        v.y /= int64_t(g);
        v.z /= int64_t(g);
    }
    return v;
}

/// Canonical sign for a plane normal: the non-positive side (the side the walk
/// searches) must contain the +x direction, with (1,1,0) and then +z breaking
/// perpendicular ties.
inline Vec3i orient_normal(Vec3i n) {
    int64_t s = n.x;
    if (s == 0) s = n.x + n.y;  // dot with (1,1,0)
    if (s == 0) s = n.z;
    if (s > 0) return -n;
    return n;
}

/// Plane through the origin bounding one side of the search region.
struct GuidePlane {
    Vec3i normal;        // oriented; the walk region is dot(normal, p) <= 0
    uint32_t index = 0;  // position in the Q_0, Q_1, ... sequence

    int64_t side(const lattice::LatticePoint3& p) const { return dot(normal, p); }
    friend bool operator==(const GuidePlane&, const GuidePlane&) = default;

    /// Q_0: the plane x = y, oriented so the a >= b half-space is searched.
    static GuidePlane q0() { return GuidePlane{{-1, 1, 0}, 0}; }
};

/// In-plane walk direction: orthogonal to the plane normal and to the z-axis,
/// sign-normalized so the first nonzero component is positive; +x when the
/// normal is parallel to z.
inline Vec3i forward_direction(const GuidePlane& plane) {
    Vec3i f = cross(plane.normal, Vec3i{0, 0, 1});
    if (f.x == 0 && f.y == 0 && f.z == 0) return {1, 0, 0};
    f = primitive(f);
    int64_t lead = f.x != 0 ? f.x : (f.y != 0 ? f.y : f.z);
    if (lead < 0) return -f;
    return f;
}

}  // namespace moatwalk
