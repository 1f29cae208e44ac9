#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace sneakbench {

// Ground plane is spanned by x and z; y is height.
struct Vec2 {
    double x = 0.0;
    double z = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
    Vec2 operator*(double s) const { return {x * s, z * s}; }
    double dot(const Vec2& o) const { return x * o.x + z * o.z; }
    double norm() const { return std::hypot(x, z); }
    double dist(const Vec2& o) const { return (*this - o).norm(); }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, z / n} : Vec2{};
    }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 ground() const { return {x, z}; }
};

// Axis-aligned rectangle on the ground plane.
struct Rect {
    Vec2 min{};
    Vec2 max{};

    bool valid() const { return min.x < max.x && min.z < max.z; }
    double area() const { return (max.x - min.x) * (max.z - min.z); }
    bool contains(const Vec2& p) const {
        return p.x >= min.x && p.x <= max.x && p.z >= min.z && p.z <= max.z;
    }
    Vec2 clamp(const Vec2& p) const {
        return {std::clamp(p.x, min.x, max.x), std::clamp(p.z, min.z, max.z)};
    }
    Rect shifted(const Vec2& d) const { return {min + d, max + d}; }
};

inline double wrap_angle(double a) {
    constexpr double tau = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, tau);
    if (a < 0.0) a += tau;
    return a - std::numbers::pi;
}

// Absolute angular difference in [0, pi].
inline double angle_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

inline double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

// Parameter interval of segment a->b inside the rectangle (slab clipping),
// or nullopt when the segment misses it entirely.
inline std::optional<std::pair<double, double>> segment_rect_clip(const Vec2& a, const Vec2& b,
                                                                  const Rect& r) {
    const Vec2 d = b - a;
    double t0 = 0.0;
    double t1 = 1.0;
    const double lo[2] = {r.min.x, r.min.z};
    const double hi[2] = {r.max.x, r.max.z};
    const double p[2] = {a.x, a.z};
    const double v[2] = {d.x, d.z};
    for (int axis = 0; axis < 2; ++axis) {
        if (v[axis] == 0.0) {
            if (p[axis] < lo[axis] || p[axis] > hi[axis]) return std::nullopt;
            continue;
        }
        double ta = (lo[axis] - p[axis]) / v[axis];
        double tb = (hi[axis] - p[axis]) / v[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

inline bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r) {
    return segment_rect_clip(a, b, r).has_value();
}

// Intersection point of segments a1->a2 and b1->b2, if they cross.
inline std::optional<Vec2> segment_intersection(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                                                const Vec2& b2) {
    const Vec2 r = a2 - a1;
    const Vec2 s = b2 - b1;
    const double denom = r.x * s.z - r.z * s.x;
    if (denom == 0.0) return std::nullopt;  // parallel or collinear
    const Vec2 qp = b1 - a1;
    const double t = (qp.x * s.z - qp.z * s.x) / denom;
    const double u = (qp.x * r.z - qp.z * r.x) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return a1 + r * t;
}

}  // namespace sneakbench
