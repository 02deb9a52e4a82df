#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace wsndeploy {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
    constexpr Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Point2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
    friend constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
    friend constexpr Point2 operator*(Point2 a, double s) { return a *= s; }
    friend constexpr Point2 operator*(double s, Point2 a) { return a *= s; }
    friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

inline constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double squared_norm(const Point2& a) { return dot(a, a); }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline constexpr double squared_distance(const Point2& a, const Point2& b) { return squared_norm(a - b); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

struct BoundingBox {
    Point2 lo;
    Point2 hi;
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

/// Simple polygon given by its vertices in order (either orientation).
using Polygon = std::vector<Point2>;

inline double signed_area(std::span<const Point2> poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

inline double area(std::span<const Point2> poly) { return std::abs(signed_area(poly)); }

inline BoundingBox bounding_box(std::span<const Point2> poly) {
    BoundingBox box{poly.front(), poly.front()};
    for (const Point2& p : poly) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

/// True when `p` lies inside the convex polygon or on its boundary.
/// `tol` is an absolute tolerance on the edge cross products.
inline bool contains(std::span<const Point2> convex, const Point2& p, double tol = 0.0) {
    const std::size_t n = convex.size();
    const double orient = signed_area(convex) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = convex[i];
        const Point2& b = convex[(i + 1) % n];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (orient * cross < -tol) {
            return false;
        }
    }
    return true;
}

/// Convexity check that also rejects polygons with fewer than three
/// non-collinear vertices.
inline bool is_convex(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) {
        return false;
    }
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        const Point2& c = poly[(i + 2) % n];
        const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if (cross == 0.0) {
            continue;
        }
        const int s = cross > 0.0 ? 1 : -1;
        if (sign == 0) {
            sign = s;
        } else if (s != sign) {
            return false;
        }
    }
    return sign != 0 && area(poly) > 0.0;
}

} // namespace wsndeploy
