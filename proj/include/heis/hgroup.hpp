#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "heis/errors.hpp"

namespace heis {

/// Point of the 3-dimensional Heisenberg group in matrix coordinates
///
///     | 1 a c |
///     | 0 1 b |
///     | 0 0 1 |
///
/// so that (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b').
struct HPoint {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    friend bool operator==(const HPoint&, const HPoint&) = default;
};

/// Planar point; the image of the abelianization map.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
    friend Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
    friend Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
    friend Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
};

inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Vec2 p, Vec2 q) { return p.x * q.y - p.y * q.x; }
inline double norm(Vec2 p) { return std::hypot(p.x, p.y); }

/// Element x·X + y·Y + z·Z of the Lie algebra, with [X,Y] = Z.
struct TangentVec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const TangentVec&, const TangentVec&) = default;
};

/// Open polygonal path in the plane; at least two vertices.
class Polyline2D {
public:
    explicit Polyline2D(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool closed() const { return vertices_.front() == vertices_.back(); }

private:
    std::vector<Vec2> vertices_;
};

inline constexpr HPoint identity{};

/// Axis-aligned box in (a,b,c) coordinates.
struct Box {
    double a_lo = 0.0, a_hi = 0.0;
    double b_lo = 0.0, b_hi = 0.0;
    double c_lo = 0.0, c_hi = 0.0;

    bool empty() const { return !(a_lo < a_hi && b_lo < b_hi && c_lo < c_hi); }
    bool contains(const HPoint& p) const {
        return p.a >= a_lo && p.a <= a_hi && p.b >= b_lo && p.b <= b_hi && p.c >= c_lo && p.c <= c_hi;
    }
    double volume() const { return (a_hi - a_lo) * (b_hi - b_lo) * (c_hi - c_lo); }
    static Box cube(double half) { return {-half, half, -half, half, -half, half}; }
};

inline Vec2 project(const HPoint& p) { return {p.a, p.b}; }

inline HPoint mul(const HPoint& p, const HPoint& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c + p.a * q.b};
}

inline HPoint inv(const HPoint& p) { return {-p.a, -p.b, p.a * p.b - p.c}; }

inline HPoint exp(const TangentVec& v) { return {v.x, v.y, v.z + 0.5 * v.x * v.y}; }

inline TangentVec log(const HPoint& p) { return {p.a, p.b, p.c - 0.5 * p.a * p.b}; }

/// Vertical (central) coordinate of p in exponential coordinates. For p = inv(x)·y
/// this is the signed area swept between a horizontal path from x to y and its chord.
inline double central_part(const HPoint& p) { return p.c - 0.5 * p.a * p.b; }

/// The Carnot dilation s_λ: scales degree-1 coordinates by λ and c by λ².
HPoint dilate(const HPoint& p, double lambda);

/// Height over w of the horizontal plane P_x centered at x, i.e. the union of all lines
/// through x. A point y lies on P_x exactly when y.c == plane_height(x, project(y)).
inline double plane_height(const HPoint& x, Vec2 w) {
    const double du = w.x - x.a;
    const double dv = w.y - x.b;
    return x.c + 0.5 * du * dv + x.a * dv;
}

/// Signed area of a closed polygon (shoelace), counterclockwise positive. The closing
/// edge back to the first vertex is implied.
double shoelace_area(const std::vector<Vec2>& vertices);

struct Lift {
    HPoint endpoint;
    std::vector<double> heights;  ///< c-coordinate at each vertex
};

/// Horizontal lift of a planar polyline starting at `start`. Each segment is a
/// horizontal line segment, so vertex i+1 = vertex i · exp(Δx, Δy, 0). π(start) must match
/// the first vertex up to rounding (1e-12 relative).
Lift lift_polyline(const HPoint& start, const Polyline2D& path);

}  // namespace heis
