#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "heis/hgroup.hpp"
#include "heis/parallel.hpp"

namespace heis {

/// Horizontal line: the left translate base·{exp(t cos φ, t sin φ, 0)} of a horizontal
/// one-parameter subgroup. The angle is kept in [0, π).
struct Line {
    HPoint base;
    double angle = 0.0;

    Vec2 direction() const;
    HPoint point(double t) const;
    /// Larger of the projection's distance from π(L) and the height gap over π(q).
    double residual(const HPoint& q) const;
    bool contains(const HPoint& q, double tol = 1e-10) const { return residual(q) < tol; }
};

Line line_from(const HPoint& base, double angle);

enum class PairTag { equal, intersecting, parallel_same_projection, parallel_distinct_projection, skew };

const char* to_string(PairTag tag);

struct PairClass {
    PairTag tag;
    std::optional<HPoint> witness;  ///< set for intersecting pairs
};

PairClass classify_pair(const Line& l1, const Line& l2, double tol = 1e-10);

/// Every line through p that meets L. The condition c_{L(t)} = plane_height(p, π(L(t)))
/// is affine in t (the quadratic terms cancel), so there is one line when π(p) ∉ π(L) and
/// none otherwise. Requires p ∉ L.
std::vector<Line> join_to_line(const HPoint& p, const Line& line);

/// Normal form of the hyperbola attached to a skew pair.
///
/// `to_axes` is the area-preserving affine map w ↦ M(w − origin) sending π(L1) to the
/// x-axis and π(L2) to the y-axis; in those coordinates the hyperbola is xy = C. The
/// horizontal lift of a segment from π(L1) to π(L2) joins the two lines exactly when the
/// segment is tangent to it.
struct Hyperbola {
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
    Vec2 origin;
    double C = 0.0;

    double det() const { return m00 * m11 - m01 * m10; }
    Vec2 to_axes(Vec2 w) const;
    Vec2 from_axes(Vec2 xy) const;
    /// Planar endpoints on π(L1) and π(L2) of the tangent at axis abscissa x0 ≠ 0.
    std::pair<Vec2, Vec2> tangent_segment(double x0) const;
    /// |XY/4 − C| for the line's axis intercepts X, Y; zero exactly for tangent lines.
    double tangency_residual(const Line& line) const;
};

/// Requires classify_pair(l1, l2).tag == skew.
Hyperbola hyperbola_of_skew(const Line& l1, const Line& l2);

/// Parameter interval on which π(line) lies in the window's planar rectangle.
std::optional<std::pair<double, double>> clip_to_window(const Line& line, const Box& window);

/// n i.i.d. lines: angle uniform on [0, π), then signed offset of π(L) from the window
/// center (up to the half-diagonal) and height over the foot point (over the c-range), both
/// uniform and redrawn until the line meets the window. Drawing the angle first keeps its
/// marginal uniform. Line i depends only on (seed, i).
std::vector<Line> sample_lines(const Box& window, std::size_t n, std::uint64_t seed,
                               unsigned threads = default_threads());

}  // namespace heis
