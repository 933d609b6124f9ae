#include "heis/lines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heis/rng.hpp"

namespace heis {
namespace {

constexpr double pi = std::numbers::pi;

double reduce_angle(double angle) {
    double r = std::fmod(angle, pi);
    if (r < 0.0) r += pi;
    if (r >= pi) r = 0.0;
    return r;
}

// Height of the line over the point of its projection at parameter t.
double height_at(const Line& l, double t) { return l.point(t).c; }

}  // namespace

Vec2 Line::direction() const { return {std::cos(angle), std::sin(angle)}; }

HPoint Line::point(double t) const {
    const Vec2 u = direction();
    return mul(base, exp(TangentVec{t * u.x, t * u.y, 0.0}));
}

double Line::residual(const HPoint& q) const {
    const Vec2 off = project(q) - project(base);
    const double perp = std::abs(cross(direction(), off));
    const double gap = std::abs(q.c - plane_height(base, project(q)));
    return std::max(perp, gap);
}

Line line_from(const HPoint& base, double angle) {
    require(std::isfinite(base.a) && std::isfinite(base.b) && std::isfinite(base.c) && std::isfinite(angle),
            "line parameters must be finite");
    return {base, reduce_angle(angle)};
}

const char* to_string(PairTag tag) {
    switch (tag) {
        case PairTag::equal: return "equal";
        case PairTag::intersecting: return "intersecting";
        case PairTag::parallel_same_projection: return "parallel_same_projection";
        case PairTag::parallel_distinct_projection: return "parallel_distinct_projection";
        case PairTag::skew: return "skew";
    }
    return "unknown";
}

PairClass classify_pair(const Line& l1, const Line& l2, double tol) {
    const Vec2 u1 = l1.direction();
    const Vec2 u2 = l2.direction();
    const double s = cross(u1, u2);
    const Vec2 off = project(l2.base) - project(l1.base);
    if (std::abs(s) < tol) {
        if (std::abs(cross(u1, off)) >= tol) return {PairTag::parallel_distinct_projection, std::nullopt};
        // Same projected line: the height gap between the two lines is constant along it.
        const double gap = l2.base.c - plane_height(l1.base, project(l2.base));
        return {std::abs(gap) < tol ? PairTag::equal : PairTag::parallel_same_projection, std::nullopt};
    }
    // Projections cross at π(l1.base) + t·u1.
    const double t = cross(off, u2) / s;
    const HPoint on1 = l1.point(t);
    const double h2 = plane_height(l2.base, project(on1));
    if (std::abs(h2 - on1.c) < tol) return {PairTag::intersecting, on1};
    return {PairTag::skew, std::nullopt};
}

std::vector<Line> join_to_line(const HPoint& p, const Line& line) {
    require(!line.contains(p), "join_to_line: point lies on the line");
    // F(t) = c_{L(t)} − plane_height(p, π(L(t))) is affine in t.
    auto F = [&](double t) {
        const HPoint q = line.point(t);
        return q.c - plane_height(p, project(q));
    };
    const double slope = 0.5 * cross(project(line.base) - project(p), line.direction());
    if (std::abs(slope) < 1e-14) return {};
    const double t = -F(0.0) / slope;
    const Vec2 dir = project(line.point(t)) - project(p);
    if (norm(dir) < 1e-14) return {};
    return {line_from(p, std::atan2(dir.y, dir.x))};
}

Vec2 Hyperbola::to_axes(Vec2 w) const {
    const Vec2 d = w - origin;
    return {m00 * d.x + m01 * d.y, m10 * d.x + m11 * d.y};
}

Vec2 Hyperbola::from_axes(Vec2 xy) const {
    const double dt = det();
    return origin + Vec2{(m11 * xy.x - m01 * xy.y) / dt, (-m10 * xy.x + m00 * xy.y) / dt};
}

std::pair<Vec2, Vec2> Hyperbola::tangent_segment(double x0) const {
    require(x0 != 0.0, "tangent abscissa must be nonzero");
    return {from_axes({2.0 * x0, 0.0}), from_axes({0.0, 2.0 * C / x0})};
}

double Hyperbola::tangency_residual(const Line& line) const {
    // Intersect the line (in axis coordinates) with both axes.
    const Vec2 p0 = to_axes(project(line.base));
    const Vec2 p1 = to_axes(project(line.base) + line.direction());
    const Vec2 d = p1 - p0;
    if (d.x == 0.0 || d.y == 0.0) return std::numeric_limits<double>::infinity();
    const double x_int = p0.x - p0.y * d.x / d.y;
    const double y_int = p0.y - p0.x * d.y / d.x;
    return std::abs(0.25 * x_int * y_int - C);
}

Hyperbola hyperbola_of_skew(const Line& l1, const Line& l2) {
    if (classify_pair(l1, l2).tag != PairTag::skew) throw PreconditionError("hyperbola_of_skew: lines are not skew");
    const Vec2 u1 = l1.direction();
    const Vec2 u2 = l2.direction();
    const double s = cross(u1, u2);
    const Vec2 off = project(l2.base) - project(l1.base);
    const double t = cross(off, u2) / s;
    const HPoint x1 = l1.point(t);
    const double area = plane_height(l2.base, project(x1)) - x1.c;  // x2 = x1·exp(A Z)

    // B = [u1 u2]/α with α = √|s| has det ±1; M = B⁻¹.
    const double alpha = std::sqrt(std::abs(s));
    const double b00 = u1.x / alpha, b01 = u2.x / alpha, b10 = u1.y / alpha, b11 = u2.y / alpha;
    const double db = b00 * b11 - b01 * b10;
    Hyperbola h;
    h.m00 = b11 / db;
    h.m01 = -b01 / db;
    h.m10 = -b10 / db;
    h.m11 = b00 / db;
    h.origin = project(x1);
    // A tangent to xy = C cuts off a triangle of axis-area 2C; M scales signed area by det.
    h.C = 0.5 * area * h.det();
    return h;
}

std::optional<std::pair<double, double>> clip_to_window(const Line& line, const Box& window) {
    const Vec2 p = project(line.base);
    const Vec2 u = line.direction();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double pos, double dir, double a, double b) {
        if (std::abs(dir) < 1e-300) return pos >= a && pos <= b;
        double t0 = (a - pos) / dir;
        double t1 = (b - pos) / dir;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return true;
    };
    if (!clip(p.x, u.x, window.a_lo, window.a_hi)) return std::nullopt;
    if (!clip(p.y, u.y, window.b_lo, window.b_hi)) return std::nullopt;
    if (!(lo < hi)) return std::nullopt;
    return std::pair{lo, hi};
}

namespace {

bool meets_window(const Line& line, const Box& window) {
    const auto span = clip_to_window(line, window);
    if (!span) return false;
    // The height along the line is quadratic in t; compare its range on the span.
    const auto [t0, t1] = *span;
    double lo = std::min(height_at(line, t0), height_at(line, t1));
    double hi = std::max(height_at(line, t0), height_at(line, t1));
    const Vec2 u = line.direction();
    const double quad = 0.5 * u.x * u.y;
    if (quad != 0.0) {
        const double lin = line.base.a * u.y;
        const double tv = -lin / (2.0 * quad);
        if (tv > t0 && tv < t1) {
            const double hv = height_at(line, tv);
            lo = std::min(lo, hv);
            hi = std::max(hi, hv);
        }
    }
    return hi >= window.c_lo && lo <= window.c_hi;
}

}  // namespace

std::vector<Line> sample_lines(const Box& window, std::size_t n, std::uint64_t seed, unsigned threads) {
    require(n >= 1, "sample_lines needs n >= 1");
    if (window.empty()) throw PreconditionError("sample_lines: empty window");
    const Vec2 center{0.5 * (window.a_lo + window.a_hi), 0.5 * (window.b_lo + window.b_hi)};
    const double reach = 0.5 * std::hypot(window.a_hi - window.a_lo, window.b_hi - window.b_lo);
    std::vector<Line> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        const double phi = stream.uniform(0.0, pi);
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const double offset = stream.uniform(-reach, reach);
            const double height = stream.uniform(window.c_lo, window.c_hi);
            const Vec2 foot = center + offset * Vec2{-std::sin(phi), std::cos(phi)};
            const Line line{{foot.x, foot.y, height}, phi};
            if (meets_window(line, window)) {
                out[i] = line;
                return;
            }
        }
        throw NumericError("sample_lines: rejection sampling did not terminate");
    });
    return out;
}

}  // namespace heis
