#include "heis/ccmetric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <limits>
#include <queue>
#include <utility>

namespace heis {
namespace {

constexpr double pi = std::numbers::pi;

// 2u − sin 2u, accurate for small u.
double excess_of_sine(double u) {
    if (u < 0.05) {
        const double x = 2.0 * u;
        const double x2 = x * x;
        // x³/3! − x⁵/5! + x⁷/7! − x⁹/9! + x¹¹/11!
        double term = x * x2 / 6.0;
        double sum = term;
        for (int k = 2; k <= 5; ++k) {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        return sum;
    }
    return 2.0 * u - std::sin(2.0 * u);
}

// Enclosed area per unit squared chord, as a function of the half-angle u ∈ (0, π/2].
double ratio_near(double u) {
    const double s = std::sin(u);
    return excess_of_sine(u) / (8.0 * s * s);
}

double ratio_near_deriv(double u) {
    const double s = std::sin(u);
    return 0.5 - excess_of_sine(u) * std::cos(u) / (4.0 * s * s * s);
}

// Same ratio in terms of w = π − u ∈ (0, π/2]; accurate when the arc is nearly a circle.
double ratio_far(double w) {
    const double s = std::sin(w);
    return (2.0 * pi - 2.0 * w + std::sin(2.0 * w)) / (8.0 * s * s);
}

double ratio_far_deriv(double w) {
    const double s = std::sin(w);
    return -0.5 - (2.0 * pi - 2.0 * w + std::sin(2.0 * w)) * std::cos(w) / (4.0 * s * s * s);
}

// Root of f on [lo, hi] for monotone f with f(lo), f(hi) of opposite signs, refined by
// bisection to adjacent doubles and then polished with Newton steps that stay in bracket.
template <class F, class DF>
double bracketed_root(F f, DF df, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 0; it < 3; ++it) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double next = x - fx / d;
        if (!(next >= lo && next <= hi)) break;
        const double fn = f(next);
        if (std::abs(fn) >= std::abs(fx)) break;
        x = next;
        fx = fn;
    }
    return x;
}

struct HalfAngle {
    double u;          // half of the central angle
    double sin_u;      // sin u, computed in the accurate variable
    double cos_u;
    double ratio;      // enclosed area / chord²
};

HalfAngle solve_half_angle(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw NumericError("arc equation: invalid area ratio");
    if (mu <= pi / 8.0) {
        double lo = 0.5e-9;
        while (ratio_near(lo) > mu) {
            lo *= 0.5;
            if (lo < 1e-300) throw NumericError("arc equation: cannot bracket small angle");
        }
        const double u = bracketed_root([mu](double v) { return ratio_near(v) - mu; }, ratio_near_deriv, lo,
                                        pi / 2.0);
        return {u, std::sin(u), std::cos(u), ratio_near(u)};
    }
    double lo = 0.5e-9;
    while (ratio_far(lo) < mu) {
        lo *= 0.5;
        if (lo < 1e-300) throw NumericError("arc equation: cannot bracket near-circular arc");
    }
    const double w = bracketed_root([mu](double v) { return ratio_far(v) - mu; }, ratio_far_deriv, lo, pi / 2.0);
    return {pi - w, std::sin(w), -std::cos(w), ratio_far(w)};
}

bool is_chord(double chord, double area) { return std::abs(area) < 1e-14 * std::max(1.0, chord * chord); }
bool is_vertical(double chord, double area) { return chord < 1e-14 * std::max(1.0, std::sqrt(std::abs(area))); }

}  // namespace

ArcSolution solve_arc(double chord, double area) {
    chord = std::abs(chord);
    if (is_chord(chord, area)) return {0.0, chord, std::abs(area)};
    if (is_vertical(chord, area)) return {2.0 * pi, std::sqrt(4.0 * pi * std::abs(area)), 0.0};
    const double za = std::abs(area);
    const HalfAngle h = solve_half_angle(za / (chord * chord));
    return {2.0 * h.u, chord * h.u / h.sin_u, std::abs(chord * chord * h.ratio - za)};
}

double cc_distance(const HPoint& p, const HPoint& q) {
    const HPoint g = mul(inv(p), q);
    return solve_arc(std::hypot(g.a, g.b), central_part(g)).length;
}

Geodesic cc_geodesic(const HPoint& p, const HPoint& q, std::size_t n) {
    require(n >= 2, "geodesic needs at least 2 samples");
    const HPoint g = mul(inv(p), q);
    const Vec2 d = project(g);
    const double chord = norm(d);
    const double z = central_part(g);

    Geodesic out;
    out.samples.reserve(n);
    const double last = static_cast<double>(n - 1);

    if (is_chord(chord, z)) {
        out.length = chord;
        out.theta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / last;
            out.samples.push_back(mul(p, exp(TangentVec{t * d.x, t * d.y, 0.0})));
        }
        out.samples.back() = q;
        return out;
    }

    // Arc data in the frame of p: unit chord e, left normal nrm, radius r, center.
    const double sgn = z > 0.0 ? 1.0 : -1.0;
    Vec2 e{1.0, 0.0};
    double theta, radius, cos_u;
    if (is_vertical(chord, z)) {
        theta = 2.0 * pi;
        radius = std::sqrt(std::abs(z) / pi);
        cos_u = -1.0;
    } else {
        const HalfAngle h = solve_half_angle(std::abs(z) / (chord * chord));
        e = (1.0 / chord) * d;
        theta = 2.0 * h.u;
        radius = chord / (2.0 * h.sin_u);
        cos_u = h.cos_u;
    }
    const Vec2 nrm{-e.y, e.x};
    // Positive area means the loop (arc, then chord back) is counterclockwise, so the arc
    // bulges to the right of the chord and is traversed counterclockwise about its center.
    const Vec2 center = 0.5 * d + (sgn * radius * cos_u) * nrm;
    const Vec2 from_center = Vec2{0.0, 0.0} - center;
    const double alpha0 = std::atan2(from_center.y, from_center.x);

    out.theta = theta;
    out.length = radius * theta;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = theta * static_cast<double>(i) / last;
        const double alpha = alpha0 + sgn * phi;
        const Vec2 w = center + radius * Vec2{std::cos(alpha), std::sin(alpha)};
        const double swept = sgn * 0.5 * radius * radius * (phi - std::sin(phi));
        out.samples.push_back(mul(p, exp(TangentVec{w.x, w.y, swept})));
    }
    out.samples.front() = p;
    return out;
}

namespace {

struct Move {
    int m;
    int n;
    float weight;
};

std::vector<Move> lattice_moves(double eps) {
    std::vector<Move> moves;
    for (int m = -3; m <= 3; ++m) {
        for (int n = -3; n <= 3; ++n) {
            if (std::gcd(m, n) != 1) continue;
            moves.push_back({m, n, static_cast<float>(eps * std::hypot(m, n))});
        }
    }
    return moves;
}

constexpr float unreached = std::numeric_limits<float>::infinity();

}  // namespace

GridOracle::GridOracle(double eps, double radius, const Box& window)
    : eps_(eps), radius_(radius), max_edge_(eps * std::sqrt(10.0)), window_(window) {
    require(eps > 0.0, "grid step must be positive");
    require(radius > 0.0, "oracle radius must be positive");
    require(window.contains(identity), "oracle window must contain the identity");

    const double half_pitch = 0.5 * eps * eps;
    half_width_ = static_cast<std::int64_t>(std::floor(radius / eps));
    const std::int64_t w = 2 * half_width_ + 1;
    columns_.resize(static_cast<std::size_t>(w * w));

    // A state s with horizontal offset ℓ and central part z has d(e, s) ≥ √(4π|z|) − ℓ,
    // so only |z| ≤ (radius + ℓ)² / 4π can be within reach.
    std::size_t total = 0;
    for (std::int64_t i = -half_width_; i <= half_width_; ++i) {
        for (std::int64_t j = -half_width_; j <= half_width_; ++j) {
            Column& col = columns_[static_cast<std::size_t>((i + half_width_) * w + (j + half_width_))];
            col.offset = total;
            const double a = static_cast<double>(i) * eps;
            const double b = static_cast<double>(j) * eps;
            const double ell = std::hypot(a, b);
            if (ell > radius || a < window.a_lo || a > window.a_hi || b < window.b_lo || b > window.b_hi) continue;
            const double zmax = (radius + ell) * (radius + ell) / (4.0 * pi);
            const double c_lo = std::max(window.c_lo, 0.5 * a * b - zmax);
            const double c_hi = std::min(window.c_hi, 0.5 * a * b + zmax);
            if (c_lo > c_hi) continue;
            col.k_lo = static_cast<std::int64_t>(std::ceil(c_lo / half_pitch));
            const auto k_hi = static_cast<std::int64_t>(std::floor(c_hi / half_pitch));
            col.count = std::max<std::int64_t>(0, k_hi - col.k_lo + 1);
            total += static_cast<std::size_t>(col.count);
        }
    }
    dist_.assign(total, unreached);

    struct Entry {
        float d;
        std::int32_t i, j;
        std::int64_t k;
        bool operator>(const Entry& o) const { return d > o.d; }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    *lookup(0, 0, 0) = 0.0f;
    open.push({0.0f, 0, 0, 0});
    const auto moves = lattice_moves(eps);
    const auto limit = static_cast<float>(radius);
    while (!open.empty()) {
        const Entry cur = open.top();
        open.pop();
        if (cur.d > *lookup(cur.i, cur.j, cur.k)) continue;
        for (const Move& mv : moves) {
            const float nd = cur.d + mv.weight;
            if (nd > limit) continue;
            const std::int64_t i = cur.i + mv.m;
            const std::int64_t j = cur.j + mv.n;
            // c gains a·nε + (mε)(nε)/2, i.e. 2in + mn half-pitches.
            const std::int64_t k = cur.k + 2 * static_cast<std::int64_t>(cur.i) * mv.n + mv.m * mv.n;
            float* slot = lookup(i, j, k);
            if (slot == nullptr || nd >= *slot) continue;
            *slot = nd;
            open.push({nd, static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), k});
        }
    }
}

const float* GridOracle::lookup(std::int64_t i, std::int64_t j, std::int64_t k) const {
    if (i < -half_width_ || i > half_width_ || j < -half_width_ || j > half_width_) return nullptr;
    const std::int64_t w = 2 * half_width_ + 1;
    const Column& col = columns_[static_cast<std::size_t>((i + half_width_) * w + (j + half_width_))];
    const std::int64_t off = k - col.k_lo;
    if (off < 0 || off >= col.count) return nullptr;
    return &dist_[col.offset + static_cast<std::size_t>(off)];
}

float* GridOracle::lookup(std::int64_t i, std::int64_t j, std::int64_t k) {
    return const_cast<float*>(std::as_const(*this).lookup(i, j, k));
}

double GridOracle::distance(const HPoint& p, const HPoint& q) const {
    const HPoint g = mul(inv(p), q);
    if (!window_.contains(g)) throw PreconditionError("grid oracle: target outside the search window");
    const double half_pitch = 0.5 * eps_ * eps_;
    const auto ti = static_cast<std::int64_t>(std::llround(g.a / eps_));
    const auto tj = static_cast<std::int64_t>(std::llround(g.b / eps_));
    const auto tk = static_cast<std::int64_t>(std::llround(g.c / half_pitch));

    // Join over midpoints m: u = m⁻¹t in lattice units.
    const std::int64_t w = 2 * half_width_ + 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = -half_width_; i <= half_width_; ++i) {
        for (std::int64_t j = -half_width_; j <= half_width_; ++j) {
            const Column& col = columns_[static_cast<std::size_t>((i + half_width_) * w + (j + half_width_))];
            if (col.count == 0) continue;
            const std::int64_t ui = ti - i;
            const std::int64_t uj = tj - j;
            if (ui < -half_width_ || ui > half_width_ || uj < -half_width_ || uj > half_width_) continue;
            const Column& other = columns_[static_cast<std::size_t>((ui + half_width_) * w + (uj + half_width_))];
            if (other.count == 0) continue;
            const std::int64_t base = 2 * i * j + tk - 2 * i * tj;
            for (std::int64_t off = 0; off < col.count; ++off) {
                const float dm = dist_[col.offset + static_cast<std::size_t>(off)];
                if (dm == unreached) continue;
                const std::int64_t uk = base - (col.k_lo + off);
                const std::int64_t uo = uk - other.k_lo;
                if (uo < 0 || uo >= other.count) continue;
                const float du = dist_[other.offset + static_cast<std::size_t>(uo)];
                if (du == unreached) continue;
                best = std::min(best, static_cast<double>(dm) + static_cast<double>(du));
            }
        }
    }
    if (!(best <= reach())) throw NumericError("grid oracle: table radius too small for this pair");
    return best;
}

double grid_oracle_distance(const HPoint& p, const HPoint& q, double eps, const Box& window) {
    require(eps > 0.0, "grid step must be positive");
    const HPoint g = mul(inv(p), q);
    if (!window.contains(g)) throw PreconditionError("grid oracle: target outside the search window");
    const double ell = std::hypot(g.a, g.b);
    const double lower = std::max(ell, std::sqrt(4.0 * pi * std::abs(central_part(g))) - ell);
    double radius = 0.5 * lower + 4.0 * eps;
    for (int attempt = 0; attempt < 8; ++attempt) {
        GridOracle oracle(eps, radius, window);
        try {
            return oracle.distance(p, q);
        } catch (const NumericError&) {
            radius *= 1.25;
        }
    }
    throw NumericError("grid oracle: could not certify a distance");
}

}  // namespace heis
