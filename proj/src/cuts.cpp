#include "heis/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heis/rng.hpp"

namespace heis {
namespace {

constexpr double pi = std::numbers::pi;

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss–Legendre rule on [−1, 1] by Newton iteration on P_n.
Quadrature gauss_legendre(int n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

template <class F>
double integrate(const Quadrature& q, F f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) sum += q.weights[i] * f(mid + half * q.nodes[i]);
    return half * sum;
}

double wrap_angle(double a) {
    double r = std::fmod(a, pi);
    return r < 0.0 ? r + pi : r;
}

CutValue finite_distance(const FiniteAtomic& m, const HPoint& x, const HPoint& y) {
    CutValue out;
    for (const auto& [e, w] : m.atoms) {
        const Separation s = elementary_separated(e, x, y);
        out.boundary = out.boundary || s.boundary;
        if (s.separated) out.d += w;
    }
    return out;
}

CutValue vertical_invariant_distance(const VerticalInvariant& m, const HPoint& x, const HPoint& y) {
    const Vec2 chord = project(y) - project(x);
    const double len = norm(chord);
    if (len == 0.0) return {};
    const double xi = wrap_angle(std::atan2(chord.y, chord.x));
    double profile = 0.0;
    for (const auto& [v, mass] : m.atoms) profile += mass * std::abs(std::sin(xi - v));
    if (m.density) {
        const auto rho = make_angle_density(*m.density);
        const Quadrature q = gauss_legendre(m.quadrature_order);
        auto f = [&](double v) { return rho(v) * std::abs(std::sin(xi - v)); };
        // |sin(ξ − v)| has its kink at v = ξ; integrate the two smooth pieces separately.
        profile += integrate(q, f, 0.0, xi) + integrate(q, f, xi, pi);
    }
    return {len * profile, 0.0, false};
}

enum class PairKind { horizontal, vertical };

PairKind classify_for_ac(const HPoint& x, const HPoint& y) {
    if (norm(project(y) - project(x)) < 1e-14) return PairKind::vertical;
    if (is_horizontal_pair(x, y)) return PairKind::horizontal;
    throw UnsupportedPair("ac_horizontal cut distance needs a horizontal or vertical pair");
}

// Stratified (in c) uniform Monte Carlo of ∫_window u·1[pred] dλ.
template <class Pred>
CutValue stratified_mc(const ACHorizontal& m, Pred pred, unsigned threads) {
    require(m.strata >= 1 && m.samples >= m.strata, "ac_horizontal needs samples >= strata >= 1");
    const auto u = make_point_density(m.density);
    const std::size_t per = m.samples / m.strata;
    const double dc = (m.window.c_hi - m.window.c_lo) / static_cast<double>(m.strata);
    const double vol = (m.window.a_hi - m.window.a_lo) * (m.window.b_hi - m.window.b_lo) * dc;
    std::vector<double> mean(m.strata), var(m.strata);
    parallel_for(m.strata, threads, [&](std::size_t s) {
        rng::Stream stream(m.seed, s);
        const double c0 = m.window.c_lo + dc * static_cast<double>(s);
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < per; ++i) {
            const HPoint y{stream.uniform(m.window.a_lo, m.window.a_hi), stream.uniform(m.window.b_lo, m.window.b_hi),
                           stream.uniform(c0, c0 + dc)};
            const double f = pred(y) ? u(y) : 0.0;
            sum += f;
            sum2 += f * f;
        }
        const double n = static_cast<double>(per);
        mean[s] = sum / n;
        var[s] = per > 1 ? std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0)) / n : 0.0;
    });
    CutValue out;
    double v = 0.0;
    for (std::size_t s = 0; s < m.strata; ++s) {
        out.d += vol * mean[s];
        v += vol * vol * var[s];
    }
    out.std_error = std::sqrt(v);
    return out;
}

CutValue ac_distance(const ACHorizontal& m, const HPoint& x, const HPoint& y, unsigned threads) {
    if (x == y) return {};
    switch (classify_for_ac(x, y)) {
        case PairKind::horizontal:
            return stratified_mc(m, [&](const HPoint& w) { return wedge_contains(w, x, y); }, threads);
        case PairKind::vertical: {
            // P_w meets the fiber over π(x) at a single height; the cut separates x and y
            // exactly when that height lies strictly between them.
            const double lo = std::min(x.c, y.c);
            const double hi = std::max(x.c, y.c);
            const Vec2 foot = project(x);
            return stratified_mc(
                m,
                [&](const HPoint& w) {
                    const double h = plane_height(w, foot);
                    return h > lo && h < hi;
                },
                threads);
        }
    }
    return {};
}

}  // namespace

double HalfSpace::value(const HPoint& y) const {
    if (const auto* v = std::get_if<VerticalHalfSpace>(&kind)) {
        return v->side * (y.a * std::cos(v->angle) + y.b * std::sin(v->angle) - v->offset);
    }
    const auto& h = std::get<HorizontalHalfSpace>(kind);
    return h.side * (y.c - plane_height(h.center, project(y)));
}

HalfSpace HalfSpace::complement() const {
    HalfSpace out = *this;
    std::visit([](auto& k) { k.side = -k.side; }, out.kind);
    return out;
}

HalfSpace vertical_halfspace(double angle, double offset, int side) {
    require(side == 1 || side == -1, "half-space side must be +1 or -1");
    return {VerticalHalfSpace{angle, offset, side}};
}

HalfSpace horizontal_halfspace(const HPoint& center, int side) {
    require(side == 1 || side == -1, "half-space side must be +1 or -1");
    return {HorizontalHalfSpace{center, side}};
}

Separation elementary_separated(const HalfSpace& e, const HPoint& x, const HPoint& y, double tol) {
    const double vx = e.value(x);
    const double vy = e.value(y);
    if (std::abs(vx) < tol || std::abs(vy) < tol) return {false, true};
    return {(vx > 0.0) != (vy > 0.0), false};
}

double DensitySpec::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::function<double(const HPoint&)> make_point_density(const DensitySpec& spec) {
    if (spec.name == "constant") {
        const double v = spec.param("value", 1.0);
        return [v](const HPoint&) { return v; };
    }
    if (spec.name == "gaussian") {
        const double amp = spec.param("amplitude", 1.0);
        const double sigma = spec.param("sigma", 1.0);
        require(sigma > 0.0, "gaussian density needs sigma > 0");
        const HPoint c{spec.param("center_a", 0.0), spec.param("center_b", 0.0), spec.param("center_c", 0.0)};
        return [amp, sigma, c](const HPoint& y) {
            const double r2 = (y.a - c.a) * (y.a - c.a) + (y.b - c.b) * (y.b - c.b) + (y.c - c.c) * (y.c - c.c);
            return amp * std::exp(-0.5 * r2 / (sigma * sigma));
        };
    }
    throw PreconditionError("unknown point density: " + spec.name);
}

std::function<double(double)> make_angle_density(const DensitySpec& spec) {
    if (spec.name == "uniform") {
        const double m = spec.param("mass", 1.0);
        return [m](double) { return m / pi; };
    }
    if (spec.name == "cosine") {
        const double m = spec.param("mass", 1.0);
        const double k = spec.param("k", 1.0);
        const double amp = spec.param("amplitude", 0.5);
        return [m, k, amp](double v) { return m / pi * (1.0 + amp * std::cos(2.0 * k * v)); };
    }
    if (spec.name == "harmonic") {
        const double k = spec.param("k", 1.0);
        return [k](double v) { return std::cos(2.0 * k * v); };
    }
    throw PreconditionError("unknown angle density: " + spec.name);
}

void validate(const CutMeasure& measure) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FiniteAtomic>) {
                for (const auto& [e, w] : m.atoms) {
                    require(std::isfinite(w), "cut weight must be finite");
                    require(m.is_signed || w >= 0.0, "negative cut weight in an unsigned measure");
                    std::visit([](const auto& k) { require(k.side == 1 || k.side == -1, "side must be +1 or -1"); },
                               e.kind);
                }
            } else if constexpr (std::is_same_v<T, VerticalInvariant>) {
                for (const auto& [v, mass] : m.atoms) {
                    require(std::isfinite(v) && std::isfinite(mass), "angle atom must be finite");
                    require(m.is_signed || mass >= 0.0, "negative angle mass in an unsigned measure");
                }
                require(m.quadrature_order >= 1 && m.quadrature_order <= 1024, "quadrature order out of range");
                if (m.density) {
                    const auto rho = make_angle_density(*m.density);
                    if (!m.is_signed) {
                        for (int i = 0; i < 256; ++i) {
                            require(rho(pi * (i + 0.5) / 256.0) >= 0.0, "negative angle density in an unsigned measure");
                        }
                    }
                }
            } else {
                require(!m.window.empty(), "ac_horizontal needs a nonempty window");
                require(m.strata >= 1 && m.samples >= m.strata, "ac_horizontal needs samples >= strata >= 1");
                make_point_density(m.density);
            }
        },
        measure);
}

double lipschitz_bound(const CutMeasure& measure) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (const auto* f = std::get_if<FiniteAtomic>(&measure)) return f->atoms.empty() ? 0.0 : inf;
    if (const auto* v = std::get_if<VerticalInvariant>(&measure)) {
        double total = 0.0;
        for (const auto& [angle, mass] : v->atoms) total += std::abs(mass);
        if (v->density) {
            const auto rho = make_angle_density(*v->density);
            const Quadrature q = gauss_legendre(v->quadrature_order);
            total += integrate(q, [&](double a) { return std::abs(rho(a)); }, 0.0, pi);
        }
        return total;
    }
    return inf;
}

bool is_horizontal_pair(const HPoint& x, const HPoint& y, double tol) {
    const double scale = std::max({1.0, std::abs(x.c), std::abs(y.c)});
    return std::abs(y.c - plane_height(x, project(y))) <= tol * scale;
}

CutValue cut_distance(const CutMeasure& measure, const HPoint& x, const HPoint& y, unsigned threads) {
    if (const auto* f = std::get_if<FiniteAtomic>(&measure)) return finite_distance(*f, x, y);
    if (const auto* v = std::get_if<VerticalInvariant>(&measure)) return vertical_invariant_distance(*v, x, y);
    return ac_distance(std::get<ACHorizontal>(measure), x, y, threads);
}

bool wedge_contains(const HPoint& y, const HPoint& x1, const HPoint& x2) {
    if (x1 == x2 || !is_horizontal_pair(x1, x2)) {
        throw PreconditionError("wedge_contains needs a horizontal pair of distinct points");
    }
    const Vec2 w = project(y);
    const double h0 = plane_height(x1, w) - y.c;
    const double h1 = plane_height(x2, w) - y.c;
    return (h0 < 0.0 && h1 > 0.0) || (h0 > 0.0 && h1 < 0.0);
}

CutValue strip_mass(const ACHorizontal& measure, double angle, double offset, double width, unsigned threads) {
    require(width > 0.0, "strip width must be positive");
    const Vec2 n{std::cos(angle), std::sin(angle)};
    return stratified_mc(
        measure, [&](const HPoint& y) { return std::abs(dot(project(y), n) - offset) < 0.5 * width; }, threads);
}

double sinabs_fourier(int k) {
    require(k >= 0, "Fourier index must be nonnegative");
    if (k == 0) return 2.0 / pi;
    const double kk = static_cast<double>(k);
    return 4.0 / (pi * (1.0 - 4.0 * kk * kk));
}

double laguerre(int k, double alpha, double x) {
    require(k >= 0, "Laguerre degree must be nonnegative");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int j = 1; j < k; ++j) {
        const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

std::complex<double> eval_phi(double lambda, int k, int eps, Vec2 z, double t) {
    require(lambda > 0.0, "phi needs lambda > 0");
    require(k >= 0, "phi needs k >= 0");
    require(eps == 1 || eps == -1, "phi needs eps = +1 or -1");
    const double m = 1.0 + 2.0 * k;
    const double r2 = dot(z, z);
    const double amp = 4.0 * pi * pi * lambda / (m * m) * std::exp(-lambda * r2 / (4.0 * m)) *
                       laguerre(k, 0.0, lambda * r2 / (2.0 * m));
    return std::polar(1.0, -eps * lambda * t / m) * amp;
}

}  // namespace heis
