#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/ccmetric.hpp"
#include "heis/cuts.hpp"
#include "heis/errors.hpp"
#include "heis/lines.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;

HPoint random_point(rng::Stream& s, double r = 2.0) { return {s.uniform(-r, r), s.uniform(-r, r), s.uniform(-r, r)}; }

// 10-point Gauss–Legendre rule on [-1, 1].
constexpr double gl_x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                            0.9739065285171717};
constexpr double gl_w[5] = {0.2955242247147529, 0.2692667193099964, 0.2190863625159820, 0.1494513491505806,
                            0.0666713443086881};

template <class F>
double integrate(F&& f, double lo, double hi, int panels) {
    double sum = 0.0;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (int k = 0; k < 5; ++k) {
            sum += gl_w[k] * (f(mid - 0.5 * h * gl_x[k]) + f(mid + 0.5 * h * gl_x[k]));
        }
    }
    return 0.5 * h * sum;
}

// Coefficient of cos 2kθ in |sin θ|, from the integral of 2·sin θ·cos 2kθ / π.
double fourier_by_quadrature(int k) {
    const double norm = k == 0 ? 1.0 / pi : 2.0 / pi;
    return norm * integrate([k](double t) { return std::sin(t) * std::cos(2.0 * k * t); }, 0.0, pi, 400);
}

// Volume of {w ∈ window : c_w strictly between lo(π(w)) and hi(π(w))}, midpoint rule in (a, b).
template <class Bounds>
double wedge_volume(const Box& win, Bounds&& bounds, int n) {
    const double da = (win.a_hi - win.a_lo) / n, db = (win.b_hi - win.b_lo) / n;
    double vol = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 w{win.a_lo + (i + 0.5) * da, win.b_lo + (j + 0.5) * db};
            auto [lo, hi] = bounds(w);
            if (lo > hi) std::swap(lo, hi);
            vol += std::max(0.0, std::min(hi, win.c_hi) - std::max(lo, win.c_lo));
        }
    }
    return vol * da * db;
}

ACHorizontal unit_density(const Box& window, std::size_t samples, std::uint64_t seed) {
    ACHorizontal m;
    m.density = {"constant", {{"value", 1.0}}};
    m.window = window;
    m.samples = samples;
    m.strata = 64;
    m.seed = seed;
    return m;
}

}  // namespace

TEST_CASE("elementary cut metrics") {
    const HalfSpace a_pos = vertical_halfspace(0, 0);
    CHECK(elementary_separated(a_pos, {-1, 0, 0}, {1, 0, 0}).separated);
    CHECK(!elementary_separated(a_pos, {1, 5, 0}, {1, 5, 0}).separated);
    const HalfSpace up = horizontal_halfspace(identity, 1);
    CHECK(elementary_separated(up, {0, 0, 1}, {0, 0, -1}).separated);
    CHECK(up.contains({0, 0, 1}));
    CHECK(!up.contains({0, 0, -1}));
    const Separation b = elementary_separated(a_pos, {0, 3, 0}, {1, 0, 0});
    CHECK(b.boundary);
    CHECK(!b.separated);
    CHECK(a_pos.complement().contains({-1, 0, 0}));
    CHECK_THROWS_AS(vertical_halfspace(0, 0, 2), PreconditionError);

    rng::Stream s(41);
    for (int i = 0; i < 1000; ++i) {
        const HalfSpace h = s.uniform() < 0.5 ? vertical_halfspace(s.uniform(0, pi), s.uniform(-1, 1))
                                              : horizontal_halfspace(random_point(s));
        const HPoint x = random_point(s), y = random_point(s);
        CHECK(elementary_separated(h, x, y).separated == elementary_separated(h.complement(), x, y).separated);
        CHECK(h.contains(x) != h.complement().contains(x));
    }
}

TEST_CASE("finite atomic cut metrics") {
    const CutMeasure single = FiniteAtomic{{{vertical_halfspace(0, 0), 2.5}}};
    CHECK(cut_distance(single, {-1, 0, 0}, {1, 0, 0}).d == 2.5);
    CHECK(cut_distance(single, {1, 0, 0}, {2, 7, 3}).d == 0.0);
    CHECK(std::isinf(lipschitz_bound(single)));
    CHECK(lipschitz_bound(FiniteAtomic{}) == 0.0);
    CHECK_THROWS_AS(validate(CutMeasure{FiniteAtomic{{{vertical_halfspace(0, 0), -1.0}}}}), PreconditionError);
    CHECK_NOTHROW(validate(CutMeasure{FiniteAtomic{{{vertical_halfspace(0, 0), -1.0}}, true}}));

    rng::Stream s(42);
    for (int rep = 0; rep < 50; ++rep) {
        FiniteAtomic f, g;
        for (int k = 0; k < 12; ++k) {
            const HalfSpace h = s.uniform() < 0.5 ? vertical_halfspace(s.uniform(0, pi), s.uniform(-1, 1))
                                                  : horizontal_halfspace(random_point(s));
            const double w = s.uniform(0, 2);
            f.atoms.emplace_back(h, w);
            g.atoms.emplace_back(h.complement(), w);
        }
        for (int i = 0; i < 50; ++i) {
            const HPoint x = random_point(s), y = random_point(s), z = random_point(s);
            const double dxy = cut_distance(CutMeasure{f}, x, y).d;
            CHECK(dxy == cut_distance(CutMeasure{g}, x, y).d);
            CHECK(dxy == cut_distance(CutMeasure{f}, y, x).d);
            CHECK(dxy <= cut_distance(CutMeasure{f}, x, z).d + cut_distance(CutMeasure{f}, z, y).d + 1e-10);
        }
    }
}

TEST_CASE("vertical-invariant cut metrics") {
    const double m = 1.7;
    VerticalInvariant uni;
    uni.density = DensitySpec{"uniform", {{"mass", m}}};
    CHECK(cut_distance(uni, identity, {1, 0, 0}).d == doctest::Approx(2 * m / pi).epsilon(1e-12));
    CHECK(cut_distance(uni, identity, {0.6, 0.8, 5}).d == doctest::Approx(2 * m / pi).epsilon(1e-12));
    CHECK(lipschitz_bound(uni) == doctest::Approx(m));

    VerticalInvariant atoms;
    atoms.atoms = {{0.0, 1.0}, {pi / 2, 0.5}};
    // Direction at angle ξ: |sin(ξ − 0)|·1 + |sin(ξ − π/2)|·0.5.
    CHECK(cut_distance(atoms, identity, {2, 0, 0}).d == doctest::Approx(2 * 0.5).epsilon(1e-14));
    CHECK(cut_distance(atoms, identity, {0, 2, 0}).d == doctest::Approx(2 * 1.0).epsilon(1e-14));

    // Against the Fourier expansion of |sin|: ∫|sin(ξ − v)| cos 2kv dv = (π/2)·c_k·cos 2kξ.
    for (int k : {1, 2, 3, 5}) {
        for (double amp : {0.3, 0.9}) {
            VerticalInvariant cosm;
            cosm.density = DensitySpec{"cosine", {{"mass", m}, {"k", double(k)}, {"amplitude", amp}}};
            rng::Stream s(43 + k);
            for (int i = 0; i < 100; ++i) {
                const HPoint x = random_point(s), y = random_point(s);
                const Vec2 d = project(y) - project(x);
                const double xi = std::atan2(d.y, d.x);
                const double ck = 4.0 / (pi * (1.0 - 4.0 * k * k));
                const double expect = norm(d) * (m / pi) * (2.0 + amp * ck * (pi / 2) * std::cos(2 * k * xi));
                CHECK(std::abs(cut_distance(cosm, x, y).d - expect) < 1e-10 * std::max(1.0, expect));
            }
        }
    }
}

TEST_CASE("vertical-invariant metrics factor through the projection") {
    VerticalInvariant v;
    v.density = DensitySpec{"cosine", {{"mass", 2.0}, {"k", 2.0}, {"amplitude", 0.5}}};
    v.atoms = {{0.4, 0.3}};
    rng::Stream s(44);
    for (int i = 0; i < 2000; ++i) {
        const HPoint x = random_point(s), y = random_point(s), z = random_point(s);
        const double t = s.uniform(-5, 5);
        CHECK(cut_distance(v, x, mul(x, exp({0, 0, t}))).d == 0.0);
        const double dxy = cut_distance(v, x, y).d;
        CHECK(cut_distance(v, {x.a, x.b, x.c + 3}, {y.a, y.b, y.c - 1}).d == dxy);
        const HPoint g = exp({0, 0, t});
        CHECK(cut_distance(v, mul(x, g), mul(y, g)).d == dxy);
        CHECK(dxy <= cut_distance(v, x, z).d + cut_distance(v, z, y).d + 1e-10);
        CHECK(dxy <= lipschitz_bound(v) * cc_distance(x, y) * (1 + 1e-12));
    }
}

TEST_CASE("ac horizontal measures") {
    const Box win{-2, 2, -2, 2, -3, 3};
    const ACHorizontal m = unit_density(win, 200000, 5);

    // Horizontal pair: c_w strictly between the plane heights of the endpoints.
    const HPoint x1{-0.5, 0.2, 0.1};
    const HPoint x2 = mul(x1, exp({1.0, 0.4, 0}));
    const CutValue h = cut_distance(m, x1, x2, 4);
    const double h_exact =
        wedge_volume(win, [&](Vec2 w) { return std::pair{plane_height(x1, w), plane_height(x2, w)}; }, 1000);
    CHECK(h.std_error > 0.0);
    CHECK(std::abs(h.d - h_exact) < 4 * h.std_error + 1e-4);

    // Vertical pair: P_w crosses the fiber over π(x) between the two heights.
    const HPoint v1{0.3, -0.4, 0.2};
    const double s1 = 0.5, s2 = 0.8;
    auto fiber = [&](double from, double to) {
        return cut_distance(m, mul(v1, exp({0, 0, from})), mul(v1, exp({0, 0, to})), 3);
    };
    const CutValue va = fiber(0, s1), vb = fiber(s1, s1 + s2), vab = fiber(0, s1 + s2);
    const double combined = std::sqrt(va.std_error * va.std_error + vb.std_error * vb.std_error + vab.std_error * vab.std_error);
    CHECK(std::abs(va.d + vb.d - vab.d) < 4 * combined);
    const double v_exact = wedge_volume(
        win,
        [&](Vec2 w) {
            // plane_height(w, foot) = c_w + k(w); solve for c_w.
            const double k = plane_height({w.x, w.y, 0}, project(v1));
            return std::pair{v1.c - k, v1.c + s1 - k};
        },
        400);
    CHECK(std::abs(va.d - v_exact) < 4 * va.std_error + 1e-4);

    CHECK_THROWS_AS(cut_distance(m, identity, {1, 1, 3}), UnsupportedPair);

    // Identical results for any worker count.
    for (unsigned t : {1u, 2u, 8u}) {
        const CutValue r = cut_distance(m, x1, x2, t);
        CHECK(r.d == h.d);
        CHECK(r.std_error == h.std_error);
    }
}

TEST_CASE("strip masses grow at most linearly in width") {
    const Box win{-2, 2, -2, 2, -1, 1};
    ACHorizontal m = unit_density(win, 100000, 8);
    m.density = {"gaussian", {{"amplitude", 1.5}, {"sigma", 1.0}}};
    const double diag = std::hypot(4.0, 4.0);
    double prev = 0.0;
    for (double w : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const CutValue c = strip_mass(m, 0.7, 0.3, w, 2);
        // Bounded density 1.5 over a preimage of volume at most width · diagonal · c-range.
        CHECK(c.d <= 1.5 * w * diag * 2.0 + 4 * c.std_error);
        CHECK(c.d + 4 * c.std_error >= prev);
        prev = c.d;
    }
}

TEST_CASE("wedge membership") {
    CHECK(wedge_contains({0, 1, 0.25}, {-1, 0, 0}, {1, 0, 0}));
    CHECK(!wedge_contains({0, 0, 1}, {-1, 0, 0}, {1, 0, 0}));
    CHECK(!wedge_contains({-1, 0, 1e6}, {-1, 0, 0}, {1, 0, 0}));
    CHECK_THROWS_AS(wedge_contains(identity, {0, 0, 0}, {1, 1, 5}), PreconditionError);
    CHECK_THROWS_AS(wedge_contains(identity, {1, 0, 0}, {1, 0, 0}), PreconditionError);

    // Brute force: sign changes of plane_height(x(t), π(y)) − c_y over a fine grid of t.
    rng::Stream s(45);
    int agree = 0, total = 0;
    for (int i = 0; i < 2000; ++i) {
        const HPoint x1 = random_point(s);
        const HPoint x2 = mul(x1, exp({s.uniform(-2, 2), s.uniform(-2, 2), 0}));
        const HPoint y = random_point(s);
        const Vec2 step = project(x2) - project(x1);
        bool change = false;
        double prev = plane_height(x1, project(y)) - y.c;
        if (std::abs(prev) < 1e-6) continue;
        bool near_zero = false;
        for (int k = 1; k <= 1000; ++k) {
            const double t = k / 1000.0;
            const double cur = plane_height(mul(x1, exp({t * step.x, t * step.y, 0})), project(y)) - y.c;
            near_zero |= std::abs(cur) < 1e-6;
            if ((cur > 0) != (prev > 0)) change = true;
            prev = cur;
        }
        if (near_zero) continue;
        ++total;
        agree += wedge_contains(y, x1, x2) == change;
    }
    CHECK(total > 1500);
    CHECK(agree == total);
}

TEST_CASE("excess") {
    auto ray = [](double a, double b) { return std::abs(double(a >= 0) - double(b >= 0)); };
    CHECK(excess(ray, -1.0, 1.0, 2.0) == 0.0);
    auto interval = [](double a, double b) {
        auto in = [](double t) { return double(t >= 0 && t <= 1); };
        return std::abs(in(a) - in(b));
    };
    CHECK(excess(interval, -1.0, 0.5, 2.0) == 2.0);

    rng::Stream s(46);
    for (int i = 0; i < 1000; ++i) {
        const Line l = line_from(random_point(s), s.uniform(0, pi));
        double t[3] = {s.uniform(-3, 3), s.uniform(-3, 3), s.uniform(-3, 3)};
        std::sort(t, t + 3);
        const double e = excess([](const HPoint& p, const HPoint& q) { return cc_distance(p, q); }, l.point(t[0]),
                                l.point(t[1]), l.point(t[2]));
        CHECK(std::abs(e) < 1e-10);
    }
}

TEST_CASE("Fourier coefficients of |sin|") {
    CHECK(sinabs_fourier(0) == doctest::Approx(2 / pi).epsilon(1e-15));
    CHECK(sinabs_fourier(1) == doctest::Approx(-4 / (3 * pi)).epsilon(1e-15));
    for (int k = 0; k <= 64; ++k) {
        CAPTURE(k);
        CHECK(sinabs_fourier(k) != 0.0);
        CHECK(std::abs(sinabs_fourier(k) - fourier_by_quadrature(k)) < 1e-10);
    }
}

TEST_CASE("Laguerre polynomials") {
    // Explicit sum L^α_k(x) = Σ_j (−1)^j C(k+α, k−j) x^j / j!.
    auto explicit_sum = [](int k, double alpha, double x) {
        long double s = 0.0L;
        for (int j = 0; j <= k; ++j) {
            long double binom = 1.0L, term = 1.0L;
            for (int i = 1; i <= k - j; ++i) binom *= (alpha + j + i) / static_cast<long double>(i);
            for (int i = 1; i <= j; ++i) term *= x / static_cast<long double>(i);
            s += (j % 2 ? -1.0L : 1.0L) * binom * term;
        }
        return static_cast<double>(s);
    };
    CHECK(laguerre(0, 0, 3.3) == 1.0);
    CHECK(laguerre(1, 0, 3.3) == doctest::Approx(1 - 3.3));
    CHECK(laguerre(2, 0, 2.0) == doctest::Approx(1 - 4 + 2));
    for (int k = 0; k <= 12; ++k) {
        for (double alpha : {0.0, 1.0, 2.5}) {
            for (double x : {0.0, 0.3, 1.0, 2.7, 6.0}) {
                const double e = explicit_sum(k, alpha, x);
                CHECK(std::abs(laguerre(k, alpha, x) - e) < 1e-10 * std::max(1.0, std::abs(e)));
            }
        }
    }
}

TEST_CASE("Strichartz eigenfunctions") {
    for (double lam : {0.5, 1.0, 3.0}) {
        const auto v = eval_phi(lam, 0, 1, {0, 0}, 0);
        CHECK(v.real() == doctest::Approx(4 * pi * pi * lam).epsilon(1e-14));
        CHECK(v.imag() == 0.0);
    }
    // L⁰₁(x) = 1 − x vanishes at x = λ|z|²/(2(1+2k)) = 6/6.
    const auto zero = eval_phi(1, 1, 1, {std::sqrt(6.0), 0}, 0);
    CHECK(std::abs(zero) < 1e-14);
    const auto v = eval_phi(1, 1, 1, {1, 1}, 0);
    CHECK(v.real() == doctest::Approx(4 * pi * pi / 9 * std::exp(-2.0 / 12) * (1 - 2.0 / 6)).epsilon(1e-13));

    rng::Stream s(47);
    for (int i = 0; i < 200; ++i) {
        const double lam = s.uniform(0.1, 3);
        const int k = static_cast<int>(s.below(8));
        const int eps = s.uniform() < 0.5 ? 1 : -1;
        const Vec2 z{s.uniform(-2, 2), s.uniform(-2, 2)};
        const double a = std::abs(eval_phi(lam, k, eps, z, 0));
        CHECK(std::abs(std::abs(eval_phi(lam, k, eps, z, s.uniform(-10, 10))) - a) < 1e-12 * std::max(1.0, a));
        CHECK(std::conj(eval_phi(lam, k, eps, z, 1.3)) == eval_phi(lam, k, -eps, z, 1.3));
    }
    CHECK_THROWS_AS(eval_phi(0, 0, 1, {0, 0}, 0), PreconditionError);
}
