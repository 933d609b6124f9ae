#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/errors.hpp"
#include "heis/monotone.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<bool> bits(std::initializer_list<int> v) {
    std::vector<bool> out;
    for (int b : v) out.push_back(b != 0);
    return out;
}

// Minimum number of flips over every pattern 0^k 1^(n−k) and 1^k 0^(n−k).
double brute_defect(const std::vector<bool>& t) {
    const std::size_t n = t.size();
    std::size_t best = n;
    for (std::size_t k = 0; k <= n; ++k) {
        std::size_t up = 0, down = 0;
        for (std::size_t i = 0; i < n; ++i) {
            up += t[i] != (i >= k);
            down += t[i] != (i < k);
        }
        best = std::min({best, up, down});
    }
    return static_cast<double>(best) / static_cast<double>(n);
}

bool is_step(const std::vector<bool>& t) {
    std::size_t changes = 0;
    for (std::size_t i = 1; i < t.size(); ++i) changes += t[i] != t[i - 1];
    return changes <= 1;
}

bool same_report(const DefectReport& a, const DefectReport& b) {
    return a.mean_defect == b.mean_defect && a.std_error == b.std_error && a.quantiles == b.quantiles;
}

// Two vertical half-spaces are the same set when (φ, p, side) ~ (φ + π, −p, −side).
void check_vertical_match(const HalfSpace& fit, double angle, double offset, int side) {
    REQUIRE(fit.is_vertical());
    const auto v = std::get<VerticalHalfSpace>(fit.kind);
    double fa = v.angle, fo = v.offset;
    int fs = v.side;
    if (std::cos(fa - angle) < 0) {
        fa += pi;
        fo = -fo;
        fs = -fs;
    }
    CHECK(std::abs(std::remainder(fa - angle, 2 * pi)) < 0.02);
    CHECK(std::abs(fo - offset) < 0.02);
    CHECK(fs == side);
}

}  // namespace

TEST_CASE("trace examples") {
    const SetOracle right = SetOracle::halfspace(vertical_halfspace(0, 0));
    CHECK(trace_line(right, line_from(identity, 0), {-1, 1}, 4) == bits({0, 0, 1, 1}));
    CHECK(trace_line(SetOracle::all(), line_from({0.3, 0.2, 1}, 1.0), {-1, 1}, 5) == bits({1, 1, 1, 1, 1}));
    const auto ball = trace_line(SetOracle::cc_ball(identity, 1), line_from(identity, 0.4), {-2, 2}, 41);
    CHECK(!ball.front());
    CHECK(!ball.back());
    CHECK(ball[20]);
    std::size_t changes = 0;
    for (std::size_t i = 1; i < ball.size(); ++i) changes += ball[i] != ball[i - 1];
    CHECK(changes == 2);
    CHECK_THROWS_AS(trace_line(right, line_from(identity, 0), {-1, 1}, 1), PreconditionError);
}

TEST_CASE("defect examples and brute force") {
    CHECK(defect_line(bits({0, 0, 1, 1})) == 0.0);
    CHECK(defect_line(bits({0, 1, 0})) == doctest::Approx(1.0 / 3));
    CHECK(defect_line(bits({1, 0, 1, 0, 1, 0})) == doctest::Approx(1.0 / 3));
    CHECK(defect_line(bits({1, 1, 1})) == 0.0);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::uint32_t m = 0; m < (1U << n); ++m) {
            std::vector<bool> t(n);
            for (std::size_t i = 0; i < n; ++i) t[i] = (m >> i) & 1U;
            CHECK(defect_line(t) == brute_defect(t));
        }
    }
}

TEST_CASE("half-spaces and trivial sets have zero defect") {
    const Box w = Box::cube(2);
    rng::Stream s(51);
    for (int i = 0; i < 10; ++i) {
        const SetOracle v = SetOracle::halfspace(vertical_halfspace(s.uniform(0, pi), s.uniform(-1, 1), i % 2 ? 1 : -1));
        const SetOracle h = SetOracle::halfspace(
            horizontal_halfspace({s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)}, i % 2 ? 1 : -1));
        for (const auto& set : {v, h}) {
            const DefectReport r = monotonicity_defect(set, w, 2000, 256, 100 + i);
            CHECK(r.mean_defect < 1e-3);
            CHECK(empirically_monotone(r));
        }
    }
    CHECK(monotonicity_defect(SetOracle::all(), w, 500, 64, 1).mean_defect == 0.0);
    CHECK(monotonicity_defect(SetOracle::empty(), w, 500, 64, 1).mean_defect == 0.0);
}

TEST_CASE("complement invariance") {
    const Box w = Box::cube(2);
    const std::vector<SetOracle> sets{
        SetOracle::cc_ball({0.2, 0, 0.1}, 1.2),
        SetOracle::euclidean_ball(identity, 1),
        SetOracle::vertical_slab(0.3, -0.5, 0.5),
        SetOracle::paraboloid({0, 0, 0, 0.5, 0, 0.5}),
        SetOracle::set_union({SetOracle::cc_ball({1, 0, 0}, 0.7), SetOracle::halfspace(horizontal_halfspace(identity))}),
    };
    for (const auto& set : sets) {
        const DefectReport a = monotonicity_defect(set, w, 1000, 128, 9);
        const DefectReport b = monotonicity_defect(set.complement(), w, 1000, 128, 9);
        CHECK(same_report(a, b));
    }
}

TEST_CASE("balls are not monotone") {
    const Box w = Box::cube(2);
    for (std::uint64_t seed : {1, 2, 3}) {
        const DefectReport r = monotonicity_defect(SetOracle::cc_ball(identity, 1), w, 10000, 256, seed);
        CHECK(r.mean_defect > 10 * r.std_error);
        CHECK(r.quantiles[4] > 0.2);
    }
    // In a window matched to the ball's size every through-line sees an interval.
    const Box tight{-1.2, 1.2, -1.2, 1.2, -0.4, 0.4};
    const DefectReport r = monotonicity_defect(SetOracle::cc_ball(identity, 1), tight, 5000, 256, 4);
    CHECK(!empirically_monotone(r));
}

TEST_CASE("monotonicity defect does not depend on the worker count") {
    const SetOracle set = SetOracle::cc_ball(identity, 1);
    const DefectReport a = monotonicity_defect(set, Box::cube(2), 3000, 128, 5, 1);
    for (unsigned t : {2u, 8u}) CHECK(same_report(a, monotonicity_defect(set, Box::cube(2), 3000, 128, 5, t)));
    CHECK_THROWS_AS(monotonicity_defect(set, Box::cube(2), 0, 128, 5), PreconditionError);
}

TEST_CASE("half-space fits") {
    const Box w = Box::cube(2);
    SUBCASE("vertical") {
        const SetOracle s = SetOracle::halfspace(vertical_halfspace(1.0, 0.4, -1));
        const HalfSpaceFit f = half_space_fit(s, w, 20000, 3);
        CHECK(f.fraction < 0.01);
        check_vertical_match(f.halfspace, 1.0, 0.4, -1);
    }
    SUBCASE("horizontal") {
        const SetOracle s = SetOracle::halfspace(horizontal_halfspace({0.3, -0.2, 0.1}));
        const HalfSpaceFit f = half_space_fit(s, w, 20000, 3);
        CHECK(f.fraction < 0.02);
        CHECK(!f.halfspace.is_vertical());
        CHECK(f.horizontal_fraction < 0.02);
        CHECK(f.vertical_fraction > 5 * f.horizontal_fraction + 0.01);
    }
    SUBCASE("ball") {
        const SetOracle s = SetOracle::cc_ball(identity, 1);
        const HalfSpaceFit f = half_space_fit(s, w, 20000, 3);
        rng::Stream st(99);
        std::size_t in = 0;
        const std::size_t n = 200000;
        for (std::size_t i = 0; i < n; ++i) in += s.contains({st.uniform(-2, 2), st.uniform(-2, 2), st.uniform(-2, 2)});
        const double volume_fraction = static_cast<double>(in) / n;
        CHECK(f.fraction > 0.5 * volume_fraction);
        CHECK(f.fraction <= volume_fraction + 0.005);
    }
    SUBCASE("determinism") {
        const SetOracle s = SetOracle::euclidean_ball({0.5, 0, 0}, 1.5);
        const HalfSpaceFit a = half_space_fit(s, w, 5000, 8, 1);
        const HalfSpaceFit b = half_space_fit(s, w, 5000, 8, 8);
        CHECK(a.fraction == b.fraction);
        CHECK(a.vertical_fraction == b.vertical_fraction);
        CHECK(a.horizontal_fraction == b.horizontal_fraction);
    }
    CHECK_THROWS_AS(half_space_fit(SetOracle::all(), w, 999, 1), PreconditionError);
}

TEST_CASE("set oracle primitives") {
    CHECK(SetOracle::cc_ball(identity, 1).contains({0.5, 0, 0}));
    CHECK(!SetOracle::cc_ball(identity, 1).contains({0, 0, 0.1}));
    CHECK(SetOracle::cc_ball(identity, 1).contains({0, 0, 0.07}));
    CHECK(SetOracle::euclidean_ball(identity, 1).contains({0, 0, 0.9}));
    CHECK(SetOracle::vertical_slab(0, -1, 1).contains({0.5, 10, -4}));
    CHECK(!SetOracle::vertical_slab(0, -1, 1).contains({1.5, 0, 0}));
    CHECK(SetOracle::paraboloid({1, 0, 0, 0, 0, 0}).contains({5, 5, 0.5}));
    const SetOracle u = SetOracle::set_union({SetOracle::vertical_slab(0, 0, 1), SetOracle::vertical_slab(0, 2, 3)});
    CHECK(u.contains({2.5, 0, 0}));
    CHECK(!u.contains({1.5, 0, 0}));
    CHECK(!SetOracle::intersection({u, SetOracle::vertical_slab(0, 0.5, 2.2)}).contains({2.5, 0, 0}));
    CHECK(u.complement().contains({1.5, 0, 0}));
    CHECK_THROWS_AS(SetOracle::cc_ball(identity, -1), PreconditionError);
}

TEST_CASE("geodesic and monotone cut systems") {
    const std::vector<double> pos{0, 1, 2, 3};
    const GeodesicCheck steps = geodesic_monotone_check({{bits({0, 0, 1, 1}), 2}, {bits({1, 1, 1, 0}), 1}}, pos);
    CHECK(steps.is_geodesic);
    CHECK(steps.all_monotone);
    CHECK(steps.max_excess == 0.0);
    const GeodesicCheck bump = geodesic_monotone_check({{bits({0, 1, 1, 0}), 1}}, pos);
    CHECK(!bump.is_geodesic);
    CHECK(bump.max_excess > 0.0);
    const GeodesicCheck null = geodesic_monotone_check({{bits({0, 1, 1, 0}), 0}, {bits({0, 0, 1, 1}), 1}}, pos);
    CHECK(null.is_geodesic);
    CHECK(null.all_monotone);

    // Integer weights keep every comparison exact.
    rng::Stream s(52);
    int geodesic = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + s.below(15);
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(i);
        std::vector<std::pair<std::vector<bool>, double>> cuts;
        const std::size_t m = 1 + s.below(8);
        bool expect = true;
        for (std::size_t c = 0; c < m; ++c) {
            std::vector<bool> t(n);
            if (s.uniform() < 0.7) {
                const std::size_t k = s.below(n + 1);
                const bool up = s.uniform() < 0.5;
                for (std::size_t i = 0; i < n; ++i) t[i] = (i >= k) == up;
            } else {
                for (std::size_t i = 0; i < n; ++i) t[i] = s.uniform() < 0.5;
            }
            const double w = static_cast<double>(s.below(4));
            if (w > 0 && !is_step(t)) expect = false;
            cuts.emplace_back(t, w);
        }
        const GeodesicCheck g = geodesic_monotone_check(cuts, p);
        CHECK(g.is_geodesic == g.all_monotone);
        CHECK(g.all_monotone == expect);
        geodesic += g.is_geodesic;
    }
    CHECK(geodesic > 100);
    CHECK(geodesic < 900);
}
