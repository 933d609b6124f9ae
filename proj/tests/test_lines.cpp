#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/errors.hpp"
#include "heis/lines.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;

HPoint random_point(rng::Stream& s, double r = 2.0) { return {s.uniform(-r, r), s.uniform(-r, r), s.uniform(-r, r)}; }

// Parameter of the point of `l` over the planar point w, assumed to lie on π(l).
double param_over(const Line& l, Vec2 w) { return dot(w - project(l.base), l.direction()); }

// Lift a planar segment starting on π(l1) from the point of l1 above its start.
HPoint lift_from(const Line& l1, Vec2 from, Vec2 to) {
    const HPoint start = l1.point(param_over(l1, from));
    return lift_polyline(start, Polyline2D({from, to})).endpoint;
}

std::pair<Line, Line> random_skew(rng::Stream& s) {
    for (;;) {
        const Line a = line_from(random_point(s), s.uniform(0, pi));
        const Line b = line_from(random_point(s), s.uniform(0, pi));
        if (std::abs(std::sin(a.angle - b.angle)) < 0.2) continue;
        if (classify_pair(a, b).tag != PairTag::skew) continue;
        if (std::abs(hyperbola_of_skew(a, b).C) < 0.01) continue;
        return {a, b};
    }
}

}  // namespace

TEST_CASE("line parametrization") {
    const Line x = line_from(identity, 0);
    CHECK(x.point(2.5) == HPoint{2.5, 0, 0});
    const Line y = line_from({0, 0, 1}, pi / 2);
    const HPoint p = y.point(3);
    CHECK(std::abs(p.a) < 1e-15);
    CHECK(p.b == doctest::Approx(3));
    CHECK(p.c == doctest::Approx(1.0).epsilon(1e-15));
    const HPoint r = line_from({1, 0, 0}, pi / 2).point(3);
    CHECK(r.c == doctest::Approx(3));
    CHECK(line_from({1, 2, 3}, 0).point(0) == HPoint{1, 2, 3});

    const Line w = line_from({0.5, -1, 2}, pi + 0.3);
    CHECK(w.angle == doctest::Approx(0.3));
    CHECK(w.contains(line_from({0.5, -1, 2}, 0.3).point(1.7)));
    CHECK(line_from({0, 0, 0}, -0.2).angle == doctest::Approx(pi - 0.2));
    CHECK_THROWS_AS(line_from({NAN, 0, 0}, 0), PreconditionError);
}

TEST_CASE("containment is the plane-height test") {
    rng::Stream s(31);
    for (int i = 0; i < 1000; ++i) {
        const Line l = line_from(random_point(s), s.uniform(0, pi));
        const HPoint q = l.point(s.uniform(-3, 3));
        CHECK(l.contains(q));
        CHECK(!l.contains({q.a, q.b, q.c + 1e-6}));
    }
}

TEST_CASE("pair classification") {
    const Line x = line_from(identity, 0);
    CHECK(classify_pair(x, line_from({0, 0, 1}, 0)).tag == PairTag::parallel_same_projection);
    const PairClass c = classify_pair(x, line_from(identity, pi / 2));
    CHECK(c.tag == PairTag::intersecting);
    REQUIRE(c.witness);
    CHECK(*c.witness == identity);
    CHECK(classify_pair(x, line_from({0, 0, 1}, pi / 2)).tag == PairTag::skew);
    CHECK(classify_pair(x, line_from({5, 0, 0}, pi)).tag == PairTag::equal);
    CHECK(classify_pair(x, line_from({0, 1, 0}, 0)).tag == PairTag::parallel_distinct_projection);

    rng::Stream s(32);
    for (int i = 0; i < 500; ++i) {
        const Line a = line_from(random_point(s), s.uniform(0, pi));
        const Line b = line_from(a.point(s.uniform(-2, 2)), s.uniform(0, pi));
        const PairClass pc = classify_pair(a, b);
        if (std::abs(std::sin(a.angle - b.angle)) > 1e-3) {
            CHECK(pc.tag == PairTag::intersecting);
            REQUIRE(pc.witness);
            CHECK(a.residual(*pc.witness) < 1e-9);
            CHECK(b.residual(*pc.witness) < 1e-9);
        }
    }
}

TEST_CASE("join through a parallel line crosses the midline fiber") {
    const std::vector<Line> j = join_to_line(identity, line_from({0, 1, 0}, 0));
    REQUIRE(j.size() == 1);
    // The joining segment from e ends at (2h - s, 1) with h = 0, s = 0, i.e. at (0, 1); its
    // projection passes over the midpoint of the two projected points.
    const Line& m = j[0];
    CHECK(m.contains(identity));
    CHECK(std::abs(std::cos(m.angle)) < 1e-12);

    CHECK(join_to_line({3, 0, 1}, line_from(identity, 0)).empty());
    CHECK_THROWS_AS(join_to_line({3, 0, 0}, line_from(identity, 0)), PreconditionError);

    rng::Stream s(33);
    for (int i = 0; i < 200; ++i) {
        const double phi = s.uniform(0, pi);
        const Vec2 u{std::cos(phi), std::sin(phi)}, nrm{-u.y, u.x};
        const Line l1 = line_from(random_point(s), phi);
        const double gap = s.uniform(0.2, 2) * (s.uniform() < 0.5 ? -1 : 1);
        const HPoint b2{l1.base.a + gap * nrm.x, l1.base.b + gap * nrm.y, s.uniform(-2, 2)};
        const Line l2 = line_from(b2, phi);
        REQUIRE(classify_pair(l1, l2).tag == PairTag::parallel_distinct_projection);
        std::optional<Vec2> common;
        for (int k = 0; k < 20; ++k) {
            const HPoint p = l1.point(s.uniform(-3, 3));
            const auto joins = join_to_line(p, l2);
            REQUIRE(joins.size() == 1);
            const Line& m = joins[0];
            CHECK(m.contains(p, 1e-9));
            // Where the joining line's projection crosses the midline between π(L1) and π(L2).
            const Vec2 mid0 = project(l1.base) + (0.5 * gap) * nrm;
            const double t = cross(mid0 - project(m.base), u) / cross(m.direction(), u);
            const Vec2 crossing = project(m.point(t));
            // It meets L2 where its projection reaches π(L2).
            const double t2 = cross(project(l2.base) - project(m.base), u) / cross(m.direction(), u);
            CHECK(l2.residual(m.point(t2)) < 1e-8);
            if (!common) {
                common = crossing;
            } else {
                CHECK(norm(crossing - *common) < 1e-8);
            }
        }
    }
}

TEST_CASE("hyperbola normal form") {
    const Line x = line_from(identity, 0);
    const Hyperbola h = hyperbola_of_skew(x, line_from({0, 0, 1}, pi / 2));
    CHECK(h.C == doctest::Approx(0.5));
    CHECK(std::abs(std::abs(h.det()) - 1) < 1e-12);
    CHECK(hyperbola_of_skew(x, line_from({0, 0, -1}, pi / 2)).C == doctest::Approx(-0.5));
    CHECK_THROWS_AS(hyperbola_of_skew(x, line_from(identity, pi / 2)), PreconditionError);
    CHECK_THROWS_AS(hyperbola_of_skew(x, line_from({0, 0, 1}, 0)), PreconditionError);

    rng::Stream s(34);
    for (int i = 0; i < 200; ++i) {
        const auto [l1, l2] = random_skew(s);
        const Hyperbola hy = hyperbola_of_skew(l1, l2);
        CHECK(std::abs(std::abs(hy.det()) - 1) < 1e-12);
        // Swapping the lines keeps |C|.
        CHECK(std::abs(std::abs(hyperbola_of_skew(l2, l1).C) - std::abs(hy.C)) < 1e-9 * (1 + std::abs(hy.C)));
        // A sign change of the height gap flips the branch.
        const Vec2 cross_pt = hy.from_axes({0, 0});
        const HPoint on1 = l1.point(param_over(l1, cross_pt));
        const HPoint on2 = l2.point(param_over(l2, cross_pt));
        const HPoint flipped_base{l2.base.a, l2.base.b, l2.base.c - 2 * (on2.c - on1.c)};
        CHECK(hyperbola_of_skew(l1, line_from(flipped_base, l2.angle)).C == doctest::Approx(-hy.C).epsilon(1e-9));
        CHECK(hy.C == doctest::Approx(0.5 * hy.det() * (on2.c - on1.c)).epsilon(1e-9));
    }
}

TEST_CASE("tangent lifts join skew lines and secants miss") {
    rng::Stream s(35);
    for (int i = 0; i < 100; ++i) {
        const auto [l1, l2] = random_skew(s);
        const Hyperbola hy = hyperbola_of_skew(l1, l2);
        for (int k = 0; k < 20; ++k) {
            const double x0 = std::exp(s.uniform(-1, 1)) * (s.uniform() < 0.5 ? -1 : 1);
            const auto [from, to] = hy.tangent_segment(x0);
            CHECK(l2.residual(lift_from(l1, from, to)) < 1e-8);

            const double delta = s.uniform(0.05, 0.5) * (s.uniform() < 0.5 ? -1 : 1);
            const Vec2 off = hy.from_axes({0.0, 2.0 * hy.C / x0 * (1 + delta)});
            CHECK(l2.residual(lift_from(l1, from, off)) > 1e-4);
        }
    }
}

TEST_CASE("joins through skew lines are tangent to the hyperbola") {
    rng::Stream s(36);
    for (int i = 0; i < 200; ++i) {
        const auto [l1, l2] = random_skew(s);
        const Hyperbola hy = hyperbola_of_skew(l1, l2);
        const HPoint p = l1.point(s.uniform(-2, 2));
        const auto joins = join_to_line(p, l2);
        CHECK(joins.size() <= 2);
        for (const Line& m : joins) {
            CHECK(m.contains(p, 1e-9));
            CHECK(hy.tangency_residual(m) < 1e-8 * std::max(1.0, std::abs(hy.C)));
        }
    }
}

TEST_CASE("line sampling") {
    const Box w = Box::cube(2);
    CHECK_THROWS_AS(sample_lines(w, 0, 1), PreconditionError);
    CHECK_THROWS_AS(sample_lines(Box{0, 0, 0, 1, 0, 1}, 1, 1), PreconditionError);
    const auto one = sample_lines(w, 1, 9);
    REQUIRE(one.size() == 1);
    const auto span = clip_to_window(one[0], w);
    REQUIRE(span);
    bool inside = false;
    for (int k = 0; k <= 1000; ++k) inside |= w.contains(one[0].point(span->first + (span->second - span->first) * k / 1000.0));
    CHECK(inside);

    // χ² on 20 angle bins; the 0.99 quantile for 19 degrees of freedom is 36.19.
    const std::size_t n = 100000;
    const auto lines = sample_lines(w, n, 2024);
    std::vector<double> bins(20, 0.0);
    for (const auto& l : lines) bins[std::min<std::size_t>(19, static_cast<std::size_t>(l.angle / pi * 20))] += 1;
    double chi2 = 0.0;
    for (double b : bins) chi2 += (b - n / 20.0) * (b - n / 20.0) / (n / 20.0);
    CHECK(chi2 < 36.19);

    const auto a = sample_lines(w, 5000, 77, 1);
    for (unsigned t : {2u, 8u}) {
        const auto b = sample_lines(w, 5000, 77, t);
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i) same &= a[i].base == b[i].base && a[i].angle == b[i].angle;
        CHECK(same);
    }
}
