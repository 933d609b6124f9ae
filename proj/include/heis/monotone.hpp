#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heis/cuts.hpp"
#include "heis/lines.hpp"
#include "heis/parallel.hpp"

namespace heis {

class SetOracle;

struct SetAll {};
struct SetEmpty {};
struct SetHalf {
    HalfSpace h;
};
struct SetCCBall {
    HPoint center;
    double radius;
};
struct SetEuclideanBall {
    HPoint center;
    double radius;
};
struct SetVerticalSlab {
    double angle;
    double lo;
    double hi;
};
/// {c < k0 + ka·a + kb·b + kaa·a² + kab·a·b + kbb·b²}
struct SetParaboloid {
    std::array<double, 6> k;
};
struct SetComplement;
struct SetUnion;
struct SetIntersection;

using SetNode = std::variant<SetAll, SetEmpty, SetHalf, SetCCBall, SetEuclideanBall, SetVerticalSlab, SetParaboloid,
                             SetComplement, SetUnion, SetIntersection>;

/// Membership predicate for a measurable subset of ℍ, built from closed-form primitives and
/// Boolean combinators. Cheap to copy; nodes are shared and immutable.
class SetOracle {
public:
    bool contains(const HPoint& y) const;
    const SetNode& node() const;

    static SetOracle all();
    static SetOracle empty();
    static SetOracle halfspace(const HalfSpace& h);
    static SetOracle cc_ball(const HPoint& center, double r);
    static SetOracle euclidean_ball(const HPoint& center, double r);
    static SetOracle vertical_slab(double angle, double lo, double hi);
    static SetOracle paraboloid(const std::array<double, 6>& k);
    static SetOracle set_union(std::vector<SetOracle> parts);
    static SetOracle intersection(std::vector<SetOracle> parts);
    SetOracle complement() const;

private:
    explicit SetOracle(std::shared_ptr<const SetNode> node) : node_(std::move(node)) {}
    static SetOracle make(SetNode&& node);

    std::shared_ptr<const SetNode> node_;
};

struct SetComplement {
    SetOracle inner;
};
struct SetUnion {
    std::vector<SetOracle> parts;
};
struct SetIntersection {
    std::vector<SetOracle> parts;
};

/// Membership of S at n cell midpoints t_i = t0 + (i + ½)(t1 − t0)/n of the line.
std::vector<bool> trace_line(const SetOracle& set, const Line& line, std::pair<double, double> window, std::size_t n);

/// Least fraction of entries to flip so the trace becomes 0…01…1, 1…10…0, or constant.
double defect_line(const std::vector<bool>& trace);

struct DefectReport {
    double mean_defect = 0.0;
    double std_error = 0.0;
    std::array<double, 5> quantiles{};  ///< per-line defect at 0, 0.25, 0.5, 0.75, 1
    std::size_t n_lines = 0;
    std::size_t n_samples = 0;
    Box window;
    std::uint64_t seed = 0;
};

/// Mean defect over lines drawn by sample_lines(window, n_lines, seed), each traced at
/// n_samples points across the window.
DefectReport monotonicity_defect(const SetOracle& set, const Box& window, std::size_t n_lines, std::size_t n_samples,
                                 std::uint64_t seed, unsigned threads = default_threads());

/// Empirical monotonicity: mean defect below 10 / n_samples.
inline bool empirically_monotone(const DefectReport& r) {
    return r.mean_defect < 10.0 / static_cast<double>(r.n_samples);
}

struct HalfSpaceFit {
    HalfSpace halfspace;
    double fraction = 1.0;           ///< empirical symmetric-difference fraction
    double vertical_fraction = 1.0;  ///< best over the vertical family
    double horizontal_fraction = 1.0;
};

/// Best half-space approximation of S on `budget` uniform samples of the window.
HalfSpaceFit half_space_fit(const SetOracle& set, const Box& window, std::size_t budget, std::uint64_t seed,
                            unsigned threads = default_threads());

struct GeodesicCheck {
    bool is_geodesic = false;
    double max_excess = 0.0;
    bool all_monotone = false;
};

/// Finite version of "the cut metric restricted to a line is geodesic iff almost every cut
/// is monotone": builds d(i, j) = Σ w·|χ(i) − χ(j)| over the positions and checks every
/// ordered triple for zero excess, and every positive-weight trace for being a step.
GeodesicCheck geodesic_monotone_check(const std::vector<std::pair<std::vector<bool>, double>>& cuts,
                                      const std::vector<double>& positions);

}  // namespace heis
