#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heis/hgroup.hpp"
#include "heis/parallel.hpp"

namespace heis {

/// Component of ℍ minus a vertical plane: side·(⟨π(y), (cos φ, sin φ)⟩ − offset) > 0.
struct VerticalHalfSpace {
    double angle = 0.0;
    double offset = 0.0;
    int side = 1;
};

/// Component of ℍ minus the horizontal plane P_center: side·(c_y − plane_height(center, π(y))) > 0.
struct HorizontalHalfSpace {
    HPoint center;
    int side = 1;
};

struct HalfSpace {
    std::variant<VerticalHalfSpace, HorizontalHalfSpace> kind;

    /// Signed defining function; positive inside, zero on the boundary plane.
    double value(const HPoint& y) const;
    bool contains(const HPoint& y) const { return value(y) > 0.0; }
    HalfSpace complement() const;
    bool is_vertical() const { return std::holds_alternative<VerticalHalfSpace>(kind); }
};

HalfSpace vertical_halfspace(double angle, double offset, int side = 1);
HalfSpace horizontal_halfspace(const HPoint& center, int side = 1);

struct Separation {
    bool separated = false;
    bool boundary = false;  ///< a point was within tolerance of the boundary plane
};

/// Elementary cut metric d_E(x, y) = |χ_E(x) − χ_E(y)|. Boundary incidence is flagged and
/// counts as not separated.
Separation elementary_separated(const HalfSpace& e, const HPoint& x, const HPoint& y, double tol = 1e-12);

/// Named density plus numeric parameters; data files reference densities this way.
struct DensitySpec {
    std::string name;
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
};

/// Densities on ℍ: "constant" {value}, "gaussian" {amplitude, sigma, center_a, center_b, center_c}.
std::function<double(const HPoint&)> make_point_density(const DensitySpec& spec);
/// Densities on directions v ∈ [0, π): "uniform" {mass} (= mass/π), "cosine" {mass, k, amplitude}
/// (= (mass/π)(1 + amplitude·cos 2kv)), "harmonic" {k} (= cos 2kv, signed).
std::function<double(double)> make_angle_density(const DensitySpec& spec);

struct FiniteAtomic {
    std::vector<std::pair<HalfSpace, double>> atoms;
    bool is_signed = false;
};

/// Translation-invariant measure on vertical cuts: a superposition, over directions v, of
/// the invariant measure on lines parallel to v normalized so parallel lines are at their
/// Euclidean distance. Given either as atoms (v, mass) or as a density on [0, π).
struct VerticalInvariant {
    std::vector<std::pair<double, double>> atoms;
    std::optional<DensitySpec> density;
    int quadrature_order = 64;
    bool is_signed = false;
};

/// Absolutely continuous measure u·dλ on horizontal half-spaces, with the plane P_x
/// identified with its center x. Integrated by stratified Monte Carlo over `window`.
struct ACHorizontal {
    DensitySpec density;
    Box window;
    std::size_t samples = 100000;
    std::size_t strata = 64;
    std::uint64_t seed = 0;
};

using CutMeasure = std::variant<FiniteAtomic, VerticalInvariant, ACHorizontal>;

/// Throws PreconditionError on negative weights in an unsigned measure or bad parameters.
void validate(const CutMeasure& measure);

/// Bound L with d_Σ(x, y) ≤ L·d(x, y). Total absolute mass for VerticalInvariant; 0 for an
/// empty FiniteAtomic measure. Otherwise +∞: elementary cut metrics jump, and no explicit
/// constant is known for ACHorizontal.
double lipschitz_bound(const CutMeasure& measure);

struct CutValue {
    double d = 0.0;
    double std_error = 0.0;  ///< zero for exact evaluators
    bool boundary = false;   ///< some atom's boundary passed through x or y
};

/// Thrown when an ACHorizontal measure is asked for a pair that is neither horizontal nor
/// vertical (same projection).
class UnsupportedPair : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// d_Σ(x, y) = ∫ d_E(x, y) dΣ(E).
CutValue cut_distance(const CutMeasure& measure, const HPoint& x, const HPoint& y,
                      unsigned threads = default_threads());

/// True when x, y lie on a common horizontal line.
bool is_horizontal_pair(const HPoint& x, const HPoint& y, double tol = 1e-10);

/// y ∈ P_{x1,x2}: the plane P_y crosses the open segment (x1, x2). Along the segment,
/// plane_height(x(t), π(y)) − c_y is affine in t, so this is a strict sign change between
/// the endpoints. Throws PreconditionError unless (x1, x2) is a horizontal pair, x1 ≠ x2.
bool wedge_contains(const HPoint& y, const HPoint& x1, const HPoint& x2);

/// Σ of the π-preimage of the planar strip |⟨w, (cos φ, sin φ)⟩ − offset| < width/2,
/// for an ACHorizontal measure.
CutValue strip_mass(const ACHorizontal& measure, double angle, double offset, double width,
                    unsigned threads = default_threads());

/// α(x1,x2) + α(x2,x3) − α(x1,x3) for ordered collinear points.
template <class Metric, class Point>
double excess(Metric&& d, const Point& x1, const Point& x2, const Point& x3) {
    return d(x1, x2) + d(x2, x3) - d(x1, x3);
}

/// Coefficient of cos 2kθ in the expansion of |sin θ| on [0, π).
double sinabs_fourier(int k);

/// Laguerre polynomial L^α_k(x) by the three-term recurrence.
double laguerre(int k, double alpha, double x);

/// Strichartz eigenfunction φ_{λ,k,ε}(z, t) on the 3-dimensional Heisenberg group (n = 1):
/// (2π)² λ/(1+2k)² · e^{−iελt/(1+2k)} · e^{−λ|z|²/(4(1+2k))} · L⁰_k(λ|z|²/(2(1+2k))).
std::complex<double> eval_phi(double lambda, int k, int eps, Vec2 z, double t);

}  // namespace heis
