#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heis/hgroup.hpp"
#include "heis/parallel.hpp"
#include "heis/simplex.hpp"

namespace heis {

/// Symmetric distance matrix on labeled points.
struct FiniteMetric {
    std::vector<std::string> labels;
    std::vector<double> d;  ///< row-major n × n

    std::size_t size() const { return labels.size(); }
    double operator()(std::size_t i, std::size_t j) const { return d[i * labels.size() + j]; }

    /// CC distances between the given points; labels default to "p0", "p1", ...
    static FiniteMetric from_points(const std::vector<HPoint>& pts, std::vector<std::string> labels = {});
    FiniteMetric scaled(double lambda) const;
    FiniteMetric restricted(const std::vector<std::size_t>& keep) const;
};

/// Throws PreconditionError unless the matrix is square, symmetric, zero on the diagonal,
/// nonnegative, and satisfies the triangle inequality within `tol` (relative to the largest entry).
void validate(const FiniteMetric& m, double tol = 1e-9);

/// Cut {A | B} of the labels as a bitmask of side B. Label 0 is always in A.
struct WeightedCut {
    std::uint32_t mask = 0;
    double weight = 0.0;
};

/// Optimality evidence for an LP solve, measured on the normalized problem.
struct Certificate {
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementarity = 0.0;
    double duality_gap = 0.0;
    std::size_t iterations = 0;

    double kkt() const;
};

struct CutDecomposition {
    std::vector<std::string> labels;
    std::vector<WeightedCut> cuts;  ///< positive weights only, in mask order
    double distortion = 1.0;
    Certificate certificate;
};

/// Number of nontrivial cuts with label 0 fixed on side A.
inline std::size_t cut_count(std::size_t n) { return (std::size_t{1} << (n - 1)) - 1; }

/// Minimal L¹ distortion of a finite metric: minimize c over cut weights y ≥ 0 subject to
/// d ≤ d_y ≤ c·d on every pair, where d_y = Σ y_E δ_E. Requires 2 ≤ n ≤ 14.
CutDecomposition lp_distortion(const FiniteMetric& m, lp::Pricing pricing = lp::Pricing::dantzig);

/// Same LP in exact rational arithmetic (each double entry converted exactly). n ≤ 8.
struct ExactDistortion {
    std::string rational;  ///< optimal c as "p/q"
    double value = 0.0;
};
ExactDistortion lp_distortion_exact(const FiniteMetric& m);

/// Induced metric d_Σ(i, j) = Σ w·δ_E(i, j), row-major n × n.
std::vector<double> induced_metric(const CutDecomposition& dec);

/// One coordinate per positive-weight cut: coord_E(x) = w_E·χ_B(x). Row i belongs to label i.
struct Embedding {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> coords;
};
Embedding embed_from_cuts(const CutDecomposition& dec);
double l1_distance(const Embedding& e, std::size_t i, std::size_t j);

inline double default_chain_pitch() { return 1.0 / (4.0 * 3.14159265358979323846); }

struct BallSampling {
    double radius = 1.0;
    std::optional<double> grid_step;  ///< lattice {(iε, jε, kε²)}; otherwise random
    std::size_t count = 0;            ///< random mode: number of points besides e
    std::uint64_t seed = 0;
    std::size_t chain_length = 0;     ///< appends exp(kτZ), k = 1..chain_length
    double chain_pitch = default_chain_pitch();
};

/// Points of the CC ball of the given radius about e; always contains e first.
std::vector<HPoint> sample_ball(const BallSampling& spec);

struct CollapseRow {
    std::string config;
    std::size_t n = 0;
    double distortion = 1.0;
    std::size_t k = 0;
    double central_ratio = 1.0;     ///< d_Σ(e, exp(kτZ)) / d(e, exp(kτZ))
    double horizontal_ratio_max = 1.0;
};

/// Horizontal cross {e, (±R,0,0), (0,±R,0)} plus the central chain exp(kτZ), k ≤ m, for
/// every arm length R and chain length m with 5 + m ≤ n_max. One row per chain point.
std::vector<CollapseRow> center_collapse_report(const std::vector<double>& arm_lengths, double pitch,
                                                const std::vector<std::size_t>& chain_lengths, std::size_t n_max = 14,
                                                unsigned threads = default_threads());

}  // namespace heis
