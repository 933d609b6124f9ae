#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heis/hgroup.hpp"

namespace heis {

/// Carnot–Carathéodory distance for the metric in which X, Y are orthonormal.
///
/// Length-minimizing curves project to circular arcs (or chords). With g = p⁻¹q, chord
/// length ℓ = |π(g)| and central part z of g, the arc of central angle θ satisfies
/// ℓ²(θ − sin θ) / (8 sin²(θ/2)) = |z| and the distance is ℓθ / (2 sin(θ/2)).
double cc_distance(const HPoint& p, const HPoint& q);

/// Solution of the arc equation for a given chord length and enclosed area.
struct ArcSolution {
    double theta = 0.0;     ///< central angle in [0, 2π]
    double length = 0.0;    ///< arc length (the CC distance)
    double residual = 0.0;  ///< |area(θ) − |area|| at the returned θ
};

/// Arc whose chord has length `chord` and which encloses signed `area` with it.
ArcSolution solve_arc(double chord, double area);

struct Geodesic {
    std::vector<HPoint> samples;
    double length = 0.0;
    double theta = 0.0;
};

/// n ≥ 2 equally spaced (in arc length) samples of a minimizing geodesic from p to q.
Geodesic cc_geodesic(const HPoint& p, const HPoint& q, std::size_t n);

/// Window bounding the lattice states of the oracle search, which always starts at e.
inline Box default_oracle_window() { return {-4.0, 4.0, -4.0, 4.0, -8.0, 8.0}; }

/// Lattice approximation of (ℍ, d) used as an independent check of cc_distance.
///
/// Vertices are states (iε, jε, k·ε²/2). An edge applies the horizontal move exp(mε, nε, 0)
/// for every primitive (m, n) with |m|, |n| ≤ 3 and is weighted by its Euclidean length.
/// Every move maps the lattice to itself, so the graph is exact and each path length is the
/// CC length of a genuine horizontal path.
///
/// Construction runs Dijkstra from e over all states within graph distance `radius`
/// (states provably farther away, by the isoperimetric inequality, are never stored). The
/// graph is a Cayley graph, so d(e, t) = min over tabulated m of T[m] + T[m⁻¹t], which is
/// exact whenever d(e, t) ≤ 2·radius − (longest edge).
class GridOracle {
public:
    GridOracle(double eps, double radius, const Box& window = default_oracle_window());

    /// Graph distance from p to q, using the lattice point nearest to p⁻¹q.
    /// Throws PreconditionError if p⁻¹q is outside the window and NumericError if the
    /// table radius is too small to certify the value.
    double distance(const HPoint& p, const HPoint& q) const;

    double eps() const { return eps_; }
    double radius() const { return radius_; }
    /// Largest distance this table certifies.
    double reach() const { return 2.0 * radius_ - max_edge_; }
    std::size_t states() const { return dist_.size(); }

private:
    struct Column {
        std::int64_t k_lo = 0;
        std::int64_t count = 0;
        std::size_t offset = 0;
    };

    const float* lookup(std::int64_t i, std::int64_t j, std::int64_t k) const;
    float* lookup(std::int64_t i, std::int64_t j, std::int64_t k);

    double eps_;
    double radius_;
    double max_edge_;
    Box window_;
    std::int64_t half_width_ = 0;
    std::vector<Column> columns_;
    std::vector<float> dist_;
};

/// One-shot oracle: grows the table radius until the value is certified.
double grid_oracle_distance(const HPoint& p, const HPoint& q, double eps,
                            const Box& window = default_oracle_window());

}  // namespace heis
