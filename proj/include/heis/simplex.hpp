#pragma once

#include <cstddef>
#include <vector>

#include "heis/errors.hpp"

namespace heis::lp {

enum class Pricing {
    dantzig,  ///< most negative reduced cost; falls back to Bland after a degenerate run
    bland,    ///< smallest eligible index throughout
};

template <class T>
struct Tolerance {
    static T pivot() { return T(1e-11); }
    static T cost() { return T(1e-11); }
    static T feasibility() { return T(1e-10); }
};

template <class T>
struct Solution {
    std::vector<T> x;      ///< primal optimum
    std::vector<T> duals;  ///< one per constraint row, ≥ 0
    std::vector<T> reduced_costs;  ///< one per structural column, ≥ 0 at optimality
    T objective{};
    std::size_t iterations = 0;
};

/// Dense tableau primal simplex for
///
///     maximize cᵀx  subject to  A x ≤ b,  x ≥ 0,
///
/// with b ≥ 0 so the slack basis is feasible. A is row-major, rows × cols.
/// Throws NumericError if the problem is unbounded or the iteration cap is hit.
template <class T>
Solution<T> maximize(const std::vector<T>& A, std::size_t rows, std::size_t cols, const std::vector<T>& b,
                     const std::vector<T>& c, Pricing pricing = Pricing::dantzig, std::size_t max_iterations = 200000) {
    require(A.size() == rows * cols && b.size() == rows && c.size() == cols, "lp: dimension mismatch");
    for (const T& bi : b) require(!(bi < T(0)), "lp: right-hand side must be nonnegative");

    const std::size_t width = cols + rows + 1;  // structural, slack, rhs
    std::vector<T> tab((rows + 1) * width, T(0));
    auto at = [&](std::size_t r, std::size_t j) -> T& { return tab[r * width + j]; };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < cols; ++j) at(r, j) = A[r * cols + j];
        at(r, cols + r) = T(1);
        at(r, width - 1) = b[r];
    }
    for (std::size_t j = 0; j < cols; ++j) at(rows, j) = -c[j];
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) basis[r] = cols + r;

    const T piv_tol = Tolerance<T>::pivot();
    const T cost_tol = Tolerance<T>::cost();
    std::size_t degenerate_run = 0;
    Solution<T> out;
    for (;;) {
        if (out.iterations >= max_iterations) throw NumericError("lp: iteration limit reached");
        const bool use_bland = pricing == Pricing::bland || degenerate_run > 50;
        std::size_t enter = width;
        T best = -cost_tol;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            const T& rc = at(rows, j);
            if (rc < best) {
                enter = j;
                if (use_bland) break;
                best = rc;
            }
        }
        if (enter == width) break;

        std::size_t leave = rows;
        T ratio{};
        for (std::size_t r = 0; r < rows; ++r) {
            const T& a = at(r, enter);
            if (!(a > piv_tol)) continue;
            const T q = at(r, width - 1) / a;
            if (leave == rows || q < ratio || (q == ratio && basis[r] < basis[leave])) {
                leave = r;
                ratio = q;
            }
        }
        // Harris pass: among rows whose ratio is within the feasibility tolerance of the
        // minimum, take the largest pivot.
        if (!use_bland && leave < rows && Tolerance<T>::feasibility() > T(0)) {
            T bound{};
            bool first = true;
            for (std::size_t r = 0; r < rows; ++r) {
                const T& a = at(r, enter);
                if (!(a > piv_tol)) continue;
                const T q = (at(r, width - 1) + Tolerance<T>::feasibility()) / a;
                if (first || q < bound) bound = q;
                first = false;
            }
            for (std::size_t r = 0; r < rows; ++r) {
                const T& a = at(r, enter);
                if (!(a > piv_tol) || at(r, width - 1) / a > bound) continue;
                if (a > at(leave, enter)) leave = r;
            }
            ratio = at(leave, width - 1) / at(leave, enter);
        }
        if (leave == rows) throw NumericError("lp: problem is unbounded");
        degenerate_run = (ratio > T(0)) ? 0 : degenerate_run + 1;

        const T p = at(leave, enter);
        for (std::size_t j = 0; j < width; ++j) at(leave, j) /= p;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == leave) continue;
            const T f = at(r, enter);
            if (f == T(0)) continue;
            T* dst = &tab[r * width];
            const T* src = &tab[leave * width];
            for (std::size_t j = 0; j < width; ++j) dst[j] -= f * src[j];
        }
        basis[leave] = enter;
        for (std::size_t r = 0; r < rows; ++r) {
            if (at(r, width - 1) < T(0)) at(r, width - 1) = T(0);
        }
        ++out.iterations;
    }

    out.x.assign(cols, T(0));
    for (std::size_t r = 0; r < rows; ++r) {
        if (basis[r] < cols) out.x[basis[r]] = at(r, width - 1);
    }
    out.duals.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) out.duals[r] = at(rows, cols + r);
    out.reduced_costs.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) out.reduced_costs[j] = at(rows, j);
    out.objective = at(rows, width - 1);
    return out;
}

}  // namespace heis::lp
