#include "heis/distortion.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "heis/ccmetric.hpp"
#include "heis/cuts.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

namespace lp {
template <>
struct Tolerance<mpq_class> {
    static mpq_class pivot() { return 0; }
    static mpq_class cost() { return 0; }
    static mpq_class feasibility() { return 0; }
};
}  // namespace lp

namespace {

struct PairIndex {
    std::size_t i, j;
};

std::vector<PairIndex> all_pairs(std::size_t n) {
    std::vector<PairIndex> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j});
    }
    return out;
}

inline bool separates(std::uint32_t mask, std::size_t i, std::size_t j) { return ((mask >> i) & 1U) != ((mask >> j) & 1U); }

// Cut k (1-based) puts labels 1..n−1 on side B according to the bits of k.
inline std::uint32_t cut_mask(std::size_t k) { return static_cast<std::uint32_t>(k << 1); }

// Normalized LP: maximize s subject to δy ≤ d and s·d − δy ≤ 0, y, s ≥ 0. Its optimum is
// 1/c for the distortion c, attained at y/s.
template <class T>
void build_lp(const std::vector<T>& dist, std::size_t n, std::vector<T>& A, std::vector<T>& b, std::vector<T>& c) {
    const auto pairs = all_pairs(n);
    const std::size_t np = pairs.size();
    const std::size_t ncut = cut_count(n);
    const std::size_t cols = ncut + 1;
    A.assign(2 * np * cols, T(0));
    b.assign(2 * np, T(0));
    c.assign(cols, T(0));
    c[ncut] = T(1);
    for (std::size_t p = 0; p < np; ++p) {
        const T& dp = dist[p];
        for (std::size_t k = 0; k < ncut; ++k) {
            if (separates(cut_mask(k + 1), pairs[p].i, pairs[p].j)) {
                A[p * cols + k] = T(1);
                A[(np + p) * cols + k] = T(-1);
            }
        }
        A[(np + p) * cols + ncut] = dp;
        b[p] = dp;
    }
}

}  // namespace

FiniteMetric FiniteMetric::from_points(const std::vector<HPoint>& pts, std::vector<std::string> labels) {
    const std::size_t n = pts.size();
    if (labels.empty()) {
        for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    }
    require(labels.size() == n, "label count must match point count");
    FiniteMetric m{std::move(labels), std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = cc_distance(pts[i], pts[j]);
            m.d[i * n + j] = v;
            m.d[j * n + i] = v;
        }
    }
    return m;
}

FiniteMetric FiniteMetric::scaled(double lambda) const {
    FiniteMetric out = *this;
    for (double& v : out.d) v *= lambda;
    return out;
}

FiniteMetric FiniteMetric::restricted(const std::vector<std::size_t>& keep) const {
    FiniteMetric out;
    const std::size_t n = size();
    for (std::size_t i : keep) out.labels.push_back(labels.at(i));
    for (std::size_t i : keep) {
        for (std::size_t j : keep) out.d.push_back(d[i * n + j]);
    }
    return out;
}

void validate(const FiniteMetric& m, double tol) {
    const std::size_t n = m.size();
    require(m.d.size() == n * n, "metric matrix must be n x n");
    double scale = 0.0;
    for (double v : m.d) {
        require(std::isfinite(v) && v >= 0.0, "metric entries must be finite and nonnegative");
        scale = std::max(scale, v);
    }
    for (std::size_t i = 0; i < n; ++i) {
        require(m(i, i) == 0.0, "metric diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            require(std::abs(m(i, j) - m(j, i)) <= tol * scale, "metric must be symmetric");
            for (std::size_t k = 0; k < n; ++k) {
                require(m(i, k) <= m(i, j) + m(j, k) + tol * scale, "metric violates the triangle inequality");
            }
        }
    }
}

double Certificate::kkt() const { return std::max({primal_residual, dual_residual, complementarity, duality_gap}); }

namespace {

CutDecomposition solve_distortion(const FiniteMetric& m, lp::Pricing pricing) {
    const std::size_t n = m.size();
    const auto pairs = all_pairs(n);
    const std::size_t np = pairs.size();
    double dmax = 0.0;
    for (const auto& p : pairs) dmax = std::max(dmax, m(p.i, p.j));
    require(dmax > 0.0, "metric must have a positive entry");
    std::vector<double> dn(np);
    for (std::size_t p = 0; p < np; ++p) dn[p] = m(pairs[p].i, pairs[p].j) / dmax;

    std::vector<double> A, b, c;
    build_lp(dn, n, A, b, c);
    const std::size_t ncut = cut_count(n);
    const auto sol = lp::maximize(A, 2 * np, ncut + 1, b, c, pricing);
    const double s = sol.x[ncut];
    if (!(s > 0.0)) throw NumericError("lp_distortion: solver returned a degenerate optimum");

    CutDecomposition out;
    out.labels = m.labels;
    out.distortion = std::max(1.0, 1.0 / s);
    for (std::size_t k = 0; k < ncut; ++k) {
        if (sol.x[k] > 0.0) out.cuts.push_back({cut_mask(k + 1), sol.x[k] / s * dmax});
    }

    // Certificate on the normalized problem, recomputed from the primal point and duals.
    Certificate& cert = out.certificate;
    cert.iterations = sol.iterations;
    std::vector<double> dy(np, 0.0);
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t k = 0; k < ncut; ++k) {
            if (sol.x[k] != 0.0 && separates(cut_mask(k + 1), pairs[p].i, pairs[p].j)) dy[p] += sol.x[k];
        }
    }
    const double* u = sol.duals.data();
    const double* v = sol.duals.data() + np;
    double comp = 0.0, dual_obj = 0.0, dv = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        const double slack1 = dn[p] - dy[p];
        const double slack2 = dy[p] - s * dn[p];
        cert.primal_residual = std::max({cert.primal_residual, -slack1, -slack2});
        cert.dual_residual = std::max({cert.dual_residual, -u[p], -v[p]});
        comp += std::abs(u[p] * slack1) + std::abs(v[p] * slack2);
        dual_obj += dn[p] * u[p];
        dv += dn[p] * v[p];
    }
    for (std::size_t k = 0; k < ncut; ++k) {
        double col = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            if (separates(cut_mask(k + 1), pairs[p].i, pairs[p].j)) col += u[p] - v[p];
        }
        cert.dual_residual = std::max(cert.dual_residual, -col);
        cert.primal_residual = std::max(cert.primal_residual, -sol.x[k]);
        comp += std::abs(sol.x[k] * col);
    }
    cert.dual_residual = std::max(cert.dual_residual, 1.0 - dv);
    comp += std::abs(s * (dv - 1.0));
    cert.complementarity = comp;
    cert.duality_gap = std::abs(s - dual_obj);
    return out;
}

}  // namespace

CutDecomposition lp_distortion(const FiniteMetric& m, lp::Pricing pricing) {
    const std::size_t n = m.size();
    if (n < 2 || n > 14) throw PreconditionError("lp_distortion supports 2 <= n <= 14 points");
    validate(m);
    CutDecomposition out = solve_distortion(m, pricing);
    if (out.certificate.kkt() > 1e-9 && pricing != lp::Pricing::bland) {
        CutDecomposition retry = solve_distortion(m, lp::Pricing::bland);
        if (retry.certificate.kkt() < out.certificate.kkt()) out = std::move(retry);
    }
    return out;
}

ExactDistortion lp_distortion_exact(const FiniteMetric& m) {
    const std::size_t n = m.size();
    if (n < 2 || n > 8) throw PreconditionError("lp_distortion_exact supports 2 <= n <= 8 points");
    validate(m);
    const auto pairs = all_pairs(n);
    std::vector<mpq_class> dq;
    for (const auto& p : pairs) dq.emplace_back(m(p.i, p.j));
    std::vector<mpq_class> A, b, c;
    build_lp(dq, n, A, b, c);
    const std::size_t ncut = cut_count(n);
    const auto sol = lp::maximize(A, 2 * pairs.size(), ncut + 1, b, c, lp::Pricing::bland);
    if (sgn(sol.objective) <= 0) throw NumericError("lp_distortion_exact: degenerate optimum");
    mpq_class dist = 1 / sol.objective;
    dist.canonicalize();
    return {dist.get_str(), dist.get_d()};
}

std::vector<double> induced_metric(const CutDecomposition& dec) {
    const std::size_t n = dec.labels.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& cut : dec.cuts) {
                if (separates(cut.mask, i, j)) out[i * n + j] += cut.weight;
            }
        }
    }
    return out;
}

Embedding embed_from_cuts(const CutDecomposition& dec) {
    Embedding e;
    e.labels = dec.labels;
    e.coords.assign(dec.labels.size(), {});
    for (std::size_t i = 0; i < dec.labels.size(); ++i) {
        for (const auto& cut : dec.cuts) {
            if (cut.weight <= 0.0) continue;
            e.coords[i].push_back(((cut.mask >> i) & 1U) ? cut.weight : 0.0);
        }
    }
    return e;
}

double l1_distance(const Embedding& e, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.coords[i].size(); ++k) s += std::abs(e.coords[i][k] - e.coords[j][k]);
    return s;
}

std::vector<HPoint> sample_ball(const BallSampling& spec) {
    require(spec.radius > 0.0, "ball radius must be positive");
    const double R = spec.radius;
    const double reach = R * (1.0 + 1e-12);
    std::vector<HPoint> pts{identity};
    // |c| ≤ R²/(4π) + R²/4 < R² on the ball.
    if (spec.grid_step) {
        const double eps = *spec.grid_step;
        require(eps > 0.0, "grid step must be positive");
        const auto I = static_cast<long>(std::floor(R / eps));
        const auto K = static_cast<long>(std::floor(R * R / (eps * eps)));
        for (long i = -I; i <= I; ++i) {
            for (long j = -I; j <= I; ++j) {
                for (long k = -K; k <= K; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    const HPoint p{i * eps, j * eps, k * eps * eps};
                    if (cc_distance(identity, p) <= reach) pts.push_back(p);
                }
            }
        }
    } else if (spec.count > 0) {
        rng::Stream s(spec.seed);
        std::size_t tries = 0;
        while (pts.size() < spec.count + 1) {
            if (++tries > 1000 * (spec.count + 10)) throw NumericError("sample_ball: rejection sampling stalled");
            const HPoint p{s.uniform(-R, R), s.uniform(-R, R), s.uniform(-R * R, R * R)};
            if (cc_distance(identity, p) <= reach) pts.push_back(p);
        }
    }
    for (std::size_t k = 1; k <= spec.chain_length; ++k) {
        const HPoint q = exp(TangentVec{0.0, 0.0, static_cast<double>(k) * spec.chain_pitch});
        if (std::find(pts.begin(), pts.end(), q) == pts.end()) pts.push_back(q);
    }
    if (pts.empty()) throw PreconditionError("sample_ball: no points");
    return pts;
}

std::vector<CollapseRow> center_collapse_report(const std::vector<double>& arm_lengths, double pitch,
                                                const std::vector<std::size_t>& chain_lengths, std::size_t n_max,
                                                unsigned threads) {
    require(pitch > 0.0, "chain pitch must be positive");
    require(n_max <= 14, "n_max must be at most 14");
    struct Config {
        double arm;
        std::size_t chain;
    };
    std::vector<Config> configs;
    for (double R : arm_lengths) {
        require(R > 0.0, "arm length must be positive");
        for (std::size_t m : chain_lengths) {
            if (5 + m <= n_max) configs.push_back({R, m});
        }
    }
    std::vector<std::vector<CollapseRow>> rows(configs.size());
    parallel_for(configs.size(), threads, [&](std::size_t idx) {
        const auto [R, m] = configs[idx];
        std::vector<HPoint> pts{identity, {R, 0, 0}, {-R, 0, 0}, {0, R, 0}, {0, -R, 0}};
        for (std::size_t k = 1; k <= m; ++k) pts.push_back(exp(TangentVec{0.0, 0.0, static_cast<double>(k) * pitch}));
        const FiniteMetric metric = FiniteMetric::from_points(pts);
        const CutDecomposition dec = lp_distortion(metric);
        const auto induced = induced_metric(dec);
        const std::size_t n = pts.size();
        double hmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (is_horizontal_pair(pts[i], pts[j]) && project(pts[i]) != project(pts[j])) {
                    hmax = std::max(hmax, induced[i * n + j] / metric(i, j));
                }
            }
        }
        char name[64];
        std::snprintf(name, sizeof name, "R=%g,m=%zu", R, m);
        for (std::size_t k = 1; k <= m; ++k) {
            const std::size_t at = 4 + k;
            rows[idx].push_back({name, n, dec.distortion, k, induced[at] / metric(0, at), hmax});
        }
    });
    std::vector<CollapseRow> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

}  // namespace heis
