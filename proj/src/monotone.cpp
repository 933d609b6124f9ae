#include "heis/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "heis/ccmetric.hpp"
#include "heis/rng.hpp"

namespace heis {
namespace {

constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

const SetNode& SetOracle::node() const { return *node_; }

SetOracle SetOracle::make(SetNode&& node) { return SetOracle(std::make_shared<const SetNode>(std::move(node))); }

SetOracle SetOracle::all() { return make(SetAll{}); }
SetOracle SetOracle::empty() { return make(SetEmpty{}); }
SetOracle SetOracle::halfspace(const HalfSpace& h) { return make(SetHalf{h}); }

SetOracle SetOracle::cc_ball(const HPoint& center, double r) {
    require(r > 0.0, "ball radius must be positive");
    return make(SetCCBall{center, r});
}

SetOracle SetOracle::euclidean_ball(const HPoint& center, double r) {
    require(r > 0.0, "ball radius must be positive");
    return make(SetEuclideanBall{center, r});
}

SetOracle SetOracle::vertical_slab(double angle, double lo, double hi) {
    require(lo < hi, "slab needs lo < hi");
    return make(SetVerticalSlab{angle, lo, hi});
}

SetOracle SetOracle::paraboloid(const std::array<double, 6>& k) { return make(SetParaboloid{k}); }
SetOracle SetOracle::set_union(std::vector<SetOracle> parts) { return make(SetUnion{std::move(parts)}); }
SetOracle SetOracle::intersection(std::vector<SetOracle> parts) { return make(SetIntersection{std::move(parts)}); }
SetOracle SetOracle::complement() const { return make(SetComplement{*this}); }

bool SetOracle::contains(const HPoint& y) const {
    return std::visit(
        overloaded{
            [](const SetAll&) { return true; },
            [](const SetEmpty&) { return false; },
            [&](const SetHalf& s) { return s.h.contains(y); },
            [&](const SetCCBall& s) { return cc_distance(s.center, y) < s.radius; },
            [&](const SetEuclideanBall& s) {
                const double da = y.a - s.center.a, db = y.b - s.center.b, dc = y.c - s.center.c;
                return da * da + db * db + dc * dc < s.radius * s.radius;
            },
            [&](const SetVerticalSlab& s) {
                const double v = y.a * std::cos(s.angle) + y.b * std::sin(s.angle);
                return v > s.lo && v < s.hi;
            },
            [&](const SetParaboloid& s) {
                const auto& k = s.k;
                return y.c < k[0] + k[1] * y.a + k[2] * y.b + k[3] * y.a * y.a + k[4] * y.a * y.b + k[5] * y.b * y.b;
            },
            [&](const SetComplement& s) { return !s.inner.contains(y); },
            [&](const SetUnion& s) {
                return std::any_of(s.parts.begin(), s.parts.end(), [&](const SetOracle& p) { return p.contains(y); });
            },
            [&](const SetIntersection& s) {
                return std::all_of(s.parts.begin(), s.parts.end(), [&](const SetOracle& p) { return p.contains(y); });
            },
        },
        *node_);
}

std::vector<bool> trace_line(const SetOracle& set, const Line& line, std::pair<double, double> window, std::size_t n) {
    require(n >= 2, "trace_line needs at least 2 samples");
    const auto [t0, t1] = window;
    const double dt = (t1 - t0) / static_cast<double>(n);
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = set.contains(line.point(t0 + (static_cast<double>(i) + 0.5) * dt));
    return out;
}

double defect_line(const std::vector<bool>& trace) {
    require(!trace.empty(), "defect_line needs a nonempty trace");
    const std::size_t n = trace.size();
    const std::size_t total = static_cast<std::size_t>(std::count(trace.begin(), trace.end(), true));
    // ones = number of 1s among the first k entries.
    std::size_t ones = 0;
    std::size_t best = n;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0 && trace[k - 1]) ++ones;
        const std::size_t rising = ones + (n - k) - (total - ones);   // 0^k 1^(n−k)
        const std::size_t falling = (k - ones) + (total - ones);     // 1^k 0^(n−k)
        best = std::min({best, rising, falling});
    }
    return static_cast<double>(best) / static_cast<double>(n);
}

DefectReport monotonicity_defect(const SetOracle& set, const Box& window, std::size_t n_lines, std::size_t n_samples,
                                 std::uint64_t seed, unsigned threads) {
    require(n_lines >= 1 && n_samples >= 2, "monotonicity_defect needs positive counts");
    const auto lines = sample_lines(window, n_lines, seed, threads);
    std::vector<double> defects(n_lines, 0.0);
    parallel_for(n_lines, threads, [&](std::size_t i) {
        const auto span = clip_to_window(lines[i], window);
        if (!span) return;
        defects[i] = defect_line(trace_line(set, lines[i], *span, n_samples));
    });

    DefectReport r;
    r.n_lines = n_lines;
    r.n_samples = n_samples;
    r.window = window;
    r.seed = seed;
    const double n = static_cast<double>(n_lines);
    double sum = 0.0, sum2 = 0.0;
    for (double d : defects) {
        sum += d;
        sum2 += d * d;
    }
    r.mean_defect = sum / n;
    r.std_error = n_lines > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0)) / n) : 0.0;
    std::sort(defects.begin(), defects.end());
    const std::array<double, 5> qs{0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t q = 0; q < qs.size(); ++q) {
        r.quantiles[q] = defects[static_cast<std::size_t>(std::lround(qs[q] * (n - 1.0)))];
    }
    return r;
}

namespace {

struct ThresholdFit {
    double errors;  // mismatched sample count
    double offset;
    int side;
};

// Best threshold rule "inside ⇔ side·(s − offset) > 0" for scores s against labels.
ThresholdFit best_threshold(const std::vector<double>& score, const std::vector<bool>& label,
                            std::vector<std::size_t>& order) {
    const std::size_t n = score.size();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return score[i] < score[j]; });
    const std::size_t total_in = static_cast<std::size_t>(std::count(label.begin(), label.end(), true));
    // Cut after the first k sorted samples. Side +1 marks the upper part inside.
    std::size_t in_below = 0;
    ThresholdFit best{static_cast<double>(n) + 1.0, 0.0, 1};
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0 && label[order[k - 1]]) ++in_below;
        if (k > 0 && k < n && score[order[k - 1]] == score[order[k]]) continue;
        const double up = static_cast<double>(in_below + (n - k) - (total_in - in_below));
        const double down = static_cast<double>((k - in_below) + (total_in - in_below));
        double offset;
        if (k == 0) offset = score[order[0]] - 1.0;
        else if (k == n) offset = score[order[n - 1]] + 1.0;
        else offset = 0.5 * (score[order[k - 1]] + score[order[k]]);
        if (up < best.errors) best = {up, offset, 1};
        if (down < best.errors) best = {down, offset, -1};
    }
    return best;
}

// Minimizes f on [lo, hi] by golden-section search; returns (argmin, value).
template <class F>
std::pair<double, double> golden(F f, double lo, double hi, int iters) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

HalfSpaceFit half_space_fit(const SetOracle& set, const Box& window, std::size_t budget, std::uint64_t seed,
                            unsigned threads) {
    require(budget >= 1000, "half_space_fit needs a budget of at least 1000 samples");
    require(!window.empty(), "half_space_fit needs a nonempty window");
    std::vector<HPoint> pts(budget);
    std::vector<bool> label(budget);
    {
        std::vector<char> tmp(budget);
        parallel_for(budget, threads, [&](std::size_t i) {
            rng::Stream s(seed, i);
            pts[i] = {s.uniform(window.a_lo, window.a_hi), s.uniform(window.b_lo, window.b_hi),
                      s.uniform(window.c_lo, window.c_hi)};
            tmp[i] = set.contains(pts[i]) ? 1 : 0;
        });
        for (std::size_t i = 0; i < budget; ++i) label[i] = tmp[i] != 0;
    }
    const double n = static_cast<double>(budget);
    std::vector<double> score(budget);
    std::vector<std::size_t> order(budget);
    rng::Stream search(seed ^ 0x5bd1e995ULL);
    constexpr int restarts = 200;

    // Vertical family: the angle is searched, the offset and side come from the scan.
    auto vertical_cost = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        for (std::size_t i = 0; i < budget; ++i) score[i] = pts[i].a * c + pts[i].b * s;
        return best_threshold(score, label, order);
    };
    double best_phi = 0.0;
    double best_v = n + 1.0;
    for (int r = 0; r < restarts; ++r) {
        const double phi = search.uniform(0.0, pi);
        const double e = vertical_cost(phi).errors;
        if (e < best_v) best_v = e, best_phi = phi;
    }
    for (double width = pi / restarts; width > 1e-6; width *= 0.25) {
        const auto [phi, e] = golden([&](double p) { return vertical_cost(p).errors; }, best_phi - width,
                                     best_phi + width, 30);
        if (e <= best_v) best_v = e, best_phi = phi;
    }
    best_phi = std::fmod(best_phi + 2.0 * pi, pi);
    const ThresholdFit vfit = vertical_cost(best_phi);

    // Horizontal family: the projected center (a, b) is searched, the height from the scan.
    auto horizontal_cost = [&](double a, double b) {
        for (std::size_t i = 0; i < budget; ++i) {
            const double du = pts[i].a - a, dv = pts[i].b - b;
            score[i] = pts[i].c - (0.5 * du * dv + a * dv);
        }
        return best_threshold(score, label, order);
    };
    const double wa = window.a_hi - window.a_lo, wb = window.b_hi - window.b_lo;
    double best_a = 0.0, best_b = 0.0, best_h = n + 1.0;
    for (int r = 0; r < restarts; ++r) {
        const double a = search.uniform(window.a_lo - 0.25 * wa, window.a_hi + 0.25 * wa);
        const double b = search.uniform(window.b_lo - 0.25 * wb, window.b_hi + 0.25 * wb);
        const double e = horizontal_cost(a, b).errors;
        if (e < best_h) best_h = e, best_a = a, best_b = b;
    }
    for (double width = 0.1 * std::max(wa, wb); width > 1e-6; width *= 0.25) {
        for (int pass = 0; pass < 2; ++pass) {
            auto [a, ea] = golden([&](double x) { return horizontal_cost(x, best_b).errors; }, best_a - width,
                                  best_a + width, 30);
            if (ea <= best_h) best_h = ea, best_a = a;
            auto [b, eb] = golden([&](double x) { return horizontal_cost(best_a, x).errors; }, best_b - width,
                                  best_b + width, 30);
            if (eb <= best_h) best_h = eb, best_b = b;
        }
    }
    const ThresholdFit hfit = horizontal_cost(best_a, best_b);

    HalfSpaceFit out;
    out.vertical_fraction = vfit.errors / n;
    out.horizontal_fraction = hfit.errors / n;
    if (out.vertical_fraction <= out.horizontal_fraction) {
        out.halfspace = vertical_halfspace(best_phi, vfit.offset, vfit.side);
        out.fraction = out.vertical_fraction;
    } else {
        out.halfspace = horizontal_halfspace({best_a, best_b, hfit.offset}, hfit.side);
        out.fraction = out.horizontal_fraction;
    }
    return out;
}

GeodesicCheck geodesic_monotone_check(const std::vector<std::pair<std::vector<bool>, double>>& cuts,
                                      const std::vector<double>& positions) {
    const std::size_t n = positions.size();
    for (const auto& [trace, w] : cuts) {
        require(trace.size() == n, "every cut trace must match the positions grid");
        require(w >= 0.0, "cut weights must be nonnegative");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return positions[i] < positions[j]; });

    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (const auto& [trace, w] : cuts) {
                if (trace[order[i]] != trace[order[j]]) s += w;
            }
            d[i * n + j] = s;
        }
    }
    GeodesicCheck out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                out.max_excess = std::max(out.max_excess, d[i * n + j] + d[j * n + k] - d[i * n + k]);
            }
        }
    }
    out.is_geodesic = out.max_excess == 0.0;
    out.all_monotone = true;
    for (const auto& [trace, w] : cuts) {
        if (w <= 0.0 || n == 0) continue;
        std::vector<bool> sorted(n);
        for (std::size_t i = 0; i < n; ++i) sorted[i] = trace[order[i]];
        if (defect_line(sorted) > 0.0) {
            out.all_monotone = false;
            break;
        }
    }
    return out;
}

}  // namespace heis
