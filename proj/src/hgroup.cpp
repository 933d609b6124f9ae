#include "heis/hgroup.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace heis {

Polyline2D::Polyline2D(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    require(vertices_.size() >= 2, "polyline needs at least 2 vertices");
    for (const auto& v : vertices_) {
        require(std::isfinite(v.x) && std::isfinite(v.y), "polyline vertex is not finite");
    }
}

HPoint dilate(const HPoint& p, double lambda) {
    require(lambda > 0.0, "dilation factor must be positive");
    return {lambda * p.a, lambda * p.b, lambda * lambda * p.c};
}

double shoelace_area(const std::vector<Vec2>& vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) return 0.0;
    // Translate to the first vertex to limit cancellation.
    const Vec2 o = vertices.front();
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        twice += cross(vertices[i] - o, vertices[i + 1] - o);
    }
    return 0.5 * twice;
}

Lift lift_polyline(const HPoint& start, const Polyline2D& path) {
    const auto& vs = path.vertices();
    const Vec2 gap = project(start) - vs.front();
    const double scale = std::max({1.0, std::abs(vs.front().x), std::abs(vs.front().y)});
    if (!(std::max(std::abs(gap.x), std::abs(gap.y)) <= 1e-12 * scale)) {
        throw PreconditionError("lift start does not project to the first vertex of the path");
    }
    Lift out;
    out.heights.reserve(vs.size());
    HPoint cur{vs.front().x, vs.front().y, start.c};
    out.heights.push_back(cur.c);
    for (std::size_t i = 1; i < vs.size(); ++i) {
        const Vec2 step = vs[i] - vs[i - 1];
        cur = mul(cur, exp(TangentVec{step.x, step.y, 0.0}));
        // Keep the projection pinned to the vertex; the group law only accumulates rounding.
        cur.a = vs[i].x;
        cur.b = vs[i].y;
        out.heights.push_back(cur.c);
    }
    out.endpoint = cur;
    return out;
}

}  // namespace heis
