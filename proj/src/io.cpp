#include "heis/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace heis::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SchemaError(path + ": " + msg); }

std::string sub(const std::string& path, const char* key) { return path + "." + key; }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(sub(path, key), "missing field");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double number_at(const json& j, const char* key, const std::string& path) {
    return number(field(j, key, path), sub(path, key));
}

std::uint64_t unsigned_at(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_unsigned()) fail(sub(path, key), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::uint64_t unsigned_or(const json& j, const char* key, std::uint64_t fallback, const std::string& path) {
    return j.contains(key) ? unsigned_at(j, key, path) : fallback;
}

int side_or(const json& j, const std::string& path) {
    if (!j.contains("side")) return 1;
    const json& v = j["side"];
    if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) fail(sub(path, "side"), "expected 1 or -1");
    return v.get<int>();
}

bool bool_or(const json& j, const char* key, bool fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) fail(sub(path, key), "expected a boolean");
    return j[key].get<bool>();
}

std::string string_at(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_string()) fail(sub(path, key), "expected a string");
    return v.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

// JSON has no infinities; they are written as strings.
json num(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) return nullptr;
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json parse(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset → line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SchemaError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

json to_json(const HPoint& p) { return json::array({num(p.a), num(p.b), num(p.c)}); }

HPoint point_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected [a, b, c]");
    return {number(j[0], item(path, 0)), number(j[1], item(path, 1)), number(j[2], item(path, 2))};
}

Vec2 vec2_from(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return {number(j[0], item(path, 0)), number(j[1], item(path, 1))};
}

json to_json(const std::vector<Vec2>& vertices) {
    json out = json::array();
    for (const auto& v : vertices) out.push_back(json::array({num(v.x), num(v.y)}));
    return out;
}

Polyline2D polyline_from(const json& j, const std::string& path) {
    array(j, path);
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(vec2_from(j[i], item(path, i)));
    if (v.size() < 2) fail(path, "a polyline needs at least 2 vertices");
    return Polyline2D(std::move(v));
}

json to_json(const Box& b) {
    return json::array({num(b.a_lo), num(b.a_hi), num(b.b_lo), num(b.b_hi), num(b.c_lo), num(b.c_hi)});
}

Box box_from(const json& j, const std::string& path) {
    if (j.is_number()) {
        const double h = number(j, path);
        if (!(h > 0.0)) fail(path, "window half-width must be positive");
        return Box::cube(h);
    }
    if (!j.is_array() || j.size() != 6) fail(path, "expected [a_lo, a_hi, b_lo, b_hi, c_lo, c_hi]");
    double v[6];
    for (std::size_t i = 0; i < 6; ++i) v[i] = number(j[i], item(path, i));
    Box b{v[0], v[1], v[2], v[3], v[4], v[5]};
    if (b.empty()) fail(path, "window must have lo < hi on every axis");
    return b;
}

json to_json(const Line& l) { return {{"base", to_json(l.base)}, {"angle", num(l.angle)}}; }

Line line_from_json(const json& j, const std::string& path) {
    return line_from(point_from(field(j, "base", path), sub(path, "base")), number_at(j, "angle", path));
}

json to_json(const Geodesic& g) {
    json s = json::array();
    for (const auto& p : g.samples) s.push_back(to_json(p));
    return {{"samples", s}, {"length", num(g.length)}, {"theta", num(g.theta)}};
}

Geodesic geodesic_from(const json& j, const std::string& path) {
    Geodesic g;
    const std::string sp = sub(path, "samples");
    const json& s = array(field(j, "samples", path), sp);
    for (std::size_t i = 0; i < s.size(); ++i) g.samples.push_back(point_from(s[i], item(sp, i)));
    g.length = number_at(j, "length", path);
    g.theta = number_at(j, "theta", path);
    return g;
}

json to_json(const Hyperbola& h) {
    return {{"matrix", json::array({json::array({num(h.m00), num(h.m01)}), json::array({num(h.m10), num(h.m11)})})},
            {"origin", json::array({num(h.origin.x), num(h.origin.y)})},
            {"C", num(h.C)}};
}

json to_json(const HalfSpace& h) {
    if (const auto* v = std::get_if<VerticalHalfSpace>(&h.kind)) {
        return {{"kind", "vertical"}, {"angle", num(v->angle)}, {"offset", num(v->offset)}, {"side", v->side}};
    }
    const auto& hz = std::get<HorizontalHalfSpace>(h.kind);
    return {{"kind", "horizontal"}, {"center", to_json(hz.center)}, {"side", hz.side}};
}

HalfSpace halfspace_from(const json& j, const std::string& path) {
    const std::string kind = string_at(j, "kind", path);
    if (kind == "vertical") return vertical_halfspace(number_at(j, "angle", path), number_at(j, "offset", path), side_or(j, path));
    if (kind == "horizontal") return horizontal_halfspace(point_from(field(j, "center", path), sub(path, "center")), side_or(j, path));
    fail(sub(path, "kind"), "expected \"vertical\" or \"horizontal\"");
}

json to_json(const DensitySpec& d) {
    json p = json::object();
    for (const auto& [k, v] : d.params) p[k] = num(v);
    return {{"name", d.name}, {"params", p}};
}

DensitySpec density_from(const json& j, const std::string& path) {
    DensitySpec d;
    d.name = string_at(j, "name", path);
    if (j.contains("params")) {
        const std::string pp = sub(path, "params");
        if (!j["params"].is_object()) fail(pp, "expected an object");
        for (const auto& [k, v] : j["params"].items()) d.params[k] = number(v, pp + "." + k);
    }
    return d;
}

json to_json(const CutMeasure& m) {
    if (const auto* f = std::get_if<FiniteAtomic>(&m)) {
        json atoms = json::array();
        for (const auto& [h, w] : f->atoms) atoms.push_back({{"halfspace", to_json(h)}, {"weight", num(w)}});
        return {{"type", "finite"}, {"signed", f->is_signed}, {"atoms", atoms}};
    }
    if (const auto* v = std::get_if<VerticalInvariant>(&m)) {
        json atoms = json::array();
        for (const auto& [a, w] : v->atoms) atoms.push_back({{"angle", num(a)}, {"mass", num(w)}});
        json out = {{"type", "vertical_invariant"}, {"signed", v->is_signed}, {"atoms", atoms},
                    {"quadrature_order", v->quadrature_order}};
        if (v->density) out["density"] = to_json(*v->density);
        return out;
    }
    const auto& a = std::get<ACHorizontal>(m);
    return {{"type", "ac_horizontal"}, {"density", to_json(a.density)}, {"window", to_json(a.window)},
            {"samples", a.samples}, {"strata", a.strata}, {"seed", a.seed}};
}

CutMeasure measure_from(const json& j, const std::string& path) {
    const std::string type = string_at(j, "type", path);
    CutMeasure out;
    if (type == "finite") {
        FiniteAtomic f;
        f.is_signed = bool_or(j, "signed", false, path);
        const std::string ap = sub(path, "atoms");
        const json& atoms = array(field(j, "atoms", path), ap);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string p = item(ap, i);
            f.atoms.emplace_back(halfspace_from(field(atoms[i], "halfspace", p), sub(p, "halfspace")),
                                 number_at(atoms[i], "weight", p));
        }
        out = std::move(f);
    } else if (type == "vertical_invariant") {
        VerticalInvariant v;
        v.is_signed = bool_or(j, "signed", false, path);
        if (j.contains("atoms")) {
            const std::string ap = sub(path, "atoms");
            const json& atoms = array(j["atoms"], ap);
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                const std::string p = item(ap, i);
                v.atoms.emplace_back(number_at(atoms[i], "angle", p), number_at(atoms[i], "mass", p));
            }
        }
        if (j.contains("density")) v.density = density_from(j["density"], sub(path, "density"));
        v.quadrature_order = static_cast<int>(unsigned_or(j, "quadrature_order", 64, path));
        out = std::move(v);
    } else if (type == "ac_horizontal") {
        ACHorizontal a;
        a.density = density_from(field(j, "density", path), sub(path, "density"));
        a.window = box_from(field(j, "window", path), sub(path, "window"));
        a.samples = unsigned_or(j, "samples", a.samples, path);
        a.strata = unsigned_or(j, "strata", a.strata, path);
        a.seed = unsigned_or(j, "seed", 0, path);
        out = std::move(a);
    } else {
        fail(sub(path, "type"), "expected \"finite\", \"vertical_invariant\" or \"ac_horizontal\"");
    }
    try {
        validate(out);
    } catch (const PreconditionError& e) {
        fail(path, e.what());
    }
    return out;
}

json to_json(const SetOracle& s) {
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SetAll>) {
                return {{"op", "all"}};
            } else if constexpr (std::is_same_v<T, SetEmpty>) {
                return {{"op", "empty"}};
            } else if constexpr (std::is_same_v<T, SetHalf>) {
                return {{"op", "halfspace"}, {"halfspace", to_json(n.h)}};
            } else if constexpr (std::is_same_v<T, SetCCBall>) {
                return {{"op", "cc_ball"}, {"center", to_json(n.center)}, {"radius", num(n.radius)}};
            } else if constexpr (std::is_same_v<T, SetEuclideanBall>) {
                return {{"op", "euclidean_ball"}, {"center", to_json(n.center)}, {"radius", num(n.radius)}};
            } else if constexpr (std::is_same_v<T, SetVerticalSlab>) {
                return {{"op", "vertical_slab"}, {"angle", num(n.angle)}, {"lo", num(n.lo)}, {"hi", num(n.hi)}};
            } else if constexpr (std::is_same_v<T, SetParaboloid>) {
                json k = json::array();
                for (double v : n.k) k.push_back(num(v));
                return {{"op", "paraboloid"}, {"coefficients", k}};
            } else if constexpr (std::is_same_v<T, SetComplement>) {
                return {{"op", "complement"}, {"of", to_json(n.inner)}};
            } else {
                json parts = json::array();
                for (const auto& p : n.parts) parts.push_back(to_json(p));
                return {{"op", std::is_same_v<T, SetUnion> ? "union" : "intersection"}, {"parts", parts}};
            }
        },
        s.node());
}

SetOracle set_from(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    if (!j.contains("op")) {
        if (j.contains("kind")) return SetOracle::halfspace(halfspace_from(j, path));
        if (j.contains("halfspace")) return SetOracle::halfspace(halfspace_from(j["halfspace"], sub(path, "halfspace")));
        fail(sub(path, "op"), "missing field");
    }
    const std::string op = string_at(j, "op", path);
    try {
        if (op == "all") return SetOracle::all();
        if (op == "empty") return SetOracle::empty();
        if (op == "halfspace") return SetOracle::halfspace(halfspace_from(field(j, "halfspace", path), sub(path, "halfspace")));
        if (op == "cc_ball" || op == "euclidean_ball") {
            const HPoint c = point_from(field(j, "center", path), sub(path, "center"));
            const double r = number_at(j, "radius", path);
            return op == "cc_ball" ? SetOracle::cc_ball(c, r) : SetOracle::euclidean_ball(c, r);
        }
        if (op == "vertical_slab") {
            return SetOracle::vertical_slab(number_at(j, "angle", path), number_at(j, "lo", path), number_at(j, "hi", path));
        }
        if (op == "paraboloid") {
            const std::string kp = sub(path, "coefficients");
            const json& k = array(field(j, "coefficients", path), kp);
            if (k.size() != 6) fail(kp, "expected 6 coefficients");
            std::array<double, 6> c{};
            for (std::size_t i = 0; i < 6; ++i) c[i] = number(k[i], item(kp, i));
            return SetOracle::paraboloid(c);
        }
        if (op == "complement") return set_from(field(j, "of", path), sub(path, "of")).complement();
        if (op == "union" || op == "intersection") {
            const std::string pp = sub(path, "parts");
            const json& parts = array(field(j, "parts", path), pp);
            std::vector<SetOracle> v;
            for (std::size_t i = 0; i < parts.size(); ++i) v.push_back(set_from(parts[i], item(pp, i)));
            return op == "union" ? SetOracle::set_union(std::move(v)) : SetOracle::intersection(std::move(v));
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const PreconditionError& e) {
        fail(path, e.what());
    }
    fail(sub(path, "op"), "unknown set primitive \"" + op + "\"");
}

json to_json(const DefectReport& r) {
    json q = json::array();
    for (double v : r.quantiles) q.push_back(num(v));
    return {{"mean_defect", num(r.mean_defect)}, {"std_error", num(r.std_error)}, {"quantiles", q},
            {"n_lines", r.n_lines}, {"n_samples", r.n_samples}, {"window", to_json(r.window)}, {"seed", r.seed}};
}

DefectReport defect_report_from(const json& j, const std::string& path) {
    DefectReport r;
    r.mean_defect = number_at(j, "mean_defect", path);
    r.std_error = number_at(j, "std_error", path);
    const std::string qp = sub(path, "quantiles");
    const json& q = array(field(j, "quantiles", path), qp);
    if (q.size() != 5) fail(qp, "expected 5 quantiles");
    for (std::size_t i = 0; i < 5; ++i) r.quantiles[i] = number(q[i], item(qp, i));
    r.n_lines = unsigned_at(j, "n_lines", path);
    r.n_samples = unsigned_at(j, "n_samples", path);
    r.window = box_from(field(j, "window", path), sub(path, "window"));
    r.seed = unsigned_at(j, "seed", path);
    return r;
}

json to_json(const HalfSpaceFit& f) {
    return {{"halfspace", to_json(f.halfspace)}, {"fraction", num(f.fraction)},
            {"vertical_fraction", num(f.vertical_fraction)}, {"horizontal_fraction", num(f.horizontal_fraction)}};
}

json to_json(const FiniteMetric& m) {
    const std::size_t n = m.size();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) row.push_back(num(m(i, k)));
        rows.push_back(row);
    }
    return {{"labels", m.labels}, {"matrix", rows}};
}

namespace {

std::vector<std::string> labels_from(const json& j, std::size_t n, const std::string& path) {
    std::vector<std::string> labels;
    if (!j.contains("labels")) return labels;
    const std::string lp = sub(path, "labels");
    const json& l = array(j["labels"], lp);
    if (l.size() != n) fail(lp, "expected " + std::to_string(n) + " labels");
    for (std::size_t i = 0; i < n; ++i) {
        if (!l[i].is_string()) fail(item(lp, i), "expected a string");
        labels.push_back(l[i].get<std::string>());
    }
    return labels;
}

}  // namespace

FiniteMetric metric_from(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    FiniteMetric m;
    if (j.contains("points")) {
        const std::string pp = sub(path, "points");
        const json& pts = array(j["points"], pp);
        std::vector<HPoint> p;
        for (std::size_t i = 0; i < pts.size(); ++i) p.push_back(point_from(pts[i], item(pp, i)));
        m = FiniteMetric::from_points(p, labels_from(j, p.size(), path));
    } else {
        const std::string mp = sub(path, "matrix");
        const json& rows = array(field(j, "matrix", path), mp);
        const std::size_t n = rows.size();
        m.labels = labels_from(j, n, path);
        if (m.labels.empty()) {
            for (std::size_t i = 0; i < n; ++i) m.labels.push_back("p" + std::to_string(i));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::string rp = item(mp, i);
            const json& row = array(rows[i], rp);
            if (row.size() != n) fail(rp, "expected " + std::to_string(n) + " entries");
            for (std::size_t k = 0; k < n; ++k) m.d.push_back(number(row[k], item(rp, k)));
        }
    }
    try {
        validate(m);
    } catch (const PreconditionError& e) {
        fail(path, e.what());
    }
    return m;
}

std::string mask_string(std::uint32_t mask, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) s[i] = '1';
    }
    return s;
}

json to_json(const CutDecomposition& d) {
    json cuts = json::array();
    for (const auto& c : d.cuts) cuts.push_back({{"mask", mask_string(c.mask, d.labels.size())}, {"weight", num(c.weight)}});
    const auto& k = d.certificate;
    return {{"labels", d.labels},
            {"distortion", num(d.distortion)},
            {"cuts", cuts},
            {"certificate",
             {{"primal_residual", num(k.primal_residual)},
              {"dual_residual", num(k.dual_residual)},
              {"complementarity", num(k.complementarity)},
              {"duality_gap", num(k.duality_gap)},
              {"iterations", k.iterations}}}};
}

CutDecomposition decomposition_from(const json& j, const std::string& path) {
    CutDecomposition d;
    const std::string lp = sub(path, "labels");
    const json& labels = array(field(j, "labels", path), lp);
    if (labels.size() < 2 || labels.size() > 32) fail(lp, "expected 2 to 32 labels");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].is_string()) fail(item(lp, i), "expected a string");
        d.labels.push_back(labels[i].get<std::string>());
    }
    d.distortion = number_at(j, "distortion", path);
    const std::string cp = sub(path, "cuts");
    const json& cuts = array(field(j, "cuts", path), cp);
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const std::string p = item(cp, i);
        const std::string s = string_at(cuts[i], "mask", p);
        if (s.size() != d.labels.size() || s.find_first_not_of("01") != std::string::npos) {
            fail(sub(p, "mask"), "expected a 0/1 string with one character per label");
        }
        std::uint32_t mask = 0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (s[b] == '1') mask |= 1U << b;
        }
        const double w = number_at(cuts[i], "weight", p);
        if (w < 0.0) fail(sub(p, "weight"), "weights must be nonnegative");
        d.cuts.push_back({mask, w});
    }
    return d;
}

json to_json(const Embedding& e) {
    json rows = json::array();
    for (const auto& r : e.coords) {
        json row = json::array();
        for (double v : r) row.push_back(num(v));
        rows.push_back(row);
    }
    return {{"labels", e.labels}, {"coordinates", rows}};
}

}  // namespace heis::io
