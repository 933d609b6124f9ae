#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "heis/ccmetric.hpp"
#include "heis/cuts.hpp"
#include "heis/distortion.hpp"
#include "heis/errors.hpp"
#include "heis/lines.hpp"
#include "heis/monotone.hpp"

namespace heis::io {

using json = nlohmann::json;

/// Malformed input; the message starts with the offending field path, e.g. "$.atoms[2].weight".
class SchemaError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Parses JSON text, reporting the line and column of a syntax error.
json parse(const std::string& text, const std::string& origin = "input");
json read_file(const std::string& path);

json to_json(const HPoint& p);
HPoint point_from(const json& j, const std::string& path = "$");
json to_json(const std::vector<Vec2>& vertices);
Polyline2D polyline_from(const json& j, const std::string& path = "$");
Vec2 vec2_from(const json& j, const std::string& path = "$");

/// [a_lo, a_hi, b_lo, b_hi, c_lo, c_hi]
json to_json(const Box& b);
Box box_from(const json& j, const std::string& path = "$");

json to_json(const Line& l);
Line line_from_json(const json& j, const std::string& path = "$");
json to_json(const Geodesic& g);
Geodesic geodesic_from(const json& j, const std::string& path = "$");
json to_json(const Hyperbola& h);

json to_json(const HalfSpace& h);
HalfSpace halfspace_from(const json& j, const std::string& path = "$");
json to_json(const DensitySpec& d);
DensitySpec density_from(const json& j, const std::string& path = "$");
json to_json(const CutMeasure& m);
CutMeasure measure_from(const json& j, const std::string& path = "$");

json to_json(const SetOracle& s);
/// Accepts an expression tree, a bare half-space, or a fit result carrying "halfspace".
SetOracle set_from(const json& j, const std::string& path = "$");
json to_json(const DefectReport& r);
DefectReport defect_report_from(const json& j, const std::string& path = "$");
json to_json(const HalfSpaceFit& f);

json to_json(const FiniteMetric& m);
/// {labels, matrix} or {points, labels?}; the latter is filled with CC distances.
FiniteMetric metric_from(const json& j, const std::string& path = "$");
/// Bitmask strings list label i's side at character i ('1' = side B).
std::string mask_string(std::uint32_t mask, std::size_t n);
json to_json(const CutDecomposition& d);
CutDecomposition decomposition_from(const json& j, const std::string& path = "$");
json to_json(const Embedding& e);

/// "%.17g", which reads back to the same double.
std::string format_double(double x);

}  // namespace heis::io
