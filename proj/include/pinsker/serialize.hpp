#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "pinsker/augmented.hpp"
#include "pinsker/measures.hpp"
#include "pinsker/oracle.hpp"
#include "pinsker/pinsker_bounds.hpp"
#include "pinsker/vajda_curve.hpp"

namespace pinsker {

using Distribution = std::variant<DiscreteDistribution, Gaussian1D, GaussianND>;

/// Parses {"type":"discrete","probs":[...]}, {"type":"gaussian1d","mu":..,"sigma2":..}
/// or {"type":"gaussiannd","nu":[...],"sigma":[[...],...]}. Throws std::invalid_argument.
Distribution parse_distribution(const nlohmann::json& j);
Distribution parse_distribution(const std::string& text);

nlohmann::json to_json(const Distribution& d);
nlohmann::json to_json(const Gaussian1D& g);
nlohmann::json to_json(const StiefelFrame& frame);
nlohmann::json to_json(const SandwichReport& r);
nlohmann::json to_json(const ProjectionSearchResult& r);
nlohmann::json to_json(const CurvePoint& p);
nlohmann::json to_json(const oracle::SandwichViolation& v);

/// Doubles as text with 17 significant digits.
std::string format_double(double x);

/// CSV with header `t,delta,l_value`, one row per point.
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);

/// JSON array of [t, delta, l_value] triples.
nlohmann::json curve_to_json(std::span<const CurvePoint> points);

/// One JSON object per violating pair, newline separated.
void write_violations_jsonl(std::ostream& out, const oracle::FuzzReport& report);

}  // namespace pinsker
