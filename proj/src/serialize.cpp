#include "pinsker/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace pinsker {

namespace {

using nlohmann::json;

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("distribution field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// JSON has no infinity; +inf (KL without absolute continuity) is written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

Distribution parse_distribution(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw std::invalid_argument("distribution must be an object with a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "discrete") {
    if (!j.contains("probs")) throw std::invalid_argument("discrete distribution needs 'probs'");
    return DiscreteDistribution(number_array(j.at("probs"), "probs"));
  }
  if (type == "gaussian1d") return Gaussian1D(number_field(j, "mu"), number_field(j, "sigma2"));
  if (type == "gaussiannd") {
    if (!j.contains("nu") || !j.contains("sigma")) throw std::invalid_argument("gaussiannd needs 'nu' and 'sigma'");
    const std::vector<double> nu = number_array(j.at("nu"), "nu");
    const json& rows = j.at("sigma");
    if (!rows.is_array() || rows.size() != nu.size()) {
      throw std::invalid_argument("sigma must be a square array matching nu");
    }
    const auto n = static_cast<Eigen::Index>(nu.size());
    Eigen::MatrixXd sigma(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::vector<double> row = number_array(rows.at(static_cast<std::size_t>(r)), "sigma row");
      if (row.size() != nu.size()) throw std::invalid_argument("sigma must be a square array matching nu");
      for (Eigen::Index c = 0; c < n; ++c) sigma(r, c) = row[static_cast<std::size_t>(c)];
    }
    return GaussianND(Eigen::Map<const Eigen::VectorXd>(nu.data(), n), std::move(sigma));
  }
  throw std::invalid_argument("unknown distribution type '" + type + "'");
}

Distribution parse_distribution(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed distribution JSON: ") + e.what());
  }
  return parse_distribution(j);
}

json to_json(const Gaussian1D& g) { return {{"type", "gaussian1d"}, {"mu", g.mu()}, {"sigma2", g.sigma2()}}; }

json to_json(const Distribution& d) {
  return std::visit(
      [](const auto& dist) -> json {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, DiscreteDistribution>) {
          return {{"type", "discrete"}, {"probs", std::vector<double>(dist.probs().begin(), dist.probs().end())}};
        } else if constexpr (std::is_same_v<T, Gaussian1D>) {
          return to_json(dist);
        } else {
          json rows = json::array();
          for (Eigen::Index r = 0; r < dist.dim(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < dist.dim(); ++c) row.push_back(dist.sigma()(r, c));
            rows.push_back(std::move(row));
          }
          return {{"type", "gaussiannd"},
                  {"nu", std::vector<double>(dist.nu().data(), dist.nu().data() + dist.dim())},
                  {"sigma", std::move(rows)}};
        }
      },
      d);
}

json to_json(const StiefelFrame& frame) {
  std::vector<double> row_major;
  row_major.reserve(static_cast<std::size_t>(frame.v().size()));
  for (Eigen::Index r = 0; r < frame.v().rows(); ++r) {
    for (Eigen::Index c = 0; c < frame.v().cols(); ++c) row_major.push_back(frame.v()(r, c));
  }
  return {{"rows", frame.target_dim()},
          {"cols", frame.source_dim()},
          {"v", std::move(row_major)},
          {"b", std::vector<double>(frame.b().data(), frame.b().data() + frame.b().size())}};
}

json to_json(const SandwichReport& r) {
  return {{"poly_lb", number(r.poly_lb)},
          {"vajda_lb", number(r.vajda_lb)},
          {"divergence", number(r.divergence)},
          {"upper", number(r.upper)},
          {"all_hold", r.all_hold}};
}

json to_json(const ProjectionSearchResult& r) {
  return {{"best_value", r.best_value},
          {"sampled_value", r.sampled_value},
          {"n_samples", r.n_samples},
          {"frame", to_json(r.best_frame)},
          {"witness", to_json(r.witness)}};
}

json to_json(const CurvePoint& p) { return json::array({p.t, p.delta, p.l_value}); }

json to_json(const oracle::SandwichViolation& v) {
  return {{"trial", v.trial}, {"p", v.p}, {"q", v.q}, {"report", to_json(v.report)}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
  out << "t,delta,l_value\n";
  for (const CurvePoint& p : points) {
    out << format_double(p.t) << ',' << format_double(p.delta) << ',' << format_double(p.l_value) << '\n';
  }
}

json curve_to_json(std::span<const CurvePoint> points) {
  json arr = json::array();
  for (const CurvePoint& p : points) arr.push_back(to_json(p));
  return arr;
}

void write_violations_jsonl(std::ostream& out, const oracle::FuzzReport& report) {
  for (const auto& v : report.violations) out << to_json(v).dump() << '\n';
}

}  // namespace pinsker
