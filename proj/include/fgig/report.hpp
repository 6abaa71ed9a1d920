#ifndef FGIG_REPORT_HPP
#define FGIG_REPORT_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fgig/asymptotics.hpp"
#include "fgig/characterization.hpp"
#include "fgig/entropy.hpp"
#include "fgig/levy.hpp"
#include "fgig/params.hpp"
#include "fgig/transforms.hpp"

namespace fgig::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema = "fgig-report/1";

/// Shortest form is not used: every number carries 17 significant digits, independent of locale.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace detail {

inline void dump_to(std::string& out, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(indent * d), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        dump_to(out, it.value(), indent, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) pad(depth + 1);
        dump_to(out, e, indent, depth + 1);
      }
      if (!flat) {
        out += "\n";
        pad(depth);
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_to(out, j, indent, 0);
  out += "\n";
  return out;
}

/// Top-level object every report starts from.
inline Json envelope(const std::string& command) {
  Json j;
  j["schema"] = schema;
  j["command"] = command;
  return j;
}

inline Json to_json(const NaturalParams& p) { return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"lambda", p.lambda}}; }
inline Json to_json(const SupportForm& s) { return Json{{"a", s.a}, {"b", s.b}, {"lambda", s.lambda}}; }
inline Json to_json(const SpreadForm& s) { return Json{{"A", s.A}, {"B", s.B}, {"lambda", s.lambda}}; }
inline Json to_json(const SpectralRoots& r) { return Json{{"gamma", r.gamma}, {"delta", r.delta}, {"eta", r.eta}}; }
inline Json to_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const ValidationReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
  return Json{{"valid", v.valid()}, {"checks", checks}};
}

inline Json to_json(const FgigLaw& law) {
  return Json{{"natural", to_json(law.params)},
              {"support", to_json(law.support)},
              {"spread", to_json(law.spread)},
              {"roots", to_json(law.roots)}};
}

inline Json to_json(const FidCertificate& c) {
  return Json{{"max_imag", c.max_imag},
              {"argmax", to_json(c.argmax)},
              {"samples", c.samples},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

inline Json to_json(const LevyTriplet& t) {
  return Json{{"drift", t.drift},
              {"semicircular", t.semicircular},
              {"atom_location", t.atom_location},
              {"atom_weight", t.atom_weight},
              {"density_upper", t.upper()}};
}

inline Json to_json(const FsdReport& r) {
  return Json{{"params", to_json(r.params)},
              {"A", r.A},
              {"B", r.B},
              {"discriminant", r.discriminant},
              {"discriminant_closed", r.discriminant_closed},
              {"threshold", r.threshold},
              {"quadratic_coefficient", r.quadratic_coefficient},
              {"verdict", r.verdict},
              {"atom_obstruction", r.atom_obstruction},
              {"k_nonincreasing", r.k_nonincreasing},
              {"max_k_increment", r.max_k_increment},
              {"agree", r.agree}};
}

inline Json to_json(const CoefficientSeries& s) { return Json{{"center", s.center}, {"coeffs", s.coeffs}}; }

inline Json to_json(const CharacterizationReport& r) {
  return Json{{"alpha", r.alpha},
              {"lambda", r.lambda},
              {"c", r.c},
              {"quartic_residual", r.quartic_residual},
              {"series", to_json(r.series)},
              {"oracle", to_json(r.oracle)},
              {"max_rel_dev", r.max_rel_dev},
              {"key_equation_residual", r.key_equation_residual},
              {"cauchy_inversion_residual", r.cauchy_inversion_residual},
              {"sum_distance", r.sum_distance},
              {"fixed_point_distance", r.fixed_point_distance}};
}

inline Json to_json(const IteratedReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back(Json{{"description", s.description}, {"distance", s.distance}});
  return Json{{"params", to_json(r.params)}, {"stages", stages}, {"final_distance", r.final_distance}};
}

inline Json to_json(const ScalingFit& f) {
  return Json{{"slope_a", f.slope_a},   {"slope_b", f.slope_b},       {"p_a", f.p_a},
              {"p_b", f.p_b},           {"expected_a", f.expected_a}, {"expected_b", f.expected_b},
              {"match", f.match}};
}

inline Json to_json(const RootLimits& r) {
  auto limit = [](double v, bool unbounded, int sign) {
    if (!unbounded) return Json(v);
    return Json(sign < 0 ? "-inf" : "+inf");
  };
  return Json{{"delta_limit", limit(r.delta_limit, r.delta_unbounded, r.delta_sign)},
              {"eta_limit", limit(r.eta_limit, r.eta_unbounded, r.eta_sign)},
              {"probe_beta", r.probe_beta},
              {"delta_probe", r.delta_probe},
              {"eta_probe", r.eta_probe},
              {"delta_rel_error", r.delta_rel_error},
              {"eta_rel_error", r.eta_rel_error}};
}

inline Json to_json(const MaximalityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"label", e.perturbation.label},
                           {"params", to_json(e.perturbation.params)},
                           {"scale", e.perturbation.scale},
                           {"value", e.value},
                           {"margin", e.margin}});
  return Json{{"params", to_json(r.params)},
              {"base_value", r.base_value},
              {"entries", entries},
              {"all_positive", r.all_positive}};
}

/// Header row plus numeric rows; string cells are written verbatim.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(std::isfinite(v) ? format_number(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")));
    rows.push_back(std::move(row));
  }
  void add(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

  void write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

}  // namespace fgig::report

#endif  // FGIG_REPORT_HPP
