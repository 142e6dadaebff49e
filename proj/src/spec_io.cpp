#include "convtail/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convtail/logspace.hpp"

namespace convtail {

using nlohmann::json;

namespace {

json require(const json& j, const char* field) {
  if (!j.contains(field))
    throw std::invalid_argument(std::string("spec: missing field \"") + field + "\"");
  return j.at(field);
}

std::vector<double> number_list(const json& j, const char* field) {
  const json a = require(j, field);
  if (!a.is_array())
    throw std::invalid_argument(std::string("spec: field \"") + field + "\" must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number())
      throw std::invalid_argument(std::string("spec: field \"") + field +
                                  "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json status_json(Status s) { return to_string(s); }

json verdict_json(const ClassVerdict& v) {
  json d = json::object();
  for (const auto& [k, val] : v.diagnostics) d[k] = val;
  return json{{"class", v.class_tag}, {"status", status_json(v.status)}, {"diagnostics", d}};
}

json extended_json(const ExtendedReal& v) {
  return v.is_finite() ? json(v.value()) : json("inf");
}

}  // namespace

Distribution distribution_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("spec: not valid JSON: ") + e.what());
  }
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "parametric") {
    return make_parametric(require(j, "family").get<std::string>(), number_list(j, "params"));
  }
  if (kind == "atomic") {
    auto points = number_list(j, "points");
    auto lm = number_list(j, "log_masses");
    if (j.contains("log_neglected"))
      return Distribution::atomic_truncated(std::move(points), std::move(lm),
                                            j.at("log_neglected").get<double>());
    return Distribution::atomic(std::move(points), std::move(lm));
  }
  if (kind == "grid") {
    const double err = j.contains("err_bound") ? j.at("err_bound").get<double>() : 0.0;
    return Distribution::grid(require(j, "dx").get<double>(), number_list(j, "log_tail"), err);
  }
  if (kind == "counterexample") {
    return Distribution::counterexample(require(j, "variant").get<int>(),
                                        j.contains("gamma_hat") ? j.at("gamma_hat").get<double>()
                                                                : 0.0,
                                        require(j, "n_atoms").get<int>());
  }
  throw std::invalid_argument("spec: unknown kind \"" + kind + "\"");
}

Distribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return distribution_from_json_text(ss.str());
}

std::string distribution_to_json_text(const Distribution& d) {
  json j;
  switch (d.kind()) {
    case Kind::Parametric:
      j = {{"kind", "parametric"}, {"family", family_name(d.family())}, {"params", d.params()}};
      break;
    case Kind::Atomic:
      j = {{"kind", "atomic"}, {"points", d.points()}, {"log_masses", d.log_masses()}};
      if (d.truncated()) j["log_neglected"] = d.log_neglected_mass();
      break;
    case Kind::Grid:
      j = {{"kind", "grid"}, {"dx", d.grid_dx()}, {"log_tail", d.grid_log_tail()}};
      if (d.grid_err_bound() > 0.0) j["err_bound"] = d.grid_err_bound();
      break;
    case Kind::Mixture:
      throw std::invalid_argument(
          "cannot serialize a derived mixture directly; materialize it first");
  }
  return j.dump(2) + "\n";
}

void save_distribution(const Distribution& d, const std::string& path) {
  write_text_file(path, distribution_to_json_text(d));
}

std::string curve_to_csv(const RatioCurve& curve) {
  std::string out = "x,log_tail_base,log_tail_conv,bracket,ratio,running_min\n";
  for (size_t i = 0; i < curve.xs.size(); ++i) {
    out += fmt17(curve.xs[i]);
    out += ',';
    out += fmt17(curve.log_tail_base[i]);
    out += ',';
    out += fmt17(curve.log_tail_conv[i]);
    out += ',';
    out += fmt17(curve.bracket[i]);
    out += ',';
    out += fmt17(curve.ratio[i]);
    out += ',';
    out += fmt17(curve.running_min[i]);
    out += '\n';
  }
  return out;
}

void write_curve_csv(const RatioCurve& curve, const std::string& path) {
  write_text_file(path, curve_to_csv(curve));
}

std::string curve_to_json_text(const RatioCurve& curve) {
  json rows = json::array();
  for (size_t i = 0; i < curve.xs.size(); ++i)
    rows.push_back({{"x", curve.xs[i]},
                    {"log_tail_base", curve.log_tail_base[i]},
                    {"log_tail_conv", curve.log_tail_conv[i]},
                    {"bracket", curve.bracket[i]},
                    {"ratio", curve.ratio[i]},
                    {"running_min", curve.running_min[i]}});
  return json{{"mode", to_string(curve.mode)}, {"horizon", curve.horizon}, {"points", rows}}
             .dump(2) +
         "\n";
}

std::string verdict_to_json_text(const ClassVerdict& v) { return verdict_json(v).dump(2) + "\n"; }

std::string report_to_json_text(const ConsistencyReport& r, int exit_code) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json data = json::object();
    for (const auto& [k, v] : c.data) data[k] = v;
    checks.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"status", status_json(c.status)},
                      {"note", c.note},
                      {"data", data}});
  }
  json gh = {{"gamma_hat", extended_json(r.summary.gamma_hat)},
             {"phi_at_gamma_hat", extended_json(r.summary.phi_at_gamma_hat)},
             {"method",
              r.summary.method == EvalMethod::NumericFit ? "numeric_fit" : "closed_form"}};
  if (r.summary.method == EvalMethod::NumericFit) {
    gh["fit_window"] = {r.summary.fit_lo, r.summary.fit_hi};
    gh["fit_stderr"] = std::isfinite(r.summary.fit_stderr) ? json(r.summary.fit_stderr)
                                                           : json("inf");
  }
  json j = {{"config",
             {{"horizon", r.horizon},
              {"n_points", r.n_points},
              {"tol", r.tol},
              {"window_fraction", r.window_fraction}}},
            {"gamma_hat", gh},
            {"heavy", r.heavy},
            {"liminf_proxy",
             {{"value", r.proxy.value},
              {"at_half_horizon", r.proxy.at_half},
              {"converged", r.proxy.converged}}},
            {"condition2", verdict_json(r.cond2)},
            {"checks", checks},
            {"contradiction", r.contradiction},
            {"exit_code", exit_code}};
  return j.dump(2) + "\n";
}

std::string diagnostics_to_json_text(const SubadditiveDiagnostics& d) {
  return json{{"subadd_violations", d.subadd_violations},
              {"exp_moment", d.exp_moment},
              {"growth", d.growth},
              {"slopes", d.slopes},
              {"exp_moment_ok", d.exp_moment_ok},
              {"growth_ok", d.growth_ok},
              {"slopes_decreasing", d.slopes_decreasing}}
             .dump(2) +
         "\n";
}

std::string subadditive_to_json_text(const SubadditiveFunction& h) {
  return json{{"breakpoints", h.breakpoints}, {"slopes", h.slopes}, {"delta", h.delta}}
             .dump(2) +
         "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace convtail
