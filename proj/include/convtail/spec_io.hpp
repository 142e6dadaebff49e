#pragma once

// JSON distribution specs and report/curve serialization. One spec object per
// file:
//   {"kind":"parametric","family":"pareto","params":[2.0]}
//   {"kind":"atomic","points":[...],"log_masses":[...]}           (+ "log_neglected")
//   {"kind":"grid","dx":0.01,"log_tail":[...]}                    (+ "err_bound")
//   {"kind":"counterexample","variant":1,"gamma_hat":0.001,"n_atoms":8}
// Write-then-read reproduces tails exactly at grid points (round-trip-safe
// number rendering).

#include <string>

#include "convtail/analysis.hpp"
#include "convtail/distribution.hpp"
#include "convtail/subadditive.hpp"

namespace convtail {

Distribution distribution_from_json_text(const std::string& text);
Distribution load_distribution(const std::string& path);
std::string distribution_to_json_text(const Distribution& d);
void save_distribution(const Distribution& d, const std::string& path);

// CSV with header x,log_tail_base,log_tail_conv,bracket,ratio,running_min,
// 17 significant digits.
std::string curve_to_csv(const RatioCurve& curve);
void write_curve_csv(const RatioCurve& curve, const std::string& path);
std::string curve_to_json_text(const RatioCurve& curve);

std::string verdict_to_json_text(const ClassVerdict& v);
std::string report_to_json_text(const ConsistencyReport& r, int exit_code);

// {"subadd_violations":0,"exp_moment":...,"growth":[...],"slopes":[...]}
std::string diagnostics_to_json_text(const SubadditiveDiagnostics& d);
std::string subadditive_to_json_text(const SubadditiveFunction& h);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace convtail
