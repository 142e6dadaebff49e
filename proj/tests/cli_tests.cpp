// End-to-end checks of the convtail binary: exit codes, artifact files, and
// the write-then-read loop (outputs are valid inputs).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convtail/distribution.hpp"
#include "convtail/spec_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace convtail;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++failures;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " " + std::string(CONVTAIL_BIN) + " " + args + " > cli_stdout.txt 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

std::vector<std::vector<double>> slurp_csv(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

int main() {
  fs::create_directories("cli_scratch");
  fs::current_path("cli_scratch");

  save_distribution(make_parametric("exponential", {1.0}), "exp1.json");
  save_distribution(make_parametric("pareto", {2.0}), "pareto2.json");

  // analyze: pareto(2) passes every applicable check, lim-inf proxy near 2
  expect(run("analyze pareto2.json --out p2") == 0, "analyze pareto2 exits 0");
  {
    const json r = slurp_json("p2.report.json");
    expect(r.at("contradiction") == false, "report: no contradiction");
    const double li = r.at("liminf_proxy").at("value").get<double>();
    expect(std::abs(li / 2.0 - 1.0) < 0.05, "report: liminf proxy near 2");
    expect(fs::exists("p2.curve.csv"), "analyze writes the curve CSV");
  }

  // analyze the sparse family: exit 0 with condition2 violated in the report
  expect(run("counterexample --variant 1 --gamma 1e-3 --n 8 --out ce1.json") == 0,
         "counterexample generator exits 0");
  expect(run("analyze ce1.json --out ce1") == 0, "analyze counterexample exits 0");
  {
    const json r = slurp_json("ce1.report.json");
    expect(r.at("condition2").at("status") == "violated",
           "report notes the violated shift condition");
    expect(r.at("contradiction") == false, "sparse family: no contradiction");
  }

  expect(run("analyze missing.json") == 1, "missing spec file exits 1");
  expect(run("analyze exp1.json --tol 0.7") == 1, "out-of-range tolerance exits 1");

  // convolve --n 2: the ratio column reproduces 1 + x
  expect(run("convolve exp1.json --n 2 --horizon 20 --out er2.csv") == 0,
         "convolve --n 2 exits 0");
  {
    bool all_ok = true;
    for (const auto& row : slurp_csv("er2.csv"))
      if (std::abs(row[4] / (1.0 + row[0]) - 1.0) > 1e-4) all_ok = false;
    expect(all_ok, "convolve CSV ratio matches 1 + x within 1e-4");
  }
  expect(run("convolve pareto2.json exp1.json --pair --out pair.csv") == 0,
         "pair-mode convolve exits 0");
  expect(slurp_csv("pair.csv").size() >= 128, "pair curve has points");
  expect(run("convolve exp1.json --n 1 --horizon 10 --out id.csv") == 0,
         "identity passthrough exits 0");
  {
    bool ones = true;
    for (const auto& row : slurp_csv("id.csv"))
      if (std::abs(row[4] - 1.0) > 1e-12) ones = false;
    expect(ones, "identity passthrough keeps ratio 1");
  }

  // tilt round trip through JSON artifacts
  expect(run("tilt exp1.json --gamma 0.5 --out tilt1.json") == 0, "tilt exits 0");
  expect(run("tilt tilt1.json --gamma -0.5 --out tilt2.json") == 0, "reverse tilt exits 0");
  {
    const Distribution back = load_distribution("tilt2.json");
    double worst = 0.0;
    for (double x = 0.0; x <= 30.0; x += 0.25)
      worst = std::max(worst, std::abs(std::expm1(back.log_tail(x) + x)));
    expect(worst < 1e-8, "tilt round trip reproduces Exp(1) within 1e-8");
  }
  expect(run("tilt exp1.json --gamma 1.5") == 3, "tilt beyond the abscissa exits 3");

  // itail: Exp is a fixed point; outputs re-ingest losslessly
  expect(run("itail exp1.json --horizon 40 --out it.json") == 0, "itail exits 0");
  {
    const Distribution it = load_distribution("it.json");
    double worst = 0.0;
    for (double x = 0.0; x <= 35.0; x += 0.5)
      worst = std::max(worst, std::abs(std::expm1(it.log_tail(x) + x)));
    expect(worst < 1e-8, "itail of Exp(1) stays Exp(1) within 1e-8");
    const Distribution again = load_distribution("it.json");
    expect(again.grid_log_tail() == it.grid_log_tail(), "grid JSON re-ingests bit-exactly");
  }
  expect(run("itail pareto2.json --out itp.json") == 0, "itail pareto exits 0");

  // hfunc: diagnostics JSON with the documented keys
  expect(run("hfunc pareto2.json --delta 0.5 --levels 5 --out h.json") == 0,
         "hfunc exits 0");
  {
    const json d = slurp_json("h.diagnostics.json");
    expect(d.at("subadd_violations") == 0, "hfunc diagnostics: zero violations");
    expect(d.contains("exp_moment") && d.contains("growth") && d.contains("slopes"),
           "hfunc diagnostics carry the documented keys");
  }
  expect(run("hfunc exp1.json --delta 0.5 --levels 5") == 3,
         "hfunc on a light tail exits 3");

  // results are bit-reproducible across thread counts
  expect(run("convolve pareto2.json --n 2 --horizon 200 --out thr1.csv",
             "CONVTAIL_THREADS=1") == 0,
         "single-threaded convolve exits 0");
  expect(run("convolve pareto2.json --n 2 --horizon 200 --out thr4.csv",
             "CONVTAIL_THREADS=4") == 0,
         "multi-threaded convolve exits 0");
  expect(slurp("thr1.csv") == slurp("thr4.csv"),
         "curves are byte-identical across thread counts");

  // classify: verdicts as JSON
  const int rc_classify = run("classify pareto2.json --out cls.json");
  expect(rc_classify == 0 || rc_classify == 2, "classify exits 0 or 2");
  {
    const json v = slurp_json("cls.json");
    bool found = false;
    for (const auto& one : v)
      if (one.at("class") == "S" && one.at("status") == "satisfied") found = true;
    expect(found, "classify reports Pareto(2) in class S");
  }

  if (failures) std::printf("%d CLI check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
