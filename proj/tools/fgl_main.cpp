// Command-line driver: config ingestion, experiment dispatch, CSV/JSON output
// with a run manifest per output directory.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
// (iteration non-convergence or linear-solver breakdown), 3 acceptance-window
// violation.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fgl/coeffs.hpp"
#include "fgl/harness.hpp"
#include "fgl/operators.hpp"
#include "fgl/solver.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

#ifndef FGL_VERSION
#define FGL_VERSION "0.0.0"
#endif
constexpr const char* kToolVersion = "fgl " FGL_VERSION;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// All CSV numbers carry 17 significant digits so 64-bit values round-trip.
std::string num17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.16e", v);
  return b;
}

struct ConfigError {
  std::vector<std::string> violations;
};

// ---------------------------------------------------------------------------
// Run configuration (JSON file)
// ---------------------------------------------------------------------------

struct RunConfig {
  fgl::ModelParams model;
  int nx = 128;
  int nt = 100;
  double tol = 1e-14;
  int max_iter = 200;
  std::string linear_solver = "auto";  // auto | dense | iterative
  std::string initial = "example2";    // example2 | soliton | zero
  std::string directory = ".";
  std::vector<double> snapshot_times;
};

int dense_limit_for(const std::string& choice) {
  if (choice == "dense") return 1 << 30;
  if (choice == "iterative") return 0;
  return 2048;  // auto: dense LU up to 2048 unknowns, Krylov beyond
}

void get_num(const json& obj, const char* key, double& target,
             std::vector<std::string>& bad, const std::string& path) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_number()) {
    bad.push_back(path + "." + key + ": expected a number");
    return;
  }
  target = obj[key].get<double>();
}

void get_int(const json& obj, const char* key, int& target,
             std::vector<std::string>& bad, const std::string& path) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_number_integer()) {
    bad.push_back(path + "." + key + ": expected an integer");
    return;
  }
  target = obj[key].get<int>();
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                std::vector<std::string>& bad, const std::string& path) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad.push_back(path + "." + k + ": unknown key");
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> bad;
  if (!in) throw ConfigError{{"cannot open config file: " + path}};
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError{{std::string("config parse error: ") + e.what()}};
  }
  RunConfig cfg;
  check_keys(j, {"model", "grid", "time", "solver", "output", "initial"}, bad,
             "config");
  if (j.contains("model")) {
    const json& m = j["model"];
    check_keys(m,
               {"alpha", "beta1", "beta2", "eta1", "eta2", "mu1", "mu2",
                "zeta1", "zeta2", "gamma1", "gamma2", "a", "b", "T",
                "test_mode"},
               bad, "model");
    get_num(m, "alpha", cfg.model.alpha, bad, "model");
    get_num(m, "beta1", cfg.model.beta1, bad, "model");
    get_num(m, "beta2", cfg.model.beta2, bad, "model");
    get_num(m, "eta1", cfg.model.eta1, bad, "model");
    get_num(m, "eta2", cfg.model.eta2, bad, "model");
    get_num(m, "mu1", cfg.model.mu1, bad, "model");
    get_num(m, "mu2", cfg.model.mu2, bad, "model");
    get_num(m, "zeta1", cfg.model.zeta1, bad, "model");
    get_num(m, "zeta2", cfg.model.zeta2, bad, "model");
    get_num(m, "gamma1", cfg.model.gamma1, bad, "model");
    get_num(m, "gamma2", cfg.model.gamma2, bad, "model");
    get_num(m, "a", cfg.model.a, bad, "model");
    get_num(m, "b", cfg.model.b, bad, "model");
    get_num(m, "T", cfg.model.T, bad, "model");
    if (m.contains("test_mode")) {
      if (m["test_mode"].is_boolean())
        cfg.model.test_mode = m["test_mode"].get<bool>();
      else
        bad.push_back("model.test_mode: expected a boolean");
    }
  } else {
    bad.push_back("config.model: missing section");
  }
  if (j.contains("grid")) {
    check_keys(j["grid"], {"nx"}, bad, "grid");
    get_int(j["grid"], "nx", cfg.nx, bad, "grid");
  }
  if (j.contains("time")) {
    check_keys(j["time"], {"nt", "T"}, bad, "time");
    get_int(j["time"], "nt", cfg.nt, bad, "time");
    get_num(j["time"], "T", cfg.model.T, bad, "time");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, {"tol", "max_iter", "linear_solver"}, bad, "solver");
    get_num(s, "tol", cfg.tol, bad, "solver");
    get_int(s, "max_iter", cfg.max_iter, bad, "solver");
    if (s.contains("linear_solver")) {
      if (s["linear_solver"].is_string())
        cfg.linear_solver = s["linear_solver"].get<std::string>();
      else
        bad.push_back("solver.linear_solver: expected a string");
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"directory", "snapshot_times", "formats"}, bad, "output");
    if (o.contains("directory")) {
      if (o["directory"].is_string())
        cfg.directory = o["directory"].get<std::string>();
      else
        bad.push_back("output.directory: expected a string");
    }
    if (o.contains("snapshot_times")) {
      if (o["snapshot_times"].is_array()) {
        for (const auto& t : o["snapshot_times"]) {
          if (t.is_number())
            cfg.snapshot_times.push_back(t.get<double>());
          else
            bad.push_back("output.snapshot_times: expected numbers");
        }
      } else {
        bad.push_back("output.snapshot_times: expected an array");
      }
    }
    if (o.contains("formats")) {
      if (!o["formats"].is_array())
        bad.push_back("output.formats: expected an array");
      else
        for (const auto& f : o["formats"])
          if (!f.is_string() || f.get<std::string>() != "csv")
            bad.push_back("output.formats: only \"csv\" is supported");
    }
  }
  if (j.contains("initial")) {
    check_keys(j["initial"], {"kind"}, bad, "initial");
    if (j["initial"].contains("kind")) {
      if (j["initial"]["kind"].is_string())
        cfg.initial = j["initial"]["kind"].get<std::string>();
      else
        bad.push_back("initial.kind: expected a string");
    }
  }
  // Cross-field validation; collect every violation rather than the first.
  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    bad.push_back(e.what());
  }
  if (cfg.nx < 2) bad.push_back("grid.nx: must be at least 2");
  if (cfg.nt < 1) bad.push_back("time.nt: must be at least 1");
  if (!(cfg.tol > 0)) bad.push_back("solver.tol: must be positive");
  if (cfg.max_iter < 1) bad.push_back("solver.max_iter: must be at least 1");
  if (cfg.linear_solver != "auto" && cfg.linear_solver != "dense" &&
      cfg.linear_solver != "iterative")
    bad.push_back("solver.linear_solver: must be auto, dense, or iterative");
  if (cfg.initial != "example2" && cfg.initial != "soliton" &&
      cfg.initial != "zero")
    bad.push_back("initial.kind: must be example2, soliton, or zero");
  for (const double t : cfg.snapshot_times)
    if (t < 0.0 || t > cfg.model.T + 1e-12)
      bad.push_back("output.snapshot_times: time " + std::to_string(t) +
                    " outside [0, T]");
  if (!bad.empty()) throw ConfigError{std::move(bad)};
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["model"] = {{"alpha", cfg.model.alpha},   {"beta1", cfg.model.beta1},
                {"beta2", cfg.model.beta2},   {"eta1", cfg.model.eta1},
                {"eta2", cfg.model.eta2},     {"mu1", cfg.model.mu1},
                {"mu2", cfg.model.mu2},       {"zeta1", cfg.model.zeta1},
                {"zeta2", cfg.model.zeta2},   {"gamma1", cfg.model.gamma1},
                {"gamma2", cfg.model.gamma2}, {"a", cfg.model.a},
                {"b", cfg.model.b},           {"T", cfg.model.T},
                {"test_mode", cfg.model.test_mode}};
  j["grid"] = {{"nx", cfg.nx}};
  j["time"] = {{"nt", cfg.nt}};
  j["solver"] = {{"tol", cfg.tol},
                 {"max_iter", cfg.max_iter},
                 {"linear_solver", cfg.linear_solver}};
  j["output"] = {{"directory", cfg.directory},
                 {"snapshot_times", cfg.snapshot_times}};
  j["initial"] = {{"kind", cfg.initial}};
  return j;
}

fgl::Initial initial_u(const std::string& kind) {
  if (kind == "example2")
    return [](double x) { return fgl::example2_initial(x); };
  if (kind == "soliton")
    return [](double x) {
      return std::polar(1.0 / std::cosh(x + 5.0), 8.0 * x);
    };
  return [](double) { return std::complex<double>(0.0, 0.0); };
}

fgl::Initial initial_v(const std::string& kind) {
  if (kind == "example2")
    return [](double x) { return fgl::example2_initial(x); };
  if (kind == "soliton")
    return [](double x) {
      return std::polar(1.0 / std::cosh(x - 5.0), -8.0 * x);
    };
  return [](double) { return std::complex<double>(0.0, 0.0); };
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

// The manifest is written to a temporary name and renamed into place, so a
// manifest.json either does not exist or is complete.
void write_manifest(const fs::path& dir, json m) {
  m["tool"] = kToolVersion;
  fs::create_directories(dir);
  const fs::path tmp = dir / "manifest.json.tmp";
  {
    std::ofstream f(tmp);
    f << m.dump(2) << "\n";
  }
  fs::rename(tmp, dir / "manifest.json");
}

struct Csv {
  explicit Csv(const fs::path& p) : f_(std::fopen(p.c_str(), "w")) {
    if (!f_) throw std::runtime_error("cannot open for writing: " + p.string());
  }
  ~Csv() {
    if (f_) std::fclose(f_);
  }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;
  void raw(const std::string& s) { std::fputs(s.c_str(), f_); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) std::fputc(',', f_);
      std::fputs(cells[i].c_str(), f_);
    }
    std::fputc('\n', f_);
  }
 private:
  std::FILE* f_ = nullptr;
};

void write_fields_csv(const fs::path& p, const fgl::Grid1D& grid,
                      const fgl::FieldPair& f) {
  Csv csv(p);
  csv.raw("x,re_u,im_u,abs_u,re_v,im_v,abs_v\n");
  for (int j = 1; j < grid.nx; ++j) {
    const auto& u = f.U[j - 1];
    const auto& v = f.V[j - 1];
    csv.row({num17(grid.a + j * grid.h), num17(u.real()), num17(u.imag()),
             num17(std::abs(u)), num17(v.real()), num17(v.imag()),
             num17(std::abs(v))});
  }
}

void write_energy_csv(const fs::path& p,
                      const std::vector<fgl::EnergySample>& energy) {
  Csv csv(p);
  csv.raw("t,W\n");
  for (const auto& e : energy) csv.row({num17(e.t), num17(e.W)});
}

double median_iterations(const std::vector<fgl::IterationReport>& reps) {
  std::vector<int> its;
  its.reserve(reps.size());
  for (const auto& r : reps) its.push_back(r.iterations);
  std::sort(its.begin(), its.end());
  if (its.empty()) return 0.0;
  const std::size_t n = its.size();
  return (n % 2) ? its[n / 2] : 0.5 * (its[n / 2 - 1] + its[n / 2]);
}

std::string time_tag(double t) {
  char b[32];
  std::snprintf(b, sizeof b, "%g", t);
  std::string s(b);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_coeffs(double alpha, const std::string& family, std::size_t length,
               const std::string& out) {
  const fgl::CoeffTable t = (family == "g4") ? fgl::g4_coeffs(alpha, length)
                                             : fgl::g2_coeffs(alpha, length);
  std::string text = "m,kappa\n";
  for (std::size_t m = 0; m < t.values.size(); ++m)
    text += std::to_string(m) + "," + num17(t.values[m]) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << text;
  }
  return 0;
}

int cmd_laplacian(double alpha, int nx, double x, const std::string& out) {
  const fgl::PolyOracle oracle = fgl::example1_poly(alpha);
  const fgl::Grid1D grid = fgl::Grid1D::make(oracle.a, oracle.b, nx);
  const long j = std::lround((x - grid.a) / grid.h);
  if (j < 1 || j > nx - 1 || std::abs(grid.a + j * grid.h - x) > 1e-12)
    throw std::invalid_argument("--x must be an interior grid node");
  fgl::VecC u(grid.interior());
  for (int k = 1; k < nx; ++k)
    u[k - 1] = fgl::poly_value(oracle, grid.a + k * grid.h);
  const fgl::VecC y =
      fgl::DiscreteOperator::assemble(alpha, grid).frac_laplacian(u);
  const double exact = fgl::poly_exact_frac_laplacian(oracle, x);
  json r;
  r["alpha"] = alpha;
  r["nx"] = nx;
  r["x"] = x;
  r["discrete"] = {{"re", y[j - 1].real()}, {"im", y[j - 1].imag()}};
  r["oracle"] = exact;
  r["abs_error"] = std::abs(y[j - 1] - exact);
  const std::string text = r.dump(2) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << text;
  }
  return 0;
}

int cmd_simulate(const std::string& config_path,
                 const std::vector<double>& snapshots_flag,
                 const std::string& out_flag) {
  const double t0 = now_s();
  RunConfig cfg = parse_config(config_path);
  if (!snapshots_flag.empty()) cfg.snapshot_times = snapshots_flag;
  if (!out_flag.empty()) cfg.directory = out_flag;

  const fgl::Grid1D grid = fgl::Grid1D::make(cfg.model.a, cfg.model.b, cfg.nx);
  const double tau = cfg.model.T / cfg.nt;
  std::vector<int> snap_steps;
  for (const double t : cfg.snapshot_times) {
    const long k = std::lround(t / tau);
    if (k < 0 || k > cfg.nt ||
        std::abs(k * tau - t) > 1e-9 * std::max(1.0, t))
      throw ConfigError{{"snapshot time " + std::to_string(t) +
                         " does not land on a time-step boundary"}};
    snap_steps.push_back(static_cast<int>(k));
  }

  const fs::path dir(cfg.directory);
  fs::create_directories(dir);
  std::vector<fgl::FieldPair> snaps;
  auto cb = [&](int k, const fgl::FieldPair& f) {
    if (std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end())
      snaps.push_back(f);
  };
  const double t1 = now_s();
  const fgl::RunResult run = fgl::run(cfg.model, grid, initial_u(cfg.initial),
                                      initial_v(cfg.initial), cfg.nt, cb,
                                      cfg.tol, cfg.max_iter,
                                      dense_limit_for(cfg.linear_solver));
  const double t2 = now_s();

  std::vector<std::string> outputs;
  for (const auto& s : snaps) {
    const std::string name = "snapshot_t" + time_tag(s.t) + ".csv";
    write_fields_csv(dir / name, grid, s);
    outputs.push_back(name);
  }
  write_fields_csv(dir / "final_fields.csv", grid, run.final);
  outputs.push_back("final_fields.csv");
  write_energy_csv(dir / "energy.csv", run.energy);
  outputs.push_back("energy.csv");

  int max_it = 0;
  for (const auto& r : run.reports) max_it = std::max(max_it, r.iterations);
  json m;
  m["command"] = "simulate";
  m["config"] = config_to_json(cfg);
  m["iterations"] = {{"max", max_it},
                     {"median", median_iterations(run.reports)}};
  m["outputs"] = outputs;
  m["timings"] = {{"configure_s", t1 - t0},
                  {"run_s", t2 - t1},
                  {"write_s", now_s() - t2},
                  {"total_s", now_s() - t0}};
  write_manifest(dir, m);
  std::printf("simulate: %d steps on %d cells, max %d iterations; outputs in %s\n",
              cfg.nt, cfg.nx, max_it, dir.string().c_str());
  return 0;
}

int cmd_table1(const std::string& out_dir) {
  const double t0 = now_s();
  const std::vector<double> alphas = {1.2, 1.4, 1.6, 1.8, 2.0};
  const std::vector<double> hs = {1.0 / 200, 1.0 / 220, 1.0 / 240, 1.0 / 260,
                                  1.0 / 280};
  const auto rows = fgl::table1_experiment(alphas, hs, 0.5);
  const double t1 = now_s();

  std::vector<std::string> violations;
  for (const auto& r : rows)
    if (r.order && (*r.order < 3.7 || *r.order > 4.3))
      violations.push_back("alpha=" + std::to_string(r.alpha) +
                           " order outside [3.7, 4.3]");

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    Csv csv(dir / "results.csv");
    csv.raw("alpha,h,abs_error,order\n");
    for (const auto& r : rows)
      csv.row({num17(r.alpha), num17(r.h), num17(r.abs_error),
               r.order ? num17(*r.order) : ""});
  }
  for (const auto& r : rows)
    std::printf("alpha=%.1f  h=1/%-3.0f  abs_error=%.6e  order=%s\n", r.alpha,
                1.0 / r.h, r.abs_error,
                r.order ? (num17(*r.order).substr(0, 6)).c_str() : "---");

  json m;
  m["command"] = "table1";
  m["config"] = {{"alphas", alphas}, {"hs", hs}, {"x_eval", 0.5}};
  m["acceptance"] = {{"windows_pass", violations.empty()},
                     {"violations", violations}};
  m["outputs"] = {"results.csv"};
  m["timings"] = {{"run_s", t1 - t0}, {"total_s", now_s() - t0}};
  write_manifest(dir, m);
  return violations.empty() ? 0 : 3;
}

int cmd_converge(int table, const std::string& out_dir) {
  const double t0 = now_s();
  const fgl::TableRun tr = fgl::table_experiment(table);
  const double t1 = now_s();

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    Csv csv(dir / "results.csv");
    csv.raw(
        "alpha,tau,h,error_u_l2h,error_v_l2h,error_l2h,error_u_l2,error_v_l2,"
        "error_l2,temporal_order_l2h,spatial_order_l2h,temporal_order,"
        "spatial_order,max_iterations,median_iterations,energy_max_ratio\n");
    for (std::size_t a = 0; a < tr.alphas.size(); ++a) {
      for (const auto& r : tr.results[a].rows) {
        csv.row({num17(r.alpha), num17(r.tau), num17(r.h),
                 num17(r.error_u_l2h), num17(r.error_v_l2h),
                 num17(r.error_l2h), num17(r.error_u_l2), num17(r.error_v_l2),
                 num17(r.error_l2),
                 r.temporal_order ? num17(*r.temporal_order) : "",
                 r.spatial_order ? num17(*r.spatial_order) : "",
                 r.temporal_order_l2 ? num17(*r.temporal_order_l2) : "",
                 r.spatial_order_l2 ? num17(*r.spatial_order_l2) : "",
                 std::to_string(r.max_iterations), num17(r.median_iterations),
                 num17(r.energy_max_ratio)});
      }
    }
  }
  json ref_stats = json::array();
  for (std::size_t a = 0; a < tr.alphas.size(); ++a) {
    const auto& res = tr.results[a];
    ref_stats.push_back({{"alpha", tr.alphas[a]},
                         {"max_iterations", res.reference_max_iterations},
                         {"median_iterations", res.reference_median_iterations},
                         {"energy_max_ratio", res.reference_energy_max_ratio}});
    for (const auto& r : res.rows) {
      std::printf("table %d alpha=%.1f tau=1/%-3.0f h=1/%-3.0f error=%.6e",
                  table, r.alpha, 1.0 / r.tau, 1.0 / r.h, r.error_l2);
      if (r.temporal_order_l2)
        std::printf("  orders %.4f / %.4f", *r.temporal_order_l2,
                    *r.spatial_order_l2);
      std::printf("\n");
    }
  }
  json m;
  m["command"] = "converge";
  m["config"] = {{"table", table},
                 {"alphas", tr.alphas},
                 {"pairs", fgl::default_pairs()},
                 {"reference", std::pair<double, double>{1.0 / 320, 1.0 / 40}}};
  m["reference_stats"] = ref_stats;
  m["acceptance"] = {{"windows_pass", tr.windows_pass},
                     {"violations", tr.window_violations}};
  m["outputs"] = {"results.csv"};
  m["timings"] = {{"run_s", t1 - t0}, {"total_s", now_s() - t0}};
  write_manifest(dir, m);
  if (!tr.windows_pass) {
    for (const auto& v : tr.window_violations)
      std::fprintf(stderr, "window violation: %s\n", v.c_str());
    return 3;
  }
  return 0;
}

int cmd_example3(const std::string& variant, int nx, int steps_per_unit,
                 const std::vector<double>& snapshots, double T,
                 const std::string& out_dir) {
  const double t0 = now_s();
  const auto runs = fgl::example3_run(variant, nx, steps_per_unit, snapshots, T);
  const double t1 = now_s();

  const fs::path top(out_dir);
  fs::create_directories(top);
  std::vector<std::string> run_dirs;
  for (const auto& data : runs) {
    char tag[64];
    if (variant == "fig7.3" || variant == "fig7.4")
      std::snprintf(tag, sizeof tag, "gamma_%+.2f_%+.2f", data.gamma1,
                    data.gamma2);
    else
      std::snprintf(tag, sizeof tag, "alpha_%.2f", data.alpha);
    const fs::path dir = top / tag;
    fs::create_directories(dir);
    run_dirs.push_back(tag);

    std::vector<std::string> outputs;
    for (const char* which : {"u", "v"}) {
      const auto& slices = (*which == 'u') ? data.abs_u : data.abs_v;
      const std::string name = std::string(which) + "_abs.csv";
      Csv csv(dir / name);
      std::string head = "t";
      for (const double x : data.x) head += "," + num17(x);
      csv.raw(head + "\n");
      for (std::size_t i = 0; i < slices.size(); ++i) {
        std::vector<std::string> cells = {num17(data.times[i])};
        for (int j = 0; j < slices[i].size(); ++j)
          cells.push_back(num17(slices[i][j]));
        csv.row(cells);
      }
      outputs.push_back(name);
    }
    const fgl::Grid1D grid = fgl::Grid1D::make(-10.0, 10.0, nx);
    for (const auto& s : data.snapshots) {
      const std::string name = "snapshot_t" + time_tag(s.t) + ".csv";
      write_fields_csv(dir / name, grid, s);
      outputs.push_back(name);
    }
    write_energy_csv(dir / "energy.csv", data.energy);
    outputs.push_back("energy.csv");

    json m;
    m["command"] = "example3";
    m["config"] = {{"variant", variant},
                   {"alpha", data.alpha},
                   {"gamma1", data.gamma1},
                   {"gamma2", data.gamma2},
                   {"nx", nx},
                   {"steps_per_unit", steps_per_unit}};
    m["iterations"] = {{"max", data.max_iterations}};
    m["outputs"] = outputs;
    m["timings"] = {{"total_s", now_s() - t0}};
    write_manifest(dir, m);
    std::printf("%s: alpha=%.2f gamma=(%.2f, %.2f) max %d iterations -> %s\n",
                variant.c_str(), data.alpha, data.gamma1, data.gamma2,
                data.max_iterations, dir.string().c_str());
  }
  json m;
  m["command"] = "example3";
  m["config"] = {{"variant", variant},
                 {"nx", nx},
                 {"steps_per_unit", steps_per_unit},
                 {"T_override", T},
                 {"snapshots", snapshots}};
  m["outputs"] = run_dirs;
  m["timings"] = {{"run_s", t1 - t0}, {"total_s", now_s() - t0}};
  write_manifest(top, m);
  return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& out_dir) {
  const double t0 = now_s();
  const fgl::SuiteReport report = fgl::invariant_suite(seed);
  std::fputs(report.to_string().c_str(), stdout);
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "report.txt");
      f << report.to_string();
    }
    json checks = json::array();
    for (const auto& c : report.checks)
      checks.push_back(
          {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}});
    json m;
    m["command"] = "verify";
    m["config"] = {{"seed", seed}};
    m["acceptance"] = {{"windows_pass", report.all_pass}, {"checks", checks}};
    m["outputs"] = {"report.txt"};
    m["timings"] = {{"total_s", now_s() - t0}};
    write_manifest(dir, m);
  }
  return report.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Solver and experiment driver for a coupled fractional "
      "amplitude-equation system"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // coeffs
  auto* coeffs = app.add_subcommand(
      "coeffs", "Emit a weight-coefficient table as CSV (columns m, kappa)");
  double c_alpha = 1.5;
  std::string c_family = "g2", c_out;
  std::size_t c_length = 100;
  coeffs->add_option("--alpha", c_alpha, "Fractional order in (1, 2]")
      ->required();
  coeffs->add_option("--family", c_family, "Coefficient family")
      ->check(CLI::IsMember({"g2", "g4"}));
  coeffs->add_option("--length", c_length, "Highest index L (emits 0..L)");
  coeffs->add_option("--out", c_out, "Output CSV path (default: stdout)");

  // laplacian
  auto* lap = app.add_subcommand(
      "laplacian",
      "Discrete fractional Laplacian of the built-in polynomial at one node");
  double l_alpha = 1.5, l_x = 0.5;
  int l_nx = 200;
  std::string l_poly = "example1", l_out;
  lap->add_option("--alpha", l_alpha, "Fractional order in (1, 2]")->required();
  lap->add_option("--nx", l_nx, "Number of grid intervals");
  lap->add_option("--poly", l_poly, "Test function")
      ->check(CLI::IsMember({"example1"}));
  lap->add_option("--x", l_x, "Evaluation node");
  lap->add_option("--out", l_out, "Output JSON path (default: stdout)");

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Run one simulation described by a JSON config file");
  std::string s_config, s_out;
  std::vector<double> s_snapshots;
  sim->add_option("--config", s_config, "JSON config path")->required();
  sim->add_option("--snapshots", s_snapshots,
                  "Comma-separated snapshot times (overrides config)")
      ->delimiter(',');
  sim->add_option("--out", s_out, "Output directory (overrides config)");

  // table1
  auto* t1 = app.add_subcommand(
      "table1", "Pointwise-accuracy experiment over the published (alpha, h) grid");
  std::string t1_out = ".";
  t1->add_option("--out", t1_out, "Output directory");

  // converge
  auto* conv = app.add_subcommand(
      "converge", "Convergence study for one published parameter set");
  int cv_table = 2;
  std::string cv_out = ".";
  conv->add_option("--table", cv_table, "Parameter set (2 or 3)")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  conv->add_option("--out", cv_out, "Output directory");

  // example3
  auto* ex3 = app.add_subcommand(
      "example3", "Soliton-evolution experiment (figure-variant parameter sets)");
  std::string e_variant, e_out = ".";
  int e_nx = 512, e_spu = 100;
  double e_T = 0.0;
  std::vector<double> e_snapshots;
  ex3->add_option("--variant", e_variant, "Parameter variant")
      ->required()
      ->check(CLI::IsMember({"fig7.1", "fig7.2", "fig7.3", "fig7.4"}));
  ex3->add_option("--nx", e_nx, "Number of grid intervals");
  ex3->add_option("--steps-per-unit", e_spu, "Time steps per unit time");
  ex3->add_option("--snapshots", e_snapshots, "Comma-separated snapshot times")
      ->delimiter(',');
  ex3->add_option("--T", e_T, "Horizon override (default: variant's 10)");
  ex3->add_option("--out", e_out, "Output directory");

  // verify
  auto* ver = app.add_subcommand(
      "verify", "Run the full invariant suite with a fixed seed");
  std::uint64_t v_seed = 42;
  std::string v_out;
  ver->add_option("--seed", v_seed, "Randomness seed");
  ver->add_option("--out", v_out, "Optional output directory for the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help and version requests are successes; everything else is usage error.
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(coeffs))
      return cmd_coeffs(c_alpha, c_family, c_length, c_out);
    if (app.got_subcommand(lap))
      return cmd_laplacian(l_alpha, l_nx, l_x, l_out);
    if (app.got_subcommand(sim))
      return cmd_simulate(s_config, s_snapshots, s_out);
    if (app.got_subcommand(t1)) return cmd_table1(t1_out);
    if (app.got_subcommand(conv)) return cmd_converge(cv_table, cv_out);
    if (app.got_subcommand(ex3))
      return cmd_example3(e_variant, e_nx, e_spu, e_snapshots, e_T, e_out);
    if (app.got_subcommand(ver)) return cmd_verify(v_seed, v_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration invalid (%zu problem%s):\n",
                 e.violations.size(), e.violations.size() == 1 ? "" : "s");
    for (const auto& v : e.violations)
      std::fprintf(stderr, "  - %s\n", v.c_str());
    return 1;
  } catch (const fgl::NonConvergenceError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 1;
}
