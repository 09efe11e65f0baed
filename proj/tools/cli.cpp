#include "cli.hpp"

#include "qfock/basis.hpp"
#include "qfock/blocks.hpp"
#include "qfock/gram.hpp"
#include "qfock/linalg.hpp"
#include "qfock/operators.hpp"
#include "qfock/spectral.hpp"
#include "qfock/symgroup.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace qfock::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kDenseGuard = 1e6;
constexpr int kInversionCap = 6;
constexpr int kQInnerCap = 4;

struct Options {
  int d = 2;
  double q = 0.0;
  double bench_q = 0.44;
  int n_max = 6;
  double tol = 1e-10;
  std::string out = "json";
  std::string dir;
  bool force = false;
  int terms = 4;
  double q_min = 0.40;
  double q_max = 0.48;
  int steps = 9;
  std::string blocks = "both";
  int repeat = 1;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set_config(Json config) { config_ = std::move(config); }
  void set_section(const std::string& key, Json value) { sections_[key] = std::move(value); }
  Table& add_table(std::string name, std::vector<std::string> columns) {
    tables_.push_back(Table{std::move(name), std::move(columns), {}});
    return tables_.back();
  }

  /// Passes iff value <= tol * max(1, scale); NaN never passes.
  void check_scaled(const std::string& name, double value, double tol, double scale) {
    const double threshold = tol * std::max(1.0, scale);
    add_check(name, value, threshold, value <= threshold);
  }
  void add_check(const std::string& name, double value, double threshold, bool pass) {
    checks_.push_back(Json{{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
    all_pass_ = all_pass_ && pass;
  }
  bool all_pass() const { return all_pass_; }

  template <class F>
  auto timed(const std::string& phase, F&& f) {
    const auto t0 = Clock::now();
    auto result = f();
    timing_[phase] = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
  }
  void time_value(const std::string& phase, Json value) { timing_[phase] = std::move(value); }

  void emit(const Options& o, std::ostream& out) const {
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["command"] = command_;
    root["config"] = config_;
    root["checks"] = checks_.is_null() ? Json::array() : checks_;
    for (const auto& [key, value] : sections_.items()) root[key] = value;
    if (o.out == "csv") {
      Json files = Json::array();
      files.push_back(write_csv(o.dir, command_ + "_checks.csv", checks_table()));
      for (const Table& t : tables_) files.push_back(write_csv(o.dir, command_ + "_" + t.name + ".csv", t));
      root["files"] = files;
    } else {
      for (const Table& t : tables_) root[t.name] = rows_as_json(t);
    }
    root["timing"] = timing_.is_null() ? Json::object() : timing_;
    out << root.dump(2) << '\n';
  }

 private:
  Table checks_table() const {
    Table t{"checks", {"name", "value", "threshold", "pass"}, {}};
    for (const Json& c : checks_) t.rows.push_back({c["name"], c["value"], c["threshold"], c["pass"]});
    return t;
  }

  static Json rows_as_json(const Table& t) {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = row[c];
      arr.push_back(obj);
    }
    return arr;
  }

  static std::string cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    return v.dump();
  }

  static std::string write_csv(const std::string& dir, const std::string& file, const Table& t) {
    const std::filesystem::path path = std::filesystem::path(dir) / file;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t c = 0; c < t.columns.size(); ++c) f << (c ? "," : "") << t.columns[c];
    f << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << cell(row[c]);
      f << '\n';
    }
    return path.string();
  }

  std::string command_;
  Json config_;
  Json checks_ = Json::array();
  Json sections_ = Json::object();
  std::vector<Table> tables_;
  Json timing_ = Json::object();
  bool all_pass_ = true;
};

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json series_json(const SeriesValue& s) {
  return Json{{"value", s.value}, {"terms", s.terms}, {"tail_bound", s.tail_bound}};
}

Json level_config(const Options& o, bool with_q) {
  return Json{{"d", o.d}, {"q", with_q ? Json(o.q) : Json(nullptr)}, {"n_max", o.n_max}, {"tol", o.tol}};
}

void validate_level_run(const Options& o, double q) {
  try {
    Config{o.d, q, o.n_max, o.tol}.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!o.force && std::pow(static_cast<double>(o.d), o.n_max) > kDenseGuard) {
    throw UsageError("d^nmax = " + std::to_string(static_cast<long long>(std::pow(o.d, o.n_max))) +
                     " exceeds 10^6; pass --force to run anyway");
  }
}

void validate_output(const Options& o) {
  if (o.out == "csv") {
    if (o.dir.empty()) throw UsageError("--out csv requires --dir");
    std::filesystem::create_directories(o.dir);
  }
}

// ---------------------------------------------------------------------------

void cmd_verify(const Options& o, Report& rep) {
  rep.set_config(level_config(o, true));
  const FockTower tower = rep.timed("tower", [&] { return FockTower::build(o.d, o.q, o.n_max, o.tol); });
  const int top = o.n_max;

  double gram_scale = 0.0, r_scale = 0.0, r_sq_scale = 0.0, m_scale = 0.0;
  for (int n = 0; n <= top; ++n) {
    gram_scale = std::max(gram_scale, linalg::max_abs(tower.gram(n)));
    r_scale = std::max(r_scale, linalg::max_abs(tower.r(n)));
    r_sq_scale = std::max(r_sq_scale, linalg::max_abs(tower.r(n) * tower.r(n)));
    m_scale = std::max(m_scale, linalg::max_abs(tower.m(n)));
  }

  rep.timed("gram_routes", [&] {
    double diff = 0.0;
    for (int n = 0; n <= std::min(top, kInversionCap); ++n) {
      diff = std::max(diff, linalg::max_abs_diff(tower.gram(n), gram_by_inversions(o.d, n, o.q, kInversionCap).mat));
    }
    rep.check_scaled("gram_recursion_vs_inversions", diff, o.tol, gram_scale);
    double inner = 0.0;
    for (int n = 0; n <= std::min(top, kQInnerCap); ++n) {
      const std::vector<Word> words = enumerate_words(o.d, n);
      for (std::size_t a = 0; a < words.size(); ++a) {
        for (std::size_t b = 0; b < words.size(); ++b) {
          const double g = tower.gram(n)(static_cast<Index>(a), static_cast<Index>(b));
          inner = std::max(inner, std::fabs(g - q_inner(words[a], words[b], o.q)));
        }
      }
    }
    rep.check_scaled("gram_recursion_vs_q_inner", inner, o.tol, gram_scale);
    return 0;
  });

  rep.timed("unitarity", [&] {
    double diff = 0.0;
    for (int n = 0; n <= top; ++n) {
      diff = std::max(diff, linalg::max_abs_diff(tower.u(n).transpose() * tower.u(n), tower.gram(n)));
    }
    rep.check_scaled("unitarity", diff, o.tol, gram_scale);
    return 0;
  });

  rep.timed("r_routes", [&] {
    const OperatorFamily iter = r_family_by_iteration(o.d, top, o.q, o.tol);
    double diff = 0.0;
    for (int n = 0; n <= top; ++n) diff = std::max(diff, linalg::max_abs_diff(iter[n], tower.r(n)));
    rep.check_scaled("r_routes", diff, o.tol, r_scale);
    double fp = 0.0;
    for (double v : fixed_point_residuals(tower.r_family())) fp = std::max(fp, v);
    rep.check_scaled("fixed_point_residual", fp, o.tol, r_sq_scale);
    return 0;
  });

  rep.timed("defects", [&] {
    if (top >= 2) rep.check_scaled("qcr_defect", qcr_defect(tower), o.tol, r_sq_scale);
    rep.check_scaled("intertwining_defect", intertwining_defect(tower), o.tol, r_scale);
    rep.check_scaled("commutant_defect", commutant_defect(tower.r_family()), o.tol, r_scale);
    return 0;
  });

  rep.timed("factorization", [&] {
    if (top >= 2) {
      double res = 0.0;
      for (int n = 2; n <= top; ++n) res = std::max(res, factorization_residual(o.d, n, o.q));
      rep.check_scaled("factorization_residual", res, o.tol, m_scale);
    }
    return 0;
  });
}

void add_containment_check(Report& rep, const SpectralReport& r, double tol) {
  double violation = 0.0;
  for (const LevelRow& row : r.levels) {
    violation = std::max({violation, row.lower_bound - row.alpha, row.alpha - row.upper_bound});
  }
  rep.check_scaled("bounds_containment", violation, tol, r.bounds.upper);
}

void cmd_spectrum(const Options& o, Report& rep) {
  rep.set_config(level_config(o, true));
  const SpectralReport r = rep.timed("spectrum", [&] { return prop52_report(o.d, o.n_max, o.q, Mode::blocks); });

  rep.check_scaled("alpha_1", std::fabs(r.levels[0].alpha - 1.0), o.tol, 1.0);
  if (o.n_max >= 2) rep.check_scaled("alpha_2", std::fabs(r.levels[1].alpha - (1.0 - std::fabs(o.q))), o.tol, 1.0);
  add_containment_check(rep, r, o.tol);

  Table& t = rep.add_table("levels", {"n", "alpha", "lower_bound", "upper_bound", "contraction_factor", "iterate_distance"});
  for (const LevelRow& row : r.levels) {
    t.rows.push_back({row.n, row.alpha, row.lower_bound, row.upper_bound, optional_number(row.contraction_factor),
                      optional_number(row.iterate_distance)});
  }
  rep.set_section("summary", Json{{"threshold", r.threshold},
                                  {"min_alpha", r.min_alpha},
                                  {"last_alpha", r.last_alpha},
                                  {"margin", r.margin},
                                  {"last_margin", r.last_margin},
                                  {"trend", std::string(to_string(r.trend))},
                                  {"verdict", std::string(to_string(r.verdict))},
                                  {"gauss_product", series_json(r.product)},
                                  {"gauss_theta", series_json(r.theta)}});
}

void cmd_bound(const Options& o, Report& rep) {
  if (o.terms < 2) throw UsageError("--terms must be >= 2");
  if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
  rep.set_config(Json{{"d", nullptr}, {"q", nullptr}, {"n_max", nullptr}, {"tol", o.tol}});

  const double root = rep.timed("bisection", [&] { return condition_root(o.terms, o.tol); });
  const double below = condition_17_margin(std::max(0.0, root - o.tol), o.terms);
  const double above = condition_17_margin(std::min(root + o.tol, std::nextafter(1.0, 0.0)), o.terms);
  // Negative iff the margin changes sign from + to - across [root - tol, root + tol].
  const double bracket = std::max(-below, above);
  rep.add_check("sign_change_bracket", bracket, 0.0, bracket < 0.0);

  Table& t = rep.add_table("roots", {"terms", "root"});
  for (int k = 2; k <= o.terms; ++k) {
    Json value = nullptr;
    try {
      value = condition_root(k, o.tol);
    } catch (const std::domain_error&) {
    }
    t.rows.push_back({k, value});
  }
  rep.set_section("bound", Json{{"terms", o.terms}, {"root", root}, {"margin_at_root", condition_17_margin(root, o.terms)}});
}

void cmd_sweep(const Options& o, Report& rep) {
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  if (!(o.q_min <= o.q_max)) throw UsageError("--q-min must not exceed --q-max");
  validate_level_run(o, o.q_min);
  validate_level_run(o, o.q_max);
  Json config = level_config(o, false);
  config["q_min"] = o.q_min;
  config["q_max"] = o.q_max;
  config["steps"] = o.steps;
  rep.set_config(config);

  Table& t = rep.add_table("grid", {"q", "min_alpha", "last_alpha", "threshold", "margin", "last_margin", "lower_bound",
                                    "trend", "verdict"});
  double violation = 0.0;
  double upper = 1.0;
  rep.timed("sweep", [&] {
    for (int s = 0; s < o.steps; ++s) {
      const double q = o.steps == 1 ? o.q_min : o.q_min + (o.q_max - o.q_min) * s / (o.steps - 1);
      const SpectralReport r = prop52_report(o.d, o.n_max, q, Mode::blocks);
      for (const LevelRow& row : r.levels) {
        violation = std::max({violation, row.lower_bound - row.alpha, row.alpha - row.upper_bound});
      }
      upper = std::max(upper, r.bounds.upper);
      t.rows.push_back({q, r.min_alpha, r.last_alpha, r.threshold, r.margin, r.last_margin, r.bounds.lower,
                        std::string(to_string(r.trend)), std::string(to_string(r.verdict))});
    }
    return 0;
  });
  rep.check_scaled("bounds_containment", violation, o.tol, upper);
}

void cmd_bench(const Options& o, Report& rep) {
  if (o.repeat < 1) throw UsageError("--repeat must be >= 1");
  Options lv = o;
  lv.q = o.bench_q;
  validate_level_run(lv, lv.q);
  Json config = level_config(lv, true);
  config["blocks"] = o.blocks;
  config["repeat"] = o.repeat;
  rep.set_config(config);

  const bool run_dense = o.blocks != "on";
  const bool run_blocks = o.blocks != "off";
  std::vector<double> dense_alpha, block_alpha;
  Index block_peak = 0, block_entries = 0;
  Json dense_times = Json::array(), block_times = Json::array();

  for (int k = 0; k < o.repeat; ++k) {
    if (run_dense) {
      const auto t0 = Clock::now();
      dense_alpha = alphas(o.d, o.n_max, lv.q, Mode::dense);
      dense_times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
    }
    if (run_blocks) {
      const auto t0 = Clock::now();
      BlockTower tower(o.d, lv.q, o.tol);
      block_alpha.clear();
      for (int n = 1; n <= o.n_max; ++n) block_alpha.push_back(tower.level_alpha(n));
      block_times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
      block_peak = tower.peak_dim();
      block_entries = tower.entries();
    }
  }
  if (run_dense) rep.time_value("dense_s", dense_times);
  if (run_blocks) rep.time_value("blocks_s", block_times);

  // Gram matrices at levels 0..n_max and cycle sums at 1..n_max, as formed by
  // the dense route.
  Index dense_entries = 1;
  for (int n = 1; n <= o.n_max; ++n) dense_entries += 2 * ipow(o.d, n) * ipow(o.d, n);

  Table& modes = rep.add_table("modes", {"mode", "peak_dim", "entries"});
  if (run_dense) modes.rows.push_back({"dense", ipow(o.d, o.n_max), dense_entries});
  if (run_blocks) modes.rows.push_back({"blocks", block_peak, block_entries});

  Table& levels = rep.add_table("levels", {"n", "alpha_dense", "alpha_blocks"});
  for (int n = 1; n <= o.n_max; ++n) {
    const auto idx = static_cast<std::size_t>(n - 1);
    levels.rows.push_back({n, run_dense ? Json(dense_alpha[idx]) : Json(nullptr), run_blocks ? Json(block_alpha[idx]) : Json(nullptr)});
  }

  if (run_dense && run_blocks) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < dense_alpha.size(); ++k) {
      diff = std::max(diff, std::fabs(dense_alpha[k] - block_alpha[k]));
      scale = std::max(scale, std::fabs(dense_alpha[k]));
    }
    rep.check_scaled("modes_agree", diff, o.tol, scale);
    const double ratio = static_cast<double>(block_entries) / static_cast<double>(dense_entries);
    rep.add_check("blocks_fewer_entries", ratio, 1.0, ratio < 1.0);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerics for the q-deformed Fock space: identity checks, spectra and bounds"};
  app.name("qfock");
  app.require_subcommand(1);

  const auto output_opts = [&o](CLI::App* s) {
    s->add_option("--out", o.out, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    s->add_option("--dir", o.dir, "directory for CSV tables (with --out csv)");
  };
  const auto level_opts = [&o](CLI::App* s) {
    s->add_option("--d", o.d, "number of letters (d >= 2)")->capture_default_str();
    s->add_option("--nmax", o.n_max, "top level")->capture_default_str();
    s->add_option("--tol", o.tol, "check tolerance, relative to the largest entry")->capture_default_str();
    s->add_flag("--force", o.force, "allow d^nmax > 10^6");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the identity suite at one parameter point");
  level_opts(verify);
  verify->add_option("--q", o.q, "deformation parameter, |q| < 1")->required();
  output_opts(verify);

  CLI::App* spectrum = app.add_subcommand("spectrum", "per-level smallest eigenvalue of M_n with bounds");
  level_opts(spectrum);
  spectrum->add_option("--q", o.q, "deformation parameter, |q| < 1")->required();
  output_opts(spectrum);

  CLI::App* bound = app.add_subcommand("bound", "root of the truncated sufficient condition");
  bound->add_option("--terms", o.terms, "number of series terms kept")->capture_default_str();
  bound->add_option("--tol", o.tol, "bisection tolerance")->capture_default_str();
  output_opts(bound);

  CLI::App* sweep = app.add_subcommand("sweep", "margin report over a grid of q");
  level_opts(sweep);
  sweep->add_option("--q-min", o.q_min, "first grid point")->capture_default_str();
  sweep->add_option("--q-max", o.q_max, "last grid point")->capture_default_str();
  sweep->add_option("--steps", o.steps, "grid points")->capture_default_str();
  output_opts(sweep);

  CLI::App* bench = app.add_subcommand("bench", "dense versus multiset-block computation of alpha_n");
  level_opts(bench);
  bench->add_option("--q", o.bench_q, "deformation parameter, |q| < 1")->capture_default_str();
  bench->add_option("--blocks", o.blocks, "on, off, or both")->check(CLI::IsMember({"on", "off", "both"}))->capture_default_str();
  bench->add_option("--repeat", o.repeat, "timed repetitions")->capture_default_str();
  output_opts(bench);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  std::string command;
  std::function<void(const Options&, Report&)> run;
  if (verify->parsed()) {
    command = "verify";
    run = cmd_verify;
  } else if (spectrum->parsed()) {
    command = "spectrum";
    run = cmd_spectrum;
  } else if (bound->parsed()) {
    command = "bound";
    run = cmd_bound;
  } else if (sweep->parsed()) {
    command = "sweep";
    run = cmd_sweep;
  } else {
    command = "bench";
    run = cmd_bench;
  }

  Report rep(command);
  try {
    if (command == "verify" || command == "spectrum") validate_level_run(o, o.q);
    validate_output(o);
    run(o, rep);
    rep.emit(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return rep.all_pass() ? kPass : kCheckFailure;
}

}  // namespace qfock::cli
