#include "sqrac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqrac/error.hpp"
#include "sqrac/randomness.hpp"
#include "sqrac/strategy_io.hpp"
#include "sqrac/witnesses.hpp"

namespace sqrac::cli {

namespace {

using nlohmann::json;

double parse_double(std::string_view text, const char* what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw DomainError(std::string(what) + ": '" + s + "' is not a number");
  return v;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

void check_probability(double p, const char* what) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw std::logic_error(std::string(what) + " left [0, 1]");
}

const ClassicalFrontier& classical() {
  static const ClassicalFrontier f = classical_frontier();
  return f;
}

}  // namespace

// --- parsing and rendering -------------------------------------------------------

std::vector<double> Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    v[i] = i == points - 1 ? stop : start + (stop - start) * static_cast<double>(i) / (points - 1);
  return v;
}

Grid parse_grid(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos)
    throw DomainError("grid must look like start:stop:points");
  Grid g;
  g.start = parse_double(spec.substr(0, first), "grid start");
  g.stop = parse_double(spec.substr(first + 1, second - first - 1), "grid stop");
  const double points = parse_double(spec.substr(second + 1), "grid points");
  if (points != std::floor(points) || points < 2 || points > 1e7) throw DomainError("grid needs an integer number of points >= 2");
  g.points = static_cast<int>(points);
  return g;
}

std::vector<std::uint64_t> parse_seeds(std::string_view spec) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (true) {
    const auto comma = spec.find(',', pos);
    const std::string item(spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos));
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("seeds must be comma-separated nonnegative integers");
    try {
      seeds.push_back(std::stoull(item));
    } catch (const std::out_of_range&) {
      throw DomainError("seed '" + item + "' is out of range");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string render(const Table& t, Format format, std::string_view command) {
  if (format == Format::kJson) {
    json doc;
    doc["command"] = command;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (double v : r) row.push_back(number(v));
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    json summary = json::object();
    for (const auto& [k, v] : t.summary) summary[k] = v;
    doc["summary"] = std::move(summary);
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += "\n";
  }
  for (const auto& [k, v] : t.summary) out += "# " + k + "=" + v + "\n";
  return out;
}

// --- tables ------------------------------------------------------------------------

Table tradeoff_table(const Grid& grid, std::uint64_t budget, const std::vector<std::uint64_t>& seeds, SearchMode mode) {
  if (seeds.empty()) throw DomainError("at least one seed is required");
  Table t;
  t.columns = {"eta", "a_ab", "bound", "classical_pareto", "classical_hull"};
  if (budget > 0) t.columns.insert(t.columns.end(), {"optimized", "gap", "evaluations", "seed"});
  const ClassicalFrontier& f = classical();
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (double eta : grid.values()) {
    const double a = ab_from_eta(eta);
    const double bound = tradeoff_bound(a);
    check_probability(bound, "bound");
    std::vector<double> row = {eta, a, bound, classical_pareto_value(f, a), classical_hull_value(f, a)};
    if (budget > 0) {
      FrontierResult best;
      std::uint64_t evaluations = 0;
      bool first = true;
      for (std::uint64_t seed : seeds) {
        SearchOptions opt;
        opt.seed = seed;
        FrontierResult r = maximize_ac(a, budget, mode, opt);
        evaluations += r.evaluations;
        if (first || r.best_ac > best.best_ac || (r.best_ac == best.best_ac && seed < best.seed)) {
          best = std::move(r);
          best.seed = seed;
          first = false;
        }
      }
      check_probability(best.best_ac, "optimized A_AC");
      worst_gap = std::max(worst_gap, bound - best.best_ac);
      worst_excess = std::max(worst_excess, best.best_ac - bound);
      row.insert(row.end(), {best.best_ac, bound - best.best_ac, static_cast<double>(evaluations),
                             static_cast<double>(best.seed)});
    }
    t.rows.push_back(std::move(row));
  }
  t.summary.emplace_back("classical_max_ab", format_number(f.max_ab));
  t.summary.emplace_back("classical_max_ac", format_number(f.max_ac));
  if (budget > 0) {
    t.summary.emplace_back("mode", mode == SearchMode::kParam ? "param" : "general");
    t.summary.emplace_back("max_gap", format_number(worst_gap));
    t.summary.emplace_back("max_excess", format_number(worst_excess));
  }
  return t;
}

Table sweep_table(const Grid& grid) {
  Table t;
  t.columns = {"eta", "a_ab", "a_ac", "classical_bound", "double_violation"};
  int violations = 0;
  for (double eta : grid.values()) {
    const WitnessPair w = witnesses(ideal_strategy(eta));
    check_probability(w.a_ab, "A_AB");
    check_probability(w.a_ac, "A_AC");
    const bool both = w.a_ab > kClassicalMax && w.a_ac > kClassicalMax;
    violations += both;
    t.rows.push_back({eta, w.a_ab, w.a_ac, kClassicalMax, both ? 1.0 : 0.0});
  }
  t.summary.emplace_back("double_violations", std::to_string(violations));
  return t;
}

Table chain_table(int k) {
  Table t;
  t.columns = {"step", "simulated", "closed_form", "abs_diff", "bloch_length"};
  double worst = 0.0;
  for (const ChainStep& s : sequential_chain(k)) {
    check_probability(s.guessing, "chain value");
    worst = std::max(worst, std::abs(s.guessing - s.closed_form));
    t.rows.push_back({static_cast<double>(s.decoder), s.guessing, s.closed_form, std::abs(s.guessing - s.closed_form),
                      s.bloch_length});
  }
  t.summary.emplace_back("max_abs_diff", format_number(worst));
  return t;
}

Table randomness_table(const Grid& grid, std::uint64_t budget, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw DomainError("at least one seed is required");
  if (budget < 1) throw DomainError("budget must be at least 1");
  std::vector<Hmin3Fn> fns;
  for (std::uint64_t seed : seeds) {
    Hmin3Options o;
    o.budget = budget;
    o.seed = seed;
    o.starts = 8;
    fns.push_back(numeric_hmin3(o));
  }
  const Hmin3Fn hmin3 = [&fns](double t) {
    double h = std::numeric_limits<double>::infinity();
    for (const auto& f : fns) h = std::min(h, f(t));
    return h;
  };
  const std::vector<RateRow> rows = rate_sweep(grid.values(), hmin3);
  Table t;
  t.columns = {"eta",         "theta",           "w_ab",  "w_ac",  "hmin_w_bob",  "hmin_w_charlie",
               "t2_ab",       "t2_ac",           "hmin_t2_bob", "hmin_t2_charlie", "t3_ab", "t3_ac",
               "hmin_t3_bob", "hmin_t3_charlie"};
  for (const RateRow& r : rows) {
    for (double w : {r.w_ab, r.w_ac, r.hmin_w_bob, r.hmin_w_charlie, r.hmin_t2_bob, r.hmin_t2_charlie, r.hmin_t3_bob,
                     r.hmin_t3_charlie})
      check_probability(w, "witness or entropy");
    t.rows.push_back({r.eta, r.theta, r.w_ab, r.w_ac, r.hmin_w_bob, r.hmin_w_charlie, r.t2_ab, r.t2_ac, r.hmin_t2_bob,
                      r.hmin_t2_charlie, r.t3_ab, r.t3_ac, r.hmin_t3_bob, r.hmin_t3_charlie});
  }
  const Crossover c = crossover_from_rows(rows);
  t.summary.emplace_back("bob_threshold", c.bob_found ? format_number(c.bob_threshold) : "none");
  t.summary.emplace_back("charlie_threshold", c.charlie_found ? format_number(c.charlie_threshold) : "none");
  t.summary.emplace_back("grid_spacing", format_number(c.spacing));
  if (c.bob_found) t.summary.emplace_back("bob_offset_from_0.9956", format_number(c.bob_threshold - 0.9956));
  if (c.charlie_found) t.summary.emplace_back("charlie_offset_from_0.1105", format_number(c.charlie_threshold - 0.1105));
  t.summary.emplace_back("budget", std::to_string(budget));
  return t;
}

std::string certify_report(double a_ab, double a_ac) {
  const CertInterval c = certify(a_ab, a_ac);
  json doc;
  doc["a_ab"] = number(a_ab);
  doc["a_ac"] = number(a_ac);
  doc["feasible"] = true;
  doc["eta_lo"] = number(c.eta_lo);
  doc["eta_hi"] = number(c.eta_hi);
  doc["width"] = number(c.eta_hi - c.eta_lo);
  doc["lo_nontrivial"] = c.lo_nontrivial;
  doc["hi_nontrivial"] = c.hi_nontrivial;
  return doc.dump(2) + "\n";
}

std::string selftest_report(const Strategy& s) {
  const CanonicalReport r = canonicalize(s);
  const WitnessPair w = witnesses(s);
  const auto numbers = [](const auto& arr) {
    json a = json::array();
    for (double v : arr) a.push_back(number(v));
    return a;
  };
  json doc;
  doc["result"] = r.pass ? "PASS" : "FAIL";
  doc["a_ab"] = number(w.a_ab);
  doc["a_ac"] = number(w.a_ac);
  doc["eta"] = number(r.eta);
  doc["conjugated"] = r.conjugated;
  doc["frame_source"] = r.frame_source;
  doc["worst_residual"] = number(r.worst_residual);
  doc["worst_component"] = r.worst_component;
  doc["preparation_residuals"] = numbers(r.preparation_residuals);
  doc["instrument_residuals"] = numbers(r.instrument_residuals);
  doc["kraus_residuals"] = numbers(r.kraus_residuals);
  doc["measurement_residuals"] = numbers(r.measurement_residuals);
  return doc.dump(2) + "\n";
}

// --- entry point -----------------------------------------------------------------------

namespace {

struct Common {
  std::string grid = "0:1:101";
  std::string seeds = "1";
  std::int64_t budget = -1;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* app, Common& c, bool with_grid) {
  if (with_grid) app->add_option("--grid", c.grid, "start:stop:points")->capture_default_str();
  app->add_option("--seed", c.seeds, "N[,N...]")->capture_default_str();
  app->add_option("--budget", c.budget, "evaluation budget");
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

std::array<double, 3> parse_visibility(std::string_view spec) {
  std::array<double, 3> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = spec.find(',', pos);
    if ((i < 2) == (comma == std::string_view::npos)) throw DomainError("visibility must look like va,vb,vc");
    v[i] = parse_double(spec.substr(pos, i < 2 ? comma - pos : spec.npos), "visibility");
    pos = comma + 1;
  }
  return v;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential 3->1 QRAC toolkit: trade-off, certification, self-test and randomness data"};
  app.require_subcommand(1);
  Common common;

  auto* tradeoff = app.add_subcommand("tradeoff", "quantum bound and classical frontier over A_AB");
  add_common(tradeoff, common, true);
  std::string mode = "param";
  tradeoff->add_option("--mode", mode, "optimizer mode")->check(CLI::IsMember({"param", "general"}))->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "witness pair of the ideal unsharp family over eta");
  add_common(sweep, common, true);

  double a_ab = 0.0;
  double a_ac = 0.0;
  auto* cert = app.add_subcommand("certify", "sharpness interval from observed witnesses");
  cert->add_option("--ab", a_ab, "observed A_AB")->required();
  cert->add_option("--ac", a_ac, "observed A_AC")->required();
  cert->add_option("--out", common.out, "output file (default: stdout)");

  int k = 10;
  auto* chain = app.add_subcommand("chain", "sequential chain of sharp decoders");
  chain->add_option("--k", k, "chain length (1-20)")->capture_default_str();
  add_common(chain, common, false);

  auto* randomness = app.add_subcommand("randomness", "certified randomness rates over eta");
  add_common(randomness, common, true);

  std::string file;
  auto* selftest = app.add_subcommand("selftest", "self-test report for a strategy file");
  selftest->add_option("file", file, "strategy JSON")->required();
  selftest->add_option("--out", common.out, "output file (default: stdout)");

  double eta = 1.0;
  std::string visibility = "1,1,1";
  std::int64_t random_seed = -1;
  auto* strategy = app.add_subcommand("strategy", "emit a strategy file");
  strategy->add_option("--eta", eta, "sharpness of the ideal family")->capture_default_str();
  strategy->add_option("--visibility", visibility, "va,vb,vc")->capture_default_str();
  strategy->add_option("--random", random_seed, "emit random_strategy(seed) instead");
  strategy->add_option("--out", common.out, "output file (default: stdout)");

  std::vector<std::string> argv_store = {"sqrac"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    const Format format = common.format == "json" ? Format::kJson : Format::kCsv;
    if (common.budget < -1) throw DomainError("budget must be nonnegative");
    if (*tradeoff) {
      const std::uint64_t budget = common.budget < 0 ? 0 : static_cast<std::uint64_t>(common.budget);
      const Table t = tradeoff_table(parse_grid(common.grid), budget, parse_seeds(common.seeds),
                                     mode == "general" ? SearchMode::kGeneral : SearchMode::kParam);
      emit(render(t, format, "tradeoff"), common.out, out);
    } else if (*sweep) {
      emit(render(sweep_table(parse_grid(common.grid)), format, "sweep"), common.out, out);
    } else if (*cert) {
      try {
        emit(certify_report(a_ab, a_ac), common.out, out);
      } catch (const InfeasibleInput& e) {
        json doc;
        doc["a_ab"] = number(a_ab);
        doc["a_ac"] = number(a_ac);
        doc["feasible"] = false;
        doc["error"] = e.what();
        emit(doc.dump(2) + "\n", common.out, out);
        err << "infeasible: " << e.what() << "\n";
        return kInvalidInput;
      }
    } else if (*chain) {
      emit(render(chain_table(k), format, "chain"), common.out, out);
    } else if (*randomness) {
      const std::uint64_t budget = common.budget < 0 ? 20000 : static_cast<std::uint64_t>(common.budget);
      emit(render(randomness_table(parse_grid(common.grid), budget, parse_seeds(common.seeds)), format, "randomness"),
           common.out, out);
    } else if (*selftest) {
      emit(selftest_report(read_strategy_file(file)), common.out, out);
    } else if (*strategy) {
      Strategy s = random_seed >= 0 ? random_strategy(static_cast<std::uint64_t>(random_seed), RandomMode::kGeneral)
                                    : ideal_strategy(eta);
      const auto v = parse_visibility(visibility);
      if (v[0] != 1.0 || v[1] != 1.0 || v[2] != 1.0) s = apply_visibility(s, v[0], v[1], v[2]);
      emit(strategy_to_json(s), common.out, out);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseFailure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InfeasibleInput& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace sqrac::cli
