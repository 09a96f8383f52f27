// One PASS/FAIL line per acceptance criterion. With --expect-fail N[,N...]
// the exit status is 0 exactly when the failing set equals the given set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqrac/cli.hpp"
#include "sqrac/optimizer.hpp"
#include "sqrac/random.hpp"
#include "sqrac/randomness.hpp"
#include "sqrac/scenario.hpp"
#include "sqrac/witnesses.hpp"

using namespace sqrac;

namespace {

const double kS3 = std::numbers::sqrt3;
const double kHalfPi = std::numbers::pi / 2;

struct Verdict {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Folded curve: relabeling Bob's outcomes maps A_AB to 1 - A_AB and leaves A_AC unchanged.
double folded_bound(double a_ab) { return tradeoff_bound(std::clamp(std::max(a_ab, 1.0 - a_ab), 0.5, kQuantumMax)); }

std::vector<WitnessPair> grid_pairs() {
  std::vector<WitnessPair> v;
  for (int i = 0; i <= 100; ++i) v.push_back(witnesses(ideal_strategy(i / 100.0)));
  return v;
}

std::vector<WitnessPair> sample_pairs() {
  std::vector<WitnessPair> v;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) v.push_back(witnesses(random_strategy(seed, RandomMode::kGeneral)));
  return v;
}

Verdict quantum_maximum() {
  const auto t0 = Clock::now();
  const double a = witnesses(ideal_strategy(1.0)).a_ab;
  const double dt = seconds_since(t0);
  return {std::abs(a - kQuantumMax) <= 1e-9 && dt < 1.0, fmt("A_AB = %.12f, expected %.12f, %.3f s", a, kQuantumMax, dt)};
}

Verdict classical_maximum() {
  const auto t0 = Clock::now();
  const ClassicalFrontier f = classical_frontier();
  const double dt = seconds_since(t0);
  bool joint = f.joint_max;
  if (joint) {
    const WitnessPair w = classical_witnesses(f.joint_max_strategy);
    joint = w.a_ab == 0.75 && w.a_ac == 0.75;
  }
  return {f.max_ab == 0.75 && f.max_ac == 0.75 && joint && dt < 60.0,
          fmt("max A_AB = %.12g, max A_AC = %.12g, (3/4, 3/4) achievable: %s, %llu encodings, %.2f s", f.max_ab,
              f.max_ac, joint ? "yes" : "no", static_cast<unsigned long long>(f.encodings_searched), dt)};
}

Verdict tradeoff_tightness(const std::vector<WitnessPair>& grid) {
  double closed = 0.0, curve = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double eta = i / 100.0;
    closed = std::max({closed, std::abs(grid[i].a_ab - ab_from_eta(eta)), std::abs(grid[i].a_ac - ac_from_eta(eta))});
    curve = std::max(curve, std::abs(grid[i].a_ac - tradeoff_bound(grid[i].a_ab)));
  }
  return {closed <= 1e-9 && curve <= 1e-9,
          fmt("101 points: max |sim - closed form| = %.2e, max |A_AC - curve| = %.2e", closed, curve)};
}

Verdict tradeoff_soundness(const std::vector<WitnessPair>& samples, double seconds) {
  double worst = -1.0;
  double best_ab = 0.0;
  for (const auto& w : samples) {
    worst = std::max(worst, w.a_ac - folded_bound(w.a_ab));
    best_ab = std::max(best_ab, std::max(w.a_ab, 1.0 - w.a_ab));
  }
  Verdict v{worst <= 1e-7 && seconds < 120.0,
            fmt("10000 random general strategies: max excess over curve = %.3e, largest folded A_AB = %.4f, %.2f s",
                worst, best_ab, seconds)};
  ClassicalFrontier f = classical_frontier();
  const WitnessPair c = witnesses(embed_classical(f.joint_max_strategy));
  v.notes.push_back(fmt("the curve is not a bound above A_AB ~ 0.674: the embedded classical strategy reaches "
                        "(%.6f, %.6f) against a curve value %.6f; random sampling never gets there",
                        c.a_ab, c.a_ac, tradeoff_bound(c.a_ab)));
  const FrontierResult g = maximize_ac(0.72, 100000, SearchMode::kGeneral);
  v.notes.push_back(fmt("general search at A_AB = 0.72 realizes A_AC = %.6f against a curve value %.6f",
                        g.realized.a_ac, tradeoff_bound(0.72)));
  return v;
}

Verdict optimizer_completeness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double target = 0.5 + (kQuantumMax - 0.5) * i / 10.0;
    const FrontierResult r = maximize_ac(target, 100000, SearchMode::kParam);
    worst = std::max(worst, std::abs(r.bound - r.best_ac));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-4 && dt < 600.0, fmt("11 targets, budget 1e5: max |bound - found| = %.3e, %.2f s", worst, dt)};
}

Verdict symmetrization() {
  Rng rng(2024);
  int failures = 0;
  for (int k = 0; k < 100000; ++k) {
    const ParamPoint p{rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi),
                       {rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi)}};
    failures += !symmetrization_certificate(p).holds;
  }
  return {failures == 0, fmt("100000 random points, %d violate the inequality chain", failures)};
}

Verdict reference_points() {
  const WitnessPair w = witnesses(ideal_strategy(1.0 / kS3));
  const auto chain = sequential_chain(3);
  const double a2 = chain[1].guessing, a3 = chain[2].guessing;
  const double c2 = 0.5 * (1.0 + kS3 / 9.0), c3 = 0.5 * (1.0 + kS3 / 27.0);
  const bool point = std::abs(w.a_ab - 0.6667) <= 5e-5 && std::abs(w.a_ac - 0.7534) <= 5e-5;
  const bool exact = std::abs(a2 - c2) <= 1e-9 && std::abs(a3 - c3) <= 1e-9;
  const bool quoted = std::abs(a2 - 0.596225) <= 5e-7 && std::abs(a3 - 0.532075) <= 5e-7;
  return {point && exact && quoted,
          fmt("eta = 1/sqrt3 gives (%.6f, %.6f); A_2 = %.9f, A_3 = %.9f (closed forms %.9f, %.9f)", w.a_ab, w.a_ac,
              a2, a3, c2, c3)};
}

Verdict certification() {
  const CertInterval c = certify(0.6425, 0.7156);
  double width = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double eta = i / 100.0;
    const CertInterval on = certify(ab_from_eta(eta), ac_from_eta(eta));
    width = std::max(width, std::abs(on.eta_hi - on.eta_lo));
  }
  return {std::abs(c.eta_lo - 0.4936) <= 1e-4 && std::abs(c.eta_hi - 0.7844) <= 1e-3 && width <= 1e-9,
          fmt("(0.6425, 0.7156) -> [%.6f, %.6f]; widest on-curve interval over 99 points = %.2e", c.eta_lo, c.eta_hi,
              width)};
}

Verdict double_violation(const std::vector<WitnessPair>& grid, const std::vector<WitnessPair>& samples) {
  int both = 0;
  double closest = 0.0;
  for (const auto* set : {&grid, &samples})
    for (const auto& w : *set) {
      both += w.a_ab > kClassicalMax && w.a_ac > kClassicalMax;
      closest = std::max(closest, std::min(w.a_ab, w.a_ac));
    }
  return {both == 0, fmt("%d of %zu pairs exceed 3/4 on both sides; largest min(A_AB, A_AC) = %.6f", both,
                         grid.size() + samples.size(), closest)};
}

Verdict randomness_anchors() {
  double det = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double eta = i / 100.0;
    det = std::max(det, std::abs(determinant_witness(determinant_experiment(eta).bob) - eta * eta));
  }
  const double hw = hmin_w(1.0);
  const auto t0 = Clock::now();
  const double h3 = hmin_t3_numeric(4.0 * kS3, 200000);
  const double dt = seconds_since(t0);
  const bool det_ok = det <= 1e-9, hw_ok = std::abs(hw - 0.228443) <= 1e-6, h3_ok = std::abs(h3 - 0.3425) <= 0.005;
  Verdict v{det_ok && hw_ok && h3_ok && dt < 300.0,
            fmt("determinant vs eta^2: %.2e [%s]; hmin_w(1) = %.10f vs 0.228443 [%s]; "
                "hmin_t3(4 sqrt3) = %.6f vs 0.3425 [%s], %.2f s",
                det, det_ok ? "PASS" : "FAIL", hw, hw_ok ? "PASS" : "FAIL", h3, h3_ok ? "PASS" : "FAIL", dt)};
  if (!hw_ok)
    v.notes.push_back(fmt("-log2(1/2 + sqrt(1/2)/2) = %.10f; the quoted 0.228443 differs by %.2e and is not "
                          "reproduced by the formula",
                          -std::log2(0.5 + 0.5 * std::sqrt(0.5)), hw - 0.228443));
  return v;
}

Verdict crossover() {
  Hmin3Options o;
  o.budget = 20000;
  o.starts = 8;
  const auto t0 = Clock::now();
  const Crossover c = crossover_scan(1001, numeric_hmin3(o));
  const double dt = seconds_since(t0);
  const bool bob = c.bob_found && std::abs(c.bob_threshold - 0.9956) <= 0.02;
  const bool charlie = c.charlie_found && std::abs(c.charlie_threshold - 0.1105) <= 0.02;
  return {bob && charlie, fmt("Bob %.4f (offset %+.4f), Charlie %.4f (offset %+.4f), spacing %.4f, %.1f s",
                              c.bob_threshold, c.bob_threshold - 0.9956, c.charlie_threshold,
                              c.charlie_threshold - 0.1105, c.spacing, dt)};
}

Verdict determinism() {
  const auto strategy_path = std::filesystem::temp_directory_path() / "sqrac_acceptance_strategy.json";
  const std::vector<std::vector<std::string>> commands = {
      {"tradeoff"},
      {"tradeoff", "--grid", "0:1:6", "--budget", "5000", "--seed", "3,1", "--format", "json"},
      {"tradeoff", "--grid", "0.9:1:3", "--budget", "5000", "--mode", "general"},
      {"sweep", "--format", "json"},
      {"certify", "--ab", "0.6425", "--ac", "0.7156"},
      {"chain", "--k", "20"},
      {"randomness", "--grid", "0:1:5", "--budget", "2000", "--seed", "1,2"},
      {"strategy", "--random", "9"},
      {"strategy", "--eta", "0.6", "--out", strategy_path.string()},
      {"selftest", strategy_path.string()},
  };
  int differing = 0, failing = 0;
  for (const auto& args : commands) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      std::ostringstream out, err;
      failing += cli::run(args, out, err) != 0;
      if (rep == 0) first = out.str();
      else differing += out.str() != first;
    }
  }
  std::filesystem::remove(strategy_path);
  return {differing == 0 && failing == 0,
          fmt("%zu commands run twice: %d differ, %d exited nonzero", commands.size(), differing, failing)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> expected;
  app.add_option("--expect-fail", expected, "criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto t0 = Clock::now();
  const std::vector<WitnessPair> grid = grid_pairs();
  const std::vector<WitnessPair> samples = sample_pairs();
  const double sampling = seconds_since(t0);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"quantum maximum", quantum_maximum},
      {"classical maximum", classical_maximum},
      {"trade-off tightness", [&] { return tradeoff_tightness(grid); }},
      {"trade-off soundness", [&] { return tradeoff_soundness(samples, sampling); }},
      {"optimizer completeness", optimizer_completeness},
      {"symmetrization inequalities", symmetrization},
      {"reference points", reference_points},
      {"certification", certification},
      {"double violation", [&] { return double_violation(grid, samples); }},
      {"randomness anchors", randomness_anchors},
      {"crossover", crossover},
      {"determinism", determinism},
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    const Verdict v = criteria[i].second();
    const int id = static_cast<int>(i) + 1;
    if (!v.pass) failed.insert(id);
    std::printf("%s %2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str(), seconds_since(start));
    for (const auto& n : v.notes) std::printf("     note: %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  return failed == std::set<int>(expected.begin(), expected.end()) ? 0 : 1;
}
