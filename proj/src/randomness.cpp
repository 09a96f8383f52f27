#include "sqrac/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqrac/error.hpp"
#include "sqrac/optimizer.hpp"
#include "sqrac/parallel.hpp"
#include "sqrac/random.hpp"
#include "sqrac/scenario.hpp"
#include "sqrac/witnesses.hpp"

namespace sqrac {

namespace {

constexpr double kEdgeTol = 1e-12;
constexpr double kS2 = std::numbers::sqrt2;
constexpr double kS3 = std::numbers::sqrt3;
constexpr double kT3Classical = 6.0;
constexpr double kT3Max = 4.0 * kS3;
constexpr double kT2Classical = 2.0;
constexpr double kT2Max = 2.0 * kS2;

double clamp_to(double v, double lo, double hi, const char* what) {
  if (!(v >= lo - kEdgeTol && v <= hi + kEdgeTol))
    throw DomainError(std::string(what) + " outside its domain");
  return std::clamp(v, lo, hi);
}

double sharpness(double eta) { return clamp_to(eta, 0.0, 1.0, "sharpness"); }

const Vec3 kX{1.0, 0.0, 0.0};
const Vec3 kY{0.0, 1.0, 0.0};

// Probability of outcome 1 for each of Bob's and Charlie's settings in a
// two-setting experiment with measurements along x and y.
struct TwoSettingStats {
  std::array<std::array<double, 2>, 4> bob{};
  std::array<std::array<double, 2>, 4> charlie{};
};

TwoSettingStats two_setting_stats(const std::array<Vec3, 4>& blochs, double eta) {
  const std::array<BinaryInstrument, 2> bob = {BinaryInstrument::luders(eta, kX), BinaryInstrument::luders(eta, kY)};
  const std::array<BinaryMeasurement, 2> charlie = {BinaryMeasurement::projective(kX),
                                                    BinaryMeasurement::projective(kY)};
  TwoSettingStats out;
  for (int x = 0; x < 4; ++x) {
    const QubitState rho = state_from_bloch(blochs[x]);
    Mat2 relayed;
    for (int y = 0; y < 2; ++y) {
      out.bob[x][y] = trace_product(rho.matrix(), bob[y].effect(1).matrix());
      relayed += bob[y].apply(rho.matrix());
    }
    relayed = relayed * 0.5;
    for (int z = 0; z < 2; ++z) out.charlie[x][z] = trace_product(relayed, charlie[z].effect(1).matrix());
  }
  return out;
}

double probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

// --- determinant witness ------------------------------------------------------

void Prob2x2Table::validate() const {
  for (const auto& row : p)
    for (double v : row)
      if (!(v >= -kEdgeTol && v <= 1.0 + kEdgeTol)) throw DomainError("probabilities must lie in [0, 1]");
}

double determinant_witness(const Prob2x2Table& t) {
  t.validate();
  const auto& p = t.p;
  const double a = p[0][0] - p[1][0];
  const double b = p[2][0] - p[3][0];
  const double c = p[0][1] - p[1][1];
  const double d = p[2][1] - p[3][1];
  return a * d - b * c;
}

DeterminantTables determinant_experiment(double eta) {
  eta = sharpness(eta);
  const TwoSettingStats st = two_setting_stats({kX, -kX, kY, -kY}, eta);
  DeterminantTables out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 2; ++y) {
      out.bob.p[x][y] = probability(st.bob[x][y]);
      out.charlie.p[x][y] = probability(st.charlie[x][y]);
    }
  return out;
}

double w_ab(double eta) {
  eta = sharpness(eta);
  return eta * eta;
}

double w_ac(double eta) {
  eta = sharpness(eta);
  const double h = 0.5 * (1.0 + std::sqrt(1.0 - eta * eta));
  return h * h;
}

double theta_from_eta(double eta) { return 0.5 * std::acos(sharpness(eta)); }

double eta_from_theta(double theta) {
  return std::cos(2.0 * clamp_to(theta, 0.0, std::numbers::pi / 4, "theta"));
}

double hmin_w(double w) {
  w = clamp_to(w, 0.0, 1.0, "determinant witness");
  return -std::log2(0.5 + 0.5 * std::sqrt((2.0 - w) / 2.0));
}

// --- QRAC witnesses -------------------------------------------------------------

WitnessValues t2_witnesses(double eta) {
  eta = sharpness(eta);
  return {2.0 * kS2 * eta, kS2 * (1.0 + std::sqrt(1.0 - eta * eta))};
}

WitnessValues t3_witnesses(double eta) {
  eta = sharpness(eta);
  return {4.0 * kS3 * eta, 4.0 * kS3 / 3.0 * (1.0 + 2.0 * std::sqrt(1.0 - eta * eta))};
}

WitnessValues t2_simulated(double eta) {
  eta = sharpness(eta);
  std::array<Vec3, 4> blochs;
  for (int x = 0; x < 4; ++x) blochs[x] = {(x >> 1) ? -1.0 / kS2 : 1.0 / kS2, (x & 1) ? -1.0 / kS2 : 1.0 / kS2, 0.0};
  const TwoSettingStats st = two_setting_stats(blochs, eta);
  WitnessValues out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 2; ++y) {
      const int bit = y == 0 ? (x >> 1) : (x & 1);
      const double sign = bit ? -1.0 : 1.0;
      out.ab += 0.5 * sign * (1.0 - 2.0 * st.bob[x][y]);
      out.ac += 0.5 * sign * (1.0 - 2.0 * st.charlie[x][y]);
    }
  return out;
}

double t3_from_success(double a) { return 12.0 * (2.0 * a - 1.0); }

double hmin_t2(double t) {
  t = clamp_to(t, kT2Classical, kT2Max, "2->1 witness");
  const double u = std::min(1.0, (t * t - 4.0) / 4.0);
  return -std::log2(0.5 + 0.5 * std::sqrt((1.0 + std::sqrt(1.0 - u * u)) / 2.0));
}

// --- numerical 3->1 bound -------------------------------------------------------

namespace {

Vec3 spherical(double r, double theta, double phi) {
  return {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi), r * std::cos(theta)};
}

std::array<Vec3, kNumInputs> decode(const std::vector<double>& v) {
  std::array<Vec3, kNumInputs> n;
  for (int x = 0; x < kNumInputs; ++x) n[x] = spherical(v[3 * x], v[3 * x + 1], v[3 * x + 2]);
  return n;
}

struct GuessEval {
  double t = 0.0;
  double overlap = 0.0;  // largest |n_000 . m_0| compatible with the target
  bool feasible = false;
};

GuessEval evaluate_guess(const std::array<Vec3, kNumInputs>& n, double target, MeasurementModel model) {
  const auto s = signed_sums(n);
  const double s0 = norm(s[0]);
  GuessEval e;
  e.t = s0 + norm(s[1]) + norm(s[2]);
  e.feasible = e.t >= target - kEdgeTol;
  if (!e.feasible) return e;
  const double len = norm(n[0]);
  if (model == MeasurementModel::kWitnessOptimal || s0 == 0.0) {
    e.overlap = s0 > 0.0 ? std::abs(dot(n[0], s[0])) / s0 : len;
    return e;
  }
  // m_0 . s^_0 >= c keeps T at the target with m_1, m_2 along s_1, s_2.
  const double c = std::clamp((target - norm(s[1]) - norm(s[2])) / s0, -1.0, 1.0);
  const double beta = std::acos(c);
  if (len == 0.0) return e;
  const double cos_g = std::clamp(dot(n[0], s[0]) / (len * s0), -1.0, 1.0);
  for (double sign : {1.0, -1.0}) {
    const double g = std::acos(sign * cos_g);
    e.overlap = std::max(e.overlap, g <= beta ? len : len * std::cos(g - beta));
  }
  return e;
}

/// Pulls an ensemble that misses the target toward the cube (where T is
/// maximal) by bisection on the mixing weight, stopping on the feasible side.
std::array<Vec3, kNumInputs> pull_to_target(std::array<Vec3, kNumInputs> n, double target, MeasurementModel model) {
  if (evaluate_guess(n, target, model).feasible) return n;
  const auto mix = [&n](double lambda) {
    std::array<Vec3, kNumInputs> m;
    for (int x = 0; x < kNumInputs; ++x) m[x] = n[x] * (1.0 - lambda) + ideal_bloch(x) * lambda;
    return m;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 32; ++k) {
    const double mid = 0.5 * (lo + hi);
    (evaluate_guess(mix(mid), target, model).feasible ? hi : lo) = mid;
  }
  return mix(hi);
}

}  // namespace

GuessResult guess_t3(double t, const Hmin3Options& options) {
  t = clamp_to(t, kT3Classical, kT3Max, "3->1 witness");
  BoxProblem problem;
  for (int x = 0; x < kNumInputs; ++x) {
    problem.lower.insert(problem.lower.end(), {0.0, 0.0, -std::numbers::pi});
    problem.upper.insert(problem.upper.end(), {1.0, std::numbers::pi, std::numbers::pi});
  }
  const MeasurementModel model = options.model;
  problem.objective = [t, model](const std::vector<double>& v) {
    const GuessEval e = evaluate_guess(pull_to_target(decode(v), t, model), t, model);
    return e.feasible ? e.overlap : -1.0 - (t - e.t);
  };
  const std::uint64_t first = options.seed;
  const auto start = [first](std::uint64_t seed) {
    Rng rng(seed);
    const double amp = seed == first ? 0.0 : rng.uniform(0.0, 0.6);
    std::vector<double> v(3 * kNumInputs);
    for (int x = 0; x < kNumInputs; ++x) {
      const Vec3 b = ideal_bloch(x);
      v[3 * x] = 1.0;
      v[3 * x + 1] = std::clamp(std::acos(b.z) + amp * rng.normal(), 0.0, std::numbers::pi);
      v[3 * x + 2] = std::remainder(std::atan2(b.y, b.x) + amp * rng.normal(), 2.0 * std::numbers::pi);
    }
    return v;
  };
  const MultiStartResult best = multi_start(problem, start, options.seed, options.starts, options.budget, options.threads);
  GuessResult out;
  out.t_target = t;
  out.preparations = pull_to_target(decode(best.x), t, model);
  const GuessEval e = evaluate_guess(out.preparations, t, model);
  if (!e.feasible) throw InfeasibleInput("no preparations reach the 3->1 witness target");
  out.t_value = e.t;
  out.p_guess = std::min(1.0, 0.5 * (1.0 + e.overlap));
  out.hmin = -std::log2(out.p_guess);
  out.evaluations = best.evaluations;
  return out;
}

double hmin_t3_numeric(double t, std::uint64_t budget, const Hmin3Options& options) {
  Hmin3Options o = options;
  o.budget = budget;
  return guess_t3(t, o).hmin;
}

Hmin3Fn numeric_hmin3(const Hmin3Options& options) {
  Hmin3Options o = options;
  o.threads = 1;
  return [o](double t) { return t < kT3Classical ? 0.0 : guess_t3(std::min(t, kT3Max), o).hmin; };
}

// --- sweeps -------------------------------------------------------------------------

namespace {

double hmin_t2_or_zero(double t) { return t < kT2Classical ? 0.0 : hmin_t2(std::min(t, kT2Max)); }

}  // namespace

Crossover crossover_scan(int points, const Hmin3Fn& hmin3, int threads) {
  if (points < 2) throw DomainError("crossover scan needs at least two grid points");
  std::vector<double> etas(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) etas[i] = static_cast<double>(i) / (points - 1);
  return crossover_from_rows(rate_sweep(etas, hmin3, threads));
}

Crossover crossover_from_rows(const std::vector<RateRow>& rows) {
  Crossover out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.spacing = std::max(out.spacing, rows[i].eta - rows[i - 1].eta);
  for (const RateRow& r : rows) {
    if (r.hmin_t3_bob > r.hmin_t2_bob + kEdgeTol && !out.bob_found) {
      out.bob_found = true;
      out.bob_threshold = r.eta;
    }
    if (r.hmin_t3_charlie > r.hmin_t2_charlie + kEdgeTol) {
      out.charlie_found = true;
      out.charlie_threshold = r.eta;
    }
  }
  return out;
}

std::vector<RateRow> rate_sweep(const std::vector<double>& etas, const Hmin3Fn& hmin3, int threads) {
  std::vector<RateRow> rows(etas.size());
  parallel_for(static_cast<int>(etas.size()), threads, [&](int i) {
    RateRow& r = rows[i];
    r.eta = sharpness(etas[i]);
    r.theta = theta_from_eta(r.eta);
    r.w_ab = w_ab(r.eta);
    r.w_ac = w_ac(r.eta);
    r.hmin_w_bob = hmin_w(r.w_ab);
    r.hmin_w_charlie = hmin_w(r.w_ac);
    const WitnessValues t2 = t2_witnesses(r.eta);
    r.t2_ab = t2.ab;
    r.t2_ac = t2.ac;
    r.hmin_t2_bob = hmin_t2_or_zero(t2.ab);
    r.hmin_t2_charlie = hmin_t2_or_zero(t2.ac);
    const WitnessValues t3 = t3_witnesses(r.eta);
    r.t3_ab = t3.ab;
    r.t3_ac = t3.ac;
    r.hmin_t3_bob = hmin3(t3.ab);
    r.hmin_t3_charlie = hmin3(t3.ac);
  });
  return rows;
}

}  // namespace sqrac
