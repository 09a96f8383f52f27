#pragma once

// Dimension witnesses and the min-entropy they certify: the determinant
// witness, 2->1 and 3->1 QRAC witnesses, and a numerical guessing-probability
// bound for the 3->1 witness.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sqrac/qubit.hpp"

namespace sqrac {

/// p[x][y] = probability of outcome 1 for preparation x in {00, 01, 10, 11}
/// and measurement y in {0, 1}.
struct Prob2x2Table {
  std::array<std::array<double, 2>, 4> p{};
  /// Throws DomainError unless every entry lies in [0, 1] (1e-12 slack).
  void validate() const;
};

/// | p(1|00,0) - p(1|01,0)   p(1|10,0) - p(1|11,0) |
/// | p(1|00,1) - p(1|01,1)   p(1|10,1) - p(1|11,1) |
double determinant_witness(const Prob2x2Table& t);

struct DeterminantTables {
  Prob2x2Table bob;
  Prob2x2Table charlie;
};

/// Two-setting sub-experiment: pure states along +x, -x, +y, -y, Bob's
/// Lueders instruments of sharpness eta along x and y, Charlie's sharp x and
/// y measurements on the post-measurement states averaged over Bob's setting.
DeterminantTables determinant_experiment(double eta);

/// eta^2
double w_ab(double eta);
/// ((1 + sqrt(1 - eta^2)) / 2)^2
double w_ac(double eta);

/// eta = cos 2 theta, theta in [0, pi/4].
double theta_from_eta(double eta);
double eta_from_theta(double theta);

/// -log2(1/2 + (1/2) sqrt((2 - W) / 2)) for W in [0, 1].
double hmin_w(double w);

struct WitnessValues {
  double ab = 0.0;
  double ac = 0.0;
};

/// (2 sqrt2 eta, sqrt2 (1 + sqrt(1 - eta^2)))
WitnessValues t2_witnesses(double eta);
/// (4 sqrt3 eta, (4 sqrt3 / 3)(1 + 2 sqrt(1 - eta^2)))
WitnessValues t3_witnesses(double eta);
/// 2->1 QRAC with square preparations and Lueders instruments along x and y,
/// T = (1/2) sum_{x,y} (-1)^{x_y} <B_y>_x, from simulated probabilities.
WitnessValues t2_simulated(double eta);
/// T^{3->1} = 12 (2 A - 1) for an average success probability A.
double t3_from_success(double a);

/// -log2(1/2 + (1/2) sqrt((1 + sqrt(1 - ((T^2 - 4)/4)^2)) / 2)) for T in [2, 2 sqrt2].
double hmin_t2(double t);

/// How Bob's measurements are chosen for given preparations.
enum class MeasurementModel {
  kWitnessOptimal,  // sharp along s_y, so T = sum_y |s_y|
  kTilted,          // sharp; the guessed setting tilts toward the state while keeping T >= target
};

struct Hmin3Options {
  std::uint64_t budget = 200000;
  std::uint64_t seed = 1;
  int starts = 16;
  int threads = 0;
  MeasurementModel model = MeasurementModel::kWitnessOptimal;
};

struct GuessResult {
  double t_target = 0.0;
  double t_value = 0.0;
  double p_guess = 1.0;
  double hmin = 0.0;
  std::array<Vec3, 8> preparations{};
  std::uint64_t evaluations = 0;
};

/// Largest max_{x,y,b} p(b|x,y) over qubit preparations and sharp
/// measurements whose 3->1 witness is at least t, found by multi-start
/// search over the eight Bloch vectors. By symmetry of the witness the
/// maximum can be taken at x = 000, y = 0. Throws DomainError for t outside
/// [6, 4 sqrt3] (1e-12 slack).
GuessResult guess_t3(double t, const Hmin3Options& options = {});
/// -log2 of guess_t3(t).p_guess.
double hmin_t3_numeric(double t, std::uint64_t budget, const Hmin3Options& options = {});

using Hmin3Fn = std::function<double(double)>;

/// hmin_t3_numeric with the given options, 0 below the classical value 6.
/// Safe to call concurrently.
Hmin3Fn numeric_hmin3(const Hmin3Options& options);

struct Crossover {
  bool bob_found = false;
  double bob_threshold = 0.0;      // smallest eta where 3->1 beats 2->1 on Bob's side
  bool charlie_found = false;
  double charlie_threshold = 0.0;  // largest eta where 3->1 beats 2->1 on Charlie's side
  double spacing = 0.0;            // grid spacing, the threshold uncertainty
};

/// Scans eta on `points` equally spaced values in [0, 1]. The 2->1 rate is
/// zero below its classical value. Grid points are evaluated in parallel.
Crossover crossover_scan(int points, const Hmin3Fn& hmin3, int threads = 0);

struct RateRow {
  double eta = 0.0;
  double theta = 0.0;
  double w_ab = 0.0;
  double w_ac = 0.0;
  double hmin_w_bob = 0.0;
  double hmin_w_charlie = 0.0;
  double t2_ab = 0.0;
  double t2_ac = 0.0;
  double hmin_t2_bob = 0.0;
  double hmin_t2_charlie = 0.0;
  double t3_ab = 0.0;
  double t3_ac = 0.0;
  double hmin_t3_bob = 0.0;
  double hmin_t3_charlie = 0.0;
};

/// One row per eta; hmin3 is called in parallel across rows.
std::vector<RateRow> rate_sweep(const std::vector<double>& etas, const Hmin3Fn& hmin3, int threads = 0);

/// Thresholds read off rows sorted by eta; spacing is the largest gap.
Crossover crossover_from_rows(const std::vector<RateRow>& rows);

}  // namespace sqrac
