#pragma once

// Reduced five-angle model of the trade-off problem, the symmetrization
// certificate, and constrained searches for the largest A_AC at fixed A_AB.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sqrac/scenario.hpp"
#include "sqrac/witnesses.hpp"

namespace sqrac {

/// Antipodal preparations with n_000 = (sin mu cos phi, sin mu sin phi, cos mu)
/// and Lueders instruments along the axes with t_yy = cos phi_y.
struct ParamPoint {
  double mu = 0.0;
  double phi = 0.0;
  std::array<double, kNumSettings> phis{};

  /// Throws DomainError unless every angle lies in [0, pi/2] (1e-12 slack).
  void validate() const;
  /// n_000 as a unit vector with nonnegative entries.
  Vec3 head() const;
  /// (cos phi_0, cos phi_1, cos phi_2)
  Vec3 sharpness() const;

  static ParamPoint symmetric(double eta);
};

/// 1/2 + (1/6) n_000 . (cos phi_0, cos phi_1, cos phi_2)
double ab_param(const ParamPoint& p);
/// 1/2 + (1/18)[w0 + w1 + w2 + w0 (sin phi_1 + sin phi_2) + w1 (sin phi_0 + sin phi_2)
///              + w2 (sin phi_0 + sin phi_1)] with w = n_000.
double ac_param(const ParamPoint& p);
Strategy param_strategy(const ParamPoint& p);

/// The signed Bloch sums s_z with gamma_z = s_z . sigma.
std::array<Vec3, kNumSettings> gamma_vectors(const Preparations& preps);

/// Bob's effect B_{0|y} = ((1 + alpha) I + t.sigma) / 2.
struct EffectParams {
  double alpha = 0.0;
  Vec3 t{};
};
using EffectSet = std::array<EffectParams, kNumSettings>;

/// sum over y, b and z != y of lambda_max[sqrt(B_{b|y}) (s_z.sigma) sqrt(B_{b|y})],
/// each term from the matrix square root.
double t_bound(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s);
/// Same sum from the outcome-summed closed form.
double t_bound_closed(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s);
/// Maximal T for unbiased effects along the axes with lengths t_yy:
///   |s_0| (r_1 + r_2) + |s_1| (r_0 + r_2) + |s_2| (r_0 + r_1),  r_y = sqrt(1 - t_yy^2).
double max_t_axis(const std::array<double, kNumSettings>& s_norms, const std::array<double, kNumSettings>& t_diag);

/// Upper bound on A_AC after eliminating Bob's unitaries and Charlie's
/// measurements: 1/2 + (1/72) sum_{y,b,z} lambda_max[sqrt(B_{b|y}) gamma_z sqrt(B_{b|y})].
double ac_relaxed(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s);
/// (1/24) sum_y s_y . t_y
double ab_effects(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s);

struct SymmetrizationCertificate {
  double phi = 0.0;          // symmetric angle with the same A_AB
  double ab = 0.0;           // ab_param of the input
  double ac = 0.0;           // ac_param of the input
  double ac_symmetric = 0.0; // ac_param at (arccos(1/sqrt 3), pi/4, phi, phi, phi)
  double cross = 0.0;        // w0 (s1 + s2) + w1 (s0 + s2) + w2 (s0 + s1)
  std::array<double, 2> split{};  // the two cyclic halves of `cross`
  double pair_sum = 0.0;     // sum_{i<j} sin phi_i sin phi_j + cos phi_i cos phi_j
  bool cross_ok = false;     // cross <= sqrt3 + 2 sqrt3 sin phi
  bool split_ok = false;     // each half <= sqrt3 sin phi
  bool pair_ok = false;      // pair_sum <= 3
  bool dominates = false;    // ac_symmetric >= ac
  bool holds = false;
};

/// Builds the symmetric competitor with equal A_AB and checks the chain of
/// inequalities that makes it at least as good for Charlie (tolerance 1e-12).
SymmetrizationCertificate symmetrization_certificate(const ParamPoint& p);

/// Moves p onto ab_param = target: first toward the symmetric head if the
/// target is out of reach, then raising or scaling the cosines.
ParamPoint project_to_ab(const ParamPoint& p, double target);

// --- derivative-free search ---------------------------------------------------

struct BoxProblem {
  std::vector<double> lower;
  std::vector<double> upper;
  /// Must be safe to call concurrently.
  std::function<double(const std::vector<double>&)> objective;
};

struct LocalResult {
  std::vector<double> x;
  double value = 0.0;
  std::uint64_t evaluations = 0;
};

/// Golden-section line searches along each coordinate with shrinking
/// brackets and a pattern step after every sweep. Maximizes.
LocalResult coordinate_search(const BoxProblem& problem, std::vector<double> x0, std::uint64_t budget,
                              double tol = 1e-12);

struct MultiStartResult {
  std::vector<double> x;
  double value = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;  // seed of the winning start
};

/// Runs coordinate_search from start(seed) for seeds first_seed .. first_seed + starts - 1,
/// budget split evenly. A start that converges early restarts from randomly
/// kicked copies of its incumbent until its share is spent. Workers take disjoint seeds; the best value wins and
/// ties go to the lowest seed, so the result does not depend on scheduling.
MultiStartResult multi_start(const BoxProblem& problem,
                             const std::function<std::vector<double>(std::uint64_t)>& start,
                             std::uint64_t first_seed, int starts, std::uint64_t budget, int threads = 0);

// --- frontier -------------------------------------------------------------------

enum class SearchMode { kParam, kGeneral };

struct SearchOptions {
  std::uint64_t seed = 1;
  int starts = 64;
  int threads = 0;  // 0: hardware concurrency
};

struct FrontierResult {
  double a_ab_target = 0.0;
  double bound = 0.0;     // tradeoff_bound(a_ab_target)
  double best_ac = 0.0;   // optimized objective
  double achieved_ab = 0.0;
  std::optional<ParamPoint> point;  // param mode
  Strategy argmax;                  // realizing strategy (Lueders instruments, optimal Charlie)
  WitnessPair realized{};         // witnesses of argmax from the joint table
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;
};

/// Largest A_AC found at A_AB = target. Param mode searches the five angles
/// with exact projection onto the constraint. General mode searches eight
/// Bloch vectors and three effects (alpha_y, t_y) under the same constraint
/// and scores the relaxed objective, with Bob's unitaries and Charlie's
/// measurements eliminated analytically; its achieved A_AB may fall short of
/// the target by up to 1e-9 at the very top of the range. Throws DomainError
/// for targets outside [1/2, kQuantumMax] and InfeasibleInput when general
/// mode finds no feasible point.
FrontierResult maximize_ac(double target, std::uint64_t budget, SearchMode mode, const SearchOptions& options = {});

}  // namespace sqrac
