#pragma once

// Correlation witnesses, the quantum trade-off curve, sharpness
// certification, the classical frontier and the self-test check.

#include <array>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "sqrac/scenario.hpp"

namespace sqrac {

/// 1/2 + 1/(2 sqrt 3): the single-decoder quantum maximum.
inline constexpr double kQuantumMax = 0.5 + 0.5 / std::numbers::sqrt3;
inline constexpr double kClassicalMax = 0.75;

struct WitnessPair {
  double a_ab = 0.0;
  double a_ac = 0.0;
};

/// (1/24) sum_{x,y} p(b = x_y | x, y)
double witness_ab(const JointTable& t);
/// (1/24) sum_{x,z} p(c = x_z | x, z)
double witness_ac(const JointTable& t);
WitnessPair witnesses(const Strategy& s);

/// (1/24) sum_{x,y} tr[rho_x B_{x_y|y}], without building the joint table.
double witness_ab_direct(const Strategy& s);

/// s_y = (1/2) sum_x (-1)^{x_y} n_x for an arbitrary ensemble of Bloch vectors.
std::array<Vec3, kNumSettings> signed_sums(const std::array<Vec3, kNumInputs>& blochs);

/// Charlie's best measurements for the given preparations and instruments:
/// projectors along s~_z built from the effective states.
MeasurementSet optimal_measurements(const Preparations& preps, const InstrumentSet& instruments);
/// 1/2 + (1/24) sum_z |s~_z|, the value optimal_measurements attains.
double optimal_ac(const Preparations& preps, const InstrumentSet& instruments);

/// Largest A_AC compatible with A_AB for qubit strategies:
///   1/2 + (sqrt 3 / 18)(1 + 2 sqrt(12 a - 12 a^2 - 2)).
/// Domain [1/2, kQuantumMax]; inputs within 1e-9 of an edge are clamped,
/// anything further out throws DomainError.
double tradeoff_bound(double a_ab);

/// Ideal unsharp family: 1/2 + sqrt(3) eta / 6.
double ab_from_eta(double eta);
/// Ideal unsharp family: 1/2 + (sqrt 3 / 18)(1 + 2 sqrt(1 - eta^2)).
double ac_from_eta(double eta);

struct EtaBound {
  double value = 0.0;
  bool nontrivial = false;
};

/// eta >= sqrt(3)(2 a_ab - 1), clamped to [0, 1]; nontrivial when a_ab > 1/2.
EtaBound eta_lower(double a_ab);
/// eta <= (1/2) sqrt(3 (6 sqrt3 a - 3 sqrt3 + 1)(-2 sqrt3 a + sqrt3 + 1)),
/// nontrivial on [(1 + sqrt3/9)/2, (1 + sqrt3/3)/2]; outside that window the
/// bound is vacuous (value 1).
EtaBound eta_upper(double a_ac);

struct CertInterval {
  double eta_lo = 0.0;
  double eta_hi = 1.0;
  bool lo_nontrivial = false;
  bool hi_nontrivial = false;
};

/// Sharpness interval implied by observed witnesses. Throws DomainError for
/// inputs outside [0, 1] and InfeasibleInput when eta_lo > eta_hi + 1e-6 or
/// a witness exceeds the qubit maximum by more than 1e-6.
CertInterval certify(double a_ab, double a_ac);

// --- classical strategies ---------------------------------------------------

/// Deterministic one-bit strategy. Messages m, m' are bits.
struct ClassicalStrategy {
  std::array<int, kNumInputs> encoding{};                       // x -> m
  std::array<std::array<int, kNumSettings>, 2> bob_decoding{};  // [m][y] -> b
  std::array<std::array<std::array<int, 2>, kNumSettings>, 2> bob_relay{};  // [m][y][b] -> m'
  std::array<std::array<int, kNumSettings>, 2> charlie_decoding{};          // [m'][z] -> c
};

/// Exact witness values of a deterministic strategy.
WitnessPair classical_witnesses(const ClassicalStrategy& cs);

/// The same strategy as a qubit strategy with every operator diagonal in the
/// computational basis. Each outcome carries a single Kraus operator, so a
/// relay that sends both messages to the same m' under one outcome cannot be
/// embedded (DomainError).
Strategy embed_classical(const ClassicalStrategy& cs);

struct ClassicalFrontier {
  /// Every achievable pair, sorted by (a_ab, a_ac).
  std::vector<WitnessPair> achievable;
  /// Pareto-optimal pairs, a_ab ascending.
  std::vector<WitnessPair> pareto;
  /// Upper concave hull of the Pareto points (shared-randomness mixtures).
  std::vector<WitnessPair> hull;
  double max_ab = 0.0;
  double max_ac = 0.0;
  bool joint_max = false;  // (3/4, 3/4) achievable
  ClassicalStrategy joint_max_strategy;
  std::uint64_t encodings_searched = 0;
};

/// Exhaustive search over deterministic strategies. Bob's relay only matters
/// through (m, y) -> m' because b is itself a function of (m, y); encodings
/// related by flipping the message bit give identical pairs, so only
/// encodings with m(000) = 0 are searched.
ClassicalFrontier classical_frontier(bool use_symmetry = true);

/// Largest a_ac on the Pareto staircase with a_ab' >= a_ab; NaN above max_ab.
double classical_pareto_value(const ClassicalFrontier& f, double a_ab);
/// Same on the concave hull (piecewise linear); NaN above max_ab.
double classical_hull_value(const ClassicalFrontier& f, double a_ab);

// --- self-test --------------------------------------------------------------

struct CanonicalReport {
  bool pass = false;
  bool conjugated = false;          // complex-conjugation branch used
  std::string frame_source;         // "bob" or "charlie"
  double eta = 0.0;                 // mean |t_y|
  std::array<double, kNumInputs> preparation_residuals{};
  std::array<double, kNumSettings> instrument_residuals{};     // |B_y - eta sigma_y|
  std::array<double, 2 * kNumSettings> kraus_residuals{};      // [2 y + b]
  std::array<double, kNumSettings> measurement_residuals{};    // |C_z - U sigma_z U^dagger|
  double worst_residual = 0.0;
  std::string worst_component;
  Mat2 input_frame;                 // W: rotates the strategy into the canonical frame
  Mat2 output_unitary;              // U, in the canonical frame
};

/// Rotates the strategy so Bob's observables lie along x, y, z (conjugating
/// everything first when they form a left-handed frame), then measures the
/// distance of every component to the self-tested form: cube preparations,
/// B_y = eta sigma_y, K_{b|y} = e^{i theta} U sqrt(B_{b|y}) and
/// C_z = U sigma_z U^dagger. When Bob's observables are too short to define
/// a frame, Charlie's directions are used instead. Distances are largest
/// entrywise moduli (Euclidean for Bloch vectors).
CanonicalReport canonicalize(const Strategy& s, double tol = 1e-6);

}  // namespace sqrac
