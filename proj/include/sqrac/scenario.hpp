#pragma once

// Prepare-transform-measure strategies for the 3->1 sequential random access
// code: Alice's eight preparations, Bob's three binary instruments, Charlie's
// three binary measurements, and the joint statistics they produce.

#include <array>
#include <cstdint>
#include <vector>

#include "sqrac/qubit.hpp"

namespace sqrac {

inline constexpr int kNumInputs = 8;    // x = x0 x1 x2
inline constexpr int kNumSettings = 3;  // y, z

/// Bit x_k of the input string x = x0 x1 x2, where x0 is the most significant bit.
constexpr int input_bit(int x, int k) { return (x >> (2 - k)) & 1; }

using Preparations = std::array<QubitState, kNumInputs>;

/// Binary-outcome instrument {K_0, K_1} with K_0^dagger K_0 + K_1^dagger K_1 = I.
class BinaryInstrument {
 public:
  /// Lueders instrument of the trivial POVM {I/2, I/2}.
  BinaryInstrument() = default;

  /// Throws DomainError unless both operators are valid Kraus operators and
  /// complete to the identity within tol.
  static BinaryInstrument from_kraus(const Mat2& k0, const Mat2& k1, double tol = kValidityTol);

  /// K_b = U_b sqrt(B_b) with B_0 = ((1 + alpha) I + t.sigma) / 2 and B_1 = I - B_0.
  static BinaryInstrument from_parts(double alpha, const Vec3& t, const Mat2& u0 = Mat2::identity(),
                                     const Mat2& u1 = Mat2::identity());

  /// Lueders instrument of the unbiased POVM with observable eta * axis.sigma
  /// (axis is normalized).
  static BinaryInstrument luders(double eta, const Vec3& axis);

  const KrausOperator& kraus(int b) const { return k_[b]; }
  Effect effect(int b) const { return k_[b].effect(); }
  /// B_0 - B_1 = alpha I + t.sigma
  Mat2 observable() const;
  double alpha() const { return observable().identity_part(); }
  Vec3 axis_vector() const { return observable().pauli_part(); }
  /// Unitary parts U_b of K_b = U_b sqrt(B_b).
  Mat2 unitary(int b) const { return polar_decompose(k_[b]).unitary; }

  /// Non-selective action sum_b K_b rho K_b^dagger.
  Mat2 apply(const Mat2& rho) const;

 private:
  std::array<KrausOperator, 2> k_{};
};

/// Binary POVM {C_0, I - C_0}.
class BinaryMeasurement {
 public:
  BinaryMeasurement() = default;
  explicit BinaryMeasurement(const Effect& c0) : c0_(c0) {}

  /// C_0 = ((1 + bias) I + r.sigma) / 2
  static BinaryMeasurement from_observable(double bias, const Vec3& r);
  /// Rank-one projective measurement; outcome 0 projects onto the Bloch direction `dir`.
  static BinaryMeasurement projective(const Vec3& dir);

  Effect effect(int c) const { return c == 0 ? c0_ : c0_.complement(); }
  Mat2 observable() const { return c0_.matrix() * 2.0 - Mat2::identity(); }
  double bias() const { return observable().identity_part(); }
  Vec3 direction() const { return observable().pauli_part(); }

 private:
  Effect c0_{};
};

using InstrumentSet = std::array<BinaryInstrument, kNumSettings>;
using MeasurementSet = std::array<BinaryMeasurement, kNumSettings>;

struct Strategy {
  Preparations preparations{};
  InstrumentSet instruments{};
  MeasurementSet measurements{};
};

/// p(b, c | x, y, z) = tr[K_{b|y} rho_x K_{b|y}^dagger C_{c|z}] for all 288
/// combinations, with Bob's marginal p(b|x,y) and Charlie's marginal
/// p(c|x,z) (uniform over y, summed over b).
class JointTable {
 public:
  static constexpr std::size_t kSize = kNumInputs * kNumSettings * 2 * kNumSettings * 2;

  double operator()(int x, int y, int b, int z, int c) const { return p_[index(x, y, b, z, c)]; }
  double bob(int x, int y, int b) const { return bob_[(x * kNumSettings + y) * 2 + b]; }
  double charlie(int x, int z, int c) const { return charlie_[(x * kNumSettings + z) * 2 + c]; }

  const std::array<double, kSize>& entries() const { return p_; }

  friend JointTable joint_table(const Strategy& s);

 private:
  static constexpr std::size_t index(int x, int y, int b, int z, int c) {
    return static_cast<std::size_t>((((x * kNumSettings + y) * 2 + b) * kNumSettings + z) * 2 + c);
  }
  std::array<double, kSize> p_{};
  std::array<double, kNumInputs * kNumSettings * 2> bob_{};
  std::array<double, kNumInputs * kNumSettings * 2> charlie_{};
};

/// Pure states on the cube vertices n_x = ((-1)^x0, (-1)^x1, (-1)^x2) / sqrt(3).
Preparations ideal_preparations();
BlochVector ideal_bloch(int x);
/// Lueders instruments along x, y, z with common sharpness eta in [0, 1].
InstrumentSet luders_instrument_set(double eta);
/// Projective measurements along x, y, z.
MeasurementSet ideal_measurements();
/// Ideal preparations and measurements with luders_instrument_set(eta).
Strategy ideal_strategy(double eta);

/// K rho K^dagger / tr(K^dagger K rho); throws UnreachableOutcome when the
/// branch probability is below 1e-12.
QubitState post_measurement_state(const QubitState& rho, const KrausOperator& k);

/// Bob's output averaged over his uniformly random setting and outcome:
/// (1/3) sum_{y,b} K_{b|y} rho K_{b|y}^dagger.
QubitState effective_state(const QubitState& rho, const InstrumentSet& instruments);
inline QubitState effective_state(const Strategy& s, int x) {
  return effective_state(s.preparations[x], s.instruments);
}

JointTable joint_table(const Strategy& s);

/// Shrinks preparation Bloch vectors by va, instrument axis vectors t_y by vb
/// (Kraus operators rebuilt as U_b sqrt(B_b') with the original unitary parts),
/// and measurement Bloch vectors by vc.
Strategy apply_visibility(const Strategy& s, double va, double vb, double vc);

struct ChainStep {
  int decoder = 0;              // 1 = Bob, 2 = Charlie, ...
  double guessing = 0.0;        // simulated average guessing probability
  double closed_form = 0.0;     // (1 + sqrt(3) / 3^k) / 2
  double bloch_length = 0.0;    // Bloch length of the ensemble the decoder receives
};

/// k decoders in sequence, each applying the sharp ideal instruments to the
/// averaged ensemble relayed by its predecessor. 1 <= k <= 20.
std::vector<ChainStep> sequential_chain(int k);

enum class RandomMode { kGeneral, kPurePreparations, kParametrized };

/// Reproducible pseudo-random valid strategy.
///  kGeneral: mixed preparations uniform in the Bloch ball, extremal
///    instruments K_b = U_b sqrt(B_b) with Haar-random unitaries, random
///    projective measurements.
///  kPurePreparations: as kGeneral with preparations on the sphere.
///  kParametrized: parametrized_strategy at uniformly random angles.
Strategy random_strategy(std::uint64_t seed, RandomMode mode);

/// Antipodal preparations n_000 = (sin mu cos phi, sin mu sin phi, cos mu),
/// n_001, n_010, n_011 by sign flips of the y and z components and
/// n_{~x} = -n_x; Lueders instruments with t_y = cos(phi_y) e_y; ideal
/// measurements. All angles in [0, pi/2].
Strategy parametrized_strategy(double mu, double phi, double phi0, double phi1, double phi2);

}  // namespace sqrac
