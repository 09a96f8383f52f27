#include "sqrac/scenario.hpp"

#include <numbers>

#include "sqrac/error.hpp"
#include "sqrac/random.hpp"

namespace sqrac {

namespace {

const Vec3 kAxes[kNumSettings] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

Mat2 hermitian_part(const Mat2& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// --- BinaryInstrument -------------------------------------------------------

BinaryInstrument BinaryInstrument::from_kraus(const Mat2& k0, const Mat2& k1, double tol) {
  BinaryInstrument inst;
  inst.k_[0] = KrausOperator::from_matrix(k0, tol);
  inst.k_[1] = KrausOperator::from_matrix(k1, tol);
  const Mat2 total = k0.adjoint() * k0 + k1.adjoint() * k1;
  if (max_abs_diff(total, Mat2::identity()) > tol)
    throw DomainError("instrument effects do not sum to the identity");
  return inst;
}

BinaryInstrument BinaryInstrument::from_parts(double alpha, const Vec3& t, const Mat2& u0, const Mat2& u1) {
  if (!is_unitary(u0, kValidityTol) || !is_unitary(u1, kValidityTol))
    throw DomainError("instrument unitary parts must be unitary");
  const Effect b0 = Effect::from_observable(alpha, t);
  const Effect b1 = b0.complement();
  BinaryInstrument inst;
  inst.k_[0] = KrausOperator::from_matrix(u0 * sqrt_psd(b0));
  inst.k_[1] = KrausOperator::from_matrix(u1 * sqrt_psd(b1));
  return inst;
}

BinaryInstrument BinaryInstrument::luders(double eta, const Vec3& axis) {
  check_unit_interval(eta, "sharpness");
  return from_parts(0.0, normalized(axis) * eta);
}

Mat2 BinaryInstrument::observable() const {
  const Mat2& k0 = k_[0].matrix();
  const Mat2& k1 = k_[1].matrix();
  return hermitian_part(k0.adjoint() * k0 - k1.adjoint() * k1);
}

Mat2 BinaryInstrument::apply(const Mat2& rho) const {
  Mat2 out;
  for (const auto& k : k_) out += k.matrix() * rho * k.matrix().adjoint();
  return out;
}

// --- BinaryMeasurement ------------------------------------------------------

BinaryMeasurement BinaryMeasurement::from_observable(double bias, const Vec3& r) {
  return BinaryMeasurement(Effect::from_observable(bias, r));
}

BinaryMeasurement BinaryMeasurement::projective(const Vec3& dir) {
  const double n = norm(dir);
  if (n == 0.0) throw DomainError("projective measurement needs a nonzero direction");
  return from_observable(0.0, dir * (1.0 / n));
}

// --- constructors -----------------------------------------------------------

BlochVector ideal_bloch(int x) {
  const double s = 1.0 / std::numbers::sqrt3;
  return {input_bit(x, 0) ? -s : s, input_bit(x, 1) ? -s : s, input_bit(x, 2) ? -s : s};
}

Preparations ideal_preparations() {
  Preparations p;
  for (int x = 0; x < kNumInputs; ++x) p[x] = state_from_bloch(ideal_bloch(x));
  return p;
}

InstrumentSet luders_instrument_set(double eta) {
  check_unit_interval(eta, "sharpness");
  InstrumentSet set;
  for (int y = 0; y < kNumSettings; ++y) set[y] = BinaryInstrument::luders(eta, kAxes[y]);
  return set;
}

MeasurementSet ideal_measurements() {
  MeasurementSet m;
  for (int z = 0; z < kNumSettings; ++z) m[z] = BinaryMeasurement::projective(kAxes[z]);
  return m;
}

Strategy ideal_strategy(double eta) { return {ideal_preparations(), luders_instrument_set(eta), ideal_measurements()}; }

// --- dynamics ---------------------------------------------------------------

QubitState post_measurement_state(const QubitState& rho, const KrausOperator& k) {
  const Mat2 out = k.matrix() * rho.matrix() * k.matrix().adjoint();
  const double p = out.trace().real();
  if (p < 1e-12) throw UnreachableOutcome("post-measurement state requested for a zero-probability outcome");
  return QubitState::from_matrix(hermitian_part(out) * (1.0 / p));
}

QubitState effective_state(const QubitState& rho, const InstrumentSet& instruments) {
  Mat2 acc;
  for (const auto& inst : instruments) acc += inst.apply(rho.matrix());
  return QubitState::from_matrix(hermitian_part(acc) * (1.0 / kNumSettings));
}

JointTable joint_table(const Strategy& s) {
  JointTable t;
  std::array<Mat2, 2 * kNumSettings> charlie_effects;
  for (int z = 0; z < kNumSettings; ++z)
    for (int c = 0; c < 2; ++c) charlie_effects[2 * z + c] = s.measurements[z].effect(c).matrix();

  for (int x = 0; x < kNumInputs; ++x) {
    const Mat2& rho = s.preparations[x].matrix();
    for (int y = 0; y < kNumSettings; ++y) {
      for (int b = 0; b < 2; ++b) {
        const Mat2& k = s.instruments[y].kraus(b).matrix();
        const Mat2 out = k * rho * k.adjoint();
        t.bob_[(x * kNumSettings + y) * 2 + b] = out.trace().real();
        for (int z = 0; z < kNumSettings; ++z)
          for (int c = 0; c < 2; ++c) {
            const double p = trace_product(out, charlie_effects[2 * z + c]);
            t.p_[JointTable::index(x, y, b, z, c)] = p;
            t.charlie_[(x * kNumSettings + z) * 2 + c] += p / kNumSettings;
          }
      }
    }
  }
  return t;
}

Strategy apply_visibility(const Strategy& s, double va, double vb, double vc) {
  check_unit_interval(va, "preparation visibility");
  check_unit_interval(vb, "instrument visibility");
  check_unit_interval(vc, "measurement visibility");
  Strategy out;
  for (int x = 0; x < kNumInputs; ++x) out.preparations[x] = state_from_bloch(s.preparations[x].bloch() * va);
  for (int y = 0; y < kNumSettings; ++y) {
    const BinaryInstrument& inst = s.instruments[y];
    out.instruments[y] =
        BinaryInstrument::from_parts(inst.alpha(), inst.axis_vector() * vb, inst.unitary(0), inst.unitary(1));
  }
  for (int z = 0; z < kNumSettings; ++z) {
    const BinaryMeasurement& m = s.measurements[z];
    out.measurements[z] = BinaryMeasurement::from_observable(m.bias(), m.direction() * vc);
  }
  return out;
}

std::vector<ChainStep> sequential_chain(int k) {
  if (k < 1 || k > 20) throw DomainError("chain length must be between 1 and 20");
  const InstrumentSet sharp = luders_instrument_set(1.0);
  // The averaged channel is unital, so it acts on Bloch vectors as a 3x3
  // matrix. Propagating vectors rather than density matrices keeps the
  // relative precision of lengths that shrink to 3^-20.
  std::array<Vec3, 3> rows{};
  for (int j = 0; j < 3; ++j) {
    Mat2 image;
    for (const auto& inst : sharp) image += inst.apply(Mat2::pauli(j));
    const Vec3 col = image.pauli_part() * (1.0 / kNumSettings);
    for (int i = 0; i < 3; ++i) rows[i][j] = col[i];
  }
  std::array<Vec3, kNumInputs> ensemble;
  for (int x = 0; x < kNumInputs; ++x) ensemble[x] = ideal_bloch(x);

  std::vector<ChainStep> steps;
  double scale = 1.0;
  for (int i = 1; i <= k; ++i) {
    scale /= 3.0;
    double acc = 0.0;
    for (int x = 0; x < kNumInputs; ++x) {
      const Mat2 rho = Mat2::from_pauli(0.5, ensemble[x] * 0.5);
      for (int y = 0; y < kNumSettings; ++y)
        acc += trace_product(rho, sharp[y].effect(input_bit(x, y)).matrix());
    }
    steps.push_back({i, acc / (kNumInputs * kNumSettings), 0.5 * (1.0 + std::numbers::sqrt3 * scale),
                     norm(ensemble[0])});
    for (auto& r : ensemble) r = {dot(rows[0], r), dot(rows[1], r), dot(rows[2], r)};
  }
  return steps;
}

Strategy parametrized_strategy(double mu, double phi, double phi0, double phi1, double phi2) {
  constexpr double kHalfPi = std::numbers::pi / 2;
  for (double a : {mu, phi, phi0, phi1, phi2})
    if (!(a >= -1e-12 && a <= kHalfPi + 1e-12)) throw DomainError("angles must lie in [0, pi/2]");
  const double sx = std::sin(mu) * std::cos(phi);
  const double sy = std::sin(mu) * std::sin(phi);
  const double sz = std::cos(mu);
  const std::array<Vec3, 4> head = {Vec3{sx, sy, sz}, Vec3{sx, sy, -sz}, Vec3{sx, -sy, sz}, Vec3{sx, -sy, -sz}};
  Strategy s;
  for (int x = 0; x < 4; ++x) {
    s.preparations[x] = state_from_bloch(head[x]);
    s.preparations[kNumInputs - 1 - x] = state_from_bloch(-head[x]);
  }
  const double angles[kNumSettings] = {phi0, phi1, phi2};
  for (int y = 0; y < kNumSettings; ++y)
    s.instruments[y] = BinaryInstrument::luders(std::clamp(std::cos(angles[y]), 0.0, 1.0), kAxes[y]);
  s.measurements = ideal_measurements();
  return s;
}

Strategy random_strategy(std::uint64_t seed, RandomMode mode) {
  Rng rng(seed);
  if (mode == RandomMode::kParametrized) {
    constexpr double kHalfPi = std::numbers::pi / 2;
    const double mu = rng.uniform(0.0, kHalfPi);
    const double phi = rng.uniform(0.0, kHalfPi);
    const double p0 = rng.uniform(0.0, kHalfPi);
    const double p1 = rng.uniform(0.0, kHalfPi);
    const double p2 = rng.uniform(0.0, kHalfPi);
    return parametrized_strategy(mu, phi, p0, p1, p2);
  }
  Strategy s;
  for (auto& rho : s.preparations)
    rho = state_from_bloch(mode == RandomMode::kPurePreparations ? rng.unit_vector() : rng.ball_vector());
  for (auto& inst : s.instruments) {
    const double len = rng.uniform();
    const Vec3 t = rng.unit_vector() * len;
    const double alpha = rng.uniform(-1.0, 1.0) * (1.0 - len);
    const Mat2 u0 = rng.haar_unitary();
    const Mat2 u1 = rng.haar_unitary();
    inst = BinaryInstrument::from_parts(alpha, t, u0, u1);
  }
  for (auto& m : s.measurements) m = BinaryMeasurement::projective(rng.unit_vector());
  return s;
}

}  // namespace sqrac
