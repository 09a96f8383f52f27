#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqrac/error.hpp"
#include "sqrac/random.hpp"
#include "sqrac/scenario.hpp"

using namespace sqrac;

namespace {

const double kS3 = std::numbers::sqrt3;

void check_table_invariants(const JointTable& t) {
  for (int x = 0; x < kNumInputs; ++x)
    for (int y = 0; y < kNumSettings; ++y)
      for (int z = 0; z < kNumSettings; ++z) {
        double total = 0.0;
        for (int b = 0; b < 2; ++b) {
          double marginal = 0.0;
          for (int c = 0; c < 2; ++c) {
            const double p = t(x, y, b, z, c);
            CHECK(p >= -1e-9);
            CHECK(p <= 1.0 + 1e-9);
            marginal += p;
          }
          CHECK(std::abs(marginal - t.bob(x, y, b)) < 1e-9);
          total += marginal;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
      }
}

}  // namespace

TEST_CASE("ideal preparations form the cube") {
  const Preparations p = ideal_preparations();
  const Vec3 n000 = p[0].bloch();
  CHECK(norm(n000 - Vec3{1, 1, 1} * (1 / kS3)) < 1e-15);
  CHECK(max_abs_diff(p[0].matrix() + p[7].matrix(), Mat2::identity()) < 1e-15);
  int pairs = 0;
  for (int a = 0; a < kNumInputs; ++a) {
    CHECK(eig2(p[a].matrix()).plus == doctest::Approx(1.0));
    for (int b = a + 1; b < kNumInputs; ++b) {
      const double ip = dot(p[a].bloch(), p[b].bloch());
      const bool on_cube = std::abs(std::abs(ip) - 1.0) < 1e-12 || std::abs(std::abs(ip) - 1.0 / 3) < 1e-12;
      CHECK(on_cube);
      ++pairs;
    }
  }
  CHECK(pairs == 28);
}

TEST_CASE("Lueders instrument sets") {
  const InstrumentSet sharp = luders_instrument_set(1.0);
  CHECK(max_abs_diff(sharp[0].effect(0).matrix(), Mat2(0.5, 0.5, 0.5, 0.5)) < 1e-15);
  CHECK(max_abs_diff(sharp[2].effect(1).matrix(), Mat2(0.0, 0.0, 0.0, 1.0)) < 1e-15);

  const InstrumentSet blind = luders_instrument_set(0.0);
  for (const auto& inst : blind)
    for (int b = 0; b < 2; ++b)
      CHECK(max_abs_diff(inst.kraus(b).matrix(), Mat2::identity() * (1 / std::sqrt(2.0))) < 1e-15);

  const double eta = 1 / kS3;
  const InstrumentSet mid = luders_instrument_set(eta);
  CHECK(max_abs_diff(mid[2].effect(0).matrix(), Mat2((1 + eta) / 2, 0.0, 0.0, (1 - eta) / 2)) < 1e-15);
  for (const auto& inst : mid) {
    const Mat2 total = inst.effect(0).matrix() + inst.effect(1).matrix();
    CHECK(max_abs_diff(total, Mat2::identity()) < 1e-10);
    CHECK(std::abs(inst.alpha()) < 1e-15);
    CHECK(norm(inst.axis_vector()) == doctest::Approx(eta));
  }

  CHECK_THROWS_AS(luders_instrument_set(1.5), DomainError);
  CHECK_THROWS_AS(luders_instrument_set(-0.1), DomainError);
}

TEST_CASE("ideal measurements are the axis projectors") {
  const MeasurementSet m = ideal_measurements();
  const double h = 0.5;
  CHECK(max_abs_diff(m[0].effect(0).matrix(), Mat2(h, h, h, h)) < 1e-15);
  // |i><i| with |i> = (|0> + i|1>)/sqrt(2)
  CHECK(max_abs_diff(m[1].effect(0).matrix(), Mat2(h, Complex(0, -h), Complex(0, h), h)) < 1e-15);
  CHECK(max_abs_diff(m[2].effect(0).matrix(), Mat2(1.0, 0.0, 0.0, 0.0)) < 1e-15);
}

TEST_CASE("post_measurement_state") {
  const QubitState rho = ideal_preparations()[0];
  const KrausOperator half = KrausOperator::from_matrix(Mat2::identity() * (1 / std::sqrt(2.0)));
  CHECK(max_abs_diff(post_measurement_state(rho, half).matrix(), rho.matrix()) < 1e-15);

  const KrausOperator proj = KrausOperator::from_matrix(Mat2(1.0, 0.0, 0.0, 0.0));
  CHECK(max_abs_diff(post_measurement_state(QubitState(), proj).matrix(), Mat2(1.0, 0.0, 0.0, 0.0)) < 1e-15);

  // Lueders update by sqrt((I + eta sigma_z)/2): z' = (z + eta) / (1 + eta z),
  // transverse components scaled by sqrt(1 - eta^2) / (1 + eta z).
  const double eta = 1 / kS3;
  const Vec3 n = rho.bloch();
  const auto inst = BinaryInstrument::luders(eta, {0, 0, 1});
  const Vec3 out = post_measurement_state(rho, inst.kraus(0)).bloch();
  CHECK(out.z == doctest::Approx((n.z + eta) / (1 + eta * n.z)).epsilon(1e-13));
  CHECK(out.x == doctest::Approx(n.x * std::sqrt(1 - eta * eta) / (1 + eta * n.z)).epsilon(1e-13));

  const QubitState down = state_from_bloch({0, 0, -1});
  CHECK_THROWS_AS(post_measurement_state(down, proj), UnreachableOutcome);
}

TEST_CASE("effective states") {
  const Strategy sharp = ideal_strategy(1.0);
  const Vec3 eff = effective_state(sharp, 0).bloch();
  CHECK(norm(eff - Vec3{1, 1, 1} * (1 / (3 * kS3))) < 1e-15);

  const Strategy blind = ideal_strategy(0.0);
  for (int x = 0; x < kNumInputs; ++x)
    CHECK(max_abs_diff(effective_state(blind, x).matrix(), blind.preparations[x].matrix()) < 1e-15);

  // Lueders channel: component along the axis kept, perpendicular scaled by
  // sqrt(1 - eta^2); averaged over three axes each component shrinks by
  // (1 + 2 sqrt(1 - eta^2)) / 3.
  const double eta = 1 / kS3;
  const Strategy mid = ideal_strategy(eta);
  const double factor = (1 + 2 * std::sqrt(1 - eta * eta)) / 3;
  CHECK(norm(effective_state(mid, 5).bloch()) == doctest::Approx(factor).epsilon(1e-14));

  // Linearity in the input state.
  Rng rng(7);
  const Strategy s = random_strategy(11, RandomMode::kGeneral);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = rng.ball_vector();
    const Vec3 b = rng.ball_vector();
    const double w = rng.uniform();
    const Mat2 mixed = effective_state(state_from_bloch(a * w + b * (1 - w)), s.instruments).matrix();
    const Mat2 split = w * effective_state(state_from_bloch(a), s.instruments).matrix() +
                       (1 - w) * effective_state(state_from_bloch(b), s.instruments).matrix();
    CHECK(max_abs_diff(mixed, split) < 1e-10);
  }
}

TEST_CASE("joint table examples and invariants") {
  const JointTable blind = joint_table(ideal_strategy(0.0));
  for (int x = 0; x < kNumInputs; ++x)
    for (int y = 0; y < kNumSettings; ++y) CHECK(blind.bob(x, y, 0) == doctest::Approx(0.5).epsilon(1e-15));

  const JointTable sharp = joint_table(ideal_strategy(1.0));
  CHECK(sharp.bob(0, 2, 0) == doctest::Approx((1 + 1 / kS3) / 2).epsilon(1e-15));
  check_table_invariants(sharp);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const JointTable t = joint_table(random_strategy(seed, RandomMode::kGeneral));
    check_table_invariants(t);
    // Charlie's marginal from the full table.
    for (int x = 0; x < kNumInputs; ++x)
      for (int z = 0; z < kNumSettings; ++z) {
        double c0 = 0.0;
        for (int y = 0; y < kNumSettings; ++y)
          for (int b = 0; b < 2; ++b) c0 += t(x, y, b, z, 0) / kNumSettings;
        CHECK(std::abs(c0 - t.charlie(x, z, 0)) < 1e-12);
      }
  }
}

TEST_CASE("apply_visibility") {
  const Strategy s = ideal_strategy(1 / kS3);
  const Strategy same = apply_visibility(s, 1.0, 1.0, 1.0);
  const JointTable a = joint_table(s);
  const JointTable b = joint_table(same);
  for (std::size_t i = 0; i < JointTable::kSize; ++i) CHECK(std::abs(a.entries()[i] - b.entries()[i]) < 1e-12);

  const Strategy mute = apply_visibility(s, 0.0, 1.0, 1.0);
  for (const auto& rho : mute.preparations) CHECK(norm(rho.bloch()) == 0.0);

  // Composition of visibilities multiplies them.
  const Strategy g = random_strategy(3, RandomMode::kGeneral);
  const Strategy twice = apply_visibility(apply_visibility(g, 0.9, 0.8, 0.7), 0.5, 0.6, 0.4);
  const Strategy once = apply_visibility(g, 0.45, 0.48, 0.28);
  for (int x = 0; x < kNumInputs; ++x)
    CHECK(max_abs_diff(twice.preparations[x].matrix(), once.preparations[x].matrix()) < 1e-12);
  for (int y = 0; y < kNumSettings; ++y)
    for (int k = 0; k < 2; ++k)
      CHECK(max_abs_diff(twice.instruments[y].kraus(k).matrix(), once.instruments[y].kraus(k).matrix()) < 1e-12);
  for (int z = 0; z < kNumSettings; ++z)
    CHECK(max_abs_diff(twice.measurements[z].effect(0).matrix(), once.measurements[z].effect(0).matrix()) < 1e-12);

  CHECK_THROWS_AS(apply_visibility(s, 1.1, 1.0, 1.0), DomainError);
}

TEST_CASE("sequential chain") {
  const auto steps = sequential_chain(20);
  REQUIRE(steps.size() == 20);
  CHECK(steps[0].guessing == doctest::Approx(0.5 + 1 / (2 * kS3)).epsilon(1e-12));
  CHECK(std::abs(steps[1].guessing - (1 + kS3 / 9) / 2) < 1e-12);
  CHECK(std::abs(steps[2].guessing - (1 + kS3 / 27) / 2) < 1e-12);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(std::abs(steps[i].guessing - steps[i].closed_form) < 1e-9);
    if (i > 0) CHECK(std::abs(steps[i].bloch_length / steps[i - 1].bloch_length - 1.0 / 3) < 1e-9);
  }
  CHECK_THROWS_AS(sequential_chain(0), DomainError);
  CHECK_THROWS_AS(sequential_chain(21), DomainError);
}

TEST_CASE("random strategies are reproducible and valid") {
  for (auto mode : {RandomMode::kGeneral, RandomMode::kPurePreparations, RandomMode::kParametrized}) {
    const JointTable a = joint_table(random_strategy(42, mode));
    const JointTable b = joint_table(random_strategy(42, mode));
    CHECK(a.entries() == b.entries());
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Strategy s = random_strategy(seed, RandomMode::kPurePreparations);
    for (const auto& rho : s.preparations) CHECK(std::abs(norm(rho.bloch()) - 1.0) < 1e-12);
    for (const auto& inst : s.instruments) {
      const Mat2 total = inst.effect(0).matrix() + inst.effect(1).matrix();
      CHECK(max_abs_diff(total, Mat2::identity()) < 1e-10);
    }
  }
}

TEST_CASE("BinaryInstrument validation") {
  CHECK_THROWS_AS(BinaryInstrument::from_kraus(Mat2::identity(), Mat2::identity()), DomainError);
  CHECK_THROWS_AS(BinaryInstrument::from_parts(0.0, {0, 0, 0.5}, Mat2::identity() * 2.0), DomainError);
  const auto inst = BinaryInstrument::from_kraus(Mat2(1.0, 0.0, 0.0, 0.0), Mat2(0.0, 1.0, 0.0, 0.0));
  CHECK(norm(inst.axis_vector() - Vec3{0, 0, 1}) < 1e-15);
  // K_1 = |0><1| = sigma_x |1><1|: the unitary part is sigma_x on the range.
  CHECK(max_abs_diff(inst.unitary(1) * sqrt_psd(inst.effect(1)), inst.kraus(1).matrix()) < 1e-12);
}

TEST_CASE("parametrized strategy") {
  const double mu = std::acos(1 / kS3);
  const Strategy s = parametrized_strategy(mu, std::numbers::pi / 4, 0.0, 0.0, 0.0);
  for (int x = 0; x < kNumInputs; ++x) CHECK(norm(s.preparations[x].bloch() - ideal_bloch(x)) < 1e-12);
  CHECK_THROWS_AS(parametrized_strategy(2.0, 0.0, 0.0, 0.0, 0.0), DomainError);
}
