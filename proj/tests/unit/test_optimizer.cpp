#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqrac/error.hpp"
#include "sqrac/optimizer.hpp"
#include "sqrac/random.hpp"

using namespace sqrac;

namespace {

const double kS3 = std::numbers::sqrt3;
const double kHalfPi = std::numbers::pi / 2;

ParamPoint random_point(Rng& rng) {
  return {rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi),
          {rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi)}};
}

EffectSet axis_effects(const ParamPoint& p) {
  EffectSet e;
  const Vec3 c = p.sharpness();
  e[0].t = {c.x, 0.0, 0.0};
  e[1].t = {0.0, c.y, 0.0};
  e[2].t = {0.0, 0.0, c.z};
  return e;
}

EffectSet effects_of(const Strategy& s) {
  EffectSet e;
  for (int y = 0; y < kNumSettings; ++y) e[y] = {s.instruments[y].alpha(), s.instruments[y].axis_vector()};
  return e;
}

double folded_bound(double ab) { return tradeoff_bound(std::min(kQuantumMax, 0.5 + std::abs(ab - 0.5))); }

}  // namespace

TEST_CASE("reduced objective at its reference points") {
  const ParamPoint open{std::acos(1.0 / kS3), std::numbers::pi / 4, {kHalfPi, kHalfPi, kHalfPi}};
  CHECK(ac_param(open) == doctest::Approx(0.5 + kS3 / 6.0).epsilon(1e-14));
  CHECK(ac_param(open) == doctest::Approx(0.788675).epsilon(1e-6));
  CHECK(ab_param(open) == doctest::Approx(0.5).epsilon(1e-14));

  const ParamPoint sharp{std::acos(1.0 / kS3), std::numbers::pi / 4, {0.0, 0.0, 0.0}};
  CHECK(ac_param(sharp) == doctest::Approx(0.5 + kS3 / 18.0).epsilon(1e-14));
  CHECK(ac_param(sharp) == doctest::Approx(0.596225).epsilon(1e-6));

  for (double p2 : {0.0, 0.3, 1.1, kHalfPi}) {
    const ParamPoint z{0.0, 0.7, {0.2, 0.9, p2}};
    CHECK(ab_param(z) == doctest::Approx(0.5 + std::cos(p2) / 6.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(ab_param(ParamPoint{-0.1, 0.0, {0.0, 0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(ac_param(ParamPoint{0.0, 0.0, {0.0, 2.0, 0.0}}), DomainError);
}

TEST_CASE("symmetric family reproduces the closed forms") {
  for (int i = 0; i <= 100; ++i) {
    const double eta = i / 100.0;
    const ParamPoint p = ParamPoint::symmetric(eta);
    CHECK(std::abs(ab_param(p) - (0.5 + kS3 * eta / 6.0)) < 1e-12);
    CHECK(std::abs(ab_param(p) - ab_from_eta(eta)) < 1e-12);
    CHECK(std::abs(ac_param(p) - ac_from_eta(eta)) < 1e-12);
  }
  const ParamPoint third = ParamPoint::symmetric(1.0 / kS3);
  CHECK(ab_param(third) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(ac_param(third) - 0.7534) < 5e-5);
}

TEST_CASE("gamma vectors") {
  for (const Vec3& s : gamma_vectors(ideal_preparations())) CHECK(norm(s) == doctest::Approx(4.0 / kS3).epsilon(1e-14));
  CHECK(norm(gamma_vectors(ideal_preparations())[0]) == doctest::Approx(2.309401).epsilon(1e-6));

  for (const Vec3& s : gamma_vectors(Preparations{})) CHECK(norm(s) == 0.0);

  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const ParamPoint p = random_point(rng);
    const auto s = gamma_vectors(param_strategy(p).preparations);
    const Vec3 w = p.head();
    CHECK(std::abs(s[0].x - 4.0 * w.x) < 1e-14);
    CHECK(std::abs(s[1].y - 4.0 * w.y) < 1e-14);
    CHECK(std::abs(s[2].z - 4.0 * w.z) < 1e-14);
    CHECK(std::abs(s[0].y) + std::abs(s[0].z) + std::abs(s[1].x) + std::abs(s[1].z) + std::abs(s[2].x) +
              std::abs(s[2].y) <
          1e-14);
  }
}

TEST_CASE("cross-term sum T") {
  const auto s = gamma_vectors(ideal_preparations());
  const double sum = norm(s[0]) + norm(s[1]) + norm(s[2]);

  EffectSet open;
  CHECK(t_bound(open, s) == doctest::Approx(2.0 * sum).epsilon(1e-13));
  CHECK(t_bound_closed(open, s) == doctest::Approx(2.0 * sum).epsilon(1e-13));
  CHECK(max_t_axis({norm(s[0]), norm(s[1]), norm(s[2])}, {0.0, 0.0, 0.0}) == doctest::Approx(2.0 * sum).epsilon(1e-14));

  const EffectSet sharp = axis_effects(ParamPoint::symmetric(1.0));
  CHECK(std::abs(t_bound(sharp, s)) < 1e-10);
  CHECK(max_t_axis({norm(s[0]), norm(s[1]), norm(s[2])}, {1.0, 1.0, 1.0}) == 0.0);

  // eta = 1/sqrt3: every r_y = sqrt(2/3), six terms of |s| r.
  const double eta = 1.0 / kS3;
  const double expected = (4.0 / kS3) * 3.0 * 2.0 * std::sqrt(2.0 / 3.0);
  const EffectSet third = axis_effects(ParamPoint::symmetric(eta));
  CHECK(t_bound(third, s) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(0.5 + (sum + expected) / 72.0 == doctest::Approx(ac_from_eta(eta)).epsilon(1e-14));
}

TEST_CASE("T from square roots and from the closed form agree") {
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) {
    const Strategy st = random_strategy(1000 + k, RandomMode::kGeneral);
    const auto s = gamma_vectors(st.preparations);
    const EffectSet e = effects_of(st);
    CHECK(std::abs(t_bound(e, s) - t_bound_closed(e, s)) < 1e-10);
  }
}

TEST_CASE("reduced objective equals the bound built from s and T") {
  Rng rng(5);
  for (int k = 0; k < 2000; ++k) {
    const ParamPoint p = random_point(rng);
    const auto s = gamma_vectors(param_strategy(p).preparations);
    const double sum = norm(s[0]) + norm(s[1]) + norm(s[2]);
    const Vec3 c = p.sharpness();
    const double t_max = max_t_axis({norm(s[0]), norm(s[1]), norm(s[2])}, {c.x, c.y, c.z});
    CHECK(std::abs(ac_param(p) - (0.5 + (sum + t_max) / 72.0)) < 1e-10);
    CHECK(std::abs(t_bound(axis_effects(p), s) - t_max) < 1e-10);
    CHECK(std::abs(ac_relaxed(axis_effects(p), s) - ac_param(p)) < 1e-10);
  }
}

TEST_CASE("reduced model matches the simulated strategy") {
  Rng rng(8);
  for (int k = 0; k < 300; ++k) {
    const ParamPoint p = random_point(rng);
    const WitnessPair w = witnesses(param_strategy(p));
    CHECK(std::abs(w.a_ab - ab_param(p)) < 1e-12);
    CHECK(std::abs(w.a_ac - ac_param(p)) < 1e-12);
  }
}

TEST_CASE("relaxation sits between the realized value and the trade-off curve") {
  for (std::uint64_t seed = 1; seed <= 3000; ++seed) {
    const Strategy st = random_strategy(seed, seed % 2 ? RandomMode::kPurePreparations : RandomMode::kGeneral);
    const auto s = gamma_vectors(st.preparations);
    const EffectSet e = effects_of(st);
    const double relaxed = ac_relaxed(e, s);
    const double ab = ab_effects(e, s);
    CHECK(std::abs(ab - witness_ab_direct(st)) < 1e-12);
    CHECK(relaxed >= optimal_ac(st.preparations, st.instruments) - 1e-12);
    CHECK(relaxed <= 0.5 + (norm(s[0]) + norm(s[1]) + norm(s[2]) + t_bound_closed(e, s)) / 72.0 + 1e-12);
    CHECK(relaxed <= folded_bound(ab) + 1e-7);
  }
}

TEST_CASE("symmetrization certificate") {
  for (double eta : {0.0, 0.2, 1.0 / kS3, 0.9, 1.0}) {
    const ParamPoint p = ParamPoint::symmetric(eta);
    const SymmetrizationCertificate cert = symmetrization_certificate(p);
    CHECK(cert.phi == doctest::Approx(p.phis[0]).epsilon(1e-7));
    CHECK(std::abs(cert.ac_symmetric - cert.ac) < 1e-12);
    CHECK(std::abs(cert.cross - 2.0 * kS3 * std::sin(cert.phi)) < 1e-12);
    CHECK(cert.holds);
  }

  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const ParamPoint p{rng.uniform(0.0, kHalfPi), rng.uniform(0.0, kHalfPi), {0.0, 0.0, 0.0}};
    const SymmetrizationCertificate cert = symmetrization_certificate(p);
    CHECK(cert.cross == 0.0);
    CHECK(kS3 * std::cos(cert.phi) == doctest::Approx(dot(p.head(), Vec3{1, 1, 1})).epsilon(1e-12));
    CHECK(cert.holds);
  }

  int failures = 0;
  for (int k = 0; k < 20000; ++k) {
    const ParamPoint p = random_point(rng);
    const SymmetrizationCertificate cert = symmetrization_certificate(p);
    CHECK(std::abs(ab_param(ParamPoint::symmetric(std::cos(cert.phi))) - cert.ab) < 1e-12);
    if (!cert.holds) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("projection onto the constraint") {
  Rng rng(23);
  for (int k = 0; k < 5000; ++k) {
    const double target = rng.uniform(0.5, kQuantumMax);
    const ParamPoint p = project_to_ab(random_point(rng), target);
    CHECK_NOTHROW(p.validate());
    CHECK(std::abs(ab_param(p) - target) < 1e-12);
  }
  const ParamPoint top = project_to_ab(random_point(rng), kQuantumMax);
  CHECK(std::abs(ac_param(top) - tradeoff_bound(kQuantumMax)) < 1e-7);
  CHECK_THROWS_AS(project_to_ab(ParamPoint{}, 0.49), DomainError);
}

TEST_CASE("coordinate search on a smooth bowl") {
  BoxProblem bowl{{-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}, [](const std::vector<double>& v) {
                    return -(v[0] - 0.3) * (v[0] - 0.3) - 2.0 * (v[1] + 1.1) * (v[1] + 1.1) -
                           (v[2] - v[0]) * (v[2] - v[0]);
                  }};
  const LocalResult r = coordinate_search(bowl, {1.5, 1.5, -1.5}, 20000);
  CHECK(r.value > -1e-10);
  CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(-1.1).epsilon(1e-4));
  CHECK(r.evaluations <= 20000);

  const LocalResult edge = coordinate_search({{0.0}, {1.0}, [](const std::vector<double>& v) { return v[0]; }}, {0.2}, 500);
  CHECK(edge.x[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("multi-start merge is independent of the thread count") {
  BoxProblem bumpy{{0.0, 0.0}, {6.0, 6.0}, [](const std::vector<double>& v) {
                     return std::sin(3.0 * v[0]) * std::cos(2.0 * v[1]) + 0.05 * v[0];
                   }};
  const auto start = [](std::uint64_t seed) {
    Rng rng(seed);
    return std::vector<double>{rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0)};
  };
  const MultiStartResult one = multi_start(bumpy, start, 40, 16, 16000, 1);
  const MultiStartResult many = multi_start(bumpy, start, 40, 16, 16000, 8);
  CHECK(one.value == many.value);
  CHECK(one.x == many.x);
  CHECK(one.seed == many.seed);
  CHECK(one.evaluations == many.evaluations);
  CHECK_THROWS_AS(multi_start(bumpy, start, 1, 0, 100), DomainError);
}

TEST_CASE("param search reaches the curve") {
  for (double target : {0.5, 2.0 / 3.0, kQuantumMax}) {
    const FrontierResult r = maximize_ac(target, 100000, SearchMode::kParam);
    CHECK(r.bound == doctest::Approx(tradeoff_bound(target)).epsilon(1e-15));
    CHECK(r.best_ac <= r.bound + 1e-6);
    CHECK(r.best_ac >= r.bound - 1e-4);
    CHECK(std::abs(r.achieved_ab - target) < 1e-12);
    CHECK(r.evaluations <= 100000);
    REQUIRE(r.point.has_value());
    CHECK(std::abs(r.realized.a_ab - target) < 1e-12);
    CHECK(std::abs(r.realized.a_ac - r.best_ac) < 1e-12);
  }
  CHECK(maximize_ac(2.0 / 3.0, 100000, SearchMode::kParam).best_ac >= 0.753340 - 1e-4);
  CHECK(std::abs(maximize_ac(kQuantumMax, 100000, SearchMode::kParam).best_ac - 0.596225) < 1e-4);
  CHECK(maximize_ac(0.5, 100000, SearchMode::kParam).best_ac >= 0.788675 - 1e-4);
}

TEST_CASE("param search is reproducible") {
  SearchOptions a;
  a.seed = 9;
  a.threads = 1;
  SearchOptions b = a;
  b.threads = 6;
  const FrontierResult ra = maximize_ac(0.7, 20000, SearchMode::kParam, a);
  const FrontierResult rb = maximize_ac(0.7, 20000, SearchMode::kParam, b);
  CHECK(ra.best_ac == rb.best_ac);
  CHECK(ra.seed == rb.seed);
  CHECK(ra.evaluations == rb.evaluations);
}

TEST_CASE("general search follows the curve while it stays above 3/4") {
  for (double target : {0.5, 0.55, 2.0 / 3.0}) {
    SearchOptions opt;
    opt.starts = 16;
    const FrontierResult r = maximize_ac(target, 100000, SearchMode::kGeneral, opt);
    CHECK(r.best_ac <= r.bound + 1e-6);
    CHECK(r.best_ac >= r.bound - 1e-4);
    CHECK(std::abs(r.achieved_ab - target) < 1e-12);
    CHECK(r.realized.a_ac <= r.best_ac + 1e-9);
    CHECK(std::abs(r.realized.a_ab - target) < 1e-9);
  }
}

TEST_CASE("general search beats the curve once it drops below 3/4") {
  // The curve crosses 3/4 near A_AB = 0.6738. Beyond that, keeping the
  // message along one axis and letting everyone read it (the classical
  // majority strategy, deformed) does better.
  SearchOptions opt;
  opt.starts = 16;
  const FrontierResult r = maximize_ac(0.72, 100000, SearchMode::kGeneral, opt);
  CHECK(r.bound < 0.75);
  CHECK(r.realized.a_ac >= 0.75 - 1e-9);
  CHECK(r.realized.a_ac > r.bound + 1e-2);
  CHECK(std::abs(r.realized.a_ab - 0.72) < 1e-9);

  const ClassicalFrontier f = classical_frontier();
  const WitnessPair w = witnesses(embed_classical(f.joint_max_strategy));
  CHECK(w.a_ab == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w.a_ac == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w.a_ac > tradeoff_bound(w.a_ab) + 0.05);
}

TEST_CASE("general search at the top of the range") {
  SearchOptions opt;
  opt.starts = 16;
  const FrontierResult r = maximize_ac(kQuantumMax, 100000, SearchMode::kGeneral, opt);
  CHECK(r.achieved_ab >= kQuantumMax - 1e-9);
  CHECK(r.realized.a_ac <= tradeoff_bound(r.realized.a_ab) + 1e-7);
  CHECK(std::abs(r.realized.a_ac - 0.596225) < 1e-4);
}

TEST_CASE("infeasible targets are rejected") {
  CHECK_THROWS_AS(maximize_ac(0.49, 100, SearchMode::kParam), DomainError);
  CHECK_THROWS_AS(maximize_ac(kQuantumMax + 1e-6, 100, SearchMode::kGeneral), DomainError);
  CHECK_THROWS_AS(maximize_ac(0.6, 0, SearchMode::kParam), DomainError);
}
