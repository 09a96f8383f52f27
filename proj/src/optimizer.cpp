#include "sqrac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sqrac/error.hpp"
#include "sqrac/parallel.hpp"
#include "sqrac/random.hpp"

namespace sqrac {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kS3 = std::numbers::sqrt3;
constexpr double kCertTol = 1e-12;
const Vec3 kAxes[kNumSettings] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};

Vec3 sines(const ParamPoint& p) { return {std::sin(p.phis[0]), std::sin(p.phis[1]), std::sin(p.phis[2])}; }

double cross_term(const Vec3& w, const Vec3& s) {
  return w.x * (s.y + s.z) + w.y * (s.x + s.z) + w.z * (s.x + s.y);
}

ParamPoint from_head(const Vec3& w, const Vec3& c) {
  ParamPoint p;
  p.mu = std::acos(std::clamp(w.z, 0.0, 1.0));
  p.phi = std::atan2(std::max(w.y, 0.0), std::max(w.x, 0.0));
  for (int y = 0; y < kNumSettings; ++y) p.phis[y] = std::acos(std::clamp(c[y], 0.0, 1.0));
  return p;
}

void check_target(double target) {
  if (!(target >= 0.5 && target <= kQuantumMax))
    throw DomainError("target A_AB must lie in [1/2, 1/2 + 1/(2 sqrt 3)]");
}

}  // namespace

// --- reduced model ----------------------------------------------------------

void ParamPoint::validate() const {
  for (double a : {mu, phi, phis[0], phis[1], phis[2]})
    if (!(a >= -1e-12 && a <= kHalfPi + 1e-12)) throw DomainError("angles must lie in [0, pi/2]");
}

Vec3 ParamPoint::head() const { return {std::sin(mu) * std::cos(phi), std::sin(mu) * std::sin(phi), std::cos(mu)}; }

Vec3 ParamPoint::sharpness() const { return {std::cos(phis[0]), std::cos(phis[1]), std::cos(phis[2])}; }

ParamPoint ParamPoint::symmetric(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("sharpness must lie in [0, 1]");
  const double a = std::acos(eta);
  return {std::acos(1.0 / kS3), std::numbers::pi / 4, {a, a, a}};
}

double ab_param(const ParamPoint& p) {
  p.validate();
  return 0.5 + dot(p.head(), p.sharpness()) / 6.0;
}

double ac_param(const ParamPoint& p) {
  p.validate();
  const Vec3 w = p.head();
  return 0.5 + (w.x + w.y + w.z + cross_term(w, sines(p))) / 18.0;
}

Strategy param_strategy(const ParamPoint& p) {
  p.validate();
  const auto clampa = [](double a) { return std::clamp(a, 0.0, kHalfPi); };
  return parametrized_strategy(clampa(p.mu), clampa(p.phi), clampa(p.phis[0]), clampa(p.phis[1]),
                               clampa(p.phis[2]));
}

std::array<Vec3, kNumSettings> gamma_vectors(const Preparations& preps) {
  std::array<Vec3, kNumInputs> blochs;
  for (int x = 0; x < kNumInputs; ++x) blochs[x] = preps[x].bloch();
  return signed_sums(blochs);
}

double t_bound(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s) {
  double total = 0.0;
  for (int y = 0; y < kNumSettings; ++y) {
    const Effect b0 = Effect::from_observable(effects[y].alpha, effects[y].t);
    const Effect b1 = b0.complement();
    for (int z = 0; z < kNumSettings; ++z) {
      if (z == y) continue;
      total += lambda_max_kernel(b0, s[z]) + lambda_max_kernel(b1, s[z]);
    }
  }
  return total;
}

double t_bound_closed(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s) {
  double total = 0.0;
  for (int y = 0; y < kNumSettings; ++y)
    for (int z = 0; z < kNumSettings; ++z)
      if (z != y) total += lambda_max_outcome_sum(effects[y].alpha, effects[y].t, s[z]);
  return total;
}

double max_t_axis(const std::array<double, kNumSettings>& s_norms, const std::array<double, kNumSettings>& t_diag) {
  std::array<double, kNumSettings> r{};
  for (int y = 0; y < kNumSettings; ++y) {
    if (!(std::abs(t_diag[y]) <= 1.0 + 1e-12)) throw DomainError("effect lengths must lie in [-1, 1]");
    r[y] = std::sqrt(std::max(0.0, 1.0 - t_diag[y] * t_diag[y]));
  }
  return s_norms[0] * (r[1] + r[2]) + s_norms[1] * (r[0] + r[2]) + s_norms[2] * (r[0] + r[1]);
}

double ac_relaxed(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s) {
  double total = 0.0;
  for (int y = 0; y < kNumSettings; ++y)
    for (int z = 0; z < kNumSettings; ++z) total += lambda_max_outcome_sum(effects[y].alpha, effects[y].t, s[z]);
  return 0.5 + total / 72.0;
}

double ab_effects(const EffectSet& effects, const std::array<Vec3, kNumSettings>& s) {
  double total = 0.0;
  for (int y = 0; y < kNumSettings; ++y) total += dot(s[y], effects[y].t);
  return 0.5 + total / 24.0;
}

SymmetrizationCertificate symmetrization_certificate(const ParamPoint& p) {
  p.validate();
  SymmetrizationCertificate cert;
  const Vec3 w = p.head();
  const Vec3 c = p.sharpness();
  const Vec3 s = sines(p);
  cert.phi = std::acos(std::clamp(dot(w, c) / kS3, 0.0, 1.0));
  const double sin_phi = std::sin(cert.phi);
  cert.ab = ab_param(p);
  cert.ac = ac_param(p);
  cert.ac_symmetric = ac_param(ParamPoint::symmetric(std::cos(cert.phi)));
  cert.cross = cross_term(w, s);
  cert.split = {w.x * s.y + w.y * s.z + w.z * s.x, w.x * s.z + w.y * s.x + w.z * s.y};
  cert.pair_sum = 0.0;
  for (int i = 0; i < kNumSettings; ++i)
    for (int j = i + 1; j < kNumSettings; ++j) cert.pair_sum += s[i] * s[j] + c[i] * c[j];
  cert.cross_ok = cert.cross <= kS3 + 2.0 * kS3 * sin_phi + kCertTol;
  cert.split_ok = cert.split[0] <= kS3 * sin_phi + kCertTol && cert.split[1] <= kS3 * sin_phi + kCertTol;
  cert.pair_ok = cert.pair_sum <= 3.0 + kCertTol;
  cert.dominates = cert.ac_symmetric >= cert.ac - kCertTol;
  cert.holds = cert.cross_ok && cert.split_ok && cert.pair_ok && cert.dominates;
  return cert;
}

ParamPoint project_to_ab(const ParamPoint& p, double target) {
  check_target(target);
  const double g = 6.0 * (target - 0.5);
  Vec3 w = p.head();
  Vec3 c = p.sharpness();
  const double wsum = w.x + w.y + w.z;
  if (wsum < g) {
    // Rotate w toward (1,1,1)/sqrt3 until w.(1,1,1) = g; the cosines must all be 1.
    const Vec3 u = Vec3{1.0, 1.0, 1.0} * (1.0 / kS3);
    Vec3 v = w - u * dot(w, u);
    const double nv = norm(v);
    const double cos_t = std::min(1.0, g / kS3);
    w = u * cos_t;
    if (nv > 0.0) w += v * (std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t)) / nv);
    c = {1.0, 1.0, 1.0};
  } else {
    const double wc = dot(w, c);
    if (wc < g) {
      const double lambda = (g - wc) / (wsum - wc);
      c = c + (Vec3{1.0, 1.0, 1.0} - c) * lambda;
    } else if (wc > 0.0) {
      c = c * (g / wc);
    }
  }
  return from_head(w, c);
}

// --- derivative-free search ---------------------------------------------------

LocalResult coordinate_search(const BoxProblem& problem, std::vector<double> x, std::uint64_t budget, double tol) {
  const std::size_t n = x.size();
  if (problem.lower.size() != n || problem.upper.size() != n) throw DomainError("box and start dimensions differ");
  LocalResult out;
  for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], problem.lower[i], problem.upper[i]);
  const auto eval = [&](const std::vector<double>& v) {
    ++out.evaluations;
    return problem.objective(v);
  };
  double f = eval(x);
  std::vector<double> range(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    range[i] = problem.upper[i] - problem.lower[i];
    h[i] = 0.25 * range[i];
  }
  constexpr double kInvPhi = 0.6180339887498949;

  while (out.evaluations < budget) {
    const std::vector<double> x_old = x;
    const double f_old = f;
    bool active = false;
    for (std::size_t i = 0; i < n && out.evaluations < budget; ++i) {
      if (h[i] <= tol * range[i]) continue;
      active = true;
      double a = std::max(problem.lower[i], x[i] - h[i]);
      double b = std::min(problem.upper[i], x[i] + h[i]);
      std::vector<double> trial = x;
      double best_t = x[i];
      double best_f = f;
      const auto probe = [&](double t) {
        trial[i] = t;
        const double v = eval(trial);
        if (v > best_f) {
          best_f = v;
          best_t = t;
        }
        return v;
      };
      double c = b - kInvPhi * (b - a);
      double d = a + kInvPhi * (b - a);
      double fc = probe(c);
      double fd = probe(d);
      const double stop = std::max(1e-3 * h[i], 0.5 * tol * range[i]);
      while (b - a > stop && out.evaluations < budget) {
        if (fc >= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - kInvPhi * (b - a);
          fc = probe(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + kInvPhi * (b - a);
          fd = probe(d);
        }
      }
      const double moved = std::abs(best_t - x[i]);
      x[i] = best_t;
      f = best_f;
      if (moved > 0.8 * h[i])
        h[i] = std::min(2.0 * h[i], 0.5 * range[i]);
      else
        h[i] = std::max(0.5 * h[i], 2.0 * moved);
    }
    if (!active) break;
    if (f > f_old && out.evaluations < budget) {
      std::vector<double> xp(n);
      for (std::size_t i = 0; i < n; ++i) xp[i] = std::clamp(2.0 * x[i] - x_old[i], problem.lower[i], problem.upper[i]);
      const double fp = eval(xp);
      if (fp > f) {
        x = xp;
        f = fp;
      }
    }
  }
  out.x = std::move(x);
  out.value = f;
  return out;
}

MultiStartResult multi_start(const BoxProblem& problem, const std::function<std::vector<double>(std::uint64_t)>& start,
                             std::uint64_t first_seed, int starts, std::uint64_t budget, int threads) {
  if (starts < 1) throw DomainError("at least one start is required");
  if (budget < 1) throw DomainError("budget must be at least 1");
  const std::uint64_t per_start = std::max<std::uint64_t>(1, budget / static_cast<std::uint64_t>(starts));
  std::vector<LocalResult> results(static_cast<std::size_t>(starts));
  parallel_for(starts, threads, [&](int i) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    LocalResult best = coordinate_search(problem, start(seed), per_start);
    // Spend what the first descent left over on perturbed restarts from the
    // incumbent, with shrinking kicks.
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t n = best.x.size();
    double kick = 0.2;
    while (per_start > best.evaluations && per_start - best.evaluations >= 20 * n) {
      std::vector<double> x = best.x;
      for (std::size_t k = 0; k < n; ++k)
        x[k] += kick * (problem.upper[k] - problem.lower[k]) * rng.normal();
      LocalResult next = coordinate_search(problem, std::move(x), per_start - best.evaluations);
      next.evaluations += best.evaluations;
      if (next.value > best.value) {
        best.x = std::move(next.x);
        best.value = next.value;
      }
      best.evaluations = next.evaluations;
      kick = std::max(1e-4, 0.7 * kick);
    }
    results[i] = std::move(best);
  });
  MultiStartResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < starts; ++i) {
    best.evaluations += results[i].evaluations;
    if (results[i].value > best.value) {
      best.value = results[i].value;
      best.x = results[i].x;
      best.seed = first_seed + static_cast<std::uint64_t>(i);
    }
  }
  return best;
}

// --- frontier -------------------------------------------------------------------

namespace {

constexpr int kGeneralDim = kNumInputs * 3 + kNumSettings * 4;
// Shortfall in A_AB accepted at the top of the range, where only the exact
// cube ensemble is feasible.
constexpr double kReachTol = 1e-9;

Vec3 spherical(double r, double theta, double phi) {
  return {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi), r * std::cos(theta)};
}

void to_spherical(const Vec3& v, double& r, double& theta, double& phi) {
  r = std::min(1.0, norm(v));
  theta = r > 0.0 ? std::acos(std::clamp(v.z / norm(v), -1.0, 1.0)) : 0.0;
  phi = std::atan2(v.y, v.x);
}

struct GeneralPoint {
  std::array<Vec3, kNumInputs> blochs;
  EffectSet effects;
};

GeneralPoint decode_general(const std::vector<double>& v) {
  GeneralPoint g;
  for (int x = 0; x < kNumInputs; ++x) g.blochs[x] = spherical(v[3 * x], v[3 * x + 1], v[3 * x + 2]);
  for (int y = 0; y < kNumSettings; ++y) {
    const double* q = &v[kNumInputs * 3 + 4 * y];
    g.effects[y].t = spherical(q[0], q[1], q[2]);
    g.effects[y].alpha = q[3] * (1.0 - q[0]);
  }
  return g;
}

std::vector<double> encode_general(const Strategy& s) {
  std::vector<double> v(kGeneralDim);
  for (int x = 0; x < kNumInputs; ++x) to_spherical(s.preparations[x].bloch(), v[3 * x], v[3 * x + 1], v[3 * x + 2]);
  for (int y = 0; y < kNumSettings; ++y) {
    double* q = &v[kNumInputs * 3 + 4 * y];
    to_spherical(s.instruments[y].axis_vector(), q[0], q[1], q[2]);
    q[3] = q[0] < 1.0 ? std::clamp(s.instruments[y].alpha() / (1.0 - q[0]), -1.0, 1.0) : 0.0;
  }
  return v;
}

/// Puts the effects on A_AB = target. Scales them by a common factor when that
/// keeps every |alpha| + |t| <= 1; otherwise aligns each t_y with s_y (the
/// largest reachable A_AB for these preparations) and scales that. Returns
/// the remaining shortfall in units of A_AB when even alignment falls short.
double scale_to_target(GeneralPoint& g, double target, const std::array<Vec3, kNumSettings>& s) {
  const double want = target - 0.5;
  if (want == 0.0) {
    for (auto& e : g.effects) e = {};
    return 0.0;
  }
  const double have = ab_effects(g.effects, s) - 0.5;
  if (have != 0.0) {
    const double lambda = want / have;
    double worst = 0.0;
    for (const auto& e : g.effects) worst = std::max(worst, std::abs(lambda) * (std::abs(e.alpha) + norm(e.t)));
    if (worst <= 1.0) {
      for (auto& e : g.effects) {
        e.alpha *= lambda;
        e.t = e.t * lambda;
      }
      return 0.0;
    }
  }
  const double reach = (norm(s[0]) + norm(s[1]) + norm(s[2])) / 24.0;
  const double shortfall = want - reach;
  if (shortfall > kReachTol) return shortfall;
  const double lambda = shortfall > 0.0 ? 1.0 : want / reach;
  for (int y = 0; y < kNumSettings; ++y) {
    const double n = norm(s[y]);
    g.effects[y] = {0.0, n > 0.0 ? s[y] * (lambda / n) : Vec3{}};
  }
  return 0.0;
}

}  // namespace

FrontierResult maximize_ac(double target, std::uint64_t budget, SearchMode mode, const SearchOptions& options) {
  check_target(target);
  if (budget < 1) throw DomainError("budget must be at least 1");
  FrontierResult out;
  out.a_ab_target = target;
  out.bound = tradeoff_bound(target);

  if (mode == SearchMode::kParam) {
    BoxProblem problem{std::vector<double>(5, 0.0), std::vector<double>(5, kHalfPi), {}};
    problem.objective = [target](const std::vector<double>& v) {
      return ac_param(project_to_ab({v[0], v[1], {v[2], v[3], v[4]}}, target));
    };
    const auto start = [](std::uint64_t seed) {
      Rng rng(seed);
      std::vector<double> v(5);
      for (double& a : v) a = rng.uniform(0.0, kHalfPi);
      return v;
    };
    const auto best = multi_start(problem, start, options.seed, options.starts, budget, options.threads);
    const ParamPoint p = project_to_ab({best.x[0], best.x[1], {best.x[2], best.x[3], best.x[4]}}, target);
    out.point = p;
    out.best_ac = ac_param(p);
    out.achieved_ab = ab_param(p);
    out.argmax = param_strategy(p);
    out.evaluations = best.evaluations;
    out.seed = best.seed;
  } else {
    BoxProblem problem;
    for (int x = 0; x < kNumInputs; ++x) {
      problem.lower.insert(problem.lower.end(), {0.0, 0.0, -std::numbers::pi});
      problem.upper.insert(problem.upper.end(), {1.0, std::numbers::pi, std::numbers::pi});
    }
    for (int y = 0; y < kNumSettings; ++y) {
      problem.lower.insert(problem.lower.end(), {0.0, 0.0, -std::numbers::pi, -1.0});
      problem.upper.insert(problem.upper.end(), {1.0, std::numbers::pi, std::numbers::pi, 1.0});
    }
    problem.objective = [target](const std::vector<double>& v) {
      GeneralPoint g = decode_general(v);
      const auto s = signed_sums(g.blochs);
      const double excess = scale_to_target(g, target, s);
      if (excess > 0.0) return -1.0 - excess;
      return ac_relaxed(g.effects, s);
    };
    // The first start is the ideal family at the target, which is always feasible.
    const double eta = std::min(1.0, (target - 0.5) * 6.0 / std::numbers::sqrt3);
    const auto start = [&options, eta](std::uint64_t seed) {
      if (seed == options.seed) return encode_general(ideal_strategy(eta));
      return encode_general(random_strategy(seed, seed % 2 ? RandomMode::kPurePreparations : RandomMode::kGeneral));
    };
    const auto best = multi_start(problem, start, options.seed, options.starts, budget, options.threads);
    GeneralPoint g = decode_general(best.x);
    const auto s = signed_sums(g.blochs);
    if (scale_to_target(g, target, s) > 0.0) throw InfeasibleInput("general search found no feasible point");
    out.best_ac = ac_relaxed(g.effects, s);
    out.achieved_ab = ab_effects(g.effects, s);
    Strategy st;
    for (int x = 0; x < kNumInputs; ++x) {
      const double r = norm(g.blochs[x]);
      st.preparations[x] = state_from_bloch(r > 1.0 ? g.blochs[x] * (1.0 / r) : g.blochs[x]);
    }
    for (int y = 0; y < kNumSettings; ++y) {
      EffectParams e = g.effects[y];
      const double len = std::abs(e.alpha) + norm(e.t);
      if (len > 1.0) {
        e.alpha /= len;
        e.t = e.t * (1.0 / len);
      }
      st.instruments[y] = BinaryInstrument::from_parts(e.alpha, e.t);
    }
    st.measurements = optimal_measurements(st.preparations, st.instruments);
    out.argmax = st;
    out.evaluations = best.evaluations;
    out.seed = best.seed;
  }
  out.realized = witnesses(out.argmax);
  return out;
}

}  // namespace sqrac
