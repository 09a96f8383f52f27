#include "sqrac/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sqrac/error.hpp"

namespace sqrac {

namespace {

constexpr double kS3 = std::numbers::sqrt3;
constexpr double kEdgeTol = 1e-9;
// Rounding noise of a radicand assembled from O(10) terms of size O(1).
constexpr double kRadicandFloor = 1e-14;

void check_probability(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

// --- witnesses --------------------------------------------------------------

double witness_ab(const JointTable& t) {
  double acc = 0.0;
  for (int x = 0; x < kNumInputs; ++x)
    for (int y = 0; y < kNumSettings; ++y) acc += t.bob(x, y, input_bit(x, y));
  return acc / (kNumInputs * kNumSettings);
}

double witness_ac(const JointTable& t) {
  double acc = 0.0;
  for (int x = 0; x < kNumInputs; ++x)
    for (int z = 0; z < kNumSettings; ++z) acc += t.charlie(x, z, input_bit(x, z));
  return acc / (kNumInputs * kNumSettings);
}

WitnessPair witnesses(const Strategy& s) {
  const JointTable t = joint_table(s);
  return {witness_ab(t), witness_ac(t)};
}

double witness_ab_direct(const Strategy& s) {
  double acc = 0.0;
  for (int x = 0; x < kNumInputs; ++x)
    for (int y = 0; y < kNumSettings; ++y)
      acc += trace_product(s.preparations[x].matrix(), s.instruments[y].effect(input_bit(x, y)).matrix());
  return acc / (kNumInputs * kNumSettings);
}

std::array<Vec3, kNumSettings> signed_sums(const std::array<Vec3, kNumInputs>& blochs) {
  std::array<Vec3, kNumSettings> s{};
  for (int z = 0; z < kNumSettings; ++z)
    for (int x = 0; x < kNumInputs; ++x) s[z] += blochs[x] * (input_bit(x, z) ? -0.5 : 0.5);
  return s;
}

namespace {

std::array<Vec3, kNumSettings> effective_sums(const Preparations& preps, const InstrumentSet& instruments) {
  std::array<Vec3, kNumInputs> eff;
  for (int x = 0; x < kNumInputs; ++x) eff[x] = effective_state(preps[x], instruments).bloch();
  return signed_sums(eff);
}

}  // namespace

MeasurementSet optimal_measurements(const Preparations& preps, const InstrumentSet& instruments) {
  const auto s = effective_sums(preps, instruments);
  MeasurementSet m;
  for (int z = 0; z < kNumSettings; ++z) {
    // Any projector is optimal when s~_z vanishes; keep the canonical axis.
    Vec3 dir{};
    dir[z] = 1.0;
    m[z] = BinaryMeasurement::projective(norm(s[z]) > 1e-300 ? s[z] : dir);
  }
  return m;
}

double optimal_ac(const Preparations& preps, const InstrumentSet& instruments) {
  const auto s = effective_sums(preps, instruments);
  return 0.5 + (norm(s[0]) + norm(s[1]) + norm(s[2])) / 24.0;
}

// --- trade-off and certification ---------------------------------------------

double tradeoff_bound(double a_ab) {
  if (!(a_ab >= 0.5 - kEdgeTol && a_ab <= kQuantumMax + kEdgeTol))
    throw DomainError("tradeoff_bound: A_AB must lie in [1/2, 1/2 + 1/(2 sqrt 3)]");
  const double a = std::clamp(a_ab, 0.5, kQuantumMax);
  // 12 a - 12 a^2 - 2 = 12 (a_max - a)(a - a_min), factored to keep
  // precision near the upper edge where the square root is steep.
  double radicand = 12.0 * (kQuantumMax - a) * (a - (1.0 - kQuantumMax));
  if (radicand < kRadicandFloor) radicand = 0.0;
  return 0.5 + kS3 / 18.0 * (1.0 + 2.0 * std::sqrt(radicand));
}

double ab_from_eta(double eta) {
  check_probability(eta, "sharpness");
  return 0.5 + kS3 * eta / 6.0;
}

double ac_from_eta(double eta) {
  check_probability(eta, "sharpness");
  return 0.5 + kS3 / 18.0 * (1.0 + 2.0 * std::sqrt(1.0 - eta * eta));
}

EtaBound eta_lower(double a_ab) {
  check_probability(a_ab, "A_AB");
  return {std::clamp(kS3 * (2.0 * a_ab - 1.0), 0.0, 1.0), a_ab > 0.5};
}

EtaBound eta_upper(double a_ac) {
  check_probability(a_ac, "A_AC");
  const double lo = 0.5 * (1.0 + kS3 / 9.0);
  const double hi = 0.5 * (1.0 + kS3 / 3.0);
  if (a_ac < lo || a_ac > hi) return {1.0, false};
  const double f1 = 6.0 * kS3 * a_ac - 3.0 * kS3 + 1.0;
  const double f2 = -2.0 * kS3 * a_ac + kS3 + 1.0;
  return {std::clamp(0.5 * std::sqrt(std::max(3.0 * f1 * f2, 0.0)), 0.0, 1.0), true};
}

CertInterval certify(double a_ab, double a_ac) {
  const EtaBound lo = eta_lower(a_ab);
  const EtaBound hi = eta_upper(a_ac);
  if (a_ab > kQuantumMax + 1e-6 || a_ac > kQuantumMax + 1e-6)
    throw InfeasibleInput("witness value above the qubit maximum 1/2 + 1/(2 sqrt 3)");
  if (lo.value > hi.value + 1e-6)
    throw InfeasibleInput("inconsistent statistics: eta lower bound exceeds the upper bound");
  return {lo.value, hi.value, lo.nontrivial, hi.nontrivial};
}

// --- classical strategies ---------------------------------------------------

WitnessPair classical_witnesses(const ClassicalStrategy& cs) {
  int ab = 0;
  int ac = 0;
  for (int x = 0; x < kNumInputs; ++x) {
    const int m = cs.encoding[x];
    for (int y = 0; y < kNumSettings; ++y) {
      const int b = cs.bob_decoding[m][y];
      ab += b == input_bit(x, y);
      const int relayed = cs.bob_relay[m][y][b];
      for (int z = 0; z < kNumSettings; ++z) ac += cs.charlie_decoding[relayed][z] == input_bit(x, z);
    }
  }
  return {ab / 24.0, ac / 72.0};
}

Strategy embed_classical(const ClassicalStrategy& cs) {
  for (int y = 0; y < kNumSettings; ++y)
    if (cs.bob_decoding[0][y] == cs.bob_decoding[1][y] &&
        cs.bob_relay[0][y][cs.bob_decoding[0][y]] == cs.bob_relay[1][y][cs.bob_decoding[1][y]])
      throw DomainError("relay merges both messages under one outcome; not a single-Kraus instrument");
  Strategy s;
  for (int x = 0; x < kNumInputs; ++x) s.preparations[x] = state_from_bloch({0.0, 0.0, cs.encoding[x] ? -1.0 : 1.0});
  for (int y = 0; y < kNumSettings; ++y) {
    std::array<Mat2, 2> k{};
    for (int m = 0; m < 2; ++m) {
      const int b = cs.bob_decoding[m][y];
      k[b](cs.bob_relay[m][y][b], m) = 1.0;
    }
    s.instruments[y] = BinaryInstrument::from_kraus(k[0], k[1]);
  }
  for (int z = 0; z < kNumSettings; ++z) {
    Mat2 c0;
    for (int m = 0; m < 2; ++m) c0(m, m) = cs.charlie_decoding[m][z] == 0 ? 1.0 : 0.0;
    s.measurements[z] = BinaryMeasurement(Effect::from_matrix(c0));
  }
  return s;
}

namespace {

constexpr int kAbSteps = 24;  // A_AB = count / 24
constexpr int kAcSteps = 72;  // A_AC = count / 72

struct Witness {
  bool found = false;
  int e = 0, d = 0, r = 0, g = 0;
};

int table_bit(int table, int m, int k) { return (table >> (m * kNumSettings + k)) & 1; }

ClassicalStrategy decode(const Witness& w) {
  ClassicalStrategy cs;
  for (int x = 0; x < kNumInputs; ++x) cs.encoding[x] = (w.e >> x) & 1;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < kNumSettings; ++k) {
      cs.bob_decoding[m][k] = table_bit(w.d, m, k);
      // b is fixed by (m, y); the unreachable branch forwards the same message.
      cs.bob_relay[m][k][0] = cs.bob_relay[m][k][1] = table_bit(w.r, m, k);
      cs.charlie_decoding[m][k] = table_bit(w.g, m, k);
    }
  return cs;
}

}  // namespace

ClassicalFrontier classical_frontier(bool use_symmetry) {
  std::vector<Witness> grid((kAbSteps + 1) * (kAcSteps + 1));
  ClassicalFrontier out;

  for (int e = 0; e < 256; ++e) {
    if (use_symmetry && (e & 1)) continue;
    ++out.encodings_searched;
    int m_of[kNumInputs];
    for (int x = 0; x < kNumInputs; ++x) m_of[x] = (e >> x) & 1;

    // A_AB depends on (e, d) only; A_AC on (e, r, g) only.
    std::array<int, kAbSteps + 1> ab_arg;
    ab_arg.fill(-1);
    for (int d = 0; d < 64; ++d) {
      int count = 0;
      for (int x = 0; x < kNumInputs; ++x)
        for (int y = 0; y < kNumSettings; ++y) count += table_bit(d, m_of[x], y) == input_bit(x, y);
      if (ab_arg[count] < 0) ab_arg[count] = d;
    }

    std::array<std::pair<int, int>, kAcSteps + 1> ac_arg;
    ac_arg.fill({-1, -1});
    for (int g = 0; g < 64; ++g) {
      // contrib[m][m'] = sum over x with message m of Charlie's hits on m'.
      int contrib[2][2] = {{0, 0}, {0, 0}};
      for (int x = 0; x < kNumInputs; ++x)
        for (int mp = 0; mp < 2; ++mp)
          for (int z = 0; z < kNumSettings; ++z) contrib[m_of[x]][mp] += table_bit(g, mp, z) == input_bit(x, z);
      for (int r = 0; r < 64; ++r) {
        int count = 0;
        for (int m = 0; m < 2; ++m)
          for (int y = 0; y < kNumSettings; ++y) count += contrib[m][table_bit(r, m, y)];
        if (ac_arg[count].first < 0) ac_arg[count] = {r, g};
      }
    }

    for (int a = 0; a <= kAbSteps; ++a) {
      if (ab_arg[a] < 0) continue;
      for (int c = 0; c <= kAcSteps; ++c) {
        if (ac_arg[c].first < 0) continue;
        Witness& w = grid[a * (kAcSteps + 1) + c];
        if (!w.found) w = {true, e, ab_arg[a], ac_arg[c].first, ac_arg[c].second};
      }
    }
  }

  for (int a = 0; a <= kAbSteps; ++a)
    for (int c = 0; c <= kAcSteps; ++c)
      if (grid[a * (kAcSteps + 1) + c].found) {
        const WitnessPair p{a / double(kAbSteps), c / double(kAcSteps)};
        out.achievable.push_back(p);
        out.max_ab = std::max(out.max_ab, p.a_ab);
        out.max_ac = std::max(out.max_ac, p.a_ac);
      }

  // Pareto staircase: scan a_ab downwards, keep strict improvements in a_ac.
  int best_c = -1;
  for (int a = kAbSteps; a >= 0; --a) {
    int top = -1;
    for (int c = kAcSteps; c >= 0; --c)
      if (grid[a * (kAcSteps + 1) + c].found) {
        top = c;
        break;
      }
    if (top > best_c) {
      out.pareto.push_back({a / double(kAbSteps), top / double(kAcSteps)});
      best_c = top;
    }
  }
  std::reverse(out.pareto.begin(), out.pareto.end());

  // Upper hull by monotone chain over the staircase corners.
  for (const auto& p : out.pareto) {
    while (out.hull.size() >= 2) {
      const WitnessPair& o = out.hull[out.hull.size() - 2];
      const WitnessPair& q = out.hull.back();
      const double cr = (q.a_ab - o.a_ab) * (p.a_ac - o.a_ac) - (q.a_ac - o.a_ac) * (p.a_ab - o.a_ab);
      if (cr >= 0.0)
        out.hull.pop_back();
      else
        break;
    }
    out.hull.push_back(p);
  }

  const Witness& joint = grid[18 * (kAcSteps + 1) + 54];
  out.joint_max = joint.found;
  if (joint.found) out.joint_max_strategy = decode(joint);
  return out;
}

double classical_pareto_value(const ClassicalFrontier& f, double a_ab) {
  for (const auto& p : f.pareto)
    if (p.a_ab >= a_ab - 1e-12) return p.a_ac;
  return std::numeric_limits<double>::quiet_NaN();
}

double classical_hull_value(const ClassicalFrontier& f, double a_ab) {
  if (f.hull.empty() || a_ab > f.hull.back().a_ab + 1e-12) return std::numeric_limits<double>::quiet_NaN();
  if (a_ab <= f.hull.front().a_ab) return f.hull.front().a_ac;
  for (std::size_t i = 1; i < f.hull.size(); ++i) {
    const WitnessPair& p = f.hull[i - 1];
    const WitnessPair& q = f.hull[i];
    if (a_ab <= q.a_ab) return p.a_ac + (q.a_ac - p.a_ac) * (a_ab - p.a_ab) / (q.a_ab - p.a_ab);
  }
  return f.hull.back().a_ac;
}

// --- self-test --------------------------------------------------------------

namespace {

struct Frame {
  bool ok = false;
  bool right_handed = true;
  std::array<Vec3, 3> axes{};  // orthonormal, right-handed
};

Frame frame_from(const std::array<Vec3, 3>& v) {
  Frame f;
  const double n0 = norm(v[0]);
  if (n0 < 1e-9) return f;
  const Vec3 e0 = v[0] * (1.0 / n0);
  const Vec3 perp = v[1] - e0 * dot(v[1], e0);
  const double n1 = norm(perp);
  if (n1 < 1e-9) return f;
  const Vec3 e1 = perp * (1.0 / n1);
  const Vec3 e2 = cross(e0, e1);
  f.ok = true;
  f.right_handed = dot(v[2], e2) >= 0.0;
  f.axes = {e0, e1, e2};
  return f;
}

Strategy conjugate(const Strategy& s) {
  Strategy out;
  for (int x = 0; x < kNumInputs; ++x) out.preparations[x] = QubitState::from_matrix(s.preparations[x].matrix().conj());
  for (int y = 0; y < kNumSettings; ++y)
    out.instruments[y] =
        BinaryInstrument::from_kraus(s.instruments[y].kraus(0).matrix().conj(), s.instruments[y].kraus(1).matrix().conj());
  for (int z = 0; z < kNumSettings; ++z)
    out.measurements[z] = BinaryMeasurement(Effect::from_matrix(s.measurements[z].effect(0).matrix().conj()));
  return out;
}

std::array<Vec3, 3> bob_axes(const Strategy& s) {
  return {s.instruments[0].axis_vector(), s.instruments[1].axis_vector(), s.instruments[2].axis_vector()};
}

std::array<Vec3, 3> charlie_axes(const Strategy& s) {
  return {s.measurements[0].direction(), s.measurements[1].direction(), s.measurements[2].direction()};
}

// Unitary whose adjoint action sends axes[k] to the k-th coordinate axis.
Mat2 aligning_unitary(const Frame& f) { return unitary_from_rotation(f.axes); }

// Unitary whose adjoint action sends the k-th coordinate axis to axes[k].
Mat2 frame_unitary(const Frame& f) {
  std::array<Vec3, 3> rows;
  for (int i = 0; i < 3; ++i) rows[i] = {f.axes[0][i], f.axes[1][i], f.axes[2][i]};
  return unitary_from_rotation(rows);
}

}  // namespace

CanonicalReport canonicalize(const Strategy& input, double tol) {
  CanonicalReport rep;
  const auto inf = std::numeric_limits<double>::infinity();

  Strategy s = input;
  double eta = 0.0;
  for (const auto& t : bob_axes(s)) eta += norm(t) / kNumSettings;
  rep.eta = eta;

  const bool bob_usable = std::min({norm(bob_axes(s)[0]), norm(bob_axes(s)[1]), norm(bob_axes(s)[2])}) > 1e-6;
  rep.frame_source = bob_usable ? "bob" : "charlie";
  auto axes_of = [&](const Strategy& st) { return bob_usable ? bob_axes(st) : charlie_axes(st); };

  Frame f = frame_from(axes_of(s));
  if (!f.ok) {
    rep.worst_residual = inf;
    rep.worst_component = rep.frame_source + " frame";
    return rep;
  }
  if (!f.right_handed) {
    s = conjugate(s);
    rep.conjugated = true;
    f = frame_from(axes_of(s));
  }
  const Mat2 w = aligning_unitary(f);
  rep.input_frame = w;
  auto rotate = [&](const Mat2& m) { return w * m * w.adjoint(); };

  // Charlie's frame after rotation fixes U.
  std::array<Vec3, 3> c_axes;
  for (int z = 0; z < kNumSettings; ++z) c_axes[z] = rotate(s.measurements[z].observable()).pauli_part();
  const Frame fc = frame_from(c_axes);
  const Mat2 u = fc.ok ? frame_unitary(fc) : Mat2::identity();
  rep.output_unitary = u;

  auto note = [&](double r, const std::string& what) {
    if (!(r <= rep.worst_residual)) {
      rep.worst_residual = r;
      rep.worst_component = what;
    }
  };

  for (int x = 0; x < kNumInputs; ++x) {
    const Vec3 n = rotate(s.preparations[x].matrix()).pauli_part() * 2.0;
    rep.preparation_residuals[x] = norm(n - ideal_bloch(x));
    note(rep.preparation_residuals[x], "preparation " + std::to_string(x));
  }
  const InstrumentSet ideal = luders_instrument_set(std::min(eta, 1.0));
  for (int y = 0; y < kNumSettings; ++y) {
    rep.instrument_residuals[y] = max_abs_diff(rotate(s.instruments[y].observable()), ideal[y].observable());
    note(rep.instrument_residuals[y], "instrument " + std::to_string(y));
    for (int b = 0; b < 2; ++b) {
      const Mat2 k = rotate(s.instruments[y].kraus(b).matrix());
      Mat2 target = u * ideal[y].kraus(b).matrix();
      const Complex overlap = (target.adjoint() * k).trace();
      if (std::abs(overlap) > 1e-300) target = target * (overlap / std::abs(overlap));
      rep.kraus_residuals[2 * y + b] = max_abs_diff(k, target);
      note(rep.kraus_residuals[2 * y + b], "kraus " + std::to_string(y) + "/" + std::to_string(b));
    }
  }
  for (int z = 0; z < kNumSettings; ++z) {
    const Mat2 c = rotate(s.measurements[z].observable());
    rep.measurement_residuals[z] = fc.ok ? max_abs_diff(c, u * Mat2::pauli(z) * u.adjoint()) : inf;
    note(rep.measurement_residuals[z], "measurement " + std::to_string(z));
  }
  rep.pass = rep.worst_residual < tol;
  return rep;
}

}  // namespace sqrac
