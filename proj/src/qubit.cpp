#include "sqrac/qubit.hpp"

#include <algorithm>
#include <cstdio>

#include "sqrac/error.hpp"

namespace sqrac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kDegenerateGap = 1e-12;

double norm2(const Vec2c& v) { return std::norm(v[0]) + std::norm(v[1]); }

Vec2c scaled(const Vec2c& v, Complex s) { return {v[0] * s, v[1] * s}; }

// Unit vector with its first nonzero entry made real positive.
Vec2c canonical_phase(Vec2c v) {
  const double n = std::sqrt(norm2(v));
  v = scaled(v, 1.0 / n);
  const Complex lead = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
  return scaled(v, std::conj(lead) / std::abs(lead));
}

// Orthogonal complement of a unit 2-vector, canonically phased.
Vec2c orthogonal(const Vec2c& v) { return canonical_phase({-std::conj(v[1]), std::conj(v[0])}); }

Complex inner(const Vec2c& u, const Vec2c& w) { return std::conj(u[0]) * w[0] + std::conj(u[1]) * w[1]; }

}  // namespace

// --- Mat2 -------------------------------------------------------------------

Mat2 Mat2::pauli(int k) {
  switch (k) {
    case 0:
      return {0.0, 1.0, 1.0, 0.0};
    case 1:
      return {0.0, -kI, kI, 0.0};
    case 2:
      return {1.0, 0.0, 0.0, -1.0};
    default:
      throw DomainError("pauli index must be 0, 1 or 2");
  }
}

Mat2 Mat2::from_pauli(double s, const Vec3& v) {
  return {Complex(s + v.z, 0.0), Complex(v.x, -v.y), Complex(v.x, v.y), Complex(s - v.z, 0.0)};
}

Mat2 Mat2::outer(const Vec2c& u, const Vec2c& w) {
  return {u[0] * std::conj(w[0]), u[0] * std::conj(w[1]), u[1] * std::conj(w[0]), u[1] * std::conj(w[1])};
}

Mat2 Mat2::adjoint() const {
  return {std::conj(a_[0]), std::conj(a_[2]), std::conj(a_[1]), std::conj(a_[3])};
}

Mat2 Mat2::conj() const { return {std::conj(a_[0]), std::conj(a_[1]), std::conj(a_[2]), std::conj(a_[3])}; }

Mat2 Mat2::transpose() const { return {a_[0], a_[2], a_[1], a_[3]}; }

Vec3 Mat2::pauli_part() const {
  // tr(M sigma_k) / 2
  return {0.5 * (a_[1] + a_[2]).real(), 0.5 * (a_[2] - a_[1]).imag(), 0.5 * (a_[0] - a_[3]).real()};
}

Mat2& Mat2::operator+=(const Mat2& o) {
  for (int i = 0; i < 4; ++i) a_[i] += o.a_[i];
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  for (int i = 0; i < 4; ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat2& Mat2::operator*=(Complex s) {
  for (auto& v : a_) v *= s;
  return *this;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a_[0] * b.a_[0] + a.a_[1] * b.a_[2], a.a_[0] * b.a_[1] + a.a_[1] * b.a_[3],
          a.a_[2] * b.a_[0] + a.a_[3] * b.a_[2], a.a_[2] * b.a_[1] + a.a_[3] * b.a_[3]};
}

Vec2c operator*(const Mat2& a, const Vec2c& v) {
  return {a.a_[0] * v[0] + a.a_[1] * v[1], a.a_[2] * v[0] + a.a_[3] * v[1]};
}

bool Mat2::all_finite() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double worst = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

bool is_hermitian(const Mat2& m, double tol) { return max_abs_diff(m, m.adjoint()) <= tol; }

bool is_unitary(const Mat2& u, double tol) { return max_abs_diff(u.adjoint() * u, Mat2::identity()) <= tol; }

double trace_product(const Mat2& a, const Mat2& b) {
  return (a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0) + a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)).real();
}

// --- validated wrappers -----------------------------------------------------

QubitState QubitState::from_matrix(const Mat2& m, double tol) {
  if (!m.all_finite()) throw DomainError("state has non-finite entries");
  if (!is_hermitian(m, tol)) throw DomainError("state is not Hermitian");
  if (std::abs(m.trace() - 1.0) > tol) throw DomainError("state trace differs from 1");
  const Eigen2 e = eig2(m);
  if (e.minus < -tol) throw DomainError("state has a negative eigenvalue");
  return QubitState(m);
}

QubitState QubitState::from_bloch(const BlochVector& r, double tol) {
  const double len = norm(r);
  if (!std::isfinite(len) || len > 1.0 + tol) throw DomainError("Bloch vector longer than 1");
  return QubitState(Mat2::from_pauli(0.5, r * 0.5));
}

Effect Effect::from_matrix(const Mat2& m, double tol) {
  if (!m.all_finite()) throw DomainError("effect has non-finite entries");
  if (!is_hermitian(m, tol)) throw DomainError("effect is not Hermitian");
  const Eigen2 e = eig2(m);
  if (e.minus < -tol || e.plus > 1.0 + tol) throw DomainError("effect spectrum outside [0, 1]");
  return Effect(m);
}

Effect Effect::from_observable(double alpha, const Vec3& t, double tol) {
  const double len = norm(t);
  if (!std::isfinite(len) || !std::isfinite(alpha) || len + std::abs(alpha) > 1.0 + tol)
    throw DomainError("observable outside |alpha| + |t| <= 1");
  return Effect(Mat2::from_pauli(0.5 * (1.0 + alpha), t * 0.5));
}

KrausOperator KrausOperator::from_matrix(const Mat2& m, double tol) {
  if (!m.all_finite()) throw DomainError("Kraus operator has non-finite entries");
  Effect::from_matrix(m.adjoint() * m, tol);
  return KrausOperator(m);
}

Effect KrausOperator::effect() const { return Effect::from_matrix(m_.adjoint() * m_); }

// --- operations -------------------------------------------------------------

QubitState state_from_bloch(const BlochVector& r) { return QubitState::from_bloch(r); }

BlochVector bloch_from_state(const QubitState& rho) { return rho.bloch(); }

Eigen2 eig2(const Mat2& h) {
  if (!is_hermitian(h)) throw DomainError("eig2 requires a Hermitian matrix");
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex c = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(c));

  Eigen2 out;
  out.plus = mean + half_gap;
  out.minus = mean - half_gap;
  if (2.0 * half_gap < kDegenerateGap) {
    out.v_plus = {1.0, 0.0};
    out.v_minus = {0.0, 1.0};
    return out;
  }
  // Two candidate null vectors of (H - lambda I); take the better conditioned one.
  const Vec2c r1{c, out.plus - a};
  const Vec2c r2{out.plus - d, std::conj(c)};
  out.v_plus = canonical_phase(norm2(r1) >= norm2(r2) ? r1 : r2);
  out.v_minus = orthogonal(out.v_plus);
  return out;
}

Mat2 sqrt_psd(const Mat2& e) {
  const Eigen2 eig = eig2(e);
  if (eig.minus < -kValidityTol) throw DomainError("sqrt_psd: matrix has a negative eigenvalue");
  const double lp = std::max(eig.plus, 0.0);
  const double lm = std::max(eig.minus, 0.0);
  // sqrt(M) = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
  const double sdet = std::sqrt(lp * lm);
  const double denom = std::sqrt(lp + lm + 2.0 * sdet);
  if (denom == 0.0) return Mat2::zero();
  Mat2 m = e;
  m(0, 0) = Complex(e(0, 0).real() + sdet, 0.0);
  m(1, 1) = Complex(e(1, 1).real() + sdet, 0.0);
  m(0, 1) = 0.5 * (e(0, 1) + std::conj(e(1, 0)));
  m(1, 0) = std::conj(m(0, 1));
  return m * (1.0 / denom);
}

// Singular values come from the spectrum of K^dagger K. The left vector of
// the largest singular value is K v1 / s1; the second left vector is the
// orthogonal complement of the first, phased to agree with K v2. When K v2
// vanishes (rank-deficient K) the null right vector and the complement of
// the range are both canonically phased and mapped onto each other.
PolarDecomposition polar_decompose(const Mat2& k) {
  const Mat2 ktk = k.adjoint() * k;
  const Eigen2 eig = eig2(0.5 * (ktk + ktk.adjoint()));
  const double s1 = std::sqrt(std::max(eig.plus, 0.0));
  PolarDecomposition out;
  if (s1 < 1e-150) {
    out.unitary = Mat2::identity();
    out.positive = Mat2::zero();
    return out;
  }
  // s1 s2 = |det K| keeps the small singular value accurate for nearly
  // rank-deficient K, where sqrt of the small eigenvalue of K^dagger K is not.
  const double s2 = std::min(std::abs(k.det()) / s1, s1);
  const Vec2c v1 = eig.v_plus;
  const Vec2c v2 = eig.v_minus;
  const Vec2c w1 = scaled(k * v1, 1.0 / s1);
  Vec2c w2 = orthogonal(w1);
  const Complex overlap = inner(w2, k * v2);
  if (std::abs(overlap) > 1e-13 * s1) w2 = scaled(w2, overlap / std::abs(overlap));
  out.unitary = Mat2::outer(w1, v1) + Mat2::outer(w2, v2);
  out.positive = s1 * Mat2::outer(v1, v1) + s2 * Mat2::outer(v2, v2);
  return out;
}

double lambda_max_kernel(const Effect& b, const Vec3& a) {
  const Mat2 root = sqrt_psd(b);
  const Mat2 m = root * Mat2::from_pauli(0.0, a) * root;
  // Symmetrize against round-off before the Hermitian eigensolve.
  return eig2(0.5 * (m + m.adjoint())).plus;
}

double lambda_max_closed_form(double alpha, const Vec3& t, int outcome, const Vec3& a) {
  const double sign = outcome == 0 ? 1.0 : -1.0;
  const double at = sign * dot(a, t);
  const double beta = 1.0 + sign * alpha;
  const double disc = at * at + dot(a, a) * (beta * beta - dot(t, t));
  return 0.5 * (at + std::sqrt(std::max(disc, 0.0)));
}

double lambda_max_outcome_sum(double alpha, const Vec3& t, const Vec3& a) {
  const double an = norm(a);
  if (an == 0.0) return 0.0;
  const double tn2 = dot(t, t);
  const double cos2 = tn2 > 0.0 ? dot(t, a) * dot(t, a) / (tn2 * an * an) : 0.0;
  double sum = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double beta = 1.0 + sign * alpha;
    sum += 0.5 * an * std::sqrt(std::max(beta * beta - tn2 * (1.0 - cos2), 0.0));
  }
  return sum;
}

Mat2 unitary_from_rotation(const std::array<Vec3, 3>& r) {
  // Shepperd's method: quaternion (w, x, y, z) from the rotation matrix.
  const double tr = r[0].x + r[1].y + r[2].z;
  double w, x, y, z;
  if (tr > 0.0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = 0.25 * s;
    x = (r[2].y - r[1].z) / s;
    y = (r[0].z - r[2].x) / s;
    z = (r[1].x - r[0].y) / s;
  } else if (r[0].x > r[1].y && r[0].x > r[2].z) {
    const double s = 2.0 * std::sqrt(1.0 + r[0].x - r[1].y - r[2].z);
    w = (r[2].y - r[1].z) / s;
    x = 0.25 * s;
    y = (r[0].y + r[1].x) / s;
    z = (r[0].z + r[2].x) / s;
  } else if (r[1].y > r[2].z) {
    const double s = 2.0 * std::sqrt(1.0 + r[1].y - r[0].x - r[2].z);
    w = (r[0].z - r[2].x) / s;
    x = (r[0].y + r[1].x) / s;
    y = 0.25 * s;
    z = (r[1].z + r[2].y) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r[2].z - r[0].x - r[1].y);
    w = (r[1].x - r[0].y) / s;
    x = (r[0].z + r[2].x) / s;
    y = (r[1].z + r[2].y) / s;
    z = 0.25 * s;
  }
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  // U = w I - i (x, y, z).sigma
  return Mat2::identity() * w - kI * Mat2::from_pauli(0.0, {x, y, z});
}

Mat2 su2_rotation(const Vec3& axis, double angle) {
  const Vec3 n = normalized(axis);
  return Mat2::identity() * std::cos(0.5 * angle) - kI * std::sin(0.5 * angle) * Mat2::from_pauli(0.0, n);
}

std::string to_string(const Mat2& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "[[%.6g%+.6gi, %.6g%+.6gi], [%.6g%+.6gi, %.6g%+.6gi]]", m(0, 0).real(),
                m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(), m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(),
                m(1, 1).imag());
  return buf;
}

}  // namespace sqrac
