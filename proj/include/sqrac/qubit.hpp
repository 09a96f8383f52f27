#pragma once

// Exact 2x2 complex linear algebra for single-qubit states, effects and
// Kraus operators. Everything here is closed form; no iterative solvers.

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace sqrac {

using Complex = std::complex<double>;

/// Tolerance for Hermiticity, trace and positivity checks.
inline constexpr double kValidityTol = 1e-9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
  constexpr double& operator[](int k) { return k == 0 ? x : (k == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
/// Unit vector along `a`; the zero vector maps to itself.
inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0.0 ? a * (1.0 / n) : a;
}

/// Bloch vector of a state, or the directional part of an effect/observable.
using BlochVector = Vec3;

/// Column 2-vector.
using Vec2c = std::array<Complex, 2>;

/// Row-major 2x2 complex matrix.
class Mat2 {
 public:
  constexpr Mat2() = default;
  constexpr Mat2(Complex a00, Complex a01, Complex a10, Complex a11) : a_{a00, a01, a10, a11} {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  /// sigma_x, sigma_y, sigma_z for k = 0, 1, 2.
  static Mat2 pauli(int k);
  /// s*I + v.sigma
  static Mat2 from_pauli(double s, const Vec3& v);
  /// |u><w|
  static Mat2 outer(const Vec2c& u, const Vec2c& w);

  constexpr Complex operator()(int r, int c) const { return a_[2 * r + c]; }
  constexpr Complex& operator()(int r, int c) { return a_[2 * r + c]; }

  Mat2 adjoint() const;
  Mat2 conj() const;
  Mat2 transpose() const;
  Complex trace() const { return a_[0] + a_[3]; }
  Complex det() const { return a_[0] * a_[3] - a_[1] * a_[2]; }

  /// Coefficients (s, v) with this = s*I + v.sigma; meaningful for Hermitian matrices.
  double identity_part() const { return 0.5 * trace().real(); }
  Vec3 pauli_part() const;

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(Complex s);

  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Mat2 a, Complex s) { return a *= s; }
  friend Mat2 operator*(Complex s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(Mat2 a, double s) { return a *= Complex(s, 0.0); }
  friend Mat2 operator*(double s, Mat2 a) { return a *= Complex(s, 0.0); }
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Vec2c operator*(const Mat2& a, const Vec2c& v);

  bool all_finite() const;

 private:
  std::array<Complex, 4> a_{};
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Mat2& a, const Mat2& b);
bool is_hermitian(const Mat2& m, double tol = kValidityTol);
/// U^dagger U = I within tol.
bool is_unitary(const Mat2& u, double tol = 1e-10);
/// Real part of tr(a b).
double trace_product(const Mat2& a, const Mat2& b);

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
class QubitState {
 public:
  /// Maximally mixed state.
  QubitState() : m_(Mat2::identity() * 0.5) {}

  static QubitState from_matrix(const Mat2& m, double tol = kValidityTol);
  static QubitState from_bloch(const BlochVector& r, double tol = kValidityTol);

  const Mat2& matrix() const { return m_; }
  BlochVector bloch() const { return m_.pauli_part() * 2.0; }

 private:
  explicit QubitState(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

/// POVM element: Hermitian with spectrum in [0, 1].
class Effect {
 public:
  Effect() : m_(Mat2::identity() * 0.5) {}

  static Effect from_matrix(const Mat2& m, double tol = kValidityTol);
  /// ((1 + alpha) I + t.sigma) / 2, the outcome-0 element of a binary POVM
  /// whose observable is alpha I + t.sigma.
  static Effect from_observable(double alpha, const Vec3& t, double tol = kValidityTol);

  const Mat2& matrix() const { return m_; }
  /// I - E
  Effect complement() const { return Effect(Mat2::identity() - m_); }

 private:
  explicit Effect(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

class KrausOperator {
 public:
  KrausOperator() : m_(Mat2::identity() * std::sqrt(0.5)) {}
  /// Rejects operators with K^dagger K not a valid effect.
  static KrausOperator from_matrix(const Mat2& m, double tol = kValidityTol);

  const Mat2& matrix() const { return m_; }
  Effect effect() const;

 private:
  explicit KrausOperator(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

// --- core operations -------------------------------------------------------

/// (I + r.sigma) / 2; throws DomainError when |r| > 1 + tol.
QubitState state_from_bloch(const BlochVector& r);
/// r_k = tr(rho sigma_k)
BlochVector bloch_from_state(const QubitState& rho);

struct Eigen2 {
  double plus = 0.0;
  double minus = 0.0;
  Vec2c v_plus{};
  Vec2c v_minus{};
};

/// Spectrum of a Hermitian 2x2 matrix from the characteristic polynomial.
/// plus >= minus. Near-degenerate spectra (gap < 1e-12) return the canonical
/// basis; otherwise eigenvectors are phased so their first nonzero entry is
/// real and positive.
Eigen2 eig2(const Mat2& h);

/// Principal square root of a PSD matrix; negative eigenvalues beyond
/// kValidityTol are rejected.
Mat2 sqrt_psd(const Mat2& e);
inline Mat2 sqrt_psd(const Effect& e) { return sqrt_psd(e.matrix()); }

struct PolarDecomposition {
  Mat2 unitary;
  Mat2 positive;
};

/// K = U P with P = sqrt(K^dagger K). For rank-deficient K the unitary is
/// completed deterministically (see polar_decompose in qubit.cpp).
PolarDecomposition polar_decompose(const Mat2& k);
inline PolarDecomposition polar_decompose(const KrausOperator& k) { return polar_decompose(k.matrix()); }

/// Largest eigenvalue of sqrt(B) (a.sigma) sqrt(B), computed directly.
double lambda_max_kernel(const Effect& b, const Vec3& a);

/// Same quantity from the effect parametrization B = ((1 + s alpha) I + s t.sigma)/2
/// with s = (-1)^outcome, without forming the square root:
///   (s a.t + sqrt((a.t)^2 + |a|^2 ((1 + s alpha)^2 - |t|^2))) / 2
double lambda_max_closed_form(double alpha, const Vec3& t, int outcome, const Vec3& a);

/// Sum over both outcomes of the binary POVM {B, I - B}:
///   sum_b |a|/2 sqrt((1 + (-1)^b alpha)^2 - |t|^2 (1 - (t^.a^)^2)).
/// The a.t terms cancel between the outcomes, which is why this form carries none.
double lambda_max_outcome_sum(double alpha, const Vec3& t, const Vec3& a);

/// Unitary U with U (v.sigma) U^dagger = (R v).sigma for a proper rotation R
/// given by its rows. The overall sign (SU(2) double cover) is fixed by
/// requiring Re tr U >= 0.
Mat2 unitary_from_rotation(const std::array<Vec3, 3>& rows);

/// exp(-i angle/2 n.sigma) for a unit axis n.
Mat2 su2_rotation(const Vec3& axis, double angle);

std::string to_string(const Mat2& m);

}  // namespace sqrac
