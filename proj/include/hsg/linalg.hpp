#pragma once

#include <cmath>
#include <cstdint>

namespace hsg {

inline constexpr double kSqrt3 = 1.7320508075688772935;

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend Vec2 operator/(Vec2 a, double s) { return {a.x1 / s, a.x2 / s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }

struct Mat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }

  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  Vec2 apply(Vec2 v) const { return {a11 * v.x1 + a12 * v.x2, a21 * v.x1 + a22 * v.x2}; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
  }
  friend Mat2 operator*(double s, const Mat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }

  bool is_symmetric(double tol) const { return std::abs(a12 - a21) <= tol; }

  // Smallest eigenvalue, valid for (numerically) symmetric matrices.
  double min_eigenvalue_sym() const {
    const double m = 0.5 * (a11 + a22);
    const double h = 0.5 * (a11 - a22);
    const double s = 0.5 * (a12 + a21);
    return m - std::hypot(h, s);
  }

  bool is_psd(double tol) const { return is_symmetric(tol) && min_eigenvalue_sym() >= -tol; }
};

inline double hs_norm(const Mat2& m) {
  return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

inline double hs_inner(const Mat2& a, const Mat2& b) {
  return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}

// Column a times row b^T.
inline Mat2 outer(Vec2 a, Vec2 b) {
  return {a.x1 * b.x1, a.x1 * b.x2, a.x2 * b.x1, a.x2 * b.x2};
}

// Orthogonal projection onto the span of a unit vector.
inline Mat2 projection_onto(Vec2 v) { return outer(v, v); }

struct Svd2 {
  double s1 = 0.0;  // s1 >= s2 >= 0
  double s2 = 0.0;
  Vec2 u1, u2;  // left singular vectors
  Vec2 v1, v2;  // right singular vectors
};

// Closed-form SVD of a 2x2 matrix, M = s1*u1*v1^T + s2*u2*v2^T.
//
// Uses the rotation-angle parameterisation: with
//   E=(a+d)/2, F=(a-d)/2, G=(c+b)/2, H=(c-b)/2
// the singular values are |Q+R| and |Q-R| for Q=hypot(E,H), R=hypot(F,G),
// and the left/right rotation angles are the half sum/difference of
// atan2(G,F) and atan2(H,E).
inline Svd2 svd2(const Mat2& m) {
  const double e = 0.5 * (m.a11 + m.a22);
  const double f = 0.5 * (m.a11 - m.a22);
  const double g = 0.5 * (m.a21 + m.a12);
  const double h = 0.5 * (m.a21 - m.a12);

  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);

  double sx = q + r;
  double sy = q - r;

  const double a1 = std::atan2(g, f);  // phi + theta
  const double a2 = std::atan2(h, e);  // phi - theta
  const double theta = 0.5 * (a1 - a2);  // right rotation
  const double phi = 0.5 * (a1 + a2);    // left rotation

  Svd2 out;
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  out.u1 = {cp, sp};
  out.u2 = {-sp, cp};
  out.v1 = {ct, st};
  out.v2 = {-st, ct};
  if (sy < 0.0) {  // fold the sign into the second right vector
    sy = -sy;
    out.v2 = {-out.v2.x1, -out.v2.x2};
  }
  out.s1 = sx;
  out.s2 = sy;
  return out;
}

// Neumaier-compensated accumulator for long quadrature sums.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// SplitMix64, used to derive independent per-index RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

// Uniform double in [0,1) from a 64-bit word; keeps output identical
// across standard library implementations.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace hsg
