#include "hsg/measure.hpp"

#include <cmath>
#include <random>

namespace hsg {

Mat2 ruelle_apply(const Mat2& a) {
  Mat2 out = Mat2::zero();
  for (int j = 1; j <= 3; ++j) {
    const Mat2& t = branch_linear(j);
    out = out + t.transpose() * a * t;
  }
  return out;
}

EigenResult principal_eigenvalue(double tol, int max_iter) {
  if (tol <= 0.0) throw DomainError("principal_eigenvalue: tol must be positive");
  Mat2 q = Mat2::identity();
  q = (1.0 / hs_norm(q)) * q;
  double beta = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Mat2 lq = ruelle_apply(q);
    beta = hs_inner(lq, q);  // Rayleigh quotient, q has unit HS norm
    const double residual = hs_norm(lq - beta * q);
    if (residual <= tol) {
      // report the eigenmatrix scaled back to tau(S)=Id convention
      return {beta, it, residual, (1.0 / q.a11) * q};
    }
    q = (1.0 / hs_norm(lq)) * lq;
  }
  throw IterationError("principal_eigenvalue: no convergence within max_iter");
}

CellMeasure tau_cell(const Word& w, TauNormalization norm, int depth_guard) {
  const Mat2 d = compose_word(w, depth_guard).linear;
  const double scale = norm.c * std::pow(kBeta, -w.size());
  const Mat2 tau = scale * (d * d.transpose());
  return {w, tau, tau.trace()};
}

double verify_pushforward(const Word& w, std::span<const Word> test_words,
                          TauNormalization norm) {
  const Mat2 d = compose_word(w).linear;
  const Mat2 di = d.inverse();
  const double beta_n = std::pow(kBeta, w.size());
  double worst = 0.0;
  for (const Word& u : test_words) {
    const Mat2 lhs = tau_cell(u, norm).tau;
    const Mat2 rhs = beta_n * (di * tau_cell(w.concat(u), norm).tau * di.transpose());
    worst = std::max(worst, hs_norm(lhs - rhs));
  }
  return worst;
}

std::array<double, 3> child_mass_ratios(const Mat2& gram) {
  std::array<double, 3> mass{};
  double total = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const Mat2& t = branch_linear(j);
    // tr(T_j^t G T_j) up to the parent's normalisation
    const double m = (t.transpose() * gram * t).trace();
    mass[static_cast<std::size_t>(j - 1)] = m;
    total += m;
  }
  for (double& m : mass) m /= total;
  return mass;
}

std::vector<Word> sample_kappa(std::uint64_t seed, int depth, int count,
                               int depth_guard) {
  if (depth > depth_guard) throw ResourceError("sample_kappa: depth exceeds guard");
  if (count < 1) throw DomainError("sample_kappa: count must be >= 1");
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int idx = 0; idx < count; ++idx) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(idx)));
    Word w;
    Mat2 gram = Mat2::identity();
    for (int level = 0; level < depth; ++level) {
      const auto p = child_mass_ratios(gram);
      const double u = uniform01(rng());
      int j = (u < p[0]) ? 1 : (u < p[0] + p[1] ? 2 : 3);
      w.push_back(j);
      const Mat2& t = branch_linear(j);
      gram = t.transpose() * gram * t;
      gram = (1.0 / gram.trace()) * gram;  // rescale, ratios are scale-free
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace hsg
