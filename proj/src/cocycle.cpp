#include "hsg/cocycle.hpp"

#include <cmath>

#include "hsg/errors.hpp"

namespace hsg {

CocycleProduct cocycle(const Word& w, int depth_guard) {
  if (w.empty()) throw DomainError("cocycle: word must be nonempty");
  const Mat2 h = compose_word(w, depth_guard).linear;
  const Svd2 s = svd2(h);
  return {w, h, s.s1, s.s2, s.u1, s.u2, s.v1, s.v2};
}

ProjectionEstimate projection_estimate_of(const Mat2& h) {
  const Svd2 s = svd2(h);
  ProjectionEstimate est;
  est.degenerate = !(s.s1 - s.s2 > 0.0);

  Vec2 v = s.u1;
  const double lead = (v.x1 != 0.0) ? v.x1 : v.x2;
  if (lead < 0.0) v = {-v.x1, -v.x2};
  est.v = v;

  const double hn = hs_norm(h);
  est.vl = h.transpose().apply(v) / hn;
  est.M = (1.0 / (hn * hn)) * (h * h.transpose());
  est.residual_proj = hs_norm(est.M - projection_onto(v));
  est.residual_rank1 = hs_norm((1.0 / hn) * h - outer(v, est.vl));
  if (est.degenerate) {
    // direction is arbitrary; report the worst possible projection residual
    est.residual_proj = std::sqrt(2.0) / 2.0;
  }
  return est;
}

ProjectionEstimate projection_estimate(const Word& w, int depth_guard) {
  if (w.empty()) throw DomainError("projection_estimate: word must be nonempty");
  return projection_estimate_of(compose_word(w, depth_guard).linear);
}

std::vector<VFieldRow> v_field_table(int depth, std::span<const Word> sample,
                                     int depth_guard) {
  std::vector<VFieldRow> rows;
  rows.reserve(sample.size());
  for (const Word& w : sample) {
    if (w.size() != depth) {
      throw DomainError("v_field_table: word length differs from table depth");
    }
    const ProjectionEstimate est = projection_estimate(w, depth_guard);
    rows.push_back({w, code_to_point(w, depth_guard).point, est.v, est.residual_proj,
                    est.residual_rank1});
  }
  return rows;
}

namespace {

// log of the largest singular value of T_{w_f(0)} * T_{w_f(1)} * ...,
// with f mapping step index to a symbol position. Every factor is applied
// to a Frobenius-normalised accumulator, so no underflow can occur.
template <class Factor>
double log_s1_normalized(int steps, Factor&& factor) {
  Mat2 b = Mat2::identity();
  double log_scale = 0.0;
  for (int k = 0; k < steps; ++k) {
    b = b * factor(k);
    const double f = hs_norm(b);
    b = (1.0 / f) * b;
    log_scale += std::log(f);
  }
  return log_scale + std::log(svd2(b).s1);
}

}  // namespace

LyapunovReport lyapunov(const Word& w) {
  if (w.size() < 2) throw DomainError("lyapunov: word must have length >= 2");
  const int l = w.size();

  const double log_s1 =
      log_s1_normalized(l, [&](int k) -> const Mat2& { return branch_linear(w.at(k)); });
  // s2(H)^-1 = s1(H^-1); the inverse product grows by appending inverse
  // factors in reverse symbol order.
  static const Mat2 kInv[3] = {branch_linear(1).inverse(), branch_linear(2).inverse(),
                               branch_linear(3).inverse()};
  const double log_s2 = -log_s1_normalized(
      l, [&](int k) -> const Mat2& { return kInv[w.at(l - 1 - k) - 1]; });

  LyapunovReport rep;
  rep.depth = l;
  rep.lambda1 = log_s1 / l;
  rep.lambda2 = log_s2 / l;
  rep.gap = rep.lambda1 - rep.lambda2;
  rep.flagged = !(rep.gap > 0.0);
  return rep;
}

}  // namespace hsg
