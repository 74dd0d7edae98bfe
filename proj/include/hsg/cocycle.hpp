#pragma once

// The derivative cocycle H^l(x) = Dpsi_{w_0...w_{l-1}} along coded words,
// its singular structure, the rank-one projection field v, and the two
// Lyapunov exponents of the matrix product.

#include <span>
#include <vector>

#include "hsg/gasket.hpp"
#include "hsg/linalg.hpp"

namespace hsg {

struct CocycleProduct {
  Word word;
  Mat2 H;
  double s1 = 0.0;
  double s2 = 0.0;
  Vec2 u1, u2;  // left singular vectors
  Vec2 v1, v2;  // right singular vectors
};

CocycleProduct cocycle(const Word& w, int depth_guard = kDefaultDepthGuard);

struct ProjectionEstimate {
  Vec2 v;                     // unit direction, first nonzero component positive
  Vec2 vl;                    // H^t v / |H|_HS, norm tends to 1
  Mat2 M;                     // H H^t / |H|_HS^2, trace 1
  double residual_proj = 0.0;   // |M - P_v|_HS
  double residual_rank1 = 0.0;  // |H/|H|_HS - v (x) vl|_HS
  bool degenerate = false;      // isotropic H, direction undefined
};

// Estimate from an explicit matrix; exposed for the degenerate path.
ProjectionEstimate projection_estimate_of(const Mat2& h);

ProjectionEstimate projection_estimate(const Word& w, int depth_guard = kDefaultDepthGuard);

struct VFieldRow {
  Word word;
  Vec2 point;
  Vec2 v;
  double residual_proj = 0.0;
  double residual_rank1 = 0.0;
};

// One row per word; all words must have length == depth.
std::vector<VFieldRow> v_field_table(int depth, std::span<const Word> sample,
                                     int depth_guard = kDefaultDepthGuard);

struct LyapunovReport {
  double lambda1 = 0.0;  // nats per symbol
  double lambda2 = 0.0;
  double gap = 0.0;
  int depth = 0;
  bool flagged = false;  // gap <= 0, exponents unordered
};

// Per-symbol exponents log s_i(H^l)/l via normalised log-space products;
// safe at depths far beyond double underflow.
LyapunovReport lyapunov(const Word& w);

}  // namespace hsg
