#pragma once

// Cell-shape diagnostics: polyline approximation of the boundary curve M,
// distance-to-boundary queries, the theta-interior sets S_theta, cell
// anisotropy records, and the mass-concentration reports.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hsg/gasket.hpp"
#include "hsg/linalg.hpp"
#include "hsg/measure.hpp"

namespace hsg {

// Inradius of the base triangle; S_theta is empty beyond it.
inline constexpr double kGasketInradius = 1.0 / 3.0;

inline bool theta_exceeds_inradius(double theta) { return theta > kGasketInradius; }

struct BoundaryApprox {
  struct Circle {
    Vec2 center;
    double radius = 0.0;
  };

  int depth = 0;
  // Ordered vertex chains, one per side: A->B over {1,2}, B->C over {2,3},
  // A->C over {1,3}; consecutive chain points meet at cell junctions.
  std::array<std::vector<Vec2>, 3> chains;
  // Bounding-circle hierarchy over the chain segments, tree[side][level]
  // holding 2^level circles; used to prune distance queries.
  std::array<std::vector<std::vector<Circle>>, 3> tree;
};

BoundaryApprox boundary_polyline(int depth, int depth_guard = kDefaultDepthGuard);

struct DistToBoundary {
  double value = 0.0;      // min point-to-segment distance over the chains
  double error_bar = 0.0;  // two-sided bound vs the limit curve
};

DistToBoundary dist_to_M(Vec2 p, const BoundaryApprox& approx);
DistToBoundary dist_to_M(Vec2 p, int depth);

// Conservative membership in S_theta = { d(x, M) >= theta }: the error bar
// is subtracted before comparing. Thetas beyond the inradius are never
// members; see theta_exceeds_inradius.
bool in_S_theta(Vec2 p, double theta, const BoundaryApprox& approx);
bool in_S_theta(Vec2 p, double theta, int depth);

struct AnisotropyRecord {
  Word word;
  int n = 0;             // cell depth the record describes
  Vec2 v;                // projection direction from the full word
  std::array<Vec2, 3> labeled;  // A, B, C with AB maximising |P_v(.)|
  double ratio34 = 0.0;  // max perp side projection over |P_v(A-B)|
  std::optional<double> alignment35;  // only when the coded point is theta-deep
  bool theta_member = false;
  bool degenerate = false;  // |P_v(A-B)| = 0, ratio34 is +inf
};

// Labelling and ratios for explicit vertices and direction; the word-level
// operation below and the tests share this.
AnisotropyRecord anisotropy_with_v(const std::array<Vec2, 3>& vertices, Vec2 v);

// Record for the depth-n ancestor cell of w, direction taken from the full
// word; alignment35 is filled when the coded point of w lies in
// psi_{w,n}(S_theta).
AnisotropyRecord anisotropy(const Word& w, int n, double theta,
                            const BoundaryApprox& approx,
                            int depth_guard = kDefaultDepthGuard);

struct ThetaOptions {
  int polyline_depth = 12;
  int suffix_depth = 12;   // length of the sampled extension inside each cell
  int f_theta_min_n = 0;   // lowest cell depth tried for the F_theta test; 0 = max(1, n-2)
  TauNormalization norm{};
};

struct ThetaReport {
  double theta = 0.0;
  int depth_n = 0;
  double ratio_mass = 0.0;             // aggregated kappa-weighted cell ratio
  double empirical_F_theta_mass = 0.0;
  double delta_hat = 0.0;              // 1 - min per-cell ratio
  double se_mass = 0.0;                // binomial standard error of the F mass
  bool s_theta_empty = false;
  double theta0_estimate = 0.0;        // max observed conservative distance
  long cells = 0;
  int per_cell_samples = 0;
  long samples_total = 0;
  std::uint64_t seed = 0;
};

// Evaluates the whole grid on one shared set of conditional samples, so
// membership is nested across thetas and the monotone shape claims are
// structural rather than statistical.
std::vector<ThetaReport> theta_grid_report(std::span<const double> thetas, int n,
                                           int samples, std::uint64_t seed,
                                           const ThetaOptions& opts = {});

// Single-theta variant; throws DomainError naming the empirical theta_0
// when S_theta is empty at the working depth.
ThetaReport theta_mass_report(double theta, int n, int samples, std::uint64_t seed,
                              const ThetaOptions& opts = {});

}  // namespace hsg
