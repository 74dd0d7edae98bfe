#pragma once

// Energy functionals on the gasket: the Dirichlet form quadrature against
// tau, its rank-one projection variant, the within-cell local Lipschitz
// estimator, the pre-Cheeger energy, and the assembled comparison report.

#include <functional>
#include <string>
#include <vector>

#include "hsg/gasket.hpp"
#include "hsg/linalg.hpp"
#include "hsg/measure.hpp"

namespace hsg {

// Denominator floor for relative quantities of (near) zero-energy fields.
inline constexpr double kEnergyFloor = 1e-12;

// A C^1 test integrand with caller-supplied gradient. Construction checks
// the gradient against central finite differences at random triangle points.
class ScalarField {
 public:
  using Eval = std::function<double(Vec2)>;
  using Grad = std::function<Vec2(Vec2)>;

  static ScalarField checked(std::string name, Eval f, Grad grad);

  double operator()(Vec2 p) const { return f_(p); }
  Vec2 gradient(Vec2 p) const { return grad_(p); }
  const std::string& name() const { return name_; }

  // f o psi for an affine psi; the gradient picks up the transposed linear part.
  ScalarField compose_affine(const AffineMap& m) const;

 private:
  ScalarField(std::string name, Eval f, Grad grad)
      : name_(std::move(name)), f_(std::move(f)), grad_(std::move(grad)) {}

  std::string name_;
  Eval f_;
  Grad grad_;
};

// Fixed test battery: a constant, the two coordinate linears, x1^2, x1*x2,
// and sin(pi x1) cos(pi x2).
std::vector<ScalarField> energy_battery();

ScalarField linear_field(Vec2 a);

// sum over |w| = depth of <grad f(x_w), tau[w] grad g(x_w)> at cell centroids.
double dirichlet_matrix(const ScalarField& f, const ScalarField& g, int depth,
                        TauNormalization norm = {}, int depth_guard = kDefaultDepthGuard);

struct VfieldEnergy {
  double value = 0.0;
  long cells = 0;
  long flagged = 0;   // degenerate projection estimates, excluded
  bool warning = false;  // more than 1% of cells flagged
};

// Same quadrature with tau[w] replaced by kappa[w] P_v(w).
VfieldEnergy dirichlet_vfield(const ScalarField& f, const ScalarField& g, int depth,
                              TauNormalization norm = {},
                              int depth_guard = kDefaultDepthGuard);

// | E_d(f) - (1/beta) sum_i E_d(f o psi_i) | / max(E_d(f), floor).
double self_similarity_residual(const ScalarField& f, int depth,
                                TauNormalization norm = {},
                                int depth_guard = kDefaultDepthGuard);

// Max difference quotient over distinct vertex points of the 3^sub_depth
// sub-cells of cell(w); junction-coincident pairs are skipped exactly via
// the canonical vertex form.
double lip_a_estimate(const ScalarField& f, const Word& w, int sub_depth,
                      int depth_guard = kDefaultDepthGuard);

// (1/2) sum kappa[w] lip_a(f, w)^2 over |w| = depth.
double cheeger_pre(const ScalarField& f, int depth, int sub_depth,
                   TauNormalization norm = {}, int depth_guard = kDefaultDepthGuard);

struct EnergyReport {
  std::string field;
  double dirichlet_matrix = 0.0;
  double dirichlet_vfield = 0.0;
  double cheeger_pre = 0.0;
  double half_dirichlet = 0.0;
  double relative_gap = 0.0;
  int depth = 0;
  int sub_depth = 0;
  double c = 0.0;
  long vfield_flagged = 0;
  bool vfield_warning = false;
  // Pointwise one-sided check lip_a >= |<grad f, v>| - tol per cell.
  long lemma45_cells = 0;
  long lemma45_violations = 0;
  double lemma45_min_margin = 0.0;
};

EnergyReport theorem1_report(const ScalarField& f, int depth, int sub_depth,
                             TauNormalization norm = {},
                             int depth_guard = kDefaultDepthGuard);

}  // namespace hsg
