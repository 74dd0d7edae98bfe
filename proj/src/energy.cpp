#include "hsg/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hsg/cocycle.hpp"
#include "hsg/errors.hpp"

namespace hsg {

namespace {

constexpr double kGradCheckTol = 1e-6;
constexpr double kGradCheckStep = 1e-5;
constexpr int kGradCheckPoints = 100;
// Tolerance scale of the pointwise one-sided lower-bound check, frozen from
// the worst observed undershoot of the finite-depth estimator (-1.3e-3 at
// depth 12 on weakly anisotropic cells; the chord directions converge to
// the projection direction pointwise, not uniformly).
constexpr double kLowerBoundTol = 2e-3;

Vec2 random_triangle_point(std::mt19937_64& rng) {
  double r1 = uniform01(rng());
  double r2 = uniform01(rng());
  if (r1 + r2 > 1.0) {
    r1 = 1.0 - r1;
    r2 = 1.0 - r2;
  }
  return r1 * (kVertexB - kVertexA) + r2 * (kVertexC - kVertexA);
}

}  // namespace

ScalarField ScalarField::checked(std::string name, Eval f, Grad grad) {
  std::mt19937_64 rng(0x5ca1ab1eULL);
  for (int i = 0; i < kGradCheckPoints; ++i) {
    const Vec2 p = random_triangle_point(rng);
    const double h = kGradCheckStep;
    const Vec2 fd{(f({p.x1 + h, p.x2}) - f({p.x1 - h, p.x2})) / (2 * h),
                  (f({p.x1, p.x2 + h}) - f({p.x1, p.x2 - h})) / (2 * h)};
    const Vec2 g = grad(p);
    if (std::abs(fd.x1 - g.x1) > kGradCheckTol || std::abs(fd.x2 - g.x2) > kGradCheckTol) {
      throw DomainError("ScalarField '" + name + "': gradient disagrees with finite differences");
    }
  }
  return ScalarField(std::move(name), std::move(f), std::move(grad));
}

ScalarField ScalarField::compose_affine(const AffineMap& m) const {
  const Mat2 tl = m.linear.transpose();
  Eval f = f_;
  Grad g = grad_;
  const AffineMap map = m;
  return ScalarField(
      name_ + "_o_psi",
      [f, map](Vec2 p) { return f(map(p)); },
      [g, map, tl](Vec2 p) { return tl.apply(g(map(p))); });
}

ScalarField linear_field(Vec2 a) {
  const std::string name = "lin_" + std::to_string(a.x1) + "_" + std::to_string(a.x2);
  return ScalarField::checked(
      name, [a](Vec2 p) { return dot(a, p); }, [a](Vec2) { return a; });
}

std::vector<ScalarField> energy_battery() {
  std::vector<ScalarField> fields;
  fields.push_back(ScalarField::checked(
      "const1", [](Vec2) { return 1.0; }, [](Vec2) { return Vec2{0.0, 0.0}; }));
  fields.push_back(ScalarField::checked(
      "x1", [](Vec2 p) { return p.x1; }, [](Vec2) { return Vec2{1.0, 0.0}; }));
  fields.push_back(ScalarField::checked(
      "x2", [](Vec2 p) { return p.x2; }, [](Vec2) { return Vec2{0.0, 1.0}; }));
  fields.push_back(ScalarField::checked(
      "x1sq", [](Vec2 p) { return p.x1 * p.x1; },
      [](Vec2 p) { return Vec2{2.0 * p.x1, 0.0}; }));
  fields.push_back(ScalarField::checked(
      "x1x2", [](Vec2 p) { return p.x1 * p.x2; },
      [](Vec2 p) { return Vec2{p.x2, p.x1}; }));
  const double pi = std::acos(-1.0);
  fields.push_back(ScalarField::checked(
      "sincos",
      [pi](Vec2 p) { return std::sin(pi * p.x1) * std::cos(pi * p.x2); },
      [pi](Vec2 p) {
        return Vec2{pi * std::cos(pi * p.x1) * std::cos(pi * p.x2),
                    -pi * std::sin(pi * p.x1) * std::sin(pi * p.x2)};
      }));
  return fields;
}

double dirichlet_matrix(const ScalarField& f, const ScalarField& g, int depth,
                        TauNormalization norm, int depth_guard) {
  KahanSum sum;
  enumerate_cells(
      depth, norm,
      [&](const CellVisit& visit) {
        const Vec2 x = visit.map(kBaseCentroid);
        sum.add(dot(f.gradient(x), visit.tau.apply(g.gradient(x))));
      },
      depth_guard);
  return sum.value();
}

VfieldEnergy dirichlet_vfield(const ScalarField& f, const ScalarField& g, int depth,
                              TauNormalization norm, int depth_guard) {
  VfieldEnergy out;
  KahanSum sum;
  enumerate_cells(
      depth, norm,
      [&](const CellVisit& visit) {
        ++out.cells;
        const ProjectionEstimate est = projection_estimate_of(visit.map.linear);
        if (est.degenerate) {
          ++out.flagged;
          return;
        }
        const Vec2 x = visit.map(kBaseCentroid);
        sum.add(visit.kappa * dot(f.gradient(x), projection_onto(est.v).apply(g.gradient(x))));
      },
      depth_guard);
  out.value = sum.value();
  out.warning = out.flagged * 100 > out.cells;
  return out;
}

double self_similarity_residual(const ScalarField& f, int depth,
                                TauNormalization norm, int depth_guard) {
  const double whole = dirichlet_matrix(f, f, depth, norm, depth_guard);
  KahanSum parts;
  for (int j = 1; j <= 3; ++j) {
    const ScalarField fj = f.compose_affine(branch(j));
    parts.add(dirichlet_matrix(fj, fj, depth, norm, depth_guard));
  }
  return std::abs(whole - parts.value() / kBeta) / std::max(whole, kEnergyFloor);
}

namespace {

double lip_over_points(const ScalarField& f, const std::vector<Vec2>& pts) {
  double lip = 0.0;
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = norm(pts[i] - pts[j]);
      if (d == 0.0) continue;  // canonical forms are distinct, this is belt and braces
      lip = std::max(lip, std::abs(vals[i] - vals[j]) / d);
    }
  }
  return lip;
}

double lip_from_map(const ScalarField& f, const AffineMap& map,
                    const std::vector<Vec2>& base_pts, std::vector<Vec2>& scratch) {
  scratch.clear();
  for (const Vec2& b : base_pts) scratch.push_back(map(b));
  return lip_over_points(f, scratch);
}

}  // namespace

double lip_a_estimate(const ScalarField& f, const Word& w, int sub_depth,
                      int depth_guard) {
  if (sub_depth < 1) throw DomainError("lip_a_estimate: sub_depth must be >= 1");
  if (w.size() + sub_depth > depth_guard) {
    throw ResourceError("lip_a_estimate: |w| + sub_depth exceeds depth guard");
  }
  const std::vector<Vec2> base = base_vertex_points(sub_depth);
  std::vector<Vec2> scratch;
  return lip_from_map(f, compose_word(w, depth_guard), base, scratch);
}

double cheeger_pre(const ScalarField& f, int depth, int sub_depth,
                   TauNormalization norm, int depth_guard) {
  if (sub_depth < 1) throw DomainError("cheeger_pre: sub_depth must be >= 1");
  if (depth + sub_depth > depth_guard) {
    throw ResourceError("cheeger_pre: depth + sub_depth exceeds depth guard");
  }
  const std::vector<Vec2> base = base_vertex_points(sub_depth);
  std::vector<Vec2> scratch;
  KahanSum sum;
  enumerate_cells(
      depth, norm,
      [&](const CellVisit& visit) {
        const double lip = lip_from_map(f, visit.map, base, scratch);
        sum.add(visit.kappa * lip * lip);
      },
      depth_guard);
  return 0.5 * sum.value();
}

EnergyReport theorem1_report(const ScalarField& f, int depth, int sub_depth,
                             TauNormalization norm, int depth_guard) {
  if (sub_depth < 1) throw DomainError("theorem1_report: sub_depth must be >= 1");
  if (depth + sub_depth > depth_guard) {
    throw ResourceError("theorem1_report: depth + sub_depth exceeds depth guard");
  }
  EnergyReport rep;
  rep.field = f.name();
  rep.depth = depth;
  rep.sub_depth = sub_depth;
  rep.c = norm.c;
  rep.lemma45_min_margin = std::numeric_limits<double>::infinity();

  const std::vector<Vec2> base = base_vertex_points(sub_depth);
  std::vector<Vec2> scratch;
  KahanSum dm, dv, ch;
  double grad_scale = 0.0;
  std::vector<double> margins;
  enumerate_cells(
      depth, norm,
      [&](const CellVisit& visit) {
        const Vec2 x = visit.map(kBaseCentroid);
        const Vec2 gf = f.gradient(x);
        grad_scale = std::max(grad_scale, hsg::norm(gf));
        dm.add(dot(gf, visit.tau.apply(gf)));

        const ProjectionEstimate est = projection_estimate_of(visit.map.linear);
        ++rep.lemma45_cells;
        const double lip = lip_from_map(f, visit.map, base, scratch);
        ch.add(visit.kappa * lip * lip);
        if (est.degenerate) {
          ++rep.vfield_flagged;
          return;
        }
        dv.add(visit.kappa * dot(gf, projection_onto(est.v).apply(gf)));
        margins.push_back(lip - std::abs(dot(gf, est.v)));
      },
      depth_guard);

  rep.dirichlet_matrix = dm.value();
  rep.dirichlet_vfield = dv.value();
  rep.cheeger_pre = 0.5 * ch.value();
  rep.half_dirichlet = 0.5 * rep.dirichlet_matrix;
  rep.relative_gap = std::abs(rep.cheeger_pre - rep.half_dirichlet) /
                     std::max(rep.half_dirichlet, kEnergyFloor);
  rep.vfield_warning = rep.vfield_flagged * 100 > rep.lemma45_cells;

  // The tolerance scales with the sup of |grad f| over the evaluated nodes,
  // which is only known once the sweep finishes.
  const double tol = kLowerBoundTol * std::max(grad_scale, 1.0);
  for (double m : margins) {
    rep.lemma45_min_margin = std::min(rep.lemma45_min_margin, m);
    if (m < -tol) ++rep.lemma45_violations;
  }
  if (margins.empty()) rep.lemma45_min_margin = 0.0;
  return rep;
}

}  // namespace hsg
