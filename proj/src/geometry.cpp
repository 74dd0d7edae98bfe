#include "hsg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hsg/cocycle.hpp"
#include "hsg/errors.hpp"

namespace hsg {

namespace {

struct SideDef {
  int first_symbol;
  int second_symbol;
  Vec2 start;
  Vec2 end;
};

const std::array<SideDef, 3> kSides = {{
    {1, 2, kVertexA, kVertexB},
    {2, 3, kVertexB, kVertexC},
    {1, 3, kVertexA, kVertexC},
}};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return norm(p - a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

BoundaryApprox boundary_polyline(int depth, int depth_guard) {
  if (depth < 0) throw DomainError("boundary_polyline: negative depth");
  if (depth > depth_guard) throw ResourceError("boundary_polyline: depth exceeds guard");

  BoundaryApprox out;
  out.depth = depth;
  for (std::size_t s = 0; s < kSides.size(); ++s) {
    const SideDef& side = kSides[s];
    auto& chain = out.chains[s];
    chain.reserve((static_cast<std::size_t>(1) << depth) + 1);
    // Words over the two side symbols in lexicographic order; each cell
    // contributes its start point psi_w(start), junctions coincide.
    const auto emit = [&](auto&& self, const AffineMap& m, int remaining) -> void {
      if (remaining == 0) {
        chain.push_back(m(side.start));
        return;
      }
      self(self, m.compose(branch(side.first_symbol)), remaining - 1);
      self(self, m.compose(branch(side.second_symbol)), remaining - 1);
    };
    emit(emit, AffineMap{}, depth);
    chain.push_back(side.end);

    // Bounding-circle levels, leaves first.
    auto& levels = out.tree[s];
    levels.resize(static_cast<std::size_t>(depth) + 1);
    auto& leaves = levels[static_cast<std::size_t>(depth)];
    const std::size_t nseg = chain.size() - 1;
    leaves.resize(nseg);
    for (std::size_t k = 0; k < nseg; ++k) {
      const Vec2 mid = 0.5 * (chain[k] + chain[k + 1]);
      leaves[k] = {mid, 0.5 * norm(chain[k + 1] - chain[k])};
    }
    for (int level = depth - 1; level >= 0; --level) {
      auto& cur = levels[static_cast<std::size_t>(level)];
      const auto& below = levels[static_cast<std::size_t>(level) + 1];
      cur.resize(below.size() / 2);
      for (std::size_t k = 0; k < cur.size(); ++k) {
        const auto& l = below[2 * k];
        const auto& r = below[2 * k + 1];
        const Vec2 c = 0.5 * (l.center + r.center);
        cur[k] = {c, std::max(norm(c - l.center) + l.radius, norm(c - r.center) + r.radius)};
      }
    }
  }
  return out;
}

namespace {

void query_side(Vec2 p, const BoundaryApprox& approx, std::size_t side, int level,
                std::size_t idx, double& best) {
  const auto& node = approx.tree[side][static_cast<std::size_t>(level)][idx];
  if (norm(p - node.center) - node.radius >= best) return;
  if (level == approx.depth) {
    const auto& chain = approx.chains[side];
    best = std::min(best, point_segment_distance(p, chain[idx], chain[idx + 1]));
    return;
  }
  const auto& below = approx.tree[side][static_cast<std::size_t>(level) + 1];
  const double dl = norm(p - below[2 * idx].center) - below[2 * idx].radius;
  const double dr = norm(p - below[2 * idx + 1].center) - below[2 * idx + 1].radius;
  if (dl <= dr) {
    query_side(p, approx, side, level + 1, 2 * idx, best);
    query_side(p, approx, side, level + 1, 2 * idx + 1, best);
  } else {
    query_side(p, approx, side, level + 1, 2 * idx + 1, best);
    query_side(p, approx, side, level + 1, 2 * idx, best);
  }
}

}  // namespace

DistToBoundary dist_to_M(Vec2 p, const BoundaryApprox& approx) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t side = 0; side < 3; ++side) {
    query_side(p, approx, side, 0, 0, best);
  }
  return {best, diameter_bound(approx.depth)};
}

DistToBoundary dist_to_M(Vec2 p, int depth) { return dist_to_M(p, boundary_polyline(depth)); }

bool in_S_theta(Vec2 p, double theta, const BoundaryApprox& approx) {
  if (theta <= 0.0) throw DomainError("in_S_theta: theta must be positive");
  const DistToBoundary d = dist_to_M(p, approx);
  return d.value - d.error_bar >= theta;
}

bool in_S_theta(Vec2 p, double theta, int depth) {
  return in_S_theta(p, theta, boundary_polyline(depth));
}

AnisotropyRecord anisotropy_with_v(const std::array<Vec2, 3>& vertices, Vec2 v) {
  AnisotropyRecord rec;
  const Vec2 vu = (1.0 / norm(v)) * v;
  rec.v = vu;

  const auto proj_len = [&](Vec2 d) { return std::abs(dot(d, vu)); };
  const auto perp_len = [&](Vec2 d) { return std::abs(d.x1 * -vu.x2 + d.x2 * vu.x1); };

  // Side with the longest projection becomes AB; ties keep vertex order.
  const std::array<std::array<int, 2>, 3> pairs = {{{0, 1}, {1, 2}, {2, 0}}};
  int best_pair = 0;
  double best_proj = -1.0;
  double max_perp = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 d = vertices[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k)][0])] -
                   vertices[static_cast<std::size_t>(pairs[static_cast<std::size_t>(k)][1])];
    const double pl = proj_len(d);
    if (pl > best_proj) {
      best_proj = pl;
      best_pair = k;
    }
    max_perp = std::max(max_perp, perp_len(d));
  }

  const auto& chosen = pairs[static_cast<std::size_t>(best_pair)];
  rec.labeled = {vertices[static_cast<std::size_t>(chosen[0])],
                 vertices[static_cast<std::size_t>(chosen[1])],
                 vertices[static_cast<std::size_t>(3 - chosen[0] - chosen[1])]};
  if (best_proj == 0.0) {
    rec.degenerate = true;
    rec.ratio34 = std::numeric_limits<double>::infinity();
  } else {
    rec.ratio34 = max_perp / best_proj;
  }
  return rec;
}

AnisotropyRecord anisotropy(const Word& w, int n, double theta,
                            const BoundaryApprox& approx, int depth_guard) {
  if (n < 0 || n > w.size()) {
    throw DomainError("anisotropy: need 0 <= n <= |w|");
  }
  const ProjectionEstimate est = projection_estimate(w, depth_guard);
  AnisotropyRecord rec = anisotropy_with_v(cell(w.prefix(n), depth_guard).vertices, est.v);
  rec.word = w;
  rec.n = n;

  const Vec2 x = code_to_point(w, depth_guard).point;
  // psi_{w,n}^{-1}(x) is exactly the coded point of the tail of w.
  const Vec2 pulled = code_to_point(w.suffix_from(n), depth_guard).point;
  rec.theta_member = in_S_theta(pulled, theta, approx);
  if (rec.theta_member) {
    const Vec2 vu = rec.v;
    const auto ratio = [&](Vec2 q) {
      const Vec2 d = x - q;
      const double par = std::abs(dot(d, vu));
      const double perp = std::abs(d.x1 * -vu.x2 + d.x2 * vu.x1);
      return perp / par;
    };
    rec.alignment35 = std::max(ratio(rec.labeled[0]), ratio(rec.labeled[1]));
  }
  return rec;
}

namespace {

struct CellSampleData {
  std::vector<std::uint8_t> words;   // 3^n words, n bytes each
  std::vector<double> kappa;         // exact cell masses
  std::vector<Mat2> gram;            // Dpsi_w^t Dpsi_w, normalised
};

CellSampleData collect_cells(int n, TauNormalization norm) {
  CellSampleData data;
  const std::size_t count = static_cast<std::size_t>(std::pow(3.0, n) + 0.5);
  data.words.reserve(count * static_cast<std::size_t>(n));
  data.kappa.reserve(count);
  data.gram.reserve(count);
  enumerate_cells(n, norm, [&](const CellVisit& visit) {
    for (int i = 0; i < n; ++i) {
      data.words.push_back(static_cast<std::uint8_t>(visit.word.at(i)));
    }
    data.kappa.push_back(visit.kappa);
    const Mat2 g = visit.map.linear.transpose() * visit.map.linear;
    data.gram.push_back((1.0 / g.trace()) * g);
  });
  return data;
}

}  // namespace

std::vector<ThetaReport> theta_grid_report(std::span<const double> thetas, int n,
                                           int samples, std::uint64_t seed,
                                           const ThetaOptions& opts) {
  if (n < 1) throw DomainError("theta_grid_report: depth n must be >= 1");
  if (samples < 1) throw DomainError("theta_grid_report: samples must be >= 1");
  for (double t : thetas) {
    if (t <= 0.0) throw DomainError("theta_grid_report: thetas must be positive");
  }

  const BoundaryApprox approx = boundary_polyline(opts.polyline_depth);
  const double bar = diameter_bound(opts.polyline_depth);
  const CellSampleData cells = collect_cells(n, opts.norm);
  const long ncells = static_cast<long>(cells.kappa.size());
  const int m = static_cast<int>((samples + ncells - 1) / ncells);  // per cell
  const int n_lo = opts.f_theta_min_n > 0 ? opts.f_theta_min_n : std::max(1, n - 2);
  const int nlevels = n - n_lo + 1;

  // Conservative distance of every pulled-back sample point, per level.
  // Level index li corresponds to the cell depth n_lo + li.
  std::vector<double> dist_lb(static_cast<std::size_t>(ncells) * m * nlevels);
  double theta0 = 0.0;
  std::vector<AffineMap> tail_maps(static_cast<std::size_t>(nlevels));
  for (long ci = 0; ci < ncells; ++ci) {
    const std::uint8_t* word = cells.words.data() + static_cast<std::size_t>(ci) * n;
    // tail_maps[li] = psi_{w[n':]} for n' = n_lo + li
    for (int li = nlevels - 1; li >= 0; --li) {
      const int np = n_lo + li;
      AffineMap mtail;
      for (int i = np; i < n; ++i) mtail = mtail.compose(branch(word[i]));
      tail_maps[static_cast<std::size_t>(li)] = mtail;
    }
    for (int j = 0; j < m; ++j) {
      std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(ci) * m +
                                             static_cast<std::uint64_t>(j)));
      Mat2 gram = cells.gram[static_cast<std::size_t>(ci)];
      AffineMap suffix_map;
      for (int level = 0; level < opts.suffix_depth; ++level) {
        const auto p = child_mass_ratios(gram);
        const double u = uniform01(rng());
        const int sym = (u < p[0]) ? 1 : (u < p[0] + p[1] ? 2 : 3);
        const Mat2& t = branch_linear(sym);
        gram = t.transpose() * gram * t;
        gram = (1.0 / gram.trace()) * gram;
        suffix_map = suffix_map.compose(branch(sym));
      }
      const Vec2 q = suffix_map(kBaseCentroid);
      for (int li = 0; li < nlevels; ++li) {
        const Vec2 pulled = tail_maps[static_cast<std::size_t>(li)](q);
        const double lb = dist_to_M(pulled, approx).value - bar;
        dist_lb[(static_cast<std::size_t>(ci) * m + j) * nlevels +
                static_cast<std::size_t>(li)] = lb;
        if (li == nlevels - 1) theta0 = std::max(theta0, lb);
      }
    }
  }

  std::vector<ThetaReport> reports;
  reports.reserve(thetas.size());
  std::vector<double> cell_ratio(static_cast<std::size_t>(ncells));
  for (double theta : thetas) {
    ThetaReport rep;
    rep.theta = theta;
    rep.depth_n = n;
    rep.cells = ncells;
    rep.per_cell_samples = m;
    rep.samples_total = ncells * m;
    rep.seed = seed;
    rep.theta0_estimate = theta0;

    const int li_n = nlevels - 1;
    double min_ratio = 1.0;
    double max_ratio = 0.0;
    KahanSum mass;
    for (long ci = 0; ci < ncells; ++ci) {
      int cnt = 0;
      for (int j = 0; j < m; ++j) {
        if (dist_lb[(static_cast<std::size_t>(ci) * m + j) * nlevels + li_n] >= theta) ++cnt;
      }
      const double r = static_cast<double>(cnt) / m;
      cell_ratio[static_cast<std::size_t>(ci)] = r;
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
      mass.add(cells.kappa[static_cast<std::size_t>(ci)] * r);
    }
    rep.ratio_mass = std::clamp(mass.value(), 0.0, 1.0);
    rep.delta_hat = 1.0 - min_ratio;
    rep.s_theta_empty = max_ratio == 0.0;

    // kappa-weighted ratios of the ancestor cells; descendants of an
    // ancestor are contiguous in lexicographic enumeration order.
    std::vector<std::vector<double>> anc_ratio(static_cast<std::size_t>(nlevels));
    for (int li = 0; li < nlevels; ++li) {
      const int np = n_lo + li;
      const long block = static_cast<long>(std::pow(3.0, n - np) + 0.5);
      auto& out = anc_ratio[static_cast<std::size_t>(li)];
      out.resize(static_cast<std::size_t>(ncells / block));
      for (long a = 0; a < static_cast<long>(out.size()); ++a) {
        double num = 0.0, den = 0.0;
        for (long ci = a * block; ci < (a + 1) * block; ++ci) {
          num += cells.kappa[static_cast<std::size_t>(ci)] *
                 cell_ratio[static_cast<std::size_t>(ci)];
          den += cells.kappa[static_cast<std::size_t>(ci)];
        }
        out[static_cast<std::size_t>(a)] = den > 0.0 ? num / den : 0.0;
      }
    }

    const double ratio_floor = 1.0 - 2.0 * rep.delta_hat;
    KahanSum fmass;
    for (long ci = 0; ci < ncells; ++ci) {
      int cnt = 0;
      for (int j = 0; j < m; ++j) {
        bool ok = false;
        for (int li = 0; li < nlevels && !ok; ++li) {
          const int np = n_lo + li;
          const long block = static_cast<long>(std::pow(3.0, n - np) + 0.5);
          const double r = anc_ratio[static_cast<std::size_t>(li)]
                                    [static_cast<std::size_t>(ci / block)];
          ok = r >= ratio_floor &&
               dist_lb[(static_cast<std::size_t>(ci) * m + j) * nlevels +
                       static_cast<std::size_t>(li)] >= theta;
        }
        if (ok) ++cnt;
      }
      fmass.add(cells.kappa[static_cast<std::size_t>(ci)] * cnt / m);
    }
    rep.empirical_F_theta_mass = std::clamp(fmass.value(), 0.0, 1.0);
    rep.se_mass = std::sqrt(std::max(
        rep.empirical_F_theta_mass * (1.0 - rep.empirical_F_theta_mass), 0.0) /
        static_cast<double>(rep.samples_total));
    reports.push_back(rep);
  }
  return reports;
}

ThetaReport theta_mass_report(double theta, int n, int samples, std::uint64_t seed,
                              const ThetaOptions& opts) {
  const double grid[1] = {theta};
  const ThetaReport rep = theta_grid_report(grid, n, samples, seed, opts)[0];
  if (rep.s_theta_empty) {
    throw DomainError("theta_mass_report: S_theta empty at working depth; theta_0 ~= " +
                      std::to_string(rep.theta0_estimate));
  }
  return rep;
}

}  // namespace hsg
