#pragma once

// Kusuoka's measure through the matrix transfer operator: principal
// eigenvalue beta, the Gibbs cell measures tau[w] and their traces kappa[w],
// and an exact sequential sampler of cylinder masses.

#include <cstdint>
#include <span>
#include <vector>

#include "hsg/errors.hpp"
#include "hsg/gasket.hpp"
#include "hsg/linalg.hpp"

namespace hsg {

// Principal eigenvalue of the transfer operator, known in closed form.
inline constexpr double kBeta = 3.0 / 5.0;

// Scale of the stationary matrix measure: tau(S) = c * Id. The default
// c = 1/2 makes kappa = tr tau a probability measure.
struct TauNormalization {
  double c = 0.5;
};

struct CellMeasure {
  Word word;
  Mat2 tau;
  double kappa = 0.0;
};

struct EigenResult {
  double beta = 0.0;
  int iterations = 0;
  double residual = 0.0;
  Mat2 eigenmatrix;
};

// (L A) = sum_i T_i^t A T_i on constant symmetric matrix fields.
Mat2 ruelle_apply(const Mat2& a);

// Power iteration for the dominant eigenpair of L, started from Id.
EigenResult principal_eigenvalue(double tol, int max_iter);

CellMeasure tau_cell(const Word& w, TauNormalization norm = {},
                     int depth_guard = kDefaultDepthGuard);

// Max Hilbert-Schmidt residual of the cylinder-level push-forward identity
//   tau[u] = beta^{|w|} (Dpsi_w)^-1 tau[w.u] (Dpsi_w)^-t
// over the given test words.
double verify_pushforward(const Word& w, std::span<const Word> test_words,
                          TauNormalization norm = {});

// Conditional child masses kappa(w.j)/kappa(w) given the Gram matrix
// G = Dpsi_w^t Dpsi_w (any positive scaling of G gives the same result).
std::array<double, 3> child_mass_ratios(const Mat2& gram);

// Draws `count` words of length `depth` with exact probability kappa(w),
// deterministically per (seed, index).
std::vector<Word> sample_kappa(std::uint64_t seed, int depth, int count,
                               int depth_guard = kDefaultDepthGuard);

// ---- cell enumeration -------------------------------------------------------

struct CellVisit {
  const Word& word;
  const AffineMap& map;  // psi_w
  Mat2 tau;
  double kappa;
};

// Calls fn for every cell at exactly `depth`, in lexicographic word order,
// reusing partial branch compositions along the tree.
template <class Fn>
void enumerate_cells(int depth, TauNormalization norm, Fn&& fn,
                     int depth_guard = kDefaultDepthGuard) {
  if (depth > depth_guard) {
    throw ResourceError("enumerate_cells: depth exceeds guard");
  }
  std::vector<AffineMap> maps(static_cast<std::size_t>(depth) + 1);
  maps[0] = AffineMap{};
  Word w;
  double beta_pow = 1.0;  // beta^{-level}
  const auto descend = [&](auto&& self, int level) -> void {
    if (level == depth) {
      const AffineMap& m = maps[static_cast<std::size_t>(level)];
      const Mat2 tau = (norm.c * beta_pow) * (m.linear * m.linear.transpose());
      fn(CellVisit{w, m, tau, tau.trace()});
      return;
    }
    for (int j = 1; j <= 3; ++j) {
      maps[static_cast<std::size_t>(level) + 1] =
          maps[static_cast<std::size_t>(level)].compose(branch(j));
      w.push_back(j);
      beta_pow /= kBeta;
      self(self, level + 1);
      beta_pow *= kBeta;
      w.pop_back();
    }
  };
  descend(descend, 0);
}

}  // namespace hsg
