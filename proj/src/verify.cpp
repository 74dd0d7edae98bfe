#include "hsg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hsg/cocycle.hpp"
#include "hsg/energy.hpp"
#include "hsg/gasket.hpp"
#include "hsg/geometry.hpp"
#include "hsg/measure.hpp"

namespace hsg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Checker {
  std::vector<CheckResult> rows;

  void leq(const std::string& name, int criterion, double measured, double threshold,
           bool volatile_row = false) {
    rows.push_back({name, criterion, measured <= threshold, measured, threshold,
                    volatile_row});
  }
  void lt(const std::string& name, int criterion, double measured, double threshold,
          bool volatile_row = false) {
    rows.push_back({name, criterion, measured < threshold, measured, threshold,
                    volatile_row});
  }
  void geq(const std::string& name, int criterion, double measured, double threshold) {
    rows.push_back({name, criterion, measured >= threshold, measured, threshold, false});
  }
};

std::vector<Word> all_words_of_depth(int depth) {
  std::vector<Word> out;
  Word w;
  const auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(w);
      return;
    }
    for (int j = 1; j <= 3; ++j) {
      w.push_back(j);
      self(self, remaining - 1);
      w.pop_back();
    }
  };
  rec(rec, depth);
  return out;
}

// ---- criterion 1: eigenvalue anchors --------------------------------------

void check_eigenvalue(Checker& ck, const VerifyOverrides& overrides) {
  const auto t0 = Clock::now();
  const EigenResult eig = principal_eigenvalue(1e-12, 100);
  const Mat2 lid = ruelle_apply(Mat2::identity());
  const double elapsed = seconds_since(t0);

  const double beta = overrides.beta_override.value_or(eig.beta);
  ck.leq("c01_beta", 1, std::abs(beta - 0.6), 1e-12);
  ck.leq("c01_eigenmatrix_identity", 1, hs_norm(eig.eigenmatrix - Mat2::identity()), 1e-12);
  ck.leq("c01_ruelle_identity", 1, hs_norm(lid - 0.6 * Mat2::identity()), 1e-14);
  ck.lt("c01_runtime_eigen_seconds", 1, elapsed, 1e-3, /*volatile_row=*/true);
}

// ---- criterion 2: measure telescoping -------------------------------------

void check_telescoping(Checker& ck) {
  const auto t0 = Clock::now();
  const TauNormalization norm{};
  double worst_tau = 0.0;
  double worst_kappa = 0.0;
  for (int depth = 1; depth <= 10; ++depth) {
    Mat2 tau_sum = Mat2::zero();
    KahanSum kappa_sum;
    enumerate_cells(depth, norm, [&](const CellVisit& visit) {
      tau_sum = tau_sum + visit.tau;
      kappa_sum.add(visit.kappa);
    });
    worst_tau = std::max(worst_tau, hs_norm(tau_sum - norm.c * Mat2::identity()));
    worst_kappa = std::max(worst_kappa, std::abs(kappa_sum.value() - 1.0));
  }
  ck.leq("c02_tau_telescoping", 2, worst_tau, 1e-10);
  ck.leq("c02_kappa_telescoping", 2, worst_kappa, 1e-9);

  const double expected[3] = {41.0 / 225.0, 17.0 / 225.0, 17.0 / 225.0};
  double worst = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const double k = tau_cell(Word{1, j}, norm).kappa;
    worst = std::max(worst, std::abs(k - expected[j - 1]));
  }
  ck.leq("c02_depth2_masses", 2, worst, 1e-12);
  ck.lt("c02_runtime_telescoping_seconds", 2, seconds_since(t0), 60.0,
        /*volatile_row=*/true);
}

// ---- criterion 3: push-forward identity ------------------------------------

void check_pushforward(Checker& ck) {
  std::vector<Word> tests;
  for (int d = 0; d <= 3; ++d) {
    const auto words = all_words_of_depth(d);
    tests.insert(tests.end(), words.begin(), words.end());
  }
  double worst = 0.0;
  for (int d = 0; d <= 2; ++d) {
    for (const Word& w : all_words_of_depth(d)) {
      worst = std::max(worst, verify_pushforward(w, tests));
    }
  }
  ck.leq("c03_pushforward_residual", 3, worst, 1e-10);
}

// ---- criteria 4-6: sampled decay trends ------------------------------------

std::vector<CheckResult> sampled_checks(std::uint64_t seed) {
  Checker ck;

  const std::vector<Word> words16 = sample_kappa(mix_seed(seed, 4), 16, 1000);
  const std::vector<int> depths = {4, 8, 12, 16};

  // criterion 4: rank-one residual medians decrease along prefixes
  {
    std::vector<double> med;
    for (int d : depths) {
      std::vector<double> res;
      res.reserve(words16.size());
      for (const Word& w : words16) {
        res.push_back(projection_estimate(w.prefix(d)).residual_rank1);
      }
      med.push_back(median(std::move(res)));
    }
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < med.size(); ++i) {
      worst_ratio = std::max(worst_ratio, med[i] / med[i - 1]);
    }
    ck.lt("c04_rank1_median_decreasing", 4, worst_ratio, 1.0);

    double worst = 0.0;
    for (int l : {2, 6, 10, 14}) {
      const double s1 = std::pow(0.6, l);
      const double s2 = std::pow(0.2, l);
      const double closed = s2 / std::sqrt(s1 * s1 + s2 * s2);
      const double got = projection_estimate(Word::repeated(1, l)).residual_rank1;
      worst = std::max(worst, std::abs(got - closed));
    }
    ck.leq("c04_rank1_diagonal_closed_form", 4, worst, 1e-12);
  }

  // criterion 5: Lyapunov identities on the same sample plus deep words
  {
    std::vector<Word> sample = words16;
    const auto deep = sample_kappa(mix_seed(seed, 5), 256, 100, /*depth_guard=*/256);
    sample.insert(sample.end(), deep.begin(), deep.end());

    const double target = std::log(3.0 / 25.0);
    double worst_sum = 0.0;
    double max_lambda1 = -1e300;
    for (const Word& w : sample) {
      const LyapunovReport rep = lyapunov(w);
      worst_sum = std::max(worst_sum, std::abs(rep.lambda1 + rep.lambda2 - target));
      max_lambda1 = std::max(max_lambda1, rep.lambda1);
    }
    ck.leq("c05_lyapunov_sum_identity", 5, worst_sum, 1e-10);
    ck.lt("c05_lyapunov_negative", 5, max_lambda1, 0.0);

    const LyapunovReport diag = lyapunov(Word::repeated(1, 100));
    const double dev = std::max(std::abs(diag.lambda1 - std::log(0.6)),
                                std::abs(diag.lambda2 - std::log(0.2)));
    ck.leq("c05_lyapunov_diagonal", 5, dev, 1e-13);
  }

  // criterion 6: anisotropy medians decrease; diagonal closed form decays 1/3
  {
    const BoundaryApprox approx = boundary_polyline(10);
    std::vector<double> med;
    for (int n : {4, 8, 12}) {
      std::vector<double> ratios;
      ratios.reserve(words16.size());
      for (const Word& w : words16) {
        ratios.push_back(anisotropy(w, n, 0.05, approx).ratio34);
      }
      med.push_back(median(std::move(ratios)));
    }
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < med.size(); ++i) {
      worst_ratio = std::max(worst_ratio, med[i] / med[i - 1]);
    }
    ck.lt("c06_anisotropy_median_decreasing", 6, worst_ratio, 1.0);

    double worst_step = 0.0;
    double prev = anisotropy(Word::repeated(1, 12), 1, 0.05, approx).ratio34;
    for (int l = 2; l <= 10; ++l) {
      const double cur = anisotropy(Word::repeated(1, 12), l, 0.05, approx).ratio34;
      worst_step = std::max(worst_step, std::abs(cur / prev - 1.0 / 3.0) / (1.0 / 3.0));
      prev = cur;
    }
    ck.leq("c06_anisotropy_diagonal_decay", 6, worst_step, 0.10);
  }

  // criterion 7: mass concentration over the theta grid. The grid and the
  // final-mass threshold are frozen from the first oracle run: the deepest
  // gasket point sits only ~0.052 from the boundary curves, and kappa
  // concentrates near them (median distance ~3e-6), so masses at fixed
  // theta are small and the working grid must sit below theta_0.
  {
    const std::vector<double> grid = {0.04, 0.02, 0.01, 0.005};
    ThetaOptions opts;
    opts.polyline_depth = 14;
    opts.suffix_depth = 14;
    const auto reports = theta_grid_report(grid, 6, 10000, mix_seed(seed, 7), opts);
    double min_step = 1e300;
    for (std::size_t i = 1; i < reports.size(); ++i) {
      min_step = std::min(min_step, reports[i].ratio_mass - reports[i - 1].ratio_mass);
    }
    ck.rows.push_back({"c07_theta_ratio_monotone", 7, min_step > 0.0, min_step, 0.0, false});
    ck.geq("c07_theta_ratio_final", 7, reports.back().ratio_mass, 0.05);

    double worst_margin = 1e300;
    for (const auto& rep : reports) {
      const double bound = 1.0 - 2.0 * rep.delta_hat - 3.0 * rep.se_mass;
      worst_margin = std::min(worst_margin, rep.empirical_F_theta_mass - bound);
    }
    ck.geq("c07_f_theta_lower_bound", 7, worst_margin, 0.0);
  }

  return ck.rows;
}

// ---- criterion 8: Dirichlet exactness --------------------------------------

void check_dirichlet_exactness(Checker& ck) {
  const TauNormalization norm{};
  const std::vector<Vec2> dirs = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  double worst = 0.0;
  for (const Vec2& a : dirs) {
    const ScalarField fa = linear_field(a);
    for (const Vec2& b : dirs) {
      const ScalarField fb = linear_field(b);
      for (int depth = 1; depth <= 12; ++depth) {
        const double got = dirichlet_matrix(fa, fb, depth, norm);
        worst = std::max(worst, std::abs(got - norm.c * dot(a, b)));
      }
    }
  }
  ck.leq("c08_dirichlet_linear_exactness", 8, worst, 1e-12);
}

// ---- criterion 9: self-similarity ------------------------------------------

void check_self_similarity(Checker& ck) {
  const TauNormalization norm{};
  const auto battery = energy_battery();
  double worst_linear = 0.0;
  for (const char* name : {"x1", "x2"}) {
    const auto it = std::find_if(battery.begin(), battery.end(),
                                 [&](const ScalarField& f) { return f.name() == name; });
    for (int depth : {4, 8}) {
      worst_linear = std::max(worst_linear, self_similarity_residual(*it, depth, norm));
    }
  }
  ck.leq("c09_selfsim_linear", 9, worst_linear, 1e-12);

  double worst_refine = -1e300;
  for (const char* name : {"x1sq", "sincos"}) {
    const auto it = std::find_if(battery.begin(), battery.end(),
                                 [&](const ScalarField& f) { return f.name() == name; });
    const double r6 = self_similarity_residual(*it, 6, norm);
    const double r10 = self_similarity_residual(*it, 10, norm);
    worst_refine = std::max(worst_refine, r10 - r6);
  }
  ck.leq("c09_selfsim_quadratic_refinement", 9, worst_refine, 0.0);
}

// ---- criterion 10: energy comparison ---------------------------------------

void check_theorem1(Checker& ck) {
  const auto t0 = Clock::now();
  const TauNormalization norm{};
  const auto battery = energy_battery();
  const std::vector<std::pair<int, int>> grid = {{6, 2}, {9, 2}, {12, 2}};

  double linear_gap = 1e300;
  double worst_trend = -1e300;
  long violations = 0;
  for (const ScalarField& f : battery) {
    std::vector<double> gaps;
    for (const auto& [depth, sub] : grid) {
      const EnergyReport rep = theorem1_report(f, depth, sub, norm);
      gaps.push_back(rep.relative_gap);
      violations += rep.lemma45_violations;
      if (f.name() == "x1" && depth == 12) {
        linear_gap = std::abs(rep.cheeger_pre - 0.25) / 0.25;
      }
    }
    const bool identically_zero =
        std::all_of(gaps.begin(), gaps.end(), [](double g) { return g <= 1e-15; });
    if (identically_zero) continue;  // zero-energy member, gap is constantly zero
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      worst_trend = std::max(worst_trend, gaps[i] - gaps[i - 1]);
    }
  }
  ck.leq("c10_theorem1_linear_gap", 10, linear_gap, 1e-2);
  ck.lt("c10_theorem1_battery_trend", 10, worst_trend, 0.0);
  ck.leq("c10_lemma45_pointwise", 10, static_cast<double>(violations), 0.0);
  ck.lt("c10_runtime_theorem1_seconds", 10, seconds_since(t0), 120.0,
        /*volatile_row=*/true);
}

Table rows_to_table(const std::vector<CheckResult>& rows, bool include_volatile) {
  Table t({"check_name", "status", "measured", "threshold"});
  for (const CheckResult& r : rows) {
    if (r.volatile_row && !include_volatile) continue;
    t.add_row({r.name, std::string(r.pass ? "pass" : "fail"), r.measured, r.threshold});
  }
  return t;
}

}  // namespace

bool VerifySummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

VerifySummary run_verify(std::uint64_t seed, const VerifyOverrides& overrides) {
  const auto want = [&](const char* block) {
    if (overrides.name_filter.empty()) return true;
    const std::string b(block);
    return std::any_of(overrides.name_filter.begin(), overrides.name_filter.end(),
                       [&](const std::string& pat) {
                         return b.find(pat) != std::string::npos;
                       });
  };

  Checker ck;
  if (want("c01_eigenvalue")) check_eigenvalue(ck, overrides);
  if (want("c02_telescoping")) check_telescoping(ck);
  if (want("c03_pushforward")) check_pushforward(ck);
  std::vector<CheckResult> sampled;
  if (want("c04_c05_c06_c07_sampled")) {
    sampled = sampled_checks(seed);
    ck.rows.insert(ck.rows.end(), sampled.begin(), sampled.end());
  }
  if (want("c08_dirichlet")) check_dirichlet_exactness(ck);
  if (want("c09_selfsim")) check_self_similarity(ck);
  if (want("c10_theorem1")) check_theorem1(ck);

  // criterion 11: the seeded part of the suite is recomputed and must
  // serialise to the same bytes.
  if (want("c11_determinism") && !sampled.empty()) {
    const auto again = sampled_checks(seed);
    const bool equal = rows_to_table(sampled, false).to_string(TableFormat::Csv) ==
                       rows_to_table(again, false).to_string(TableFormat::Csv);
    ck.rows.push_back({"c11_determinism_recheck", 11, equal, equal ? 1.0 : 0.0, 1.0,
                       false});
  }

  return VerifySummary{std::move(ck.rows)};
}

Table verify_table(const VerifySummary& summary, bool include_volatile) {
  return rows_to_table(summary.checks, include_volatile);
}

}  // namespace hsg
