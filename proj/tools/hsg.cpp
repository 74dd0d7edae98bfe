#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "hsg/cocycle.hpp"
#include "hsg/config.hpp"
#include "hsg/energy.hpp"
#include "hsg/errors.hpp"
#include "hsg/gasket.hpp"
#include "hsg/geometry.hpp"
#include "hsg/measure.hpp"
#include "hsg/table.hpp"
#include "hsg/verify.hpp"

namespace {

using namespace hsg;

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string output_path(const RunConfig& cfg, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) {
    throw IoError("cannot create output directory '" + cfg.out_dir + "'");
  }
  return (fs::path(cfg.out_dir) / (stem + format_extension(cfg.table_format()))).string();
}

void emit(const RunConfig& cfg, const std::string& stem, const Table& table) {
  const std::string path = output_path(cfg, stem);
  write_table_file(table, path, cfg.table_format());
  std::cout << stem << ": wrote " << table.rows() << " rows to " << path << "\n";
}

std::vector<Value> provenance(const RunConfig& cfg) {
  return {static_cast<std::int64_t>(cfg.depth), static_cast<std::int64_t>(cfg.seed),
          cfg.norm_c};
}

std::vector<std::string> with_provenance(std::vector<std::string> header) {
  header.insert(header.end(), {"depth", "seed", "c"});
  return header;
}

void append_provenance(std::vector<Value>& row, const RunConfig& cfg) {
  const auto prov = provenance(cfg);
  row.insert(row.end(), prov.begin(), prov.end());
}

// Sampled rows are emitted sorted by word, then by sample index.
std::vector<std::size_t> word_order(const std::vector<Word>& words) {
  std::vector<std::size_t> idx(words.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return words[a] < words[b];
  });
  return idx;
}

void cmd_gasket(const RunConfig& cfg) {
  Table cells_table(with_provenance(
      {"word", "a_x1", "a_x2", "b_x1", "b_x2", "c_x1", "c_x2", "diameter"}));
  Table vertex_table(with_provenance({"word", "vertex", "x1", "x2"}));
  const char* names[3] = {"A", "B", "C"};
  enumerate_cells(cfg.depth, TauNormalization{cfg.norm_c}, [&](const CellVisit& visit) {
    const Cell c = cell(visit.word);
    std::vector<Value> row{c.word.to_string()};
    for (const Vec2& v : c.vertices) {
      row.push_back(v.x1);
      row.push_back(v.x2);
    }
    row.push_back(c.diameter());
    append_provenance(row, cfg);
    cells_table.add_row(std::move(row));
    for (int k = 0; k < 3; ++k) {
      std::vector<Value> vrow{c.word.to_string(), std::string(names[k]),
                              c.vertices[static_cast<std::size_t>(k)].x1,
                              c.vertices[static_cast<std::size_t>(k)].x2};
      append_provenance(vrow, cfg);
      vertex_table.add_row(std::move(vrow));
    }
  });
  emit(cfg, "gasket_cells", cells_table);
  emit(cfg, "gasket_vertices", vertex_table);

  Table points_table(with_provenance({"word", "vertex", "x1", "x2", "multiplicity"}));
  for (const CanonicalVertex& cv : vertex_lattice(cfg.depth)) {
    std::vector<Value> row{cv.ref.word.to_string(),
                           std::string(names[static_cast<int>(cv.ref.vertex)]),
                           cv.point.x1, cv.point.x2,
                           static_cast<std::int64_t>(cv.multiplicity)};
    append_provenance(row, cfg);
    points_table.add_row(std::move(row));
  }
  emit(cfg, "gasket_points", points_table);

  Table boundary_table(with_provenance({"side", "index", "x1", "x2"}));
  const BoundaryApprox approx = boundary_polyline(cfg.depth);
  const char* sides[3] = {"AB", "BC", "AC"};
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < approx.chains[s].size(); ++i) {
      std::vector<Value> row{std::string(sides[s]), static_cast<std::int64_t>(i),
                             approx.chains[s][i].x1, approx.chains[s][i].x2};
      append_provenance(row, cfg);
      boundary_table.add_row(std::move(row));
    }
  }
  emit(cfg, "gasket_boundary", boundary_table);
}

void cmd_measure(const RunConfig& cfg) {
  Table table(with_provenance({"word", "tau11", "tau12", "tau22", "kappa"}));
  enumerate_cells(cfg.depth, TauNormalization{cfg.norm_c}, [&](const CellVisit& visit) {
    std::vector<Value> row{visit.word.to_string(), visit.tau.a11, visit.tau.a12,
                           visit.tau.a22, visit.kappa};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  });
  emit(cfg, "measure", table);
}

std::vector<Word> command_words(const RunConfig& cfg) {
  if (!cfg.word.empty()) return {Word::from_string(cfg.word)};
  return sample_kappa(cfg.seed, cfg.depth, cfg.samples);
}

void cmd_vfield(const RunConfig& cfg) {
  const std::vector<Word> words = command_words(cfg);
  const int depth = words.front().size();
  const auto rows = v_field_table(depth, words);
  Table table(with_provenance({"word", "x1", "x2", "v_x1", "v_x2", "residual_proj",
                               "residual_rank1"}));
  for (std::size_t i : word_order(words)) {
    const VFieldRow& r = rows[i];
    std::vector<Value> row{r.word.to_string(), r.point.x1, r.point.x2, r.v.x1,
                           r.v.x2, r.residual_proj, r.residual_rank1};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  }
  emit(cfg, "vfield", table);
}

void cmd_lyapunov(const RunConfig& cfg) {
  std::vector<Word> words;
  if (!cfg.word.empty()) {
    words.push_back(Word::from_string(cfg.word));
  } else {
    words = sample_kappa(cfg.seed, std::max(cfg.depth, 2), cfg.samples);
  }
  Table table(with_provenance({"word", "l", "lambda1", "lambda2", "gap", "flagged"}));
  for (std::size_t i : word_order(words)) {
    const LyapunovReport rep = lyapunov(words[i]);
    std::vector<Value> row{words[i].to_string(), static_cast<std::int64_t>(rep.depth),
                           rep.lambda1, rep.lambda2, rep.gap, rep.flagged};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  }
  emit(cfg, "lyapunov", table);
}

void cmd_anisotropy(const RunConfig& cfg) {
  const std::vector<Word> words = command_words(cfg);
  const double theta = cfg.theta_grid.back();  // smallest grid value
  const BoundaryApprox approx = boundary_polyline(std::min(cfg.depth + 4, 12));
  std::vector<int> levels;
  for (int n = 4; n < words.front().size(); n += 4) levels.push_back(n);
  levels.push_back(words.front().size());

  Table table(with_provenance({"word", "n", "v_x1", "v_x2", "ratio34", "alignment35",
                               "theta_member", "theta"}));
  for (std::size_t i : word_order(words)) {
    for (int n : levels) {
      const AnisotropyRecord rec = anisotropy(words[i], n, theta, approx);
      std::vector<Value> row{words[i].to_string(), static_cast<std::int64_t>(n),
                             rec.v.x1, rec.v.x2, rec.ratio34, rec.alignment35,
                             rec.theta_member, theta};
      append_provenance(row, cfg);
      table.add_row(std::move(row));
    }
  }
  emit(cfg, "anisotropy", table);
}

void cmd_theta(const RunConfig& cfg) {
  ThetaOptions opts;
  opts.norm = TauNormalization{cfg.norm_c};
  const auto reports = theta_grid_report(cfg.theta_grid, cfg.depth, cfg.samples,
                                         cfg.seed, opts);
  Table table(with_provenance({"theta", "ratio_mass", "delta_hat", "f_theta_mass",
                               "se_mass", "s_theta_empty", "theta0_estimate", "cells",
                               "per_cell_samples", "samples_total"}));
  for (const ThetaReport& rep : reports) {
    std::vector<Value> row{rep.theta, rep.ratio_mass, rep.delta_hat,
                           rep.empirical_F_theta_mass, rep.se_mass, rep.s_theta_empty,
                           rep.theta0_estimate, static_cast<std::int64_t>(rep.cells),
                           static_cast<std::int64_t>(rep.per_cell_samples),
                           static_cast<std::int64_t>(rep.samples_total)};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  }
  emit(cfg, "theta", table);
}

void cmd_energy(const RunConfig& cfg) {
  Table table(with_provenance(
      {"field", "dirichlet_matrix", "dirichlet_vfield", "cheeger_pre", "half_dirichlet",
       "relative_gap", "vfield_flagged", "lemma45_cells", "lemma45_violations",
       "lemma45_min_margin", "sub_depth"}));
  for (const ScalarField& f : energy_battery()) {
    const EnergyReport rep =
        theorem1_report(f, cfg.depth, cfg.sub_depth, TauNormalization{cfg.norm_c});
    std::vector<Value> row{rep.field,
                           rep.dirichlet_matrix,
                           rep.dirichlet_vfield,
                           rep.cheeger_pre,
                           rep.half_dirichlet,
                           rep.relative_gap,
                           static_cast<std::int64_t>(rep.vfield_flagged),
                           static_cast<std::int64_t>(rep.lemma45_cells),
                           static_cast<std::int64_t>(rep.lemma45_violations),
                           rep.lemma45_min_margin,
                           static_cast<std::int64_t>(rep.sub_depth)};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  }
  emit(cfg, "energy", table);
}

void cmd_sample(const RunConfig& cfg) {
  const std::vector<Word> words = sample_kappa(cfg.seed, cfg.depth, cfg.samples);
  Table table(with_provenance({"index", "word", "kappa"}));
  for (std::size_t i : word_order(words)) {
    std::vector<Value> row{static_cast<std::int64_t>(i), words[i].to_string(),
                           tau_cell(words[i], TauNormalization{cfg.norm_c}).kappa};
    append_provenance(row, cfg);
    table.add_row(std::move(row));
  }
  emit(cfg, "sample", table);
}

int cmd_verify(const RunConfig& cfg) {
  const VerifySummary summary = run_verify(cfg.seed);
  // Volatile runtime rows go to stdout only; the file must be byte-stable.
  emit(cfg, "verify", verify_table(summary, /*include_volatile=*/false));
  std::printf("%-36s %-6s %-24s %s\n", "check", "status", "measured", "threshold");
  for (const CheckResult& r : summary.checks) {
    std::printf("%-36s %-6s %-24s %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL",
                format_double(r.measured).c_str(), format_double(r.threshold).c_str());
  }
  const bool ok = summary.all_pass();
  std::printf("verify: %s (%zu checks)\n", ok ? "all pass" : "FAILURES",
              summary.checks.size());
  return ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic Sierpinski gasket toolkit: IFS geometry, Kusuoka measure, "
               "cocycle projection field, and energy comparisons"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file; command-line flags take precedence");

  RunConfig cfg;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->fallthrough();  // lets --config reach the parent app
    cmd->add_option("--depth", cfg.depth, "cell/word depth");
    cmd->add_option("--sub-depth", cfg.sub_depth, "sub-cell refinement depth");
    cmd->add_option("--theta", cfg.theta_grid,
                    "strictly decreasing theta grid")->expected(-1);
    cmd->add_option("--samples", cfg.samples, "sample count");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--norm-c", cfg.norm_c, "tau normalisation: tau(S) = c Id");
    cmd->add_option("--format", cfg.format, "output format: csv or jsonl");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    return cmd;
  };

  add_common(app.add_subcommand("gasket", "cell vertex tables and boundary polylines"));
  add_common(app.add_subcommand("measure", "tau and kappa per cell"));
  add_common(app.add_subcommand("vfield", "projection field on sampled words"))
      ->add_option("--word", cfg.word, "explicit word (digits 1-3)");
  add_common(app.add_subcommand("lyapunov", "Lyapunov exponents on sampled words"))
      ->add_option("--word", cfg.word, "explicit word (digits 1-3)");
  add_common(app.add_subcommand("anisotropy", "cell anisotropy records"))
      ->add_option("--word", cfg.word, "explicit word (digits 1-3)");
  add_common(app.add_subcommand("theta", "mass concentration over the theta grid"));
  add_common(app.add_subcommand("energy", "energy comparison for the test battery"));
  add_common(app.add_subcommand("sample", "kappa-distributed words"));
  add_common(app.add_subcommand("verify", "run the full verification battery"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    cfg.validate();
    const auto subs = app.get_subcommands();
    const std::string name = subs.at(0)->get_name();
    if (name == "gasket") cmd_gasket(cfg);
    else if (name == "measure") cmd_measure(cfg);
    else if (name == "vfield") cmd_vfield(cfg);
    else if (name == "lyapunov") cmd_lyapunov(cfg);
    else if (name == "anisotropy") cmd_anisotropy(cfg);
    else if (name == "theta") cmd_theta(cfg);
    else if (name == "energy") cmd_energy(cfg);
    else if (name == "sample") cmd_sample(cfg);
    else if (name == "verify") return cmd_verify(cfg);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
