#include "bridgelab/cli/commands.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bridgelab/asymptotics.hpp"
#include "bridgelab/cli/config.hpp"
#include "bridgelab/cli/report.hpp"
#include "bridgelab/contrast.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/montecarlo.hpp"
#include "bridgelab/solver.hpp"

namespace bridgelab::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig load(const CommandOptions& opts) {
  ExperimentConfig cfg = load_config(opts.config);
  if (opts.seed) {
    cfg.mc.seed = *opts.seed;
    if (cfg.data_seed) cfg.data_seed = *opts.seed;
  }
  if (opts.out) cfg.out_dir = *opts.out;
  return cfg;
}

// Runs `body`, mapping failures onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const InvalidInput& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return config_error;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return io_error;
  } catch (const UnsupportedRegime& e) {
    err << "unsupported regime: " << e.what() << '\n';
    return unsupported_regime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

Dataset read_data_file(const std::string& path, const TrueParameter& truth) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: cannot open data file", path));
  const std::size_t p = truth.p();
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (lineno == 1 && rows.empty()) continue;  // header
      throw ConfigError(fmt::format("{}:{}: non-numeric entry", path, lineno));
    }
    if (row.size() != p + 1) {
      throw ConfigError(fmt::format("{}:{}: expected {} columns (y, x_1..x_{})", path, lineno, p + 1, p));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(fmt::format("{}: no data rows", path));
  Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  Vector Y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    Y[r] = rows[i][0];
    for (std::size_t j = 0; j < p; ++j) X(r, static_cast<Eigen::Index>(j)) = rows[i][j + 1];
  }
  return Dataset{std::move(X), std::move(Y), truth, std::nullopt};
}

Dataset single_dataset(const ExperimentConfig& cfg) {
  if (cfg.data_file) return read_data_file(*cfg.data_file, cfg.mc.truth);
  if (!cfg.data_seed) throw ConfigError("[model] needs data_seed or data_file for a single fit");
  if (cfg.n == 0) throw ConfigError("[model] n is required with data_seed");
  Matrix X = generate_design(cfg.mc.design, cfg.n, design_seed(*cfg.data_seed, cfg.n));
  return simulate_dataset(std::move(X), cfg.mc.truth, cfg.mc.noise, replication_seed(*cfg.data_seed, cfg.n, 0));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

// C0 for limit objects: the configured matrix, else the Gram matrix of the
// design at the largest available sample size.
Matrix limit_c0(const ExperimentConfig& cfg) {
  if (cfg.C0) return *cfg.C0;
  std::size_t n = cfg.n;
  if (!cfg.mc.n_grid.empty()) n = std::max(n, cfg.mc.n_grid.back());
  if (n == 0) throw ConfigError("[model] C0, [model] n or [mc] n_grid is needed to fix C0");
  const Matrix X = generate_design(cfg.mc.design, n, design_seed(cfg.mc.seed, n));
  return gram(X, cfg.mc.truth.p0(), cfg.mc.truth.p1()).C;
}

}  // namespace

int cmd_estimate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opts);
    const Box box = cfg.mc.effective_box();
    const Contrast contrast(single_dataset(cfg), cfg.mc.penalty, box);
    const EstimateResult est = minimize(contrast, box, cfg.mc.solver);
    out << dump(estimate_json(cfg, contrast, est), cfg.pretty);
    return static_cast<int>(ok);
  });
}

int cmd_mc(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opts);
    ReplicationSet set;
    try {
      set = run_replications(cfg.mc, opts.threads);
    } catch (const InvalidInput& e) {
      throw ConfigError(fmt::format("{}\n--- configuration ---\n{}", e.what(), to_ini(cfg)));
    }
    const MCSummary summary = summarize(cfg.mc, set);

    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("{}: {}", dir.string(), ec.message()));
    std::ostringstream reps, tail;
    write_replications_csv(reps, set);
    write_tail_csv(tail, summary.tail);
    write_file(dir / "replications.csv", reps.str());
    write_file(dir / "tail.csv", tail.str());
    write_file(dir / "summary.json", dump(summary_json(cfg, set, summary), cfg.pretty));
    for (const auto& w : summary.warnings) err << "warning: " << w << '\n';
    out << fmt::format("wrote {} replications to {}\n", set.replications * set.n_grid.size(), dir.string());
    return static_cast<int>(ok);
  });
}

int cmd_check(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opts);
    const MCConfig& mc = cfg.mc;
    json report;
    report["regime"] = regime_or_error(mc.penalty);
    json conditions = json::array();
    json notes = json::array();

    std::vector<std::size_t> grid = cfg.check.n_grid.empty() ? mc.n_grid : cfg.check.n_grid;
    if (grid.empty()) grid = {100, 200, 400, 800, 1600};
    std::vector<Matrix> designs;
    for (std::size_t n : grid) designs.push_back(generate_design(mc.design, n, design_seed(mc.seed, n)));
    const Matrix C0 = cfg.C0 ? *cfg.C0 : gram(designs.back(), mc.truth.p0(), mc.truth.p1()).C;
    const ConditionReport design =
        check_design_conditions(designs, mc.truth.p0(), C0, cfg.check.delta, cfg.check.q_n);
    for (const auto& c : design.conditions) conditions.push_back(to_json(c));

    if (mc.penalty.family == PenaltyFamily::none) {
      notes.push_back("no penalty: penalty conditions skipped");
    } else {
      if (mc.truth.p0() == 0) {
        notes.push_back("p0 = 0: divergence condition has no zero block to probe");
      } else {
        const auto div = check_divergence_condition(mc.penalty, mc.truth.p0(), grid, cfg.check.r_grid);
        conditions.push_back(to_json(div, {"polynomial-type-large-deviation", "sparse-consistency"}));
      }
      const auto [growth, increment] = check_smooth_conditions(mc.penalty, grid, cfg.check.a_probes,
                                                               cfg.check.b_probes, cfg.check.beta);
      conditions.push_back(to_json(growth, {"polynomial-type-large-deviation-smooth-penalty"}));
      conditions.push_back(to_json(increment, {"polynomial-type-large-deviation-smooth-penalty"}));
    }
    report["conditions"] = conditions;
    report["notes"] = notes;
    out << dump(report, cfg.pretty);
    if (report["regime"].is_object() && report["regime"].contains("error")) return static_cast<int>(unsupported_regime);
    return static_cast<int>(ok);
  });
}

int cmd_limit(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opts);
    const MCConfig& mc = cfg.mc;
    if (mc.penalty.family != PenaltyFamily::bridge) {
      throw ConfigError("limit laws are available for the bridge penalty only");
    }
    const Regime regime = regime_classify(mc.penalty.gamma, mc.penalty.schedule);
    const Matrix C0 = limit_c0(cfg);
    const LimitLaw law = build_limit_law(regime, C0, mc.noise.sigma * mc.noise.sigma, mc.truth,
                                         mc.effective_box());
    json j = to_json(law);
    if (regime.tag == RegimeTag::standard) {
      const Matrix s = sample_limit_argmin(law, cfg.limit_samples,
                                           derive_seed(mc.seed, {static_cast<std::uint64_t>(Stream::limit)}));
      const Vector mean = s.colwise().mean().transpose();
      const Matrix centered = s.rowwise() - mean.transpose();
      const Matrix cov = centered.transpose() * centered / std::max<double>(1.0, static_cast<double>(s.rows()) - 1.0);
      Vector zero_freq(s.cols());
      for (Eigen::Index c = 0; c < s.cols(); ++c)
        zero_freq[c] = static_cast<double>((s.col(c).array() == 0.0).count()) / static_cast<double>(s.rows());
      j["argmin_samples"] = {{"R", cfg.limit_samples},
                             {"mean", to_json(mean)},
                             {"cov", to_json(cov)},
                             {"second_moment", number(s.rowwise().squaredNorm().mean())},
                             {"zero_frequency", to_json(zero_freq)}};
    }
    out << dump(j, cfg.pretty);
    return static_cast<int>(ok);
  });
}

}  // namespace bridgelab::cli
