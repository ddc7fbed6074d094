#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/cli/ini.hpp"
#include "bridgelab/montecarlo.hpp"

namespace bridgelab::cli {

struct CheckSettings {
  std::vector<std::size_t> n_grid;  // empty: use the mc n-grid
  std::vector<double> r_grid{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> a_probes{0.5, 1.0, 2.0};
  std::vector<double> b_probes{-1.0, -0.5, 0.5, 1.0};
  double beta = 0.0;
  double delta = 0.25;
  std::optional<TuningSchedule> q_n;

  friend bool operator==(const CheckSettings&, const CheckSettings&) = default;
};

struct ExperimentConfig {
  MCConfig mc;
  // Single fit and limit-law inputs.
  std::size_t n = 0;
  std::optional<Seed> data_seed;
  std::optional<std::string> data_file;
  std::optional<Matrix> C0;
  std::size_t limit_samples = 10000;
  CheckSettings check;
  std::string out_dir = "out";
  bool pretty = true;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    const bool c0 = a.C0.has_value() == b.C0.has_value() &&
                    (!a.C0 || (a.C0->rows() == b.C0->rows() && a.C0->cols() == b.C0->cols() &&
                               *a.C0 == *b.C0));
    return a.mc == b.mc && a.n == b.n && a.data_seed == b.data_seed && a.data_file == b.data_file &&
           c0 && a.limit_samples == b.limit_samples && a.check == b.check &&
           a.out_dir == b.out_dir && a.pretty == b.pretty;
  }
};

// Strict: unknown sections or keys and malformed values raise ConfigError
// naming the file, line and key. Campaign-level checks (replications, grids)
// are left to MCConfig::validate so that single-fit configs need no [mc].
ExperimentConfig parse_config(const IniDocument& doc);
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Canonical INI text; parse_config_text(to_ini(c)) == c. Without the
// [output] section the text describes the experiment only, so it does not
// change with the output location.
std::string to_ini(const ExperimentConfig& cfg, bool with_output = true);

}  // namespace bridgelab::cli
