#include "bridgelab/cli/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <filesystem>
#include <set>

#include "bridgelab/errors.hpp"

namespace bridgelab::cli {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model",
       {"p0", "rho0", "rho_min", "design", "design_bound", "design_rows", "noise", "sigma", "n",
        "data_seed", "data_file", "C0"}},
      {"penalty", {"family", "gamma", "a", "tau_c", "tau_e"}},
      {"schedule", {"c", "e"}},
      {"solver", {"tolerance", "max_sweeps", "oracle_start", "box_lo", "box_hi"}},
      {"mc", {"n_grid", "replications", "seed", "r_grid", "q_list", "L_list", "limit_samples"}},
      {"check", {"n_grid", "r_grid", "a_probes", "b_probes", "beta", "delta", "qn_c", "qn_e"}},
      {"output", {"dir", "pretty"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const IniDocument& doc) : doc_(doc) {}

  const IniEntry* find(const std::string& section, const std::string& key) const {
    const auto s = doc_.sections.find(section);
    if (s == doc_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
    const IniEntry* e = find(section, key);
    if (e) throw ConfigError(fmt::format("{}:{}: [{}] {}: {}", doc_.source, e->line, section, key, what));
    throw ConfigError(fmt::format("{}: [{}] {}: {}", doc_.source, section, key, what));
  }

  template <class T>
  T parse_number(const std::string& section, const std::string& key, const std::string& text) const {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
      fail(section, key, fmt::format("cannot parse '{}' as a {}", text,
                                     std::is_floating_point_v<T> ? "number" : "non-negative integer"));
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(value)) fail(section, key, "value must be finite");
    }
    return value;
  }

  template <class T>
  std::optional<T> get(const std::string& section, const std::string& key) const {
    const IniEntry* e = find(section, key);
    if (!e) return std::nullopt;
    return parse_number<T>(section, key, e->value);
  }

  template <class T>
  std::optional<std::vector<T>> get_list(const std::string& section, const std::string& key) const {
    const IniEntry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<T> out;
    if (e->value.empty()) return out;
    for (const auto& item : split(e->value, ',')) out.push_back(parse_number<T>(section, key, item));
    return out;
  }

  std::optional<Matrix> get_matrix(const std::string& section, const std::string& key) const {
    const IniEntry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(e->value, '|')) {
      std::vector<double> r;
      for (const auto& item : split(row, ',')) r.push_back(parse_number<double>(section, key, item));
      if (!rows.empty() && r.size() != rows.front().size()) fail(section, key, "ragged matrix rows");
      rows.push_back(std::move(r));
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
  }

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const {
    const IniEntry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<bool> get_bool(const std::string& section, const std::string& key) const {
    const auto s = get_string(section, key);
    if (!s) return std::nullopt;
    if (*s == "true") return true;
    if (*s == "false") return false;
    fail(section, key, fmt::format("expected true or false, got '{}'", *s));
  }

 private:
  const IniDocument& doc_;
};

void reject_unknown(const IniDocument& doc) {
  const auto& known = known_keys();
  for (const auto& [section, keys] : doc.sections) {
    const auto k = known.find(section);
    if (k == known.end()) {
      throw ConfigError(fmt::format("{}:{}: unknown section [{}]", doc.source, doc.section_lines.at(section),
                                    section));
    }
    for (const auto& [key, entry] : keys) {
      if (!k->second.count(key)) {
        throw ConfigError(fmt::format("{}:{}: unknown key '{}' in [{}]", doc.source, entry.line, key, section));
      }
    }
  }
}

DesignKind parse_design(const Reader& r, const std::string& s) {
  if (s == "standardized") return DesignKind::standardized_orthonormal;
  if (s == "bounded") return DesignKind::bounded_random_frozen;
  if (s == "explicit") return DesignKind::explicit_matrix;
  r.fail("model", "design", fmt::format("unknown design '{}' (standardized, bounded, explicit)", s));
}

std::string_view design_name(DesignKind k) {
  switch (k) {
    case DesignKind::standardized_orthonormal: return "standardized";
    case DesignKind::bounded_random_frozen: return "bounded";
    case DesignKind::explicit_matrix: return "explicit";
  }
  return "standardized";
}

NoiseFamily parse_noise(const Reader& r, const std::string& s) {
  if (s == "gaussian") return NoiseFamily::gaussian;
  if (s == "uniform") return NoiseFamily::scaled_uniform;
  if (s == "rademacher") return NoiseFamily::scaled_rademacher;
  r.fail("model", "noise", fmt::format("unknown noise '{}' (gaussian, uniform, rademacher)", s));
}

std::string_view noise_name(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::scaled_uniform: return "uniform";
    case NoiseFamily::scaled_rademacher: return "rademacher";
  }
  return "gaussian";
}

PenaltyFamily parse_family(const Reader& r, const std::string& s) {
  for (auto f : {PenaltyFamily::none, PenaltyFamily::bridge, PenaltyFamily::scad, PenaltyFamily::selo})
    if (s == to_string(f)) return f;
  r.fail("penalty", "family", fmt::format("unknown family '{}' (none, bridge, scad, selo)", s));
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

template <class T>
std::string list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += num(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

std::string matrix(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += " | ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += num(m(i, j));
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const IniDocument& doc) {
  reject_unknown(doc);
  const Reader r(doc);
  ExperimentConfig cfg;

  // [model]
  const auto p0 = r.get<std::size_t>("model", "p0").value_or(0);
  const auto rho0 = r.get_list<double>("model", "rho0");
  if (!rho0) r.fail("model", "rho0", "required");
  const double rho_min = r.get<double>("model", "rho_min").value_or(TrueParameter::kDefaultRhoMin);
  try {
    cfg.mc.truth = TrueParameter(p0, Eigen::Map<const Vector>(rho0->data(), static_cast<Eigen::Index>(rho0->size())),
                                 rho_min);
  } catch (const InvalidInput& e) {
    r.fail("model", "rho0", e.what());
  }
  const std::size_t p = cfg.mc.truth.p();
  cfg.mc.design.p = p;
  if (auto s = r.get_string("model", "design")) cfg.mc.design.kind = parse_design(r, *s);
  if (auto b = r.get<double>("model", "design_bound")) {
    if (!(*b > 0.0)) r.fail("model", "design_bound", "must be positive");
    cfg.mc.design.bound = *b;
  }
  if (auto m = r.get_matrix("model", "design_rows")) {
    if (static_cast<std::size_t>(m->cols()) != p) r.fail("model", "design_rows", fmt::format("rows need {} entries", p));
    cfg.mc.design.rows = *m;
  }
  if (cfg.mc.design.kind == DesignKind::explicit_matrix && cfg.mc.design.rows.size() == 0) {
    r.fail("model", "design_rows", "required for the explicit design");
  }
  if (auto s = r.get_string("model", "noise")) cfg.mc.noise.family = parse_noise(r, *s);
  if (auto s = r.get<double>("model", "sigma")) {
    if (!(*s >= 0.0)) r.fail("model", "sigma", "must be non-negative");
    cfg.mc.noise.sigma = *s;
  }
  cfg.n = r.get<std::size_t>("model", "n").value_or(0);
  cfg.data_seed = r.get<Seed>("model", "data_seed");
  cfg.data_file = r.get_string("model", "data_file");
  if (cfg.data_file && cfg.data_file->empty()) r.fail("model", "data_file", "empty path");
  if (auto m = r.get_matrix("model", "C0")) {
    if (static_cast<std::size_t>(m->rows()) != p || static_cast<std::size_t>(m->cols()) != p) {
      r.fail("model", "C0", fmt::format("must be {} x {}", p, p));
    }
    cfg.C0 = *m;
  }

  // [penalty] and [schedule]
  const auto family = r.get_string("penalty", "family");
  if (!family) r.fail("penalty", "family", "required");
  PenaltySpec& pen = cfg.mc.penalty;
  pen.family = parse_family(r, *family);
  pen.gamma = r.get<double>("penalty", "gamma").value_or(pen.gamma);
  pen.a = r.get<double>("penalty", "a").value_or(pen.a);
  pen.tau.c = r.get<double>("penalty", "tau_c").value_or(pen.tau.c);
  pen.tau.e = r.get<double>("penalty", "tau_e").value_or(pen.tau.e);
  pen.schedule.c = r.get<double>("schedule", "c").value_or(pen.schedule.c);
  pen.schedule.e = r.get<double>("schedule", "e").value_or(pen.schedule.e);
  try {
    pen.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(fmt::format("{}: [penalty]: {}", doc.source, e.what()));
  }

  // [solver]
  SolverOptions& so = cfg.mc.solver;
  so.tolerance = r.get<double>("solver", "tolerance").value_or(so.tolerance);
  if (!(so.tolerance > 0.0)) r.fail("solver", "tolerance", "must be positive");
  so.max_sweeps = r.get<std::size_t>("solver", "max_sweeps").value_or(so.max_sweeps);
  if (so.max_sweeps == 0) r.fail("solver", "max_sweeps", "must be positive");
  so.oracle_start = r.get_bool("solver", "oracle_start").value_or(so.oracle_start);
  const auto lo = r.get<double>("solver", "box_lo");
  const auto hi = r.get<double>("solver", "box_hi");
  if (lo.has_value() != hi.has_value()) r.fail("solver", lo ? "box_hi" : "box_lo", "box_lo and box_hi go together");
  if (lo) {
    if (!(*lo < *hi)) r.fail("solver", "box_lo", "needs box_lo < box_hi");
    cfg.mc.box = Box::uniform(p, *lo, *hi);
    if (!cfg.mc.box->contains(cfg.mc.truth.theta())) r.fail("solver", "box_lo", "box must contain theta0");
  }

  // [mc]
  cfg.mc.n_grid = r.get_list<std::size_t>("mc", "n_grid").value_or(std::vector<std::size_t>{});
  cfg.mc.replications = r.get<std::size_t>("mc", "replications").value_or(cfg.mc.replications);
  cfg.mc.seed = r.get<Seed>("mc", "seed").value_or(cfg.mc.seed);
  cfg.mc.r_grid = r.get_list<double>("mc", "r_grid").value_or(
      std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0});
  cfg.mc.q_list = r.get_list<double>("mc", "q_list").value_or(cfg.mc.q_list);
  cfg.mc.L_list = r.get_list<double>("mc", "L_list").value_or(cfg.mc.L_list);
  cfg.limit_samples = r.get<std::size_t>("mc", "limit_samples").value_or(cfg.limit_samples);
  if (cfg.limit_samples == 0) r.fail("mc", "limit_samples", "must be positive");

  // [check]
  CheckSettings& ck = cfg.check;
  ck.n_grid = r.get_list<std::size_t>("check", "n_grid").value_or(ck.n_grid);
  ck.r_grid = r.get_list<double>("check", "r_grid").value_or(ck.r_grid);
  ck.a_probes = r.get_list<double>("check", "a_probes").value_or(ck.a_probes);
  ck.b_probes = r.get_list<double>("check", "b_probes").value_or(ck.b_probes);
  ck.beta = r.get<double>("check", "beta").value_or(ck.beta);
  ck.delta = r.get<double>("check", "delta").value_or(ck.delta);
  const auto qc = r.get<double>("check", "qn_c");
  const auto qe = r.get<double>("check", "qn_e");
  if (qc.has_value() != qe.has_value()) r.fail("check", qc ? "qn_e" : "qn_c", "qn_c and qn_e go together");
  if (qc) ck.q_n = TuningSchedule{*qc, *qe};

  // [output]
  cfg.out_dir = r.get_string("output", "dir").value_or(cfg.out_dir);
  if (cfg.out_dir.empty()) r.fail("output", "dir", "empty path");
  cfg.pretty = r.get_bool("output", "pretty").value_or(cfg.pretty);
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
  return parse_config(parse_ini(text, source));
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = parse_config(read_ini(path));
  if (cfg.data_file) {
    const std::filesystem::path f(*cfg.data_file);
    if (f.is_relative()) {
      cfg.data_file = (std::filesystem::path(path).parent_path() / f).lexically_normal().string();
    }
  }
  return cfg;
}

std::string to_ini(const ExperimentConfig& cfg, bool with_output) {
  const MCConfig& mc = cfg.mc;
  std::string out;
  auto kv = [&out](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  std::vector<double> rho(mc.truth.rho0().data(), mc.truth.rho0().data() + mc.truth.rho0().size());

  out += "[model]\n";
  kv("p0", std::to_string(mc.truth.p0()));
  kv("rho0", list(rho));
  kv("rho_min", num(mc.truth.rho_min()));
  kv("design", std::string(design_name(mc.design.kind)));
  kv("design_bound", num(mc.design.bound));
  if (mc.design.rows.size() > 0) kv("design_rows", matrix(mc.design.rows));
  kv("noise", std::string(noise_name(mc.noise.family)));
  kv("sigma", num(mc.noise.sigma));
  kv("n", std::to_string(cfg.n));
  if (cfg.data_seed) kv("data_seed", std::to_string(*cfg.data_seed));
  if (cfg.data_file) kv("data_file", *cfg.data_file);
  if (cfg.C0) kv("C0", matrix(*cfg.C0));

  out += "\n[penalty]\n";
  kv("family", std::string(to_string(mc.penalty.family)));
  kv("gamma", num(mc.penalty.gamma));
  kv("a", num(mc.penalty.a));
  kv("tau_c", num(mc.penalty.tau.c));
  kv("tau_e", num(mc.penalty.tau.e));

  out += "\n[schedule]\n";
  kv("c", num(mc.penalty.schedule.c));
  kv("e", num(mc.penalty.schedule.e));

  out += "\n[solver]\n";
  kv("tolerance", num(mc.solver.tolerance));
  kv("max_sweeps", std::to_string(mc.solver.max_sweeps));
  kv("oracle_start", mc.solver.oracle_start ? "true" : "false");
  if (mc.box) {
    kv("box_lo", num(mc.box->lo[0]));
    kv("box_hi", num(mc.box->hi[0]));
  }

  out += "\n[mc]\n";
  kv("n_grid", list(mc.n_grid));
  kv("replications", std::to_string(mc.replications));
  kv("seed", std::to_string(mc.seed));
  kv("r_grid", list(mc.r_grid));
  kv("q_list", list(mc.q_list));
  kv("L_list", list(mc.L_list));
  kv("limit_samples", std::to_string(cfg.limit_samples));

  out += "\n[check]\n";
  kv("n_grid", list(cfg.check.n_grid));
  kv("r_grid", list(cfg.check.r_grid));
  kv("a_probes", list(cfg.check.a_probes));
  kv("b_probes", list(cfg.check.b_probes));
  kv("beta", num(cfg.check.beta));
  kv("delta", num(cfg.check.delta));
  if (cfg.check.q_n) {
    kv("qn_c", num(cfg.check.q_n->c));
    kv("qn_e", num(cfg.check.q_n->e));
  }

  if (!with_output) return out;
  out += "\n[output]\n";
  kv("dir", cfg.out_dir);
  kv("pretty", cfg.pretty ? "true" : "false");
  return out;
}

}  // namespace bridgelab::cli
