#include "bridgelab/cli/report.hpp"

#include <fmt/format.h>

#include <cmath>

#include "bridgelab/contrast.hpp"
#include "bridgelab/errors.hpp"

namespace bridgelab::cli {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

namespace {

json schedule_json(const PowerSchedule& s) { return {{"c", number(s.c)}, {"e", number(s.e)}}; }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

json to_json(const Regime& r) {
  return {{"tag", to_string(r.tag)},
          {"lambda0", number(r.lambda0)},
          {"gamma", number(r.gamma)},
          {"schedule", schedule_json(r.schedule)},
          {"limits",
           {{"lambda_over_n_min_rate", number(r.limit_min_rate)},
            {"lambda_over_n_gamma_half", number(r.limit_gamma_rate)},
            {"lambda_over_root_n", number(r.limit_root_n)},
            {"lambda_over_n", number(r.limit_n)}}}};
}

json to_json(const RateDescriptors& d) {
  return {{"s_n", schedule_json(d.s_n)},
          {"eps_n", schedule_json(d.eps_n)},
          {"alpha_n", schedule_json(d.alpha_n)},
          {"beta_n", schedule_json(d.beta_n)},
          {"mixed_rates", d.mixed_rates}};
}

json to_json(const LimitLaw& law) {
  json j{{"regime", to_json(law.regime)},
         {"rates", to_json(law.rates)},
         {"sigma2", number(law.sigma2)},
         {"C0", to_json(law.C0)},
         {"theta0", to_json(law.theta0)}};
  switch (law.regime.tag) {
    case RegimeTag::standard:
      break;
    case RegimeTag::sparse_normal:
      j["upsilon"] = to_json(law.upsilon);
      j["bias"] = to_json(law.bias);
      j["cov"] = to_json(law.cov);
      break;
    case RegimeTag::sparse_slow:
      j["upsilon"] = to_json(law.upsilon);
      j["drift"] = to_json(law.drift);
      j["drift_rate"] = "n / lambda_n";
      break;
    case RegimeTag::pseudo_true: {
      j["pseudo_true"] = to_json(law.pseudo_true);
      json zeros = json::array();
      for (bool b : law.pseudo_true_zero) zeros.push_back(b);
      j["pseudo_true_zero"] = zeros;
      break;
    }
  }
  return j;
}

json to_json(const ConditionSequence& c) {
  return {{"id", c.id},
          {"kind", "design"},
          {"description", c.description},
          {"n_grid", c.n_grid},
          {"sequence", numbers(c.values)},
          {"verdict", to_string(c.verdict)},
          {"required_by", c.required_by}};
}

json to_json(const PenaltyConditionReport& r, const std::vector<std::string>& required_by) {
  json series = json::array();
  for (const auto& s : r.series) {
    series.push_back({{"label", s.label}, {"x", numbers(s.x)}, {"values", numbers(s.values)}});
  }
  json j{{"id", r.id},
         {"kind", "penalty"},
         {"description", r.description},
         {"n_grid", r.n_grid},
         {"series", series},
         {"verdict", r.satisfied ? "satisfied" : "not-satisfied"},
         {"required_by", required_by},
         {"notes", r.notes}};
  j["fitted_power"] = r.fitted_power ? number(*r.fitted_power) : json(nullptr);
  j["fit_residual"] = r.fit_residual ? number(*r.fit_residual) : json(nullptr);
  j["kappa"] = r.kappa ? json(*r.kappa) : json(nullptr);
  return j;
}

json to_json(const LimitDistanceReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json pt{{"n", p.n},
            {"mean", to_json(p.mean)},
            {"se", to_json(p.se)},
            {"mean_gap_se", to_json(p.mean_gap_se)},
            {"cov", to_json(p.cov)}};
    if (r.regime == RegimeTag::sparse_normal) pt["cov_relative_gap"] = number(p.cov_relative_gap);
    if (r.regime == RegimeTag::standard) pt["ks"] = numbers(p.ks);
    if (r.regime == RegimeTag::pseudo_true) pt["zero_frequency"] = numbers(p.zero_frequency);
    points.push_back(std::move(pt));
  }
  json j{{"regime", to_string(r.regime)}, {"target_mean", to_json(r.target_mean)}, {"points", points},
         {"notes", r.notes}};
  if (r.target_cov.size() > 0) j["target_cov"] = to_json(r.target_cov);
  return j;
}

json regime_or_error(const PenaltySpec& pen) {
  if (pen.family != PenaltyFamily::bridge) return nullptr;
  try {
    return to_json(regime_classify(pen.gamma, pen.schedule));
  } catch (const UnsupportedRegime& e) {
    return {{"error", "unsupported-regime"}, {"message", e.what()}};
  }
}

json estimate_json(const ExperimentConfig& cfg, const Contrast& contrast, const EstimateResult& est) {
  json zeros = json::array();
  for (bool b : est.exact_zero) zeros.push_back(b);
  return {{"n", contrast.n()},
          {"p0", cfg.mc.truth.p0()},
          {"p1", cfg.mc.truth.p1()},
          {"penalty", to_string(cfg.mc.penalty.family)},
          {"lambda_n", number(contrast.scalar_penalty().lambda)},
          {"theta_hat", to_json(est.theta)},
          {"z_hat", to_json(est.z)},
          {"rho_hat", to_json(est.rho)},
          {"exact_zero", zeros},
          {"objective", number(est.objective)},
          {"regime", regime_or_error(cfg.mc.penalty)},
          {"solver",
           {{"converged", est.converged},
            {"iterations", est.iterations},
            {"restarts", est.restarts_used},
            {"on_boundary", est.on_boundary}}}};
}

json summary_json(const ExperimentConfig& cfg, const ReplicationSet& set, const MCSummary& s) {
  json j;
  j["config"] = to_ini(cfg, false);
  j["regime"] = set.regime ? to_json(*set.regime) : regime_or_error(cfg.mc.penalty);

  json sel = json::array();
  for (const auto& p : s.selection) {
    sel.push_back({{"n", p.n},
                   {"frequency", number(p.frequency)},
                   {"se", number(p.se)},
                   {"per_coordinate", numbers(p.per_coordinate)},
                   {"per_coordinate_se", numbers(p.per_coordinate_se)}});
  }
  j["selection_frequency"] = sel;

  json moments = json::array();
  for (const auto& m : s.moments.points) {
    moments.push_back({{"n", m.n},
                       {"q", number(m.q)},
                       {"u_moment", number(m.u_moment)},
                       {"u_se", number(m.u_se)},
                       {"v_moment", number(m.v_moment)},
                       {"v_se", number(m.v_se)}});
  }
  j["moments"] = moments;
  json verdicts = json::array();
  for (const auto& v : s.moments.verdicts) {
    verdicts.push_back({{"q", number(v.q)},
                        {"u_max_min_ratio", number(v.u_ratio)},
                        {"u_verdict", to_string(v.u_verdict)},
                        {"v_max_min_ratio", number(v.v_ratio)},
                        {"v_verdict", to_string(v.v_verdict)}});
  }
  j["moment_verdicts"] = verdicts;

  j["limit_law"] = s.law ? to_json(*s.law) : json(nullptr);
  j["limit_distance"] = s.limit_distance ? to_json(*s.limit_distance) : json(nullptr);

  json pldi;
  pldi["L"] = numbers(s.tail.L);
  json by_L = json::array();
  for (std::size_t l = 0; l < s.tail.L.size(); ++l) {
    by_L.push_back({{"L", number(s.tail.L[l])},
                    {"max_rL_p_hat_by_n", numbers(s.tail.pldi_by_n[l])},
                    {"verdict", to_string(s.tail.pldi_verdict[l])}});
  }
  pldi["probes"] = by_L;
  pldi["largest_bounded_L"] = s.tail.largest_bounded_L ? number(*s.tail.largest_bounded_L) : json(nullptr);
  json slopes = json::array();
  for (const auto& c : s.tail.curves) {
    json entry{{"n", c.n}, {"all_mass_at_zero", c.all_mass_at_zero}};
    if (c.slope_fit) {
      entry["slope"] = number(c.slope_fit->slope);
      entry["points"] = c.slope_fit->points;
    } else {
      entry["slope"] = nullptr;
      entry["points"] = 0;
    }
    slopes.push_back(std::move(entry));
  }
  pldi["tail_slopes"] = slopes;
  j["pldi_probe"] = pldi;

  json counts = json::array();
  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    counts.push_back({{"n", set.n_grid[k]},
                      {"replications", set.by_n[k].size()},
                      {"nonconverged", set.nonconverged[k]},
                      {"boundary_hits", set.boundary_hits[k]}});
  }
  j["replication_counts"] = counts;
  j["warnings"] = s.warnings;
  return j;
}

namespace {

std::string csv_num(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

void write_replications_csv(std::ostream& out, const ReplicationSet& set) {
  const std::size_t p = set.p0 + set.p1;
  std::string header = "n,rep,seed";
  for (std::size_t j = 1; j <= p; ++j) header += fmt::format(",theta_hat_{}", j);
  for (std::size_t j = 1; j <= set.p0; ++j) header += fmt::format(",zero_flag_{}", j);
  header += ",objective,converged\n";
  out << header;
  for (const auto& recs : set.by_n) {
    for (const auto& r : recs) {
      std::string line = fmt::format("{},{},{}", r.n, r.rep, r.seed);
      for (double x : r.theta) line += "," + csv_num(x);
      for (bool b : r.exact_zero) line += b ? ",1" : ",0";
      line += "," + csv_num(r.objective) + (r.converged ? ",1\n" : ",0\n");
      out << line;
    }
  }
}

void write_tail_csv(std::ostream& out, const TailReport& tail) {
  std::string header = "n,r,p_hat,se,censored";
  for (double L : tail.L) header += fmt::format(",rL_phat_L{:g}", L);
  out << header << '\n';
  for (const auto& c : tail.curves) {
    for (std::size_t i = 0; i < c.r.size(); ++i) {
      std::string line = fmt::format("{},{},{},{},{}", c.n, csv_num(c.r[i]), csv_num(c.p_hat[i]),
                                     csv_num(c.se[i]), c.informative[i] ? 0 : 1);
      for (const auto& row : c.rL_p_hat) line += "," + csv_num(row[i]);
      out << line << '\n';
    }
  }
}

std::string dump(const json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

}  // namespace bridgelab::cli
