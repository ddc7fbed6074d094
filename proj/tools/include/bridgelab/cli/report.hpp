#pragma once

#include <json.hpp>

#include <ostream>

#include "bridgelab/asymptotics.hpp"
#include "bridgelab/cli/config.hpp"
#include "bridgelab/montecarlo.hpp"
#include "bridgelab/solver.hpp"

namespace bridgelab::cli {

using nlohmann::json;

// Finite values as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
json number(double x);
json to_json(const Vector& v);
json to_json(const Matrix& m);
json to_json(const Regime& r);
json to_json(const RateDescriptors& d);
json to_json(const LimitLaw& law);
json to_json(const ConditionSequence& c);
json to_json(const PenaltyConditionReport& r, const std::vector<std::string>& required_by);
json to_json(const LimitDistanceReport& r);

// Regime of a bridge penalty, the unsupported-regime error object, or null
// for other families.
json regime_or_error(const PenaltySpec& pen);

json estimate_json(const ExperimentConfig& cfg, const Contrast& contrast, const EstimateResult& est);
json summary_json(const ExperimentConfig& cfg, const ReplicationSet& set, const MCSummary& summary);

void write_replications_csv(std::ostream& out, const ReplicationSet& set);
void write_tail_csv(std::ostream& out, const TailReport& tail);

std::string dump(const json& j, bool pretty);

}  // namespace bridgelab::cli
