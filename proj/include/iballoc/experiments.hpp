#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iballoc/benchmark.hpp"
#include "iballoc/engine.hpp"
#include "iballoc/instances.hpp"

namespace iballoc {

enum class ExperimentKind { kMatching, kLowerBound, kHotel, kAudit, kRegretScaling };

ExperimentKind kind_from_string(const std::string& s);
std::string to_string(ExperimentKind kind);

struct LearnerConfig {
  std::string type = "ucb";  // ucb | clairvoyant | ts-mnl
  double confidence_scale = 72.0;
  double prior_half_width = 1.0;
  double newton_tol = 1e-8;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kMatching;
  std::uint64_t seed = 1;
  int replicates = 1;
  int workers = 1;
  std::string out_dir = ".";
  LearnerConfig learner;
  std::vector<std::string> algorithms;  // default chosen per kind
  nlohmann::json params;                // kind-specific parameters
};

// Parses and validates a config document; throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);

struct ReportRow {
  std::string experiment;
  double param = 0.0;  // inventory scale, horizon, or group size
  std::string algorithm;
  long replicates = 0;
  long failures = 0;
  double mean_alg = 0.0, se_alg = 0.0;
  double mean_opt = 0.0;
  double mean_ratio = 0.0, se_ratio = 0.0;
  double mean_reg = 0.0, se_reg = 0.0;
  double factor = 0.0;
  double slack = 0.0;
};

struct RunReport {
  std::vector<ReportRow> rows;
  nlohmann::json metadata;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct AuditReport {
  long instances = 0;
  long feasibility_failures = 0;
  long weak_duality_failures = 0;
  double worst_violation = 0.0;
  long worst_instance = -1;

  bool passed() const { return feasibility_failures == 0 && weak_duality_failures == 0; }
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Replicate r of report row `row` draws from substreams with these ids;
// channel 0 is the instance draw, channel 1 + i the i-th algorithm's run.
std::uint64_t replicate_stream_id(int row, int replicate, int channel);

// Dispatches on config.kind (audit has its own entry point and report shape).
RunReport run_experiment(const ExperimentConfig& config);

RunReport run_regret_scaling(const ExperimentConfig& config);
RunReport run_lowerbound_study(const ExperimentConfig& config);
AuditReport run_certificate_audit(const ExperimentConfig& config);

// Least-squares slope of ln(y) against ln(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Runs body(0..count-1) on up to `workers` threads; exceptions inside the
// body must be handled by the body itself.
void parallel_replicates(int count, int workers, const std::function<void(int)>& body);

// Builders shared between the runners, the CLI, and the acceptance suite.
Instance matching_instance_from_params(const nlohmann::json& params, Rng& rng);
HotelParams hotel_params_from_json(const nlohmann::json& params);

void write_report_files(const RunReport& report, const std::string& out_dir,
                        const std::string& basename);
void write_report_files(const AuditReport& report, const std::string& out_dir,
                        const std::string& basename);

}  // namespace iballoc
