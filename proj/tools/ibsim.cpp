#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "iballoc/experiments.hpp"
#include "iballoc/serialize.hpp"

namespace {

using iballoc::ExperimentConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAudit = 3;
constexpr int kExitSolver = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "experiment config JSON path")
      ->required();
  cmd->add_option("--seed", flags.seed, "override the base seed");
  cmd->add_option("--replicates", flags.replicates, "override the replicate count");
  cmd->add_option("--workers", flags.workers, "override the worker count");
  cmd->add_option("--out-dir", flags.out_dir, "override the output directory");
}

ExperimentConfig load_config(const CommonFlags& flags, const std::string& kind) {
  json doc = json::parse(iballoc::read_text_file(flags.config_path), nullptr, true, true);
  if (!doc.contains("kind")) doc["kind"] = kind;
  if (doc["kind"] != kind)
    throw iballoc::ConfigError("config kind '" + doc["kind"].get<std::string>() +
                               "' does not match subcommand '" + kind + "'");
  ExperimentConfig cfg = iballoc::config_from_json(doc);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.replicates) cfg.replicates = *flags.replicates;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  return cfg;
}

void print_rows(const iballoc::RunReport& report) {
  for (const auto& r : report.rows) {
    std::cout << r.experiment << " param=" << r.param << " " << r.algorithm
              << ": ALG/OPT=" << r.mean_ratio << " (se " << r.se_ratio << ")"
              << " REG=" << r.mean_reg << " slack=" << r.slack
              << " reps=" << r.replicates;
    if (r.failures > 0) std::cout << " failures=" << r.failures;
    std::cout << '\n';
  }
}

int run_report_command(const CommonFlags& flags, const std::string& kind) {
  const ExperimentConfig cfg = load_config(flags, kind);
  const iballoc::RunReport report = iballoc::run_experiment(cfg);
  iballoc::write_report_files(report, cfg.out_dir, iballoc::to_string(cfg.kind));
  print_rows(report);
  if (report.metadata.contains("fitted_slope"))
    std::cout << "fitted log-log slope: " << report.metadata["fitted_slope"] << '\n';
  std::cout << "reports written to " << cfg.out_dir << "/"
            << iballoc::to_string(cfg.kind) << ".{csv,json}\n";
  return kExitOk;
}

int run_audit_command(const CommonFlags& flags) {
  const ExperimentConfig cfg = load_config(flags, "audit");
  const iballoc::AuditReport report = iballoc::run_certificate_audit(cfg);
  iballoc::write_report_files(report, cfg.out_dir, "audit");
  std::cout << "audit: " << report.instances << " instances, "
            << report.feasibility_failures << " feasibility failures, "
            << report.weak_duality_failures << " weak-duality failures, worst violation "
            << report.worst_violation << '\n';
  if (!report.passed()) {
    std::cerr << "audit FAILED\n";
    return kExitAudit;
  }
  std::cout << "audit passed\n";
  return kExitOk;
}

int run_lp_export(const std::string& instance_path, const std::string& out_path,
                  int precision) {
  const json doc = json::parse(iballoc::read_text_file(instance_path));
  const iballoc::Instance inst = iballoc::instance_from_json(doc);
  const iballoc::LpProblem lp = iballoc::build_primal_lp(inst);
  std::ofstream out(out_path);
  if (!out) throw iballoc::ConfigError("cannot write " + out_path);
  iballoc::write_lp_format(lp, out, precision);
  std::cout << "wrote " << out_path << " (" << lp.rows << " rows, " << lp.cols.size()
            << " cols)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inventory-balancing online allocation simulator"};
  app.require_subcommand(1);

  CommonFlags simulate_flags, lowerbound_flags, hotel_flags, audit_flags, scaling_flags;
  add_common(app.add_subcommand("simulate", "replicated matching experiment"),
             simulate_flags);
  add_common(app.add_subcommand("lowerbound", "adversarial lower-bound study"),
             lowerbound_flags);
  add_common(app.add_subcommand("hotel", "hotel assortment study"), hotel_flags);
  add_common(app.add_subcommand("audit", "dual-certificate audit"), audit_flags);
  add_common(app.add_subcommand("regret-scaling", "regret growth across horizons"),
             scaling_flags);

  auto* lp_export = app.add_subcommand("lp-export", "write the primal LP in text form");
  std::string instance_path, lp_out = "problem.lp";
  int precision = 12;
  lp_export->add_option("-i,--instance", instance_path, "instance JSON path")->required();
  lp_export->add_option("-o,--out", lp_out, "output LP file");
  lp_export->add_option("--precision", precision, "fixed decimal digits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("simulate")) return run_report_command(simulate_flags, "matching");
    if (app.got_subcommand("lowerbound"))
      return run_report_command(lowerbound_flags, "lowerbound");
    if (app.got_subcommand("hotel")) return run_report_command(hotel_flags, "hotel");
    if (app.got_subcommand("regret-scaling"))
      return run_report_command(scaling_flags, "regret-scaling");
    if (app.got_subcommand("audit")) return run_audit_command(audit_flags);
    if (app.got_subcommand("lp-export"))
      return run_lp_export(instance_path, lp_out, precision);
  } catch (const iballoc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const iballoc::MalformedInstance& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const iballoc::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
