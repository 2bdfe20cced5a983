#include "iballoc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <thread>

#include "iballoc/serialize.hpp"

namespace iballoc {

using nlohmann::json;

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "matching") return ExperimentKind::kMatching;
  if (s == "lowerbound") return ExperimentKind::kLowerBound;
  if (s == "hotel") return ExperimentKind::kHotel;
  if (s == "audit") return ExperimentKind::kAudit;
  if (s == "regret-scaling") return ExperimentKind::kRegretScaling;
  throw ConfigError("unknown experiment kind: " + s);
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMatching: return "matching";
    case ExperimentKind::kLowerBound: return "lowerbound";
    case ExperimentKind::kHotel: return "hotel";
    case ExperimentKind::kAudit: return "audit";
    case ExperimentKind::kRegretScaling: return "regret-scaling";
  }
  throw ConfigError("unknown experiment kind");
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  try {
    cfg.kind = kind_from_string(doc.at("kind").get<std::string>());
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.replicates = doc.value("replicates", 1);
    cfg.workers = doc.value("workers", 1);
    cfg.out_dir = doc.value("out_dir", std::string("."));
    if (doc.contains("learner")) {
      const auto& l = doc.at("learner");
      cfg.learner.type = l.value("type", cfg.learner.type);
      cfg.learner.confidence_scale =
          l.value("confidence_scale", cfg.learner.confidence_scale);
      cfg.learner.prior_half_width =
          l.value("prior_half_width", cfg.learner.prior_half_width);
      cfg.learner.newton_tol = l.value("newton_tol", cfg.learner.newton_tol);
    }
    cfg.algorithms = doc.value("algorithms", std::vector<std::string>{});
    cfg.params = doc.value("instance", json::object());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  return cfg;
}

std::uint64_t replicate_stream_id(int row, int replicate, int channel) {
  return (static_cast<std::uint64_t>(row) << 44) |
         (static_cast<std::uint64_t>(replicate) << 8) |
         static_cast<std::uint64_t>(channel);
}

void parallel_replicates(int count, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("fit_loglog_slope: need matching series of length >= 2");
  double sx = 0, sy = 0;
  const int n = static_cast<int>(x.size());
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("fit_loglog_slope: series must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Per-replicate slots filled concurrently, aggregated in index order so the
// report is independent of scheduling.
struct ReplicateSlot {
  bool ok = false;
  double alg = 0, reg = 0, opt = 0, ratio = 0;
};

ReportRow aggregate_row(const std::string& experiment, double param,
                        const std::string& algorithm,
                        const std::vector<ReplicateSlot>& slots, double factor) {
  ReportRow row;
  row.experiment = experiment;
  row.param = param;
  row.algorithm = algorithm;
  row.factor = factor;
  MeanSe alg, reg, ratio, opt;
  for (const auto& slot : slots) {
    if (!slot.ok) {
      ++row.failures;
      continue;
    }
    alg.add(slot.alg);
    reg.add(slot.reg);
    ratio.add(slot.ratio);
    opt.add(slot.opt);
  }
  row.replicates = alg.n;
  if (row.failures * 20 > row.failures + row.replicates)
    throw Error("replicate failure rate exceeded 5% for " + algorithm);
  row.mean_alg = alg.mean;
  row.se_alg = alg.se();
  row.mean_reg = reg.mean;
  row.se_reg = reg.se();
  row.mean_ratio = ratio.mean;
  row.se_ratio = ratio.se();
  row.mean_opt = opt.mean;
  row.slack = row.mean_opt - factor * row.mean_alg - row.mean_reg;
  return row;
}

std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const Instance& inst,
                                      const Eigen::MatrixXd* prior_center) {
  if (cfg.type == "clairvoyant") return std::make_unique<ClairvoyantLearner>(inst);
  if (cfg.type == "ucb") {
    const auto& fam = inst.matching();
    return std::make_unique<UcbLearner>(inst.num_resources(), fam.arms_per_resource,
                                        cfg.confidence_scale);
  }
  if (cfg.type == "ts-mnl") {
    if (!prior_center) throw ConfigError("ts-mnl learner needs a prior center");
    TsMnlOptions opt;
    opt.prior_half_width = cfg.prior_half_width;
    opt.newton_tol = cfg.newton_tol;
    return std::make_unique<TsMnlLearner>(inst, *prior_center, opt);
  }
  throw ConfigError("unknown learner type: " + cfg.type);
}

json base_metadata(const ExperimentConfig& cfg) {
  json meta;
  meta["kind"] = to_string(cfg.kind);
  meta["seed"] = cfg.seed;
  meta["replicates"] = cfg.replicates;
  meta["workers"] = cfg.workers;
  meta["learner"] = {{"type", cfg.learner.type},
                     {"confidence_scale", cfg.learner.confidence_scale},
                     {"prior_half_width", cfg.learner.prior_half_width},
                     {"newton_tol", cfg.learner.newton_tol}};
  meta["params"] = cfg.params;
  meta["version"] = "1.0";
  return meta;
}

SimulationTrace dispatch_algorithm(const std::string& name, const Instance& inst,
                                   Learner& learner, const PenaltySchedule& schedule,
                                   Rng& rng) {
  if (name == "ib" || name == "ib-ucb" || name == "ib-ts")
    return run_integrated(inst, learner, schedule, rng);
  if (name == "greedy" || name == "gdy-ucb" || name == "gdy-ts")
    return run_greedy_baseline(inst, learner, rng);
  if (name == "conservative" || name == "conserv-ts")
    return run_conservative_baseline(inst, learner, schedule, rng);
  throw ConfigError("unknown algorithm: " + name);
}

RunReport run_matching(const ExperimentConfig& cfg) {
  Rng inst_rng = Rng::stream(cfg.seed, replicate_stream_id(0, 0, 0));
  const Instance inst = matching_instance_from_params(cfg.params, inst_rng);
  const PenaltySchedule schedule = default_schedule(inst);
  const double opt = solve_lp(build_primal_lp(inst)).value;
  const double factor = guarantee_factor(inst, schedule);

  std::vector<std::string> algorithms =
      cfg.algorithms.empty() ? std::vector<std::string>{"ib"} : cfg.algorithms;

  RunReport report;
  report.metadata = base_metadata(cfg);
  report.metadata["opt"] = opt;
  for (int ai = 0; ai < static_cast<int>(algorithms.size()); ++ai) {
    std::vector<ReplicateSlot> slots(cfg.replicates);
    parallel_replicates(cfg.replicates, cfg.workers, [&](int rep) {
      try {
        Rng rng = Rng::stream(cfg.seed, replicate_stream_id(0, rep, 1 + ai));
        auto learner = make_learner(cfg.learner, inst, nullptr);
        const SimulationTrace trace =
            dispatch_algorithm(algorithms[ai], inst, *learner, schedule, rng);
        slots[rep] = {true, trace.alg, trace.reg, opt, opt > 0 ? trace.alg / opt : 0.0};
      } catch (const std::exception&) {
        slots[rep].ok = false;
      }
    });
    report.rows.push_back(aggregate_row("matching", 0.0, algorithms[ai], slots, factor));
  }
  return report;
}

RunReport run_hotel(const ExperimentConfig& cfg) {
  const HotelParams base = hotel_params_from_json(cfg.params);
  std::vector<double> scales = cfg.params.value(
      "scales", std::vector<double>{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                    0.55, 0.6});
  const double alpha1 = cfg.params.value("alpha1", 0.8675005677047231);
  std::vector<std::string> algorithms =
      cfg.algorithms.empty() ? std::vector<std::string>{"ib-ts", "gdy-ts", "conserv-ts"}
                             : cfg.algorithms;
  LearnerConfig learner_cfg = cfg.learner;
  if (learner_cfg.type == "ucb") learner_cfg.type = "ts-mnl";

  RunReport report;
  report.metadata = base_metadata(cfg);
  report.metadata["alpha1"] = alpha1;
  report.metadata["scales"] = scales;

  for (int si = 0; si < static_cast<int>(scales.size()); ++si) {
    std::vector<std::vector<ReplicateSlot>> slots(
        algorithms.size(), std::vector<ReplicateSlot>(cfg.replicates));
    double factor = 0.0;
    std::once_flag factor_once;

    parallel_replicates(cfg.replicates, cfg.workers, [&](int rep) {
      try {
        Rng inst_rng = Rng::stream(cfg.seed, replicate_stream_id(si, rep, 0));
        HotelParams params = base;
        params.inventory_scale = scales[si];
        const Instance inst = gen_hotel_instance(params, inst_rng);
        PenaltySchedule schedule = default_schedule(inst);
        for (auto& a : std::get<MultiPriceSchedule>(schedule).alpha1) a = alpha1;
        std::call_once(factor_once,
                       [&] { factor = guarantee_factor(inst, schedule); });
        const double opt = solve_lp(build_primal_lp(inst)).value;
        for (int ai = 0; ai < static_cast<int>(algorithms.size()); ++ai) {
          Rng rng = Rng::stream(cfg.seed, replicate_stream_id(si, rep, 1 + ai));
          auto learner = make_learner(learner_cfg, inst, &base.beta_center);
          const SimulationTrace trace =
              dispatch_algorithm(algorithms[ai], inst, *learner, schedule, rng);
          slots[ai][rep] = {true, trace.alg, trace.reg, opt,
                            opt > 0 ? trace.alg / opt : 0.0};
        }
      } catch (const std::exception&) {
        for (auto& per_alg : slots) per_alg[rep].ok = false;
      }
    });
    for (int ai = 0; ai < static_cast<int>(algorithms.size()); ++ai)
      report.rows.push_back(
          aggregate_row("hotel", scales[si], algorithms[ai], slots[ai], factor));
  }
  return report;
}

}  // namespace

RunReport run_lowerbound_study(const ExperimentConfig& cfg) {
  LowerBoundParams lbp;
  lbp.n = cfg.params.value("n", 20);
  lbp.b = cfg.params.value("b", 30);
  lbp.K = cfg.params.value("K", 3);
  if (cfg.params.contains("epsilon")) lbp.epsilon = cfg.params["epsilon"].get<double>();
  lbp.validate();
  if (lbp.n < 3) throw ConfigError("lower-bound study requires n >= 3");
  const int verify_draws = cfg.params.value("verify_lp_draws", 0);
  const double opt = static_cast<double>(lbp.b) * lbp.n;

  std::vector<std::string> algorithms =
      cfg.algorithms.empty() ? std::vector<std::string>{"ib-ucb"} : cfg.algorithms;

  RunReport report;
  report.metadata = base_metadata(cfg);
  report.metadata["opt"] = opt;
  report.metadata["epsilon"] = lbp.effective_epsilon();
  report.metadata["one_minus_inv_e"] = 1.0 - std::exp(-1.0);
  report.metadata["ratio_ceiling"] = 1.0 - std::exp(-1.0) + 3.0 / lbp.n;

  std::atomic<int> lp_mismatches{0};
  for (int ai = 0; ai < static_cast<int>(algorithms.size()); ++ai) {
    std::vector<ReplicateSlot> slots(cfg.replicates);
    double factor = 0.0;
    parallel_replicates(cfg.replicates, cfg.workers, [&](int rep) {
      try {
        Rng inst_rng = Rng::stream(cfg.seed, replicate_stream_id(0, rep, 0));
        const LowerBoundDraw draw = gen_lower_bound_instance(lbp, inst_rng);
        if (ai == 0 && rep < verify_draws) {
          const double lp = solve_lp(build_primal_lp(draw.instance)).value;
          if (std::abs(lp - opt) > 1e-6) ++lp_mismatches;
        }
        Rng rng = Rng::stream(cfg.seed, replicate_stream_id(0, rep, 1 + ai));
        auto learner = make_learner(cfg.learner, draw.instance, nullptr);
        const PenaltySchedule schedule = default_schedule(draw.instance);
        if (rep == 0) factor = guarantee_factor(draw.instance, schedule);
        const SimulationTrace trace =
            dispatch_algorithm(algorithms[ai], draw.instance, *learner, schedule, rng);
        slots[rep] = {true, trace.alg, trace.reg, opt, trace.alg / opt};
      } catch (const std::exception&) {
        slots[rep].ok = false;
      }
    });
    report.rows.push_back(aggregate_row("lowerbound", static_cast<double>(lbp.n),
                                        algorithms[ai], slots, factor));
  }
  report.metadata["lp_verified_draws"] = verify_draws;
  report.metadata["lp_mismatches"] = lp_mismatches.load();
  if (lp_mismatches.load() > 0)
    throw SolverFailure("lower-bound LP verification found OPT != b*n");
  return report;
}

RunReport run_regret_scaling(const ExperimentConfig& cfg) {
  const auto grid = cfg.params.value("T_grid", std::vector<int>{});
  if (grid.size() < 4)
    throw ConfigError("regret scaling needs at least 4 horizon grid points");
  const int n = cfg.params.value("n", 2);
  const int K = cfg.params.value("K", 2);
  if (!cfg.params.contains("click_prob"))
    throw ConfigError("regret scaling needs an explicit click_prob table");
  Eigen::MatrixXd p(n, K);
  {
    const auto& rows = cfg.params.at("click_prob");
    if (static_cast<int>(rows.size()) != n)
      throw ConfigError("click_prob must have n rows");
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < K; ++k) p(i, k) = rows[i][k].get<double>();
  }
  const int inventory_factor = cfg.params.value("inventory_factor", 10);

  RunReport report;
  report.metadata = base_metadata(cfg);

  std::vector<double> mean_regs, horizons;
  for (int ti = 0; ti < static_cast<int>(grid.size()); ++ti) {
    const int T = grid[ti];
    Eigen::VectorXd rewards = Eigen::VectorXd::Ones(n);
    if (cfg.params.contains("rewards")) {
      const auto r = cfg.params["rewards"].get<std::vector<double>>();
      for (int i = 0; i < n; ++i) rewards[i] = r.at(i);
    }
    const Instance inst = gen_matching_instance(
        n, K, Eigen::VectorXi::Constant(n, inventory_factor * T), rewards, p,
        std::vector<Context>(T, Context::Ones(n)));
    const PenaltySchedule schedule = default_schedule(inst);

    std::vector<ReplicateSlot> slots(cfg.replicates);
    parallel_replicates(cfg.replicates, cfg.workers, [&](int rep) {
      try {
        Rng rng = Rng::stream(cfg.seed, replicate_stream_id(ti, rep, 1));
        auto learner = make_learner(cfg.learner, inst, nullptr);
        const SimulationTrace trace = run_integrated(inst, *learner, schedule, rng);
        slots[rep] = {true, trace.alg, trace.reg, 0.0, 0.0};
      } catch (const std::exception&) {
        slots[rep].ok = false;
      }
    });
    ReportRow row = aggregate_row("regret-scaling", static_cast<double>(T), "ib-ucb",
                                  slots, 0.0);
    row.slack = 0.0;
    report.rows.push_back(row);
    horizons.push_back(static_cast<double>(T));
    mean_regs.push_back(report.rows.back().mean_reg);
  }
  report.metadata["fitted_slope"] = fit_loglog_slope(horizons, mean_regs);
  return report;
}

AuditReport run_certificate_audit(const ExperimentConfig& cfg) {
  const int count = cfg.params.value("count", 1000);
  const int max_n = cfg.params.value("max_n", 4);
  const int max_T = cfg.params.value("max_T", 50);
  const int max_b = cfg.params.value("max_b", 5);
  const bool weak_duality = cfg.params.value("check_weak_duality", true);
  const double tol = cfg.params.value("tolerance", 1e-9);

  struct Slot {
    bool feasible = false;
    bool weak_ok = true;
    double violation = 0.0;
  };
  std::vector<Slot> slots(count);

  parallel_replicates(count, cfg.workers, [&](int i) {
    try {
      Rng gen_rng = Rng::stream(cfg.seed, replicate_stream_id(0, i, 0));
      const Instance inst = random_small_instance(gen_rng, max_n, max_T, max_b);
      Rng sim_rng = Rng::stream(cfg.seed, replicate_stream_id(0, i, 1));
      std::unique_ptr<Learner> learner;
      if (std::holds_alternative<MatchingLaw>(inst.law)) {
        learner = std::make_unique<UcbLearner>(
            inst.num_resources(), inst.matching().arms_per_resource,
            cfg.learner.confidence_scale);
      } else {
        learner = std::make_unique<ClairvoyantLearner>(inst);
      }
      const PenaltySchedule schedule = default_schedule(inst);
      const SimulationTrace trace = run_integrated(inst, *learner, schedule, sim_rng);
      const DualCertificate cert = dual_from_trace(trace, inst, schedule);
      const FeasibilityReport feas = check_dual_feasibility(cert, inst, tol);
      slots[i].feasible = feas.feasible;
      slots[i].violation = feas.worst_violation;
      if (weak_duality) {
        const double opt = solve_lp(build_primal_lp(inst)).value;
        slots[i].weak_ok = dual_objective(cert, inst) >= opt - 1e-8;
      }
    } catch (const std::exception&) {
      slots[i].feasible = false;
      slots[i].violation = std::numeric_limits<double>::infinity();
    }
  });

  AuditReport report;
  report.instances = count;
  for (int i = 0; i < count; ++i) {
    if (!slots[i].feasible) ++report.feasibility_failures;
    if (!slots[i].weak_ok) ++report.weak_duality_failures;
    if (slots[i].violation > report.worst_violation) {
      report.worst_violation = slots[i].violation;
      report.worst_instance = i;
    }
  }
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  switch (cfg.kind) {
    case ExperimentKind::kMatching:
      report = run_matching(cfg);
      break;
    case ExperimentKind::kHotel:
      report = run_hotel(cfg);
      break;
    case ExperimentKind::kLowerBound:
      report = run_lowerbound_study(cfg);
      break;
    case ExperimentKind::kRegretScaling:
      report = run_regret_scaling(cfg);
      break;
    case ExperimentKind::kAudit:
      throw ConfigError("audit has a dedicated report; use run_certificate_audit");
  }
  report.metadata["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

Instance matching_instance_from_params(const json& params, Rng& rng) {
  try {
    const int n = params.at("n").get<int>();
    const int K = params.at("K").get<int>();
    const int T = params.at("T").get<int>();

    Eigen::VectorXi b(n);
    if (params.at("inventory").is_number()) {
      b.setConstant(params["inventory"].get<int>());
    } else {
      const auto v = params["inventory"].get<std::vector<int>>();
      for (int i = 0; i < n; ++i) b[i] = v.at(i);
    }

    Eigen::VectorXd rewards(n);
    if (params.contains("rewards") && params["rewards"].is_array()) {
      const auto v = params["rewards"].get<std::vector<double>>();
      for (int i = 0; i < n; ++i) rewards[i] = v.at(i);
    } else if (params.contains("rewards")) {
      const auto range = params["rewards"].at("uniform").get<std::vector<double>>();
      for (int i = 0; i < n; ++i) rewards[i] = rng.uniform(range.at(0), range.at(1));
    } else {
      rewards.setOnes();
    }

    Eigen::MatrixXd p(n, K);
    if (params.contains("click_prob") && params["click_prob"].is_array()) {
      const auto& rows = params["click_prob"];
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) p(i, k) = rows[i][k].get<double>();
    } else if (params.contains("click_prob")) {
      const auto range = params["click_prob"].at("uniform").get<std::vector<double>>();
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) p(i, k) = rng.uniform(range.at(0), range.at(1));
    } else {
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) p(i, k) = rng.next_double();
    }

    std::vector<Context> arrivals;
    if (!params.contains("contexts") || params["contexts"] == "ones") {
      arrivals.assign(T, Context::Ones(n));
    } else if (params["contexts"].is_array()) {
      for (const auto& row : params["contexts"]) {
        Context x(n);
        for (int i = 0; i < n; ++i) x[i] = row[i].get<double>();
        arrivals.push_back(std::move(x));
      }
    } else {
      const double density = params["contexts"].at("bernoulli").get<double>();
      for (int t = 0; t < T; ++t) {
        Context x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.bernoulli(density) ? 1.0 : 0.0;
        arrivals.push_back(std::move(x));
      }
    }

    return gen_matching_instance(n, K, b, rewards, p, std::move(arrivals));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("matching instance params: ") + e.what());
  }
}

HotelParams hotel_params_from_json(const json& params) {
  HotelParams base = default_hotel_params();
  try {
    base.v0 = params.value("v0", base.v0);
    base.prior_half_width = params.value("prior_half_width", base.prior_half_width);
    base.double_high_price = params.value("double_high_price", base.double_high_price);
    if (params.contains("base_inventory")) {
      const auto v = params["base_inventory"].get<std::vector<int>>();
      base.base_inventory.resize(static_cast<int>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i)
        base.base_inventory[static_cast<int>(i)] = v[i];
    }
    if (params.contains("price_table")) {
      const auto& rows = params["price_table"];
      base.price_table.resize(static_cast<int>(rows.size()), 2);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        base.price_table(static_cast<int>(i), 0) = rows[i][0].get<double>();
        base.price_table(static_cast<int>(i), 1) = rows[i][1].get<double>();
      }
    }
    if (params.contains("beta_center")) {
      const auto& rows = params["beta_center"];
      base.beta_center.resize(static_cast<int>(rows.size()),
                              static_cast<int>(rows[0].size()));
      for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t k = 0; k < rows[j].size(); ++k)
          base.beta_center(static_cast<int>(j), static_cast<int>(k)) =
              rows[j][k].get<double>();
    }
    if (params.contains("pool_file")) {
      const json doc =
          json::parse(read_text_file(params["pool_file"].get<std::string>()));
      base.arrival_pool = pool_from_json(doc);
    } else if (params.contains("pool")) {
      const auto& pool = params["pool"];
      Rng pool_rng(pool.value("seed", std::uint64_t{0x486f74656c506f6fULL}));
      base.arrival_pool = make_hotel_pool(pool.value("paths", 31),
                                          pool.value("length", 200), pool_rng);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("hotel params: ") + e.what());
  }
  return base;
}

std::string RunReport::to_csv() const {
  std::string out =
      "experiment,param,algorithm,replicates,failures,mean_alg,se_alg,mean_opt,"
      "mean_ratio,se_ratio,mean_reg,se_reg,factor,slack\n";
  for (const auto& r : rows) {
    out += r.experiment + ',' + format_double(r.param) + ',' + r.algorithm + ',' +
           std::to_string(r.replicates) + ',' + std::to_string(r.failures) + ',' +
           format_double(r.mean_alg) + ',' + format_double(r.se_alg) + ',' +
           format_double(r.mean_opt) + ',' + format_double(r.mean_ratio) + ',' +
           format_double(r.se_ratio) + ',' + format_double(r.mean_reg) + ',' +
           format_double(r.se_reg) + ',' + format_double(r.factor) + ',' +
           format_double(r.slack) + '\n';
  }
  return out;
}

json RunReport::to_json() const {
  json doc;
  doc["metadata"] = metadata;
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"experiment", r.experiment},
                         {"param", r.param},
                         {"algorithm", r.algorithm},
                         {"replicates", r.replicates},
                         {"failures", r.failures},
                         {"mean_alg", r.mean_alg},
                         {"se_alg", r.se_alg},
                         {"mean_opt", r.mean_opt},
                         {"mean_ratio", r.mean_ratio},
                         {"se_ratio", r.se_ratio},
                         {"mean_reg", r.mean_reg},
                         {"se_reg", r.se_reg},
                         {"factor", r.factor},
                         {"slack", r.slack}});
  }
  doc["rows"] = std::move(rows_json);
  return doc;
}

std::string AuditReport::to_csv() const {
  std::string out =
      "instances,feasibility_failures,weak_duality_failures,worst_violation,"
      "worst_instance\n";
  out += std::to_string(instances) + ',' + std::to_string(feasibility_failures) + ',' +
         std::to_string(weak_duality_failures) + ',' + format_double(worst_violation) +
         ',' + std::to_string(worst_instance) + '\n';
  return out;
}

json AuditReport::to_json() const {
  return json{{"instances", instances},
              {"feasibility_failures", feasibility_failures},
              {"weak_duality_failures", weak_duality_failures},
              {"worst_violation", worst_violation},
              {"worst_instance", worst_instance}};
}

namespace {
void write_pair(const std::string& out_dir, const std::string& basename,
                const std::string& csv, const json& doc) {
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/" + basename + ".csv", csv);
  write_text_file(out_dir + "/" + basename + ".json", doc.dump(2) + "\n");
}
}  // namespace

void write_report_files(const RunReport& report, const std::string& out_dir,
                        const std::string& basename) {
  write_pair(out_dir, basename, report.to_csv(), report.to_json());
}

void write_report_files(const AuditReport& report, const std::string& out_dir,
                        const std::string& basename) {
  write_pair(out_dir, basename, report.to_csv(), report.to_json());
}

}  // namespace iballoc
