#include "iballoc/serialize.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace iballoc {

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json ivec_to_json(const Eigen::VectorXi& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(m.cols()))
      throw MalformedInstance("ragged matrix in JSON document");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json doc;
  doc["mode"] = inst.mode == Mode::kSingleReward ? "single" : "multi";
  doc["horizon"] = inst.horizon;
  json resources = json::array();
  for (const auto& res : inst.resources) {
    json r;
    r["inventory"] = res.inventory;
    if (inst.mode == Mode::kSingleReward)
      r["reward"] = res.reward;
    else
      r["prices"] = res.prices;
    resources.push_back(std::move(r));
  }
  doc["resources"] = std::move(resources);

  json arrivals = json::array();
  for (const auto& x : inst.arrivals) arrivals.push_back(vec_to_json(x));
  doc["arrivals"] = std::move(arrivals);

  if (const auto* fam = std::get_if<MatchingFamily>(&inst.family)) {
    doc["actions"] = {{"type", "matching"},
                      {"arms_per_resource", fam->arms_per_resource}};
  } else {
    const auto& fam2 = inst.assortments();
    json combos = json::array();
    for (const auto& combo : fam2.combos)
      combos.push_back({{"resource", combo.resource}, {"price", combo.price}});
    doc["actions"] = {
        {"type", "assortments"}, {"combos", std::move(combos)}, {"sets", fam2.sets}};
  }

  if (const auto* law = std::get_if<MatchingLaw>(&inst.law)) {
    doc["law"] = {{"type", "matching"}, {"click_prob", mat_to_json(law->click_prob)}};
  } else if (const auto* mnl = std::get_if<MnlLaw>(&inst.law)) {
    doc["law"] = {{"type", "mnl"}, {"v0", mnl->v0}, {"beta", mat_to_json(mnl->beta)}};
  } else {
    const auto& tab = std::get<TabularLaw>(inst.law);
    json contexts = json::array();
    for (const auto& x : tab.contexts) contexts.push_back(vec_to_json(x));
    json table = json::array();
    for (const auto& per_context : tab.table) {
      json per_action = json::array();
      for (const auto& dist : per_context) {
        json outcomes = json::array();
        for (const auto& [y, p] : dist)
          outcomes.push_back({{"consumed", y.consumed}, {"prob", p}});
        per_action.push_back(std::move(outcomes));
      }
      table.push_back(std::move(per_action));
    }
    doc["law"] = {{"type", "tabular"},
                  {"contexts", std::move(contexts)},
                  {"table", std::move(table)}};
  }
  return doc;
}

Instance instance_from_json(const json& doc) {
  Instance inst;
  try {
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "single")
      inst.mode = Mode::kSingleReward;
    else if (mode == "multi")
      inst.mode = Mode::kMultiPrice;
    else
      throw MalformedInstance("unknown mode: " + mode);

    inst.horizon = doc.at("horizon").get<int>();
    for (const auto& r : doc.at("resources")) {
      Resource res;
      res.inventory = r.at("inventory").get<int>();
      if (inst.mode == Mode::kSingleReward)
        res.reward = r.at("reward").get<double>();
      else
        res.prices = r.at("prices").get<std::vector<double>>();
      inst.resources.push_back(std::move(res));
    }
    for (const auto& arr : doc.at("arrivals")) inst.arrivals.push_back(vec_from_json(arr));

    const auto& actions = doc.at("actions");
    const std::string family_type = actions.at("type").get<std::string>();
    if (family_type == "matching") {
      inst.family = MatchingFamily{actions.at("arms_per_resource").get<int>()};
    } else if (family_type == "assortments") {
      AssortmentFamily fam;
      for (const auto& c : actions.at("combos"))
        fam.combos.push_back({c.at("resource").get<int>(), c.at("price").get<double>()});
      fam.sets = actions.at("sets").get<std::vector<std::vector<int>>>();
      inst.family = std::move(fam);
    } else {
      throw MalformedInstance("unknown action family: " + family_type);
    }

    const auto& law = doc.at("law");
    const std::string law_type = law.at("type").get<std::string>();
    if (law_type == "matching") {
      inst.law = MatchingLaw{mat_from_json(law.at("click_prob"))};
    } else if (law_type == "mnl") {
      inst.law = MnlLaw{mat_from_json(law.at("beta")), law.at("v0").get<double>()};
    } else if (law_type == "tabular") {
      TabularLaw tab;
      for (const auto& x : law.at("contexts")) tab.contexts.push_back(vec_from_json(x));
      for (const auto& per_context : law.at("table")) {
        std::vector<std::vector<std::pair<Outcome, double>>> ctx_dists;
        for (const auto& dist : per_context) {
          std::vector<std::pair<Outcome, double>> outcomes;
          for (const auto& o : dist)
            outcomes.push_back({Outcome{o.at("consumed").get<std::vector<int>>()},
                                o.at("prob").get<double>()});
          ctx_dists.push_back(std::move(outcomes));
        }
        tab.table.push_back(std::move(ctx_dists));
      }
      inst.law = std::move(tab);
    } else {
      throw MalformedInstance("unknown law type: " + law_type);
    }
  } catch (const json::exception& e) {
    throw MalformedInstance(std::string("instance JSON: ") + e.what());
  }
  inst.validate();
  return inst;
}

json trace_summary_json(const SimulationTrace& trace) {
  json doc;
  doc["summary"] = true;
  doc["periods"] = trace.periods.size();
  doc["alg"] = trace.alg;
  doc["reg"] = trace.reg;
  return doc;
}

void write_trace_ldjson(const SimulationTrace& trace, std::ostream& os) {
  for (const auto& rec : trace.periods) {
    json line;
    line["t"] = rec.t;
    line["virtual_rewards"] = vec_to_json(rec.virtual_rewards);
    line["action"] = rec.action.index;
    line["outcome"] = rec.outcome.consumed;
    line["reward"] = rec.reward;
    line["regret_gap"] = rec.regret_gap;
    line["inventory"] = ivec_to_json(rec.inventory_after);
    os << line.dump() << '\n';
  }
  os << trace_summary_json(trace).dump() << '\n';
}

json guarantee_report_to_json(const GuaranteeReport& report) {
  json doc;
  doc["opt"] = report.opt;
  doc["factor"] = report.factor;
  doc["replicates"] = report.replicates;
  doc["mean_alg"] = report.mean_alg;
  doc["se_alg"] = report.se_alg;
  doc["mean_reg"] = report.mean_reg;
  doc["se_reg"] = report.se_reg;
  doc["slack"] = report.slack;
  return doc;
}

GuaranteeReport guarantee_report_from_json(const json& doc) {
  GuaranteeReport report;
  try {
    report.opt = doc.at("opt").get<double>();
    report.factor = doc.at("factor").get<double>();
    report.replicates = doc.at("replicates").get<long>();
    report.mean_alg = doc.at("mean_alg").get<double>();
    report.se_alg = doc.at("se_alg").get<double>();
    report.mean_reg = doc.at("mean_reg").get<double>();
    report.se_reg = doc.at("se_reg").get<double>();
    report.slack = doc.at("slack").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report JSON: ") + e.what());
  }
  return report;
}

json pool_to_json(const std::vector<std::vector<Context>>& pool) {
  json paths = json::array();
  for (const auto& path : pool) {
    json p = json::array();
    for (const auto& x : path) p.push_back(vec_to_json(x));
    paths.push_back(std::move(p));
  }
  return json{{"paths", std::move(paths)}};
}

std::vector<std::vector<Context>> pool_from_json(const json& doc) {
  std::vector<std::vector<Context>> pool;
  try {
    for (const auto& path : doc.at("paths")) {
      std::vector<Context> p;
      for (const auto& x : path) p.push_back(vec_from_json(x));
      pool.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pool JSON: ") + e.what());
  }
  return pool;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << contents;
}

}  // namespace iballoc
