#pragma once

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

#include "iballoc/benchmark.hpp"
#include "iballoc/engine.hpp"
#include "iballoc/model.hpp"

namespace iballoc {

using json = nlohmann::json;

// Instance document {mode, horizon, resources, arrivals, actions, law}.
// parse(serialize(inst)) reproduces the instance bit-exactly.
json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& doc);

json trace_summary_json(const SimulationTrace& trace);
// Line-delimited JSON: one record per period followed by a summary record.
void write_trace_ldjson(const SimulationTrace& trace, std::ostream& os);

json guarantee_report_to_json(const GuaranteeReport& report);
GuaranteeReport guarantee_report_from_json(const json& doc);

// Arrival pools: {"paths": [[context, ...], ...]}.
json pool_to_json(const std::vector<std::vector<Context>>& pool);
std::vector<std::vector<Context>> pool_from_json(const json& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace iballoc
