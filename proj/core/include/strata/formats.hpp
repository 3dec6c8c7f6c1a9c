#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "strata/curator.hpp"
#include "strata/harness.hpp"
#include "strata/reconstruct.hpp"

namespace strata {

// Population files: one JSON object per line with fields
//   policy (string), width (int), depth (int), differentia (array), id (string).
void write_population_jsonl(std::ostream& out,
                            std::span<const PopulationMember> population);
std::vector<PopulationMember> read_population_jsonl(std::istream& in);

// Event logs: {"op":"birth","id":...,"parent":...|null} / {"op":"remove","id":...}.
void write_events_jsonl(std::ostream& out, std::span<const SimEvent> events);
std::vector<SimEvent> read_events_jsonl(std::istream& in);

// Observation stream for curation: input lines are {"payload": string};
// retained output lines are {"time": int, "payload": string}.
// parse_observation_line throws std::runtime_error naming the 1-based line.
std::string parse_observation_line(const std::string& line, std::size_t line_number);
void write_curated_jsonl(std::ostream& out, const StreamCurator<std::string>& curator);

// Retention time-lapse: header n,retained_count,times; times space-separated.
void write_timelapse_csv(std::ostream& out, const PolicySpec& policy,
                         TimePoint max_depth);

// Divergence-window matrix: header id_a,id_b,lower,upper,confidence. Pairs
// with no common ancestry leave lower/upper empty with confidence 0.
void write_mrca_csv(std::ostream& out, std::span<const PopulationMember> population);

std::string report_to_json(const ComparisonReport& report);

}  // namespace strata
