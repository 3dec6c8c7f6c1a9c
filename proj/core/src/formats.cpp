#include "strata/formats.hpp"

#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace strata {
namespace {

using nlohmann::json;

json parse_line(const std::string& line, std::size_t line_number) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw std::runtime_error("line " + std::to_string(line_number) +
                             ": malformed JSON object");
  }
  return parsed;
}

void for_each_line(std::istream& in,
                   const std::function<void(const std::string&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    fn(line, line_number);
  }
}

}  // namespace

void write_population_jsonl(std::ostream& out,
                            std::span<const PopulationMember> population) {
  for (const auto& member : population) {
    json record;
    record["policy"] = member.column.policy().to_string();
    record["width"] = member.column.width_bits();
    record["depth"] = member.column.depth();
    record["differentia"] = member.column.differentia();
    record["id"] = member.id;
    out << record.dump() << '\n';
  }
}

std::vector<PopulationMember> read_population_jsonl(std::istream& in) {
  std::vector<PopulationMember> population;
  for_each_line(in, [&](const std::string& line, std::size_t line_number) {
    json record = parse_line(line, line_number);
    try {
      PolicySpec policy = PolicySpec::parse(record.at("policy").get<std::string>());
      unsigned width = record.at("width").get<unsigned>();
      TimePoint depth = record.at("depth").get<TimePoint>();
      auto differentia = record.at("differentia").get<std::vector<std::uint64_t>>();
      std::string id = record.at("id").get<std::string>();
      std::uint64_t reseed = std::hash<std::string>{}(id);
      population.push_back(
          {std::move(id), StratColumn::from_parts(std::move(policy), width, depth,
                                                  std::move(differentia), reseed)});
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what());
    }
  });
  return population;
}

void write_events_jsonl(std::ostream& out, std::span<const SimEvent> events) {
  for (const auto& event : events) {
    json record;
    if (event.kind == SimEvent::Kind::Birth) {
      record["op"] = "birth";
      record["id"] = event.id;
      if (event.parent) {
        record["parent"] = *event.parent;
      } else {
        record["parent"] = nullptr;
      }
    } else {
      record["op"] = "remove";
      record["id"] = event.id;
    }
    out << record.dump() << '\n';
  }
}

std::vector<SimEvent> read_events_jsonl(std::istream& in) {
  std::vector<SimEvent> events;
  for_each_line(in, [&](const std::string& line, std::size_t line_number) {
    json record = parse_line(line, line_number);
    try {
      std::string op = record.at("op").get<std::string>();
      SimEvent event;
      event.id = record.at("id").get<std::uint64_t>();
      if (op == "birth") {
        event.kind = SimEvent::Kind::Birth;
        if (!record.at("parent").is_null()) {
          event.parent = record.at("parent").get<std::uint64_t>();
        }
      } else if (op == "remove") {
        event.kind = SimEvent::Kind::Remove;
      } else {
        throw std::runtime_error("unknown op '" + op + "'");
      }
      events.push_back(event);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what());
    }
  });
  return events;
}

std::string parse_observation_line(const std::string& line, std::size_t line_number) {
  json record = parse_line(line, line_number);
  if (!record.contains("payload") || !record["payload"].is_string()) {
    throw std::runtime_error("line " + std::to_string(line_number) +
                             ": expected a string field 'payload'");
  }
  return record["payload"].get<std::string>();
}

void write_curated_jsonl(std::ostream& out, const StreamCurator<std::string>& curator) {
  for (std::size_t i = 0; i < curator.size(); ++i) {
    json record;
    record["time"] = curator.times()[i];
    record["payload"] = curator.payloads()[i];
    out << record.dump() << '\n';
  }
}

void write_timelapse_csv(std::ostream& out, const PolicySpec& policy,
                         TimePoint max_depth) {
  out << "n,retained_count,times\n";
  RetentionSchedule schedule(policy);
  for (TimePoint n = 0; n <= max_depth; ++n) {
    schedule.advance();
    out << n << ',' << schedule.size() << ',';
    const auto& times = schedule.times();
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i) out << ' ';
      out << times[i];
    }
    out << '\n';
  }
}

void write_mrca_csv(std::ostream& out, std::span<const PopulationMember> population) {
  const auto matrix = pairwise_mrca_matrix(population);
  out << "id_a,id_b,lower,upper,confidence\n";
  char buf[40];
  for (std::size_t i = 0; i < population.size(); ++i) {
    for (std::size_t j = i; j < population.size(); ++j) {
      out << population[i].id << ',' << population[j].id << ',';
      if (matrix[i][j]) {
        std::snprintf(buf, sizeof buf, "%.17g", matrix[i][j]->collision_confidence);
        out << matrix[i][j]->lower << ',' << matrix[i][j]->upper << ',' << buf;
      } else {
        out << ",,0";
      }
      out << '\n';
    }
  }
}

std::string report_to_json(const ComparisonReport& report) {
  json out;
  out["containment_rate"] = report.containment_rate;
  out["mean_window_width"] = report.mean_window_width;
  out["max_normalized_error"] = report.max_normalized_error;
  out["pair_count"] = report.pair_count;
  out["windowed_pair_count"] = report.windowed_pair_count;
  out["trie_stats"]["wildcard_sites"] = report.trie_stats.wildcard_sites;
  out["trie_stats"]["paths_explored"] = report.trie_stats.paths_explored;
  out["trie_stats"]["max_paths_single_insert"] = report.trie_stats.max_paths_single_insert;
  return out.dump(2);
}

}  // namespace strata
