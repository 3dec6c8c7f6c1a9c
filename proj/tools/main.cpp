// strata: stream curation, lineage annotations, and phylogeny reconstruction.
//
// Exit codes: 0 success, 1 data error (unreadable or malformed inputs),
// 2 usage error (bad flags or parameters).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "strata/curator.hpp"
#include "strata/formats.hpp"
#include "strata/harness.hpp"
#include "strata/newick.hpp"
#include "strata/policy.hpp"
#include "strata/reconstruct.hpp"
#include "strata/rng.hpp"

namespace fs = std::filesystem;

namespace {

strata::PolicySpec make_policy(const std::string& algo, std::uint64_t param) {
  return strata::PolicySpec::parse(algo + ":" + std::to_string(param));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

int run_policy(const std::string& algo, std::uint64_t param, std::uint64_t depth,
               std::optional<std::uint64_t> timelapse) {
  strata::PolicySpec policy = make_policy(algo, param);
  if (timelapse) {
    strata::write_timelapse_csv(std::cout, policy, *timelapse);
    return 0;
  }
  const auto retained = strata::enumerate_retained(policy, depth);
  for (std::size_t i = 0; i < retained.size(); ++i) {
    if (i) std::cout << ' ';
    std::cout << retained[i];
  }
  std::cout << '\n';
  return 0;
}

int run_curate(const std::string& policy_text, const std::string& in_path,
               const std::string& out_path) {
  strata::PolicySpec policy = strata::PolicySpec::parse(policy_text);
  std::ifstream in = open_input(in_path);
  strata::StreamCurator<std::string> curator(policy);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    curator.ingest(strata::parse_observation_line(line, line_number));
  }
  std::ofstream out = open_output(out_path);
  strata::write_curated_jsonl(out, curator);
  return 0;
}

void write_sim_artifacts(const strata::SimResult& result,
                         const strata::SimConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "events.jsonl");
    strata::write_events_jsonl(out, result.events);
  }
  {
    auto out = open_output(dir / "population.jsonl");
    strata::write_population_jsonl(out, result.population);
  }
  {
    auto out = open_output(dir / "truth.nwk");
    out << strata::to_newick(result.truth) << '\n';
  }
  {
    auto out = open_output(dir / "timelapse.csv");
    const strata::TimePoint depth = result.population.front().column.depth();
    strata::write_timelapse_csv(out, config.policy, depth);
  }
}

int run_simulate(std::uint32_t n, std::uint32_t g, const std::string& model_name,
                 const std::string& policy_text, unsigned width, std::uint64_t seed,
                 const std::string& out_dir, std::uint32_t replicates) {
  strata::SimModel model;
  if (model_name == "wright-fisher" || model_name == "wf") {
    model = strata::SimModel::WrightFisher;
  } else if (model_name == "moran") {
    model = strata::SimModel::Moran;
  } else {
    throw std::invalid_argument("model must be wright-fisher or moran");
  }
  strata::PolicySpec policy = strata::PolicySpec::parse(policy_text);

  if (replicates == 1) {
    strata::SimConfig config{n, g, model, policy, width, seed};
    write_sim_artifacts(strata::run_sim(config), config, out_dir);
    return 0;
  }
  strata::SplitMix64 seeder(seed);
  for (std::uint32_t rep = 0; rep < replicates; ++rep) {
    strata::SimConfig config{n, g, model, policy, width, seeder.next()};
    char name[16];
    std::snprintf(name, sizeof name, "rep%03u", rep);
    write_sim_artifacts(strata::run_sim(config), config, fs::path(out_dir) / name);
  }
  return 0;
}

int run_reconstruct(const std::string& in_path, const std::string& out_path,
                    const std::string& polytomy, bool correct_bias,
                    const std::string& mrca_csv) {
  auto in = open_input(in_path);
  const auto population = strata::read_population_jsonl(in);
  if (population.empty()) throw std::runtime_error("population file is empty");

  strata::PolytomyMode mode;
  if (polytomy == "keep") {
    mode = strata::PolytomyMode::Keep;
  } else if (polytomy == "bifurcate") {
    mode = strata::PolytomyMode::Bifurcate;
  } else {
    throw std::invalid_argument("polytomy mode must be keep or bifurcate");
  }

  const auto trie = strata::build_trie(population);
  strata::PhyloTree tree = strata::trie_to_tree(trie, mode);
  if (correct_bias) {
    tree = strata::correct_origin_times(tree, population.front().column.width_bits());
  }
  auto out = open_output(out_path);
  out << strata::to_newick(tree) << '\n';

  if (!mrca_csv.empty()) {
    auto csv = open_output(mrca_csv);
    strata::write_mrca_csv(csv, population);
  }
  return 0;
}

int run_compare(const std::string& truth_path, const std::string& population_path,
                const std::string& out_path) {
  std::string text;
  {
    auto in = open_input(truth_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  const strata::PhyloTree truth = strata::parse_newick(text);
  auto in = open_input(population_path);
  const auto population = strata::read_population_jsonl(in);
  const strata::ComparisonReport report = strata::evaluate(truth, population);
  const std::string json = strata::report_to_json(report);
  if (out_path.empty()) {
    std::cout << json << '\n';
  } else {
    auto out = open_output(out_path);
    out << json << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stream curation and decentralized lineage inference toolkit"};
  app.require_subcommand(1);

  // policy
  auto* policy_cmd = app.add_subcommand("policy", "print retained time points");
  std::string algo;
  std::uint64_t param = 0;
  std::uint64_t depth = 0;
  std::optional<std::uint64_t> timelapse;
  policy_cmd->add_option("--algo", algo, "fixed|dpr|dpr-tapered|rpr|gsnr|crpr")
      ->required();
  policy_cmd->add_option("--param", param, "policy parameter")->required();
  policy_cmd->add_option("--depth", depth, "record depth n");
  policy_cmd->add_option("--timelapse", timelapse,
                         "emit CSV rows for every depth 0..MAX instead");

  // curate
  auto* curate_cmd = app.add_subcommand("curate", "run a JSONL stream through a policy");
  std::string curate_policy, curate_in, curate_out;
  curate_cmd->add_option("--policy", curate_policy, "algo:param")->required();
  curate_cmd->add_option("--in", curate_in, "input JSONL of {\"payload\": str}")
      ->required();
  curate_cmd->add_option("--out", curate_out, "output JSONL of retained pairs")
      ->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "neutral-drift simulation with tracking");
  std::uint32_t sim_n = 16, sim_g = 64, sim_reps = 1;
  std::string sim_model = "wright-fisher", sim_policy, sim_out_dir;
  unsigned sim_width = 64;
  std::uint64_t sim_seed = 1;
  sim_cmd->add_option("--n", sim_n, "population size")->required();
  sim_cmd->add_option("--g", sim_g, "generations")->required();
  sim_cmd->add_option("--model", sim_model, "wright-fisher|moran");
  sim_cmd->add_option("--policy", sim_policy, "algo:param")->required();
  sim_cmd->add_option("--width", sim_width, "differentia bits: 1|8|16|32|64");
  sim_cmd->add_option("--seed", sim_seed, "simulation seed");
  sim_cmd->add_option("--out-dir", sim_out_dir, "artifact directory")->required();
  sim_cmd->add_option("--replicates", sim_reps, "independent replicates");

  // reconstruct
  auto* rec_cmd = app.add_subcommand("reconstruct", "trie reconstruction to Newick");
  std::string rec_in, rec_out, rec_polytomy = "keep", rec_csv;
  bool rec_correct = false;
  rec_cmd->add_option("--in", rec_in, "population JSONL")->required();
  rec_cmd->add_option("--out", rec_out, "Newick output path")->required();
  rec_cmd->add_option("--polytomy", rec_polytomy, "keep|bifurcate");
  rec_cmd->add_flag("--correct-bias", rec_correct,
                    "subtract expected spurious-collision bias from fork times");
  rec_cmd->add_option("--mrca-csv", rec_csv, "also write the pairwise window matrix");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "score a population against exact ancestry");
  std::string cmp_truth, cmp_population, cmp_out;
  cmp_cmd->add_option("--truth", cmp_truth, "exact tree (Newick)")->required();
  cmp_cmd->add_option("--population", cmp_population, "population JSONL")->required();
  cmp_cmd->add_option("--out", cmp_out, "report JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (*policy_cmd) return run_policy(algo, param, depth, timelapse);
    if (*curate_cmd) return run_curate(curate_policy, curate_in, curate_out);
    if (*sim_cmd) {
      return run_simulate(sim_n, sim_g, sim_model, sim_policy, sim_width, sim_seed,
                          sim_out_dir, sim_reps);
    }
    if (*rec_cmd) {
      return run_reconstruct(rec_in, rec_out, rec_polytomy, rec_correct, rec_csv);
    }
    if (*cmp_cmd) return run_compare(cmp_truth, cmp_population, cmp_out);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
