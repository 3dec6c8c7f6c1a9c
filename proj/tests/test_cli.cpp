#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

// Runs the installed CLI with stdout captured to a file; stderr is left alone
// so failures stay visible in the test log.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() / ("strata_cli_out_" +
                                              std::to_string(counter++) + ".txt");
  std::string cmd = std::string(STRATA_CLI_PATH) + " " + args + " > " + out.string();
  int status = std::system(cmd.c_str());
  int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream buffer;
  buffer << in.rdbuf();
  fs::remove(out);
  return {exit_code, buffer.str()};
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "strata_cli_scratch";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("policy subcommand prints the retained set") {
  auto result = run_cli("policy --algo rpr --param 2 --depth 10 2>/dev/null");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text == "0 4 6 8 9 10\n");
}

TEST_CASE("policy subcommand depth zero") {
  auto result = run_cli("policy --algo fixed --param 5 --depth 0 2>/dev/null");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text == "0\n");
}

TEST_CASE("policy subcommand rejects an undersized curb cap") {
  fs::path err = scratch_dir() / "err.txt";
  auto result = run_cli("policy --algo crpr --param 7 2> " + err.string());
  CHECK(result.exit_code == 2);
  std::ifstream in(err);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str().find(">= 8") != std::string::npos);
}

TEST_CASE("unknown flags are usage errors") {
  auto result = run_cli("policy --algo rpr --param 2 --bogus 9 2>/dev/null");
  CHECK(result.exit_code == 2);
}

TEST_CASE("policy timelapse emits CSV") {
  auto result = run_cli("policy --algo dpr --param 2 --timelapse 4 2>/dev/null");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.rfind("n,retained_count,times\n", 0) == 0);
}

TEST_CASE("curate retains the documented subset") {
  fs::path dir = scratch_dir();
  fs::path input = dir / "obs.jsonl";
  fs::path output = dir / "curated.jsonl";
  {
    std::ofstream out(input);
    for (int i = 0; i < 11; ++i) out << R"({"payload":"p)" << i << R"("})" << '\n';
  }
  auto result = run_cli("curate --policy dpr:2 --in " + input.string() + " --out " +
                        output.string() + " 2>/dev/null");
  CHECK(result.exit_code == 0);
  std::ifstream in(output);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].find("\"time\":0") != std::string::npos);
  CHECK(lines[1].find("\"time\":4") != std::string::npos);
  CHECK(lines[2].find("\"time\":8") != std::string::npos);
  CHECK(lines[3].find("\"time\":10") != std::string::npos);
}

TEST_CASE("curate single and empty inputs") {
  fs::path dir = scratch_dir();
  fs::path single = dir / "single.jsonl";
  fs::path empty = dir / "empty.jsonl";
  fs::path out1 = dir / "single_out.jsonl";
  fs::path out2 = dir / "empty_out.jsonl";
  {
    std::ofstream out(single);
    out << R"({"payload":"only"})" << '\n';
  }
  {
    std::ofstream out(empty);
  }
  auto r1 = run_cli("curate --policy fixed:5 --in " + single.string() + " --out " +
                    out1.string() + " 2>/dev/null");
  CHECK(r1.exit_code == 0);
  std::ifstream check1(out1);
  std::string line;
  REQUIRE(std::getline(check1, line));
  CHECK(line.find("\"time\":0") != std::string::npos);

  auto r2 = run_cli("curate --policy fixed:5 --in " + empty.string() + " --out " +
                    out2.string() + " 2>/dev/null");
  CHECK(r2.exit_code == 0);
  CHECK(fs::file_size(out2) == 0);
}

TEST_CASE("curate reports malformed lines as data errors") {
  fs::path dir = scratch_dir();
  fs::path input = dir / "bad.jsonl";
  fs::path output = dir / "bad_out.jsonl";
  fs::path err = dir / "bad_err.txt";
  {
    std::ofstream out(input);
    out << R"({"payload":"fine"})" << '\n';
    out << "{broken" << '\n';
  }
  auto result = run_cli("curate --policy fixed:5 --in " + input.string() + " --out " +
                        output.string() + " 2> " + err.string());
  CHECK(result.exit_code == 1);
  std::ifstream in(err);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str().find("line 2") != std::string::npos);
}

TEST_CASE("simulate, reconstruct, and compare chain together") {
  fs::path dir = scratch_dir() / "pipeline";
  auto sim = run_cli("simulate --n 8 --g 12 --policy fixed:1 --width 64 --seed 5 "
                     "--out-dir " + dir.string() + " 2>/dev/null");
  CHECK(sim.exit_code == 0);
  CHECK(fs::exists(dir / "events.jsonl"));
  CHECK(fs::exists(dir / "population.jsonl"));
  CHECK(fs::exists(dir / "truth.nwk"));
  CHECK(fs::exists(dir / "timelapse.csv"));

  fs::path tree = dir / "tree.nwk";
  auto rec = run_cli("reconstruct --in " + (dir / "population.jsonl").string() +
                     " --out " + tree.string() + " 2>/dev/null");
  CHECK(rec.exit_code == 0);
  CHECK(fs::exists(tree));

  auto cmp = run_cli("compare --truth " + (dir / "truth.nwk").string() +
                     " --population " + (dir / "population.jsonl").string() +
                     " 2>/dev/null");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.stdout_text.find("\"containment_rate\": 1.0") != std::string::npos);
}

TEST_CASE("reconstruct a single-column population into a unary newick") {
  fs::path dir = scratch_dir();
  fs::path input = dir / "one.jsonl";
  {
    std::ofstream out(input);
    out << R"({"policy":"fixed:1","width":64,"depth":2,"differentia":[5,6,7],"id":"x"})"
        << '\n';
  }
  fs::path tree = dir / "one.nwk";
  auto result = run_cli("reconstruct --in " + input.string() + " --out " +
                        tree.string() + " 2>/dev/null");
  CHECK(result.exit_code == 0);
  std::ifstream in(tree);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x:2;");
}

TEST_CASE("simulate fans out replicates with derived seeds") {
  fs::path dir = scratch_dir() / "reps";
  fs::remove_all(dir);
  auto result = run_cli("simulate --n 4 --g 6 --policy rpr:2 --seed 9 --replicates 3 "
                        "--out-dir " + dir.string() + " 2>/dev/null");
  CHECK(result.exit_code == 0);
  for (const char* rep : {"rep000", "rep001", "rep002"}) {
    CHECK(fs::exists(dir / rep / "population.jsonl"));
    CHECK(fs::exists(dir / rep / "truth.nwk"));
  }
  // replicates use distinct seeds, so their truths differ
  std::ifstream a(dir / "rep000" / "truth.nwk");
  std::ifstream b(dir / "rep001" / "truth.nwk");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() != sb.str());
}

TEST_CASE("missing input files are data errors") {
  auto result = run_cli("reconstruct --in /nonexistent/x.jsonl --out /tmp/y.nwk "
                        "2>/dev/null");
  CHECK(result.exit_code == 1);
}
