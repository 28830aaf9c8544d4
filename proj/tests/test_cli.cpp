#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture =
      fs::temp_directory_path() / ("fshare_cli_out_" + std::to_string(counter++) + ".txt");
  const std::string command =
      std::string(FSIM_BINARY) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(command.c_str());
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  fs::remove(capture);
  return CliResult{WEXITSTATUS(status), buffer.str()};
}

const fs::path work_dir = [] {
  const fs::path dir = fs::temp_directory_path() / "fshare_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}();

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  const fs::path path = work_dir / name;
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

nlohmann::json golden_config() {
  return nlohmann::json{
      {"topology", {{"n", 3}, {"edges", {{1, 2}, {1, 3}, {2, 3}}}}},
      {"costs",
       {{{"kind", "quadratic"}, {"Q", {{2.0}}}, {"alpha", {1.0}}, {"gamma", 0.0}},
        {{"kind", "quadratic"}, {"Q", {{2.0}}}, {"alpha", {2.0}}, {"gamma", 0.0}},
        {{"kind", "quadratic"}, {"Q", {{2.0}}}, {"alpha", {3.0}}, {"gamma", 0.0}}}},
      {"sigma", 1.0},
      {"corrupted", {3}},
      {"scenario_b", {{"alpha", {{2.0}, {1.0}, {3.0}}}}},
      {"dgd",
       {{"max_rounds", 5000},
        {"step0", 1.0},
        {"step_schedule", "inverse_sqrt"},
        {"tolerance", 1e-9},
        {"box", {{"lo", {-100.0}}, {"hi", {100.0}}}}}},
      {"trials", 10000},
      {"seed", 20240801}};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("optimize succeeds on the golden config") {
  const fs::path config = write_config("golden.json", golden_config());
  const fs::path out = work_dir / "optimize_out";
  const CliResult result =
      run_cli("optimize --config " + config.string() + " --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "optimize_summary.json"));
  const nlohmann::json summary = nlohmann::json::parse(slurp(out / "optimize_summary.json"));
  CHECK(summary.at("unmasked").at("final_error").get<double>() < 1e-2);
  CHECK(summary.at("masked").at("final_error").get<double>() < 1e-2);
}

TEST_CASE("zero sigma config is rejected with exit 2") {
  auto j = golden_config();
  j["sigma"] = 0.0;
  const fs::path config = write_config("zero_sigma.json", j);
  const CliResult result = run_cli("optimize --config " + config.string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("sigma") != std::string::npos);
}

TEST_CASE("single agent config converges to its own minimizer") {
  nlohmann::json j = golden_config();
  j["topology"] = {{"n", 1}, {"edges", nlohmann::json::array()}};
  j["costs"] = {{{"kind", "quadratic"}, {"Q", {{1.0}}}, {"alpha", {-3.0}}, {"gamma", 0.0}}};
  j["corrupted"] = nlohmann::json::array();
  j.erase("scenario_b");
  const fs::path config = write_config("solo.json", j);
  const fs::path out = work_dir / "solo_out";
  const CliResult result =
      run_cli("optimize --config " + config.string() + " --out " + out.string());
  CHECK(result.exit_code == 0);
  const nlohmann::json summary = nlohmann::json::parse(slurp(out / "optimize_summary.json"));
  CHECK(summary.at("oracle_minimizer").at(0).get<double>() == 3.0);
  CHECK(summary.at("unmasked").at("final_error").get<double>() < 1e-2);
}

TEST_CASE("privacy audit emits the report and respects --trials") {
  const fs::path config = write_config("audit.json", golden_config());
  const fs::path out = work_dir / "audit_out";
  const CliResult result = run_cli("privacy-audit --config " + config.string() +
                                   " --trials 12000 --out " + out.string());
  CHECK(result.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(out / "privacy_report.json"));
  CHECK(report.at("trials") == 12000);
  CHECK(report.at("kl_bound") == 0.25);
  const double kl = report.at("kl_empirical").get<double>();
  CHECK(kl > 0.15);
  CHECK(kl < 0.35);
}

TEST_CASE("invalid scenario exits 2 and names the constraint") {
  auto j = golden_config();
  j["scenario_b"]["alpha"] = {{2.0}, {1.0}, {4.0}};  // corrupted coefficient changed
  const fs::path config = write_config("bad_scenario.json", j);
  const CliResult result = run_cli("privacy-audit --config " + config.string() + " --out " +
                                   (work_dir / "bad_out").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("corrupted coefficient mismatch at agent 3") != std::string::npos);
}

TEST_CASE("privacy audit is byte-deterministic for a fixed seed") {
  const fs::path config = write_config("det.json", golden_config());
  const fs::path out_a = work_dir / "det_a";
  const fs::path out_b = work_dir / "det_b";
  CHECK(run_cli("privacy-audit --config " + config.string() + " --out " + out_a.string())
            .exit_code == 0);
  CHECK(run_cli("privacy-audit --config " + config.string() + " --out " + out_b.string())
            .exit_code == 0);
  for (const char* name : {"privacy_report.json", "moments.csv", "manifest.json"}) {
    CHECK(slurp(out_a / name) == slurp(out_b / name));
  }
}

TEST_CASE("graph report on a path flags the cut") {
  nlohmann::json j = golden_config();
  j["topology"] = {{"n", 3}, {"edges", {{1, 2}, {2, 3}}}};
  j["corrupted"] = {2};
  j.erase("scenario_b");
  const fs::path config = write_config("path.json", j);
  const fs::path out = work_dir / "graph_out";
  const CliResult result =
      run_cli("graph-report --config " + config.string() + " --out " + out.string());
  CHECK(result.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(out / "graph_report.json"));
  CHECK(report.at("worst_case_epsilon") == "no guarantee");
  CHECK(result.output.find("C is a vertex cut: no privacy guarantee") != std::string::npos);
}

TEST_CASE("selftest passes and the fault hook trips it") {
  const CliResult ok = run_cli("selftest --trials 4000");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("4/4 checks passed") != std::string::npos);

  const CliResult bad = run_cli("selftest --trials 4000 --inject-fault mask-zero-sum");
  CHECK(bad.exit_code == 3);
  CHECK(bad.output.find("FAIL") != std::string::npos);

  const CliResult rerun = run_cli("selftest --trials 4000");
  CHECK(rerun.output == ok.output);
}

TEST_CASE("config errors exit 2") {
  CHECK(run_cli("optimize --config /nonexistent.json").exit_code == 2);
  const fs::path garbled = work_dir / "garbled.json";
  std::ofstream(garbled) << "{ not json";
  CHECK(run_cli("optimize --config " + garbled.string()).exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("optimize").exit_code == 2);  // missing --config
  CHECK(run_cli("--help").exit_code == 0);
}
