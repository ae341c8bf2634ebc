#include <array>
#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "test_support.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CRM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(CRM_FIXTURES_DIR) + "/" + name;
}

} // namespace

TEST_CASE("cli classify on the invariant non-PPT fixture", "[cli]") {
  const CliResult r =
      run_cli("classify " + fixture("invariant_not_ppt_k3.json") + " --format json");
  REQUIRE(r.exit_code == 0);
  const crm::Json j = crm::Json::parse(r.output);
  REQUIRE(j["ppt"] == false);
  REQUIRE(j["invariant_realign"] == true);
  REQUIRE(j["is_psd"] == true);
}

TEST_CASE("cli decompose exit codes track the verdict", "[cli]") {
  const CliResult bad = run_cli("decompose " + fixture("uut_k2.json") + " --format json");
  REQUIRE(bad.exit_code == 1);
  const crm::Json j = crm::Json::parse(bad.output);
  REQUIRE(j["completely_reducible"] == false);
  REQUIRE(j["witness"]["cross_norm"].get<double>() > 1e-3);

  const CliResult good =
      run_cli("decompose " + fixture("separable_k2_m2_seed1.json") + " --format json");
  REQUIRE(good.exit_code == 0);
  REQUIRE(crm::Json::parse(good.output)["completely_reducible"] == true);
}

TEST_CASE("cli schmidt reports coefficients", "[cli]") {
  const CliResult r =
      run_cli("schmidt " + fixture("id_plus_uut_k2.json") + " --hermitian --format json");
  REQUIRE(r.exit_code == 0);
  const crm::Json j = crm::Json::parse(r.output);
  REQUIRE(j["hermitian"] == true);
  REQUIRE(j["rank"].get<int>() >= 1);
}

TEST_CASE("cli sigma apply fixes an invariant operator", "[cli]") {
  const CliResult r =
      run_cli("sigma apply '(23)' " + fixture("id_plus_uut_k2.json") + " --format json");
  REQUIRE(r.exit_code == 0);
  const crm::BipartiteOperator out = crm::operator_from_json(crm::Json::parse(r.output));
  const crm::BipartiteOperator in = crm::load_operator(fixture("id_plus_uut_k2.json"));
  REQUIRE((out.mat - in.mat).norm() < 1e-12);
}

TEST_CASE("cli sigma table lists 24 entries", "[cli]") {
  const CliResult r = run_cli("sigma table 2 --format json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(crm::Json::parse(r.output)["entries"].size() == 24);
}

TEST_CASE("cli mub generate / verify / complete", "[cli]") {
  const CliResult gen = run_cli("mub generate 3 --format json");
  REQUIRE(gen.exit_code == 0);
  REQUIRE(crm::mubset_from_json(crm::Json::parse(gen.output)).bases.size() == 4);

  const CliResult verify = run_cli("mub verify " + fixture("mub_p3_full.json") +
                                   " --format json");
  REQUIRE(verify.exit_code == 0);
  REQUIRE(crm::Json::parse(verify.output)["ok"] == true);

  const CliResult complete =
      run_cli("mub complete " + fixture("mub_k2_pair.json") + " --format json");
  REQUIRE(complete.exit_code == 0);
  const crm::MubSet out = crm::mubset_from_json(crm::Json::parse(complete.output));
  REQUIRE(out.bases.size() == 1);
  const crm::MubSet inputs = crm::load_basis_set(fixture("mub_k2_pair.json"));
  for (const crm::Basis& b : inputs.bases)
    REQUIRE(crm::is_unbiased_pair(out.bases[0], b, 1e-9).unbiased);

  const CliResult bad_prime = run_cli("mub generate 6");
  REQUIRE(bad_prime.exit_code == 2);
}

TEST_CASE("cli verify flags a corrupted basis file with exit 1", "[cli]") {
  crm::MubSet corrupted = crm::generate_prime(3);
  corrupted.bases[0].vectors.col(0) *= 1.01;
  const std::string path = "/tmp/crm_cli_corrupted.json";
  crm::save_json(path, crm::mubset_to_json(corrupted));
  const CliResult r = run_cli("mub verify " + path + " --format json");
  REQUIRE(r.exit_code == 1);
  REQUIRE(crm::Json::parse(r.output)["ok"] == false);
}

TEST_CASE("cli usage and parse errors exit 2", "[cli]") {
  REQUIRE(run_cli("classify /nonexistent/file.json").exit_code == 2);
  REQUIRE(run_cli("decompose").exit_code != 0);
  const std::string path = "/tmp/crm_cli_badfile.json";
  {
    std::ofstream f(path);
    f << "{\"dims\": [2, 2], \"data\": [[1, 0]]}";
  }
  REQUIRE(run_cli("classify " + path).exit_code == 2);
}

TEST_CASE("cli json reports are byte-identical across runs", "[cli]") {
  const std::string args =
      "decompose " + fixture("separable_k2_m2_seed1.json") + " --seed 5 --format json";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.output == b.output);
}
