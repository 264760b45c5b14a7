#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Spawns the installed binary (path injected by the build) and checks the
// documented contract: artifacts, exit codes, and byte-level determinism.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kCli = UECERT_CLI_PATH;

fs::path workspace() {
  static fs::path base = [] {
    fs::path p = fs::temp_directory_path() / "uecert-cli-test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return base;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path p = workspace() / tag;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const fs::path& dir,
                  const std::string& env_prefix = "") {
  const fs::path log = dir / "run.log";
  const std::string cmd = env_prefix + "\"" + std::string(kCli) + "\" --out \"" +
                          dir.string() + "\" " + args + " > \"" + log.string() +
                          "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("construct emits the cap parameters and tables") {
  const fs::path dir = fresh_dir("construct-cap");
  const RunResult r = run_cli(
      "construct --kind conical-cap --n 8 --sphere round:1 --R auto --eps auto",
      dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);

  const json p = slurp_json(dir / "params.json");
  CHECK(p.at("kind") == "conical-cap");
  CHECK(p.at("n") == 8);
  CHECK(p.at("C") == 42.0);
  CHECK(p.at("R") == 9.38);
  CHECK(p.at("eps") == 0.9375);
  CHECK(p.at("lambda") == 9.38);
  CHECK(p.at("min_feasible_length") == 7.5);
  CHECK(p.at("kernel") == "quintic");
  CHECK(p.at("name") == "conical-cap-n8");
  CHECK(p.at("domain").at("lo") == -9.38);
  CHECK(p.at("domain").at("hi") == 0.0);
  CHECK(p.at("threads") == 1);
  CHECK(p.at("tool_version") == "uecert 0.1.0");

  const auto profile = lines_of(slurp(dir / "profile.csv"));
  REQUIRE(profile.size() == 202);  // header + 201 grid rows
  CHECK(profile[0] == "t,f_lo,f_hi,d1_lo,d1_hi,d2_lo,d2_hi");

  const auto scal = lines_of(slurp(dir / "scal.csv"));
  REQUIRE(scal.size() == 201);  // the f = 0 tip row is skipped
  CHECK(scal[0] == "t,scal_lo,scal_hi,half_C");
  CHECK(scal.back() == "0,42,42,21");
}

TEST_CASE("construct rn carries the closed-form constants") {
  const fs::path dir = fresh_dir("construct-rn");
  const RunResult r = run_cli("construct --kind rn --n 8 --sphere round-scaled", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);

  const json p = slurp_json(dir / "params.json");
  const double lam = std::sqrt(84.0);
  CHECK(p.at("kind") == "rn");
  CHECK(p.at("fiber") == "scaled_round(m=7,c=42.000000)");
  CHECK(p.at("lambda").get<double>() == doctest::Approx(lam).epsilon(1e-11));
  CHECK(p.at("scal_t2") == 42.0);
  CHECK(p.at("mean_curvature").get<double>() ==
        doctest::Approx(7.0 / lam).epsilon(1e-11));
  CHECK(p.at("domain").at("hi").get<double>() ==
        doctest::Approx(2.0 * lam).epsilon(1e-11));

  const auto scal = lines_of(slurp(dir / "scal.csv"));
  CHECK(scal[0] == "t,scal_lo,scal_hi,scal_t2_lo,scal_t2_hi");
  // every emitted row encloses scal * t^2 = 42
  for (std::size_t i = 1; i < scal.size(); ++i) {
    std::stringstream ss(scal[i]);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 5);
    CHECK(row[3] <= 42.0);
    CHECK(row[4] >= 42.0);
    CHECK(row[3] == doctest::Approx(42.0).epsilon(1e-9));
  }
}

TEST_CASE("construct rejects an infeasible cap depth") {
  const fs::path dir = fresh_dir("construct-bad");
  const RunResult r = run_cli("construct --kind conical-cap --n 8 --R 2", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("infeasible") != std::string::npos);
  CHECK(r.output.find("minimum feasible") != std::string::npos);
  CHECK(r.output.find("7.5") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "params.json"));
}

TEST_CASE("certify scal emits a certified exhaustion deterministically") {
  const fs::path dir = fresh_dir("certify-scal");
  const RunResult r = run_cli("certify --kind conical-cap --n 8", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("CERTIFIED") != std::string::npos);

  const json rep = slurp_json(dir / "certificates.json");
  REQUIRE(rep.at("certificates").size() == 1);
  const json c = rep.at("certificates")[0];
  CHECK(c.at("claim") == "scal-positive-exhaustion");
  CHECK(c.at("subject") == "conical-cap-n8");
  CHECK(c.at("status") == "CERTIFIED");
  CHECK(c.at("target") == 21.0);
  CHECK(c.at("method") == "interval-bisection");
  CHECK(c.at("params").at("pieces") == 21);
  CHECK(c.at("achieved").at("lo").get<double>() ==
        doctest::Approx(24.4390173327).epsilon(1e-11));

  const fs::path dir2 = fresh_dir("certify-scal-rerun");
  const RunResult r2 = run_cli("certify --kind conical-cap --n 8", dir2);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir / "certificates.json") == slurp(dir2 / "certificates.json"));
}

TEST_CASE("certify exit codes follow the certificate status") {
  const fs::path dir = fresh_dir("certify-codes");
  CHECK(run_cli("certify --kind conical-cap --target 42", dir).exit_code == 3);
  CHECK(run_cli("certify --kind conical-cap --target 43", dir).exit_code == 4);
  CHECK(run_cli("certify --kind rn --claim chain", dir).exit_code == 2);
}

TEST_CASE("certify bilipschitz hits the closed-form constant") {
  const fs::path dir = fresh_dir("certify-bilip");
  const RunResult r =
      run_cli("certify --kind cone --sphere scaled:4 --claim bilipschitz", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  const json c = slurp_json(dir / "certificates.json").at("certificates")[0];
  CHECK(c.at("claim") == "bilipschitz-euclidean");
  CHECK(c.at("status") == "CERTIFIED");
  CHECK(c.at("target") == 4.0);
  CHECK(c.at("achieved").at("lo") == 1.0);
  CHECK(c.at("achieved").at("hi") == 4.0);
  CHECK(c.at("method") == "closed-form");

  const RunResult rt = run_cli(
      "certify --kind cone --sphere twist:0.15 --claim bilipschitz", dir);
  CHECK(rt.exit_code == 0);
  const json ct = slurp_json(dir / "certificates.json").at("certificates")[0];
  CHECK(ct.at("method") == "grid+padding");
  CHECK(ct.at("target").get<double>() ==
        doctest::Approx(1.93150791913).epsilon(1e-11));
}

TEST_CASE("certify sobolev sweep flags the divergent exponent") {
  const fs::path dir = fresh_dir("certify-sobolev");
  const RunResult r = run_cli(
      "certify --kind cone --sphere scaled:2 --claim sobolev --p 6,7,7.9,9",
      dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  const json rep = slurp_json(dir / "certificates.json");
  const json sob = rep.at("sobolev");
  REQUIRE(sob.size() == 4);
  CHECK(sob[0].at("verdict") == "finite");
  CHECK(sob[1].at("verdict") == "finite");
  CHECK(sob[2].at("verdict") == "finite");
  CHECK(sob[3].at("verdict") == "divergent-trend");
  CHECK(sob[0].at("norm").get<double>() ==
        doctest::Approx(857.359524576).epsilon(1e-9));
  CHECK(sob[0].at("tail_ratio").get<double>() ==
        doctest::Approx(0.25).epsilon(1e-9));
  CHECK(sob[3].at("tail_ratio").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.at("certificates").empty());
}

TEST_CASE("blowup reproduces the exact euclid law") {
  const fs::path dir = fresh_dir("blowup-euclid");
  const RunResult r = run_cli(
      "blowup --kind euclid --T 1 --sigma 0 --normalization unit --eps 0", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);

  const json rep = slurp_json(dir / "report.json");
  CHECK(rep.at("exact_law_max_rel").get<double>() <= 1e-8);
  CHECK(rep.at("p_fit").get<double>() == doctest::Approx(-6.0).epsilon(1e-9));
  CHECK(rep.at("c_fit").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.at("amplitude") == 1.0);
  CHECK(rep.at("bound").at("target") == 1.0);
  CHECK(rep.at("bound").at("status") == "CERTIFIED-ON-GRID");
  CHECK(rep.at("base_scal_min") == 0.0);
  CHECK(rep.at("sigma") == 0.0);

  const auto green = lines_of(slurp(dir / "green.csv"));
  CHECK(green[0] == "t,G,G_d1,G_d2");
  CHECK(green[1].rfind("0.01,1e+12,", 0) == 0);  // G(0.01) = 0.01^-6
}

TEST_CASE("blowup sweep keeps the counterexample positive") {
  const fs::path dir = fresh_dir("blowup-rn");
  const RunResult r = run_cli("blowup --kind rn --t1 1e-5 --completeness", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);

  const json rep = slurp_json(dir / "report.json");
  CHECK(rep.at("sigma") == 0.0625);
  CHECK(rep.at("sigma_mode") == "auto");
  CHECK(rep.at("base_scal_min") == 0.125);
  CHECK(rep.at("p_fit").get<double>() == doctest::Approx(-6.0).epsilon(1e-9));
  CHECK(rep.at("bound").at("status") == "CERTIFIED-ON-GRID");

  const json sweep = rep.at("conformal");
  REQUIRE(sweep.size() == 4);
  for (const json& row : sweep) {
    CHECK(row.at("positive") == true);
    CHECK(row.at("min_scal").get<double>() > 0.0);
    CHECK(row.at("max_rel_residual").get<double>() <= 1e-10);
  }

  const json comp = rep.at("completeness");
  CHECK(comp.at("pass") == true);
  CHECK(comp.at("lengths_grow") == true);
  CHECK(comp.at("probes") == 15);
  CHECK(comp.at("slope").get<double>() ==
        doctest::Approx(-0.975023306906).epsilon(1e-6));

  const fs::path dir2 = fresh_dir("blowup-rn-rerun");
  const RunResult r2 =
      run_cli("blowup --kind rn --t1 1e-5 --completeness", dir2);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir / "report.json") == slurp(dir2 / "report.json"));
  CHECK(slurp(dir / "green.csv") == slurp(dir2 / "green.csv"));
}

TEST_CASE("blowup needs a deep grid for the completeness probes") {
  const fs::path dir = fresh_dir("blowup-shallow");
  const RunResult r = run_cli("blowup --kind rn --completeness", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("lower --t1") != std::string::npos);
}

TEST_CASE("oracle-check resolves the aliases") {
  const fs::path dir = fresh_dir("oracle");
  const RunResult r =
      run_cli("oracle-check --case exotic-pullback --case torus-flat", dir);
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("errors: none") != std::string::npos);

  const auto csv = lines_of(slurp(dir / "oracle_report.csv"));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "family,n,points,max_dev,mean_dev,tolerance,pass");
  CHECK(csv[1].rfind("sphere-pullback-8,8,30,", 0) == 0);
  CHECK(csv[2].rfind("torus-twist-4,4,40,", 0) == 0);
  CHECK(csv[1].find(",yes") != std::string::npos);
  CHECK(csv[2].find(",yes") != std::string::npos);

  CHECK(run_cli("oracle-check --case bogus", dir).exit_code == 2);
}

TEST_CASE("environment thread override is validated") {
  const fs::path dir = fresh_dir("threads");
  const RunResult ok =
      run_cli("construct --kind cone --sphere round:1", dir, "UECERT_THREADS=3 ");
  CHECK(ok.exit_code == 0);
  CHECK(slurp_json(dir / "params.json").at("threads") == 3);

  const RunResult bad =
      run_cli("construct --kind cone", dir, "UECERT_THREADS=abc ");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("UECERT_THREADS") != std::string::npos);
}

TEST_CASE("config files feed defaults and flags win") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.ini";
  {
    std::ofstream out(cfg);
    out << "[construct]\nkind=rn\nn=8\n";
  }
  const std::string pre = "--config \"" + cfg.string() + "\" ";
  const fs::path log = dir / "cfg.log";
  const std::string base = "\"" + std::string(kCli) + "\" " + pre + "--out \"" +
                           dir.string() + "\" ";
  CHECK(WEXITSTATUS(std::system(
            (base + "construct > \"" + log.string() + "\" 2>&1").c_str())) == 0);
  CHECK(slurp_json(dir / "params.json").at("kind") == "rn");

  CHECK(WEXITSTATUS(std::system((base +
                                 "construct --kind cone --sphere scaled:2 > \"" +
                                 log.string() + "\" 2>&1")
                                    .c_str())) == 0);
  CHECK(slurp_json(dir / "params.json").at("kind") == "cone");

  const std::string missing = "\"" + std::string(kCli) + "\" --config \"" +
                              (dir / "missing.ini").string() +
                              "\" construct > \"" + log.string() + "\" 2>&1";
  CHECK(WEXITSTATUS(std::system(missing.c_str())) == 2);
}

TEST_CASE("usage errors exit with code 2") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("fly-to-the-moon", dir).exit_code == 2);
  CHECK(run_cli("construct --kind cone --sphere hexagon:1", dir).exit_code == 2);
  CHECK(run_cli("construct --kind cone --n 8 --sphere berger:1,1.3", dir)
            .exit_code == 2);
  CHECK(run_cli("certify --claim warp-drive", dir).exit_code == 2);

  const RunResult help = run_cli("--help", dir);
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("construct") != std::string::npos);
}
