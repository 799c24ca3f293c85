#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef HODGELAB_CLI_PATH
#error "HODGELAB_CLI_PATH must point at the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "hodgelab_cli_tests";

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
} const kWorkdirGuard;

int run(const std::string& args, const std::string& stderr_to = "") {
  std::string cmd = std::string(HODGELAB_CLI_PATH) + " " + args;
  cmd += stderr_to.empty() ? " > /dev/null 2>&1" : " > /dev/null 2> " + stderr_to;
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// report text with the (varying) wall-time line removed
std::string strip_wall_time(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("wall_time_s") == std::string::npos) out << line << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("identical config and seed give byte-identical reports") {
  const fs::path cfg = kWork / "det.cfg";
  const fs::path out = kWork / "det.json";
  spit(cfg,
       "seed = 7\n"
       "[spectrum]\n"
       "shape = circle\n"
       "n = 96\n"
       "p = 0\n"
       "k = 4\n");
  const std::string base = "spectrum --config " + cfg.string() + " --out " + out.string();
  REQUIRE(run(base) == 0);
  const std::string first = slurp(out);
  REQUIRE(run(base) == 0);
  const std::string second = slurp(out);
  CHECK(strip_wall_time(first) == strip_wall_time(second));
  CHECK(first.find("wall_time_s") != std::string::npos);

  const nlohmann::json doc = nlohmann::json::parse(first);
  CHECK(doc.at("schema_version") == "1.0");
  CHECK(doc.at("conventions") == "conventions-v1");
  CHECK(doc.at("command") == "spectrum");
  CHECK(doc.at("seed") == 7);
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("config").at("shape") == "circle");
  CHECK(doc.at("results").at(0).at("eigenvalues").size() == 4);
}

TEST_CASE("command-line flags override config-file keys") {
  const fs::path cfg = kWork / "override.cfg";
  const fs::path out = kWork / "override.json";
  spit(cfg, "[spectrum]\nshape = circle\nn = 64\nk = 3\n");
  REQUIRE(run("spectrum --config " + cfg.string() + " --k 5 --out " + out.string()) == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("config").at("k") == "5");
  CHECK(doc.at("results").at(0).at("eigenvalues").size() == 5);
}

TEST_CASE("insufficient quadrature order fails checks without crashing") {
  const fs::path out = kWork / "inject.json";
  const int rc = run("identities --domain ball2 --weight \"r2/4\" --order 2 "
                     "--cases 3 --points 3 --out " + out.string());
  CHECK(rc == 1);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("pass") == false);
  bool some_fail = false;
  for (const auto& r : doc.at("results"))
    if (r.at("type") == "identity" && !r.at("pass").get<bool>()) some_fail = true;
  CHECK(some_fail);
}

TEST_CASE("configuration errors exit with status 2 and a located message") {
  const fs::path err = kWork / "err.txt";

  const fs::path bad1 = kWork / "bad1.cfg";
  spit(bad1, "shape = circle\nbogus = 1\n");
  CHECK(run("spectrum --config " + bad1.string(), err.string()) == 2);
  CHECK(slurp(err).find("line 2") != std::string::npos);

  const fs::path bad2 = kWork / "bad2.cfg";
  spit(bad2, "[nosuch]\nshape = circle\n");
  CHECK(run("spectrum --config " + bad2.string(), err.string()) == 2);
  CHECK(slurp(err).find("line 1") != std::string::npos);

  const fs::path bad3 = kWork / "bad3.cfg";
  spit(bad3, "[steklov]\nkind = full\n");  // kind is not a steklov key
  CHECK(run("steklov --config " + bad3.string(), err.string()) == 2);

  CHECK(run("spectrum --shape nosuchshape", err.string()) == 2);
  CHECK(run("theorem --weight \"sin(\"", err.string()) == 2);
  CHECK(slurp(err).find("weight") != std::string::npos);
  CHECK(run("spectrum --level notanumber", err.string()) == 2);
  CHECK(run("nosuchcommand", err.string()) == 2);
  CHECK(run("spectrum --config " + (kWork / "missing.cfg").string(), err.string()) == 2);
}

TEST_CASE("theorem command records the margin and passes") {
  const fs::path out = kWork / "thm.json";
  REQUIRE(run("theorem --case thm1.2 --domain ball3 --p 1 --level 2 --out " +
              out.string()) == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  const auto& tc = doc.at("results").at(0);
  CHECK(tc.at("case") == "thm1.2");
  CHECK(tc.at("margin").get<double>() >= 0.0);
  CHECK(tc.at("hypotheses_ok") == true);
  CHECK(doc.at("pass") == true);
}

TEST_CASE("convergence sweep writes the fixed-column CSV") {
  const fs::path out = kWork / "conv.json";
  const fs::path csv = kWork / "conv.csv";
  REQUIRE(run("convergence --shape icosphere --level-min 0 --level-max 2 --k 3"
              " --out " + out.string() + " --csv " + csv.string()) == 0);
  std::stringstream in(slurp(csv));
  std::string header;
  std::getline(in, header);
  CHECK(header == "level,h,lambda_1,lambda_2,lambda_3");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);

  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  const auto& mono = doc.at("results").back();
  CHECK(mono.at("type") == "monotonicity");
  for (const auto& b : mono.at("decreasing")) CHECK(b.get<bool>());
}

TEST_CASE("steklov and lp commands run from one shared config") {
  const fs::path cfg = kWork / "multi.cfg";
  spit(cfg,
       "seed = 11\n"
       "[steklov]\n"
       "shape = disc\n"
       "level = 3\n"
       "k = 4\n"
       "[lp]\n"
       "embedding = circle\n"
       "n = 96\n"
       "p = 1\n");
  const fs::path out1 = kWork / "stk.json";
  REQUIRE(run("steklov --config " + cfg.string() + " --out " + out1.string()) == 0);
  const nlohmann::json d1 = nlohmann::json::parse(slurp(out1));
  CHECK(d1.at("results").at(0).at("type") == "steklov");
  CHECK(d1.at("seed") == 11);

  const fs::path out2 = kWork / "lp.json";
  REQUIRE(run("lp --config " + cfg.string() + " --out " + out2.string()) == 0);
  const nlohmann::json d2 = nlohmann::json::parse(slurp(out2));
  CHECK(d2.at("results").at(0).at("type") == "theorem");
  CHECK(d2.at("results").at(1).at("type") == "trace");
  CHECK(d2.at("pass") == true);
}
