#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "mdiw/states.hpp"
#include "state_io.hpp"

using namespace mdiw;
using namespace mdiw::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "mdiw_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string cli_binary() {
  const char* env = std::getenv("MDIW_CLI");
  REQUIRE_MESSAGE(env != nullptr, "MDIW_CLI must point at the built binary");
  return env;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = temp_dir() / "stdout.txt";
  const std::string cmd = cli_binary() + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(status), buf.str()};
}

fs::path write_werner(double p, const std::string& name) {
  const fs::path path = temp_dir() / name;
  write_state_file(path, {2, 2}, werner_state(p).data, {{"family", "werner"}, {"p", p}});
  return path;
}

}  // namespace

TEST_CASE("state file round trip is bit-stable") {
  const DensityMatrix rho = random_density({2, 2}, 12345);
  const fs::path path = temp_dir() / "roundtrip.json";
  write_state_file(path, rho.dims, rho.data);
  const StateFile file = read_state_file(path);
  CHECK(file.dims == rho.dims);
  CHECK((file.matrix - rho.data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state file parse failures name the problem") {
  const fs::path bad = temp_dir() / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_WITH_AS(read_state_file(bad), doctest::Contains("not valid JSON"),
                       ValidationError);

  const fs::path shape = temp_dir() / "shape.json";
  std::ofstream(shape) << R"({"dims":[2,2],"re":[[1,0],[0,0]]})";
  CHECK_THROWS_WITH_AS(read_state_file(shape), doctest::Contains("4-row"), ValidationError);

  const fs::path invalid = temp_dir() / "invalid_state.json";
  std::ofstream(invalid)
      << R"({"dims":[2],"re":[[1.5,0],[0,-0.5]],"im":[[0,0],[0,0]]})";
  CHECK_THROWS_WITH_AS(to_density(read_state_file(invalid)),
                       doctest::Contains("negative eigenvalue"), ValidationError);
}

TEST_CASE("parse_grid") {
  const std::vector<double> range = parse_grid("0:1:0.25");
  REQUIRE(range.size() == 5);
  CHECK(range.front() == 0.0);
  CHECK(range.back() == 1.0);

  const std::vector<double> list = parse_grid("0.1,0.5,0.9");
  REQUIRE(list.size() == 3);
  CHECK(list[1] == 0.5);

  CHECK(parse_grid("0.75").size() == 1);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1:-0.1"), ValidationError);
  CHECK_THROWS_AS(parse_grid(""), ValidationError);
}

TEST_CASE("witness command") {
  SUBCASE("singlet file reports NPT at the third coefficient") {
    const fs::path path = write_werner(1.0, "singlet.json");
    const RunResult res = run_cli("witness " + path.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("verdict: NPT") != std::string::npos);
    CHECK(res.output.find("first negative coefficient: a_3") != std::string::npos);
  }

  SUBCASE("maximally mixed file reports PPT") {
    const fs::path path = write_werner(0.0, "mixed.json");
    const RunResult res = run_cli("witness " + path.string() + " --method power-sum");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("verdict: PPT") != std::string::npos);
  }

  SUBCASE("json report") {
    const fs::path path = write_werner(1.0, "singlet.json");
    const RunResult res = run_cli("witness " + path.string() + " --json");
    CHECK(res.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(res.output);
    CHECK(doc["verdict"] == "NPT");
    CHECK(doc["first_negative"] == 3);
    CHECK(doc["coefficients"].size() == 5);
  }

  SUBCASE("malformed json exits 2") {
    const fs::path bad = temp_dir() / "broken.json";
    std::ofstream(bad) << "{";
    const RunResult res = run_cli("witness " + bad.string());
    CHECK(res.exit_code == 2);
  }

  SUBCASE("invalid state exits 2 naming the invariant") {
    const fs::path bad = temp_dir() / "not_a_state.json";
    std::ofstream(bad)
        << R"({"dims":[2,2],"re":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]})";
    const RunResult res = run_cli("witness " + bad.string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("trace") != std::string::npos);
  }
}

TEST_CASE("mdi run command") {
  SUBCASE("universal game on werner(0.5)") {
    const fs::path path = write_werner(0.5, "w05.json");
    const RunResult res = run_cli("mdi run --state " + path.string() + " --universal");
    CHECK(res.exit_code == 0);
    double value = 0.0;
    std::istringstream in(res.output.substr(res.output.find("I_exact") + 8));
    in >> value;
    CHECK(value == doctest::Approx(-27.0 / 4096.0).epsilon(1e-8));
    CHECK(res.output.find("entangled yes") != std::string::npos);
  }

  SUBCASE("table game on werner(0.2) is the closed-form value 0.1") {
    const fs::path path = write_werner(0.2, "w02.json");
    const RunResult res = run_cli("mdi run --state " + path.string());
    CHECK(res.exit_code == 0);
    double value = 0.0;
    std::istringstream in(res.output.substr(res.output.find("I_exact") + 8));
    in >> value;
    CHECK(value == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(res.output.find("entangled no") != std::string::npos);
  }

  SUBCASE("shot runs are seed-reproducible") {
    const fs::path path = write_werner(0.8, "w08.json");
    const std::string cmd = "mdi run --state " + path.string() + " --shots 100000 --seed 7";
    const RunResult a = run_cli(cmd);
    const RunResult b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("I_estimate") != std::string::npos);
  }

  SUBCASE("dimension mismatch witness file exits 2") {
    const fs::path state = write_werner(0.5, "w05b.json");
    const fs::path wfile = temp_dir() / "wit9.json";
    write_state_file(wfile, {3, 3}, CMat::Identity(9, 9));
    const RunResult res =
        run_cli("mdi run --state " + state.string() + " --witness " + wfile.string());
    CHECK(res.exit_code == 2);
  }
}

TEST_CASE("noise sweep command") {
  const fs::path out = temp_dir() / "sweep.csv";
  const RunResult res = run_cli(
      "noise sweep --family werner --param 0:1:0.25 --xi 1 --mu 0.5,1 --delta 0:0.5:0.25 --out " +
      out.string());
  CHECK(res.exit_code == 0);
  REQUIRE(fs::exists(out));

  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "family,param,xi,mu,delta,i_mod_simulated,i_mod_closed_form,abs_diff");
  std::size_t rows = 0;
  double max_diff = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    const auto last = line.rfind(',');
    max_diff = std::max(max_diff, std::stod(line.substr(last + 1)));
  }
  CHECK(rows == 5 * 1 * 2 * 3);
  CHECK(max_diff <= 1e-9);

  SUBCASE("guards") {
    const RunResult guard = run_cli(
        "noise sweep --family werner --param 0:1:0.0001 --xi 0:1:0.01 --mu 0:1:0.01 --delta 0 "
        "--out " +
        out.string());
    CHECK(guard.exit_code == 2);
    const RunResult family = run_cli("noise sweep --family bogus --param 0:1:0.5 --out " +
                                     out.string());
    CHECK(family.exit_code == 2);
  }
}

TEST_CASE("reproduce command") {
  for (const std::string name : {"werner-mdiew", "timeshift-attack", "tomography-cost"}) {
    CAPTURE(name);
    const fs::path dir = temp_dir() / ("repro_" + name);
    const RunResult res = run_cli("reproduce " + name + " --out " + dir.string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir / "summary.txt"));
  }
  CHECK(fs::exists(temp_dir() / "repro_werner-mdiew" / "werner_game.csv"));
  CHECK(fs::exists(temp_dir() / "repro_timeshift-attack" / "timeshift_game.csv"));
  CHECK(fs::exists(temp_dir() / "repro_tomography-cost" / "tomography_cost.csv"));

  const RunResult unknown = run_cli("reproduce nonsense --out " + (temp_dir() / "x").string());
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("decision tolerance env override") {
  // With an absurdly large tolerance every verdict collapses to boundary.
  const fs::path path = write_werner(1.0, "singlet_tol.json");
  const fs::path out = temp_dir() / "tol_out.txt";
  const std::string cmd = "MDIW_TOL=10 " + cli_binary() + " witness " + path.string() + " > " +
                          out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("verdict: boundary") != std::string::npos);
}
