#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "susytrm/cli.hpp"
#include "susytrm/susy1.hpp"
#include "susytrm/susy2.hpp"
#include "susytrm/trm.hpp"

using namespace susytrm;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0e-300, std::abs(want));
}

int run(std::vector<std::string> args) { return cli::run_cli(std::move(args)); }

std::string tmp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("susytrm_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), "missing file: ", path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

struct Csv {
  std::string header;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::vector<double>> rows;
};

Csv load_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  Csv c;
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(in, line)));
  c.header = line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::vector<double> vals;
    std::size_t from = 0;
    while (true) {
      std::size_t at = line.find(',', from);
      std::string tok = line.substr(from, at == std::string::npos ? at : at - from);
      fields.push_back(tok);
      vals.push_back(std::stod(tok));
      if (at == std::string::npos) break;
      from = at + 1;
    }
    c.cells.push_back(std::move(fields));
    c.rows.push_back(std::move(vals));
  }
  return c;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

// run a full shell command (the binary path is substituted for "BIN")
int shell(std::string cmd) {
  const std::string bin = SUSY_TRM_BIN;
  for (std::size_t at = cmd.find("BIN"); at != std::string::npos; at = cmd.find("BIN"))
    cmd.replace(at, 3, bin);
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

int sign_changes(const Csv& c, int col, double floor = 1e-12) {
  int changes = 0;
  double prev = 0.0;
  for (const auto& row : c.rows) {
    double v = row[static_cast<std::size_t>(col)];
    if (std::abs(v) <= floor) continue;
    if (prev != 0.0 && (v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

}  // namespace

TEST_CASE("spectrum: exact ladder as round-trip JSON") {
  std::string out = tmp_file("spectrum.json");
  CHECK(run({"spectrum", "--a", "2", "--b", "50", "--levels", "5", "--out", out}) == 0);

  json d = load_json(out);
  CHECK(d["schema"] == "susy-trm/1");
  CHECK(d["command"] == "spectrum");
  CHECK(d["a"].get<double>() == 2.0);
  CHECK(d["b"].get<double>() == 50.0);
  REQUIRE(d["levels"].size() == 5);

  // 17-digit serialization round-trips the closed-form doubles bit-exactly
  auto p = trm::TrmParams::make(2, 50);
  for (int n = 0; n < 5; ++n) {
    CHECK(d["levels"][n]["n"].get<int>() == n);
    CHECK(d["levels"][n]["E"].get<double>() == trm::bound_energy(p, n));
  }
  const double ladder[5] = {-134.3888888888889, -70.125, -37.5, -16.72222222222222,
                            -1.010204081632653};
  for (int n = 0; n < 5; ++n)
    CHECK(rel_err(d["levels"][n]["E"].get<double>(), ladder[n]) < 1e-12);

  std::string out0 = tmp_file("spectrum_b0.json");
  CHECK(run({"spectrum", "--a", "2", "--b", "0", "--levels", "3", "--out", out0}) == 0);
  json d0 = load_json(out0);
  CHECK(d0["levels"][0]["E"].get<double>() == 4.5);
  CHECK(d0["levels"][1]["E"].get<double>() == 8.0);
  CHECK(d0["levels"][2]["E"].get<double>() == 12.5);
}

TEST_CASE("configuration errors exit 2") {
  CHECK(run({"spectrum", "--a", "-1", "--b", "50"}) == 2);
  CHECK(run({"spectrum", "--a", "2", "--b", "50", "--levels", "0"}) == 2);

  auto transform2 = [](std::vector<std::string> extra) {
    std::vector<std::string> args = {"transform", "--a", "2", "--b", "50",
                                     "--out",     tmp_file("cfgerr.csv")};
    for (auto& e : extra) args.push_back(std::move(e));
    return run(args);
  };
  // seed grammar
  for (const char* bad : {"bound", "bound:x", "bound:-3", "bound:1:2", "general:-5",
                          "general:a:1", "pet:1", "L:", "complex:1:2:Z"}) {
    CAPTURE(bad);
    CHECK(transform2({"--order", "1", "--seed1", bad}) == 2);
  }
  // structural misconfiguration
  CHECK(transform2({"--order", "3", "--seed1", "bound:0"}) == 2);
  CHECK(transform2({"--order", "2", "--case", "bogus", "--seed1", "bound:0"}) == 2);
  CHECK(transform2({"--order", "2", "--case", "real", "--seed1", "bound:1"}) == 2);
  CHECK(transform2({"--order", "1", "--seed1", "bound:0", "--seed2", "bound:1"}) == 2);
  CHECK(transform2({"--order", "1", "--seed1", "complex:1:2:L"}) == 2);
  CHECK(transform2({"--order", "2", "--case", "complex", "--seed1", "L:-40"}) == 2);
  CHECK(transform2({"--order", "2", "--case", "confluent", "--j", "1"}) == 2);
  CHECK(transform2({"--order", "2", "--case", "confluent", "--w0", "0.5"}) == 2);
  CHECK(transform2(
            {"--order", "2", "--seed1", "bound:1", "--seed2", "bound:0", "--points", "1"}) == 2);
  CHECK(transform2(
            {"--order", "2", "--seed1", "bound:1", "--seed2", "bound:0", "--delta", "2"}) == 2);
  // sidecar would clobber the CSV
  CHECK(run({"transform", "--a", "2", "--b", "50", "--seed1", "bound:1", "--seed2", "bound:0",
             "--out", tmp_file("clobber.json")}) == 2);
  // eval selector family
  auto eval2 = [](std::vector<std::string> extra) {
    std::vector<std::string> args = {"eval", "--a", "2",     "--b",
                                     "50",   "--out", tmp_file("cfgerr2.csv")};
    for (auto& e : extra) args.push_back(std::move(e));
    return run(args);
  };
  CHECK(eval2({"--state", "badsel", "--seed1", "bound:0"}) == 2);
  CHECK(eval2({"--state", "mapped", "--seed1", "bound:0"}) == 2);
  CHECK(eval2({"--state", "new:7", "--order", "2", "--seed1", "general:-150:1", "--seed2",
               "general:-250:-1"}) == 2);
  CHECK(eval2({"--state", "confluent"}) == 2);
  CHECK(eval2({"--state", "seed"}) == 2);  // no seed given
}

TEST_CASE("seed-rule violations exit 3, numerical failures exit 5") {
  auto t = [](std::vector<std::string> extra) {
    std::vector<std::string> args = {"transform", "--a", "2",     "--b",
                                     "50",        "--out", tmp_file("rule.csv")};
    for (auto& e : extra) args.push_back(std::move(e));
    return run(args);
  };
  // non-consecutive deletion pair
  CHECK(t({"--order", "2", "--seed1", "bound:2", "--seed2", "bound:0"}) == 3);
  // both admixtures positive in an odd gap: node rule rejects
  CHECK(t({"--order", "2", "--seed1", "general:-2:1", "--seed2", "general:-10:1"}) == 3);
  // factorization energy collides with a bound level
  CHECK(t({"--order", "2", "--seed1", "general:-70.125:1", "--seed2", "general:-100:-1"}) == 3);
  // only the ground state seeds a first-order deletion
  CHECK(t({"--order", "1", "--seed1", "bound:2"}) == 3);
  // negative admixture below the ground level has a node
  CHECK(t({"--order", "1", "--seed1", "general:-200:-5"}) == 3);
  // complex case needs a genuinely complex energy
  CHECK(t({"--order", "2", "--case", "complex", "--seed1", "complex:-50:0:L"}) == 3);
  // confluent offset inside the forbidden band
  CHECK(t({"--order", "2", "--case", "confluent", "--j", "1", "--w0", "-0.5"}) == 3);
  // mapping at the factorization energy is degenerate
  CHECK(run({"eval", "--a", "2", "--b", "50", "--order", "1", "--state", "mapped:0", "--seed1",
             "bound:0", "--out", tmp_file("rule2.csv")}) == 3);
  // E^2 + b^2 = 0 leaves the exponents without a branch
  CHECK(t({"--order", "2", "--case", "complex", "--seed1", "complex:0:50:L"}) == 5);
}

TEST_CASE("transform: CSV shape, sidecar, byte determinism") {
  auto p = trm::TrmParams::make(2, 50);
  std::string csv1 = tmp_file("dt1.csv");
  std::string csv2 = tmp_file("dt2.csv");
  std::vector<std::string> base = {"transform", "--a",     "2",       "--b",
                                   "50",        "--order", "2",       "--case",
                                   "real",      "--seed1", "bound:1", "--seed2",
                                   "bound:0",   "--points", "50"};

  auto with_out = [&base](const std::string& out) {
    auto args = base;
    args.push_back("--out");
    args.push_back(out);
    return args;
  };
  REQUIRE(run(with_out(csv1)) == 0);
  REQUIRE(run(with_out(csv2)) == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(slurp(tmp_file("dt1.json")) == slurp(tmp_file("dt2.json")));

  Csv c = load_csv(csv1);
  CHECK(c.header == "x,V0,V2");
  REQUIRE(c.rows.size() == 50);
  for (const auto& row : c.rows) REQUIRE(row.size() == 3);
  CHECK(c.cells[0][0] == fmt12(1e-4));
  CHECK(c.cells[49][0] == fmt12(kPi - 1e-4));
  for (std::size_t i = 1; i < c.rows.size(); ++i) CHECK(c.rows[i][0] > c.rows[i - 1][0]);
  // the 12-digit x column round-trips through a double and back
  for (const auto& row : c.cells) CHECK(fmt12(std::stod(row[0])) == row[0]);

  // re-evaluating at the parsed x reproduces the emitted columns
  auto pot = susy2::real_case_transform(p, susy2::SeedSpec::bound(1), susy2::SeedSpec::bound(0));
  for (std::size_t i : {10u, 25u, 40u}) {
    double x = c.rows[i][0];
    CHECK(rel_err(c.rows[i][1], trm::potential(p, x)) < 1e-9);
    CHECK(rel_err(c.rows[i][2], pot.V(x)) < 1e-9);
  }

  json side = load_json(tmp_file("dt1.json"));
  CHECK(side["schema"] == "susy-trm/1");
  CHECK(side["command"] == "transform");
  CHECK(side["construction"] == "delete-two");
  CHECK(side["case"] == "real");
  CHECK(side["order"].get<int>() == 2);
  REQUIRE(side["seeds"].size() == 2);
  CHECK(side["seeds"][0] == "bound:1");
  CHECK(side["seeds"][1] == "bound:0");
  CHECK(side["predicted_spectrum"][0].get<double>() == -37.5);
  CHECK(side["singular_c0"].get<double>() == 10.0);
  CHECK(side["singular_cpi"].get<double>() == 10.0);
  CHECK(side["warnings"].empty());
  CHECK(side["grid"]["points"].get<int>() == 50);

  // first-order header and sidecar
  std::string csv3 = tmp_file("cg.csv");
  std::string meta3 = tmp_file("cg_meta.json");
  REQUIRE(run({"transform", "--a", "2", "--b", "50", "--order", "1", "--seed1",
               "general:-200:10", "--points", "20", "--out", csv3, "--meta", meta3}) == 0);
  CHECK(load_csv(csv3).header == "x,V0,V1");
  json side3 = load_json(meta3);
  CHECK(side3["construction"] == "create-ground");
  CHECK(side3["predicted_spectrum"][0].get<double>() == -200.0);
}

TEST_CASE("verify: clean pass, corrupted expectation, grid override") {
  std::string rep = tmp_file("verify.json");
  std::vector<std::string> dg = {"verify", "--a", "2", "--b", "10", "--order", "1",
                                 "--seed1", "bound:0", "--levels", "5", "--out", rep};
  REQUIRE(run(dg) == 0);
  json d = load_json(rep);
  CHECK(d["command"] == "verify");
  CHECK(d["construction"] == "delete-ground");
  CHECK(d["ok"] == true);
  CHECK(d["certified_tolerance"].get<double>() < 0.1);
  CHECK(d["unpredicted"].empty());
  for (const auto& m : d["matches"]) CHECK(m["ok"] == true);
  // after deleting the ground level the lowest survivor is E_1 of the base
  CHECK(std::abs(d["oracle"][0].get<double>() - 4.875) < 1e-2);

  // corrupt the predicted spectrum recorded in a sidecar: verification must fail
  std::string csv = tmp_file("dg.csv");
  REQUIRE(run({"transform", "--a", "2", "--b", "10", "--order", "1", "--seed1", "bound:0",
               "--levels", "5", "--points", "5", "--out", csv}) == 0);
  json side = load_json(tmp_file("dg.json"));
  side["predicted_spectrum"][0] = side["predicted_spectrum"][0].get<double>() + 3.0;
  std::string bad = tmp_file("dg_bad.json");
  { std::ofstream(bad) << side.dump(); }
  std::string rep2 = tmp_file("verify_bad.json");
  CHECK(run({"verify", "--a", "2", "--b", "10", "--order", "1", "--seed1", "bound:0",
             "--expect", bad, "--out", rep2}) == 4);
  json d2 = load_json(rep2);
  CHECK(d2["ok"] == false);
  bool some_miss = false;
  for (const auto& m : d2["matches"]) some_miss = some_miss || !m["ok"].get<bool>();
  CHECK(some_miss);
  // the genuine lowest level is now an intruder below the corrupted band
  REQUIRE(!d2["unpredicted"].empty());
  CHECK(std::abs(d2["unpredicted"][0].get<double>() - 4.875) < 1e-2);

  std::string rep3 = tmp_file("verify_grid.json");
  REQUIRE(run({"verify", "--a", "2", "--b", "10", "--order", "1", "--seed1", "bound:0",
               "--levels", "3", "--grid-points", "801", "--out", rep3}) == 0);
  CHECK(load_json(rep3)["grid_points"].get<int>() == 801);

  // second-order spot checks at the two fast corners of the design space
  std::string rep4 = tmp_file("verify_confl.json");
  REQUIRE(run({"verify", "--a", "2", "--b", "50", "--order", "2", "--case", "confluent",
               "--j", "1", "--w0", "0", "--levels", "4", "--out", rep4}) == 0);
  json d4 = load_json(rep4);
  CHECK(d4["construction"] == "confluent");
  CHECK(d4["certified_tolerance"].get<double>() < 0.1);

  std::string rep5 = tmp_file("verify_dt.json");
  REQUIRE(run({"verify", "--a", "2", "--b", "50", "--order", "2", "--case", "real", "--seed1",
               "bound:1", "--seed2", "bound:0", "--levels", "4", "--out", rep5}) == 0);
  CHECK(load_json(rep5)["construction"] == "delete-two");
}

TEST_CASE("eval: columns, seed and derived-state profiles") {
  auto p = trm::TrmParams::make(2, 50);

  // ground state: real, strictly positive
  std::string f1 = tmp_file("ev_gs.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--state", "seed", "--seed1", "bound:0",
               "--points", "200", "--out", f1}) == 0);
  Csv gs = load_csv(f1);
  CHECK(gs.header == "x,re,im,d_re,d_im");
  REQUIRE(gs.rows.size() == 200);
  for (const auto& row : gs.rows) {
    CHECK(row[1] > 0.0);
    CHECK(row[2] == 0.0);
  }

  // missing state of a deep creation seed: one lobe pinned to zero at both walls
  std::string f2 = tmp_file("ev_miss.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--order", "1", "--state", "missing",
               "--seed1", "general:-200:10", "--points", "200", "--out", f2}) == 0);
  Csv miss = load_csv(f2);
  CHECK(std::abs(miss.rows.front()[1]) < 1e-10);
  CHECK(std::abs(miss.rows.back()[1]) < 1e-10);
  double peak = 0.0;
  for (const auto& row : miss.rows) peak = std::max(peak, std::abs(row[1]));
  CHECK(peak > 0.1);
  CHECK(sign_changes(miss, 1) == 0);

  // raw creation seed: nodeless but divergent toward both walls
  std::string f3 = tmp_file("ev_seed.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--state", "seed", "--seed1",
               "general:-310.5:1", "--points", "100", "--out", f3}) == 0);
  Csv seed = load_csv(f3);
  CHECK(sign_changes(seed, 1) == 0);
  double interior_min = 1e300;
  for (const auto& row : seed.rows) interior_min = std::min(interior_min, std::abs(row[1]));
  CHECK(std::abs(seed.rows.front()[1]) > 1e3 * interior_min);
  CHECK(std::abs(seed.rows.back()[1]) > 1e3 * interior_min);

  // first-order mapped state matches the library evaluator at the parsed x
  std::string f4 = tmp_file("ev_map1.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--order", "1", "--state", "mapped:1",
               "--seed1", "bound:0", "--points", "100", "--out", f4}) == 0);
  Csv map1 = load_csv(f4);
  trm::Solution want = susy1::map_eigenfunction_1(trm::bound_state(p, 0),
                                                  trm::bound_energy(p, 0),
                                                  trm::bound_state(p, 1),
                                                  trm::bound_energy(p, 1));
  for (std::size_t i : {20u, 60u}) {
    auto [v, dv] = want.eval(map1.rows[i][0]);
    CHECK(rel_err(map1.rows[i][1], v.real()) < 1e-9);
    CHECK(rel_err(map1.rows[i][3], dv.real()) < 1e-9);
  }

  // second-order mapped state through the delete-two pair
  std::string f5 = tmp_file("ev_map2.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--order", "2", "--case", "real", "--state",
               "mapped:2", "--seed1", "bound:1", "--seed2", "bound:0", "--points", "100",
               "--out", f5}) == 0);
  Csv map2 = load_csv(f5);
  auto pot = susy2::real_case_transform(p, susy2::SeedSpec::bound(1), susy2::SeedSpec::bound(0));
  trm::Solution want2 = susy2::map_eigenfunction_2(pot.u1, pot.u2, trm::bound_state(p, 2),
                                                   trm::bound_energy(p, 2));
  for (std::size_t i : {30u, 70u}) {
    auto [v, dv] = want2.eval(map2.rows[i][0]);
    CHECK(rel_err(map2.rows[i][1], v.real()) < 1e-9);
    CHECK(rel_err(map2.rows[i][3], dv.real()) < 1e-9);
  }

  // designed ground state of the add-two pair: nodeless and wall-pinned
  std::string f6 = tmp_file("ev_new.csv");
  REQUIRE(run({"eval", "--a", "2", "--b", "50", "--order", "2", "--case", "real", "--state",
               "new:1", "--seed1", "general:-150:1", "--seed2", "general:-250:-1", "--points",
               "100", "--out", f6}) == 0);
  Csv designed = load_csv(f6);
  CHECK(sign_changes(designed, 1) == 0);
  CHECK(std::abs(designed.rows.front()[1]) < 1e-8);
  CHECK(std::abs(designed.rows.back()[1]) < 1e-8);
}

TEST_CASE("binary: exit codes and stderr error documents") {
  CHECK(shell("BIN --help > /dev/null") == 0);
  CHECK(shell("BIN > /dev/null 2>&1") == 2);
  CHECK(shell("BIN paint > /dev/null 2>&1") == 2);
  CHECK(shell("BIN spectrum --levels x > /dev/null 2>&1") == 2);

  std::string out = tmp_file("bin_spec.json");
  CHECK(shell("BIN spectrum --a 2 --b 50 --levels 3 > " + out) == 0);
  json d = load_json(out);
  CHECK(rel_err(d["levels"][2]["E"].get<double>(), -37.5) < 1e-12);

  // library failures surface as machine-readable one-document stderr reports
  std::string err = tmp_file("bin_err.json");
  CHECK(shell("BIN transform --a 2 --b 50 --order 2 --case real --seed1 general:-2:1"
              " --seed2 general:-10:1 --out /dev/null 2> " + err) == 3);
  json e = load_json(err);
  CHECK(e["schema"] == "susy-trm/1");
  CHECK(e["exit_code"].get<int>() == 3);
  CHECK(!e["error"].get<std::string>().empty());

  std::string err2 = tmp_file("bin_err2.json");
  CHECK(shell("BIN spectrum --a -1 --b 50 2> " + err2) == 2);
  CHECK(load_json(err2)["error"].get<std::string>().find("a must be positive") !=
        std::string::npos);

  CHECK(shell("BIN transform --a 2 --b 50 --order 2 --case complex --seed1 complex:0:50:L"
              " --out /dev/null 2> /dev/null") == 5);

  // environment-variable grid override, and the flag outranking it
  std::string rep = tmp_file("bin_grid.json");
  CHECK(shell("SUSY_TRM_GRID=1201 BIN verify --a 2 --b 10 --order 1 --seed1 bound:0"
              " --levels 3 --out " + rep) == 0);
  CHECK(load_json(rep)["grid_points"].get<int>() == 1201);
  CHECK(shell("SUSY_TRM_GRID=1201 BIN verify --a 2 --b 10 --order 1 --seed1 bound:0"
              " --levels 3 --grid-points 801 --out " + rep) == 0);
  CHECK(load_json(rep)["grid_points"].get<int>() == 801);
  CHECK(shell("SUSY_TRM_GRID=oops BIN verify --a 2 --b 10 --order 1 --seed1 bound:0"
              " > /dev/null 2>&1") == 2);
}
