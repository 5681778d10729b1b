// End-to-end tests of the `pencil` binary: report shapes, exit codes and
// cross-invocation determinism.  The binary path comes in via PENCIL_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pencil/instance.hpp"

namespace fs = std::filesystem;
using pencil::Json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "pencil_cli_test";

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kDir);
  fs::path out = kDir / "stdout.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(PENCIL_BIN) + " " + args +
                    " > " + out.string() + " 2> " + (kDir / "stderr.txt").string();
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  r.out = slurp(out);
  return r;
}

fs::path write_instance(const pencil::InstanceFile& inst, const std::string& name) {
  fs::create_directories(kDir);
  fs::path p = kDir / name;
  pencil::save_instance(inst, p.string());
  return p;
}

fs::path reference_family_path() {
  static fs::path p = write_instance(pencil::gen_reference_family(), "reference_family.json");
  return p;
}

}  // namespace

TEST_CASE("gen writes parseable instances and honors the seed") {
  RunResult r = run("gen reference-family");
  REQUIRE(r.exit_code == 0);
  pencil::InstanceFile inst = pencil::parse_instance(r.out);
  CHECK(inst.n == 4);
  CHECK(inst.b[0](0, 0) == pencil::cplx(1.0));
  CHECK(inst.b[0](0, 1) == pencil::cplx(0.0));

  RunResult a = run("gen feasible --m 2 --n 4 --seed 7");
  RunResult b = run("gen feasible --m 2 --n 4 --seed 7");
  RunResult c = run("gen feasible --m 2 --n 4 --seed 8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  // -o writes the same bytes to a file
  fs::path target = kDir / "gen_out.json";
  RunResult d = run("gen feasible --m 2 --n 4 --seed 7 -o " + target.string());
  CHECK(d.exit_code == 0);
  CHECK(slurp(target) == a.out);

  CHECK(run("gen no-such-kind").exit_code == 2);
  CHECK(run("gen strongly-indefinite --m 5 --n 4").exit_code == 2);
}

TEST_CASE("classify reports a verdict per matrix") {
  RunResult r = run("classify " + reference_family_path().string());
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["command"] == "classify");
  REQUIRE(rep["B"].size() == 4);
  for (const auto& e : rep["B"]) CHECK(e["kind"] == "INDEFINITE");
  CHECK(!rep.contains("A"));

  pencil::InstanceFile id;
  id.n = 2;
  id.b.push_back(pencil::HermitianMatrix::identity(2));
  fs::path p = write_instance(id, "identity.json");
  Json rep2 = Json::parse(run("classify " + p.string()).out);
  CHECK(rep2["B"][0]["kind"] == "POSITIVE_DEFINITE");
}

TEST_CASE("interval: exit 0 with bounds when nonempty, exit 1 when empty") {
  pencil::InstanceFile inst;
  inst.n = 2;
  inst.a = pencil::HermitianMatrix::identity(2);
  inst.b.push_back(pencil::HermitianMatrix::diag({1, -1}));
  fs::path feasible = write_instance(inst, "interval_feasible.json");
  RunResult r = run("interval " + feasible.string());
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["empty"] == false);
  CHECK(std::abs(rep["lo"].get<double>() + 1.0) <= 1e-6);
  CHECK(std::abs(rep["hi"].get<double>() - 1.0) <= 1e-6);

  inst.a = pencil::HermitianMatrix::identity(2).times(-1.0);
  fs::path empty = write_instance(inst, "interval_empty.json");
  RunResult r2 = run("interval " + empty.string());
  CHECK(r2.exit_code == 1);
  CHECK(Json::parse(r2.out)["empty"] == true);

  // two members: an arity error, not a computation failure
  inst.b.push_back(pencil::HermitianMatrix(2, {0, 1, 1, 0}));
  fs::path arity = write_instance(inst, "interval_arity.json");
  CHECK(run("interval " + arity.string()).exit_code == 2);

  // definite B violates the hypothesis: input error
  pencil::InstanceFile definite;
  definite.n = 2;
  definite.a = pencil::HermitianMatrix::identity(2);
  definite.b.push_back(pencil::HermitianMatrix::diag({1, 2}));
  fs::path defp = write_instance(definite, "interval_definite.json");
  RunResult r3 = run("interval " + defp.string());
  CHECK(r3.exit_code == 2);
  CHECK(Json::parse(r3.out)["error"] == "NOT_INDEFINITE");
}

TEST_CASE("solve returns a verified point on generated feasible instances") {
  fs::path p = write_instance(pencil::gen_feasible_m2(4, 21), "solve_m2.json");
  RunResult r = run("solve " + p.string() + " --seed 3");
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["verify"]["feasible"] == true);
  CHECK(rep["result"]["lambda"].size() == 2);
  CHECK(rep["result"]["trace"][0].contains("segment_witness"));
  CHECK(rep["seed"] == 3);

  fs::path p3 = write_instance(pencil::gen_feasible(3, 5, 22), "solve_m3.json");
  RunResult r3 = run("solve " + p3.string() + " --order index");
  REQUIRE(r3.exit_code == 0);
  CHECK(Json::parse(r3.out)["result"]["lambda"].size() == 3);

  CHECK(run("solve " + p.string() + " --order sideways").exit_code == 2);
}

TEST_CASE("solve on an infeasible instance exits 1 with a search-failure error") {
  pencil::InstanceFile inst = pencil::gen_indefinite_pair(5, 8);
  inst.a = pencil::HermitianMatrix::identity(5).times(-1.0);
  fs::path p = write_instance(inst, "solve_infeasible.json");
  RunResult r = run("solve " + p.string() + " --budget-restarts 8");
  CHECK(r.exit_code == 1);
  Json rep = Json::parse(r.out);
  CHECK(rep["error"] == "NOT_FEASIBLE");
  CHECK(rep.contains("message"));
}

TEST_CASE("certify: verdicts map to exit codes") {
  std::string ref = reference_family_path().string();
  RunResult weak = run("certify --class weak " + ref);
  REQUIRE(weak.exit_code == 0);
  Json wrep = Json::parse(weak.out);
  CHECK(wrep["report"]["verdict"] == "CONFIRMED");
  CHECK(wrep["class"] == "weak");

  RunResult indef = run("certify --class indefinite " + ref);
  REQUIRE(indef.exit_code == 0);
  Json irep = Json::parse(indef.out);
  CHECK(irep["report"]["verdict"] == "CONFIRMED");
  CHECK(irep["report"]["achieved"]["hints_accepted"].get<double>() == 8.0);

  RunResult strong = run("certify --class strong " + ref);
  CHECK(strong.exit_code == 1);
  Json srep = Json::parse(strong.out);
  CHECK(srep["report"]["verdict"] == "REFUTED");
  CHECK(srep["report"]["witness"].contains("vectors"));

  CHECK(run("certify --class bogus " + ref).exit_code == 2);
  CHECK(run("certify " + ref).exit_code == 2);  // --class is required
}

TEST_CASE("oracle grid scan") {
  pencil::InstanceFile inst;
  inst.n = 2;
  inst.a = pencil::HermitianMatrix::identity(2);
  inst.b.push_back(pencil::HermitianMatrix::diag({1, -1}));
  fs::path p = write_instance(inst, "oracle_m1.json");
  RunResult r = run("oracle " + p.string() + " --box -2 2 --points 21");
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["total_points"] == 21);
  CHECK(rep["feasible_count"] == 11);

  CHECK(run("oracle " + p.string() + " --box 2 -2").exit_code == 2);
  CHECK(run("oracle " + p.string()).exit_code == 2);  // --box is required
}

TEST_CASE("input errors exit 2") {
  CHECK(run("classify " + (kDir / "missing.json").string()).exit_code == 2);
  fs::create_directories(kDir);
  fs::path garbage = kDir / "garbage.json";
  std::ofstream(garbage) << "{ not json";
  CHECK(run("classify " + garbage.string()).exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("").exit_code == 2);
  CHECK(run("classify --no-such-flag x.json").exit_code == 2);
}

TEST_CASE("reports are bitwise deterministic, independent of thread count") {
  std::string ref = reference_family_path().string();
  RunResult t1 = run("certify --class strong --seed 5 " + ref, "PENCIL_THREADS=1");
  RunResult t4 = run("certify --class strong --seed 5 " + ref, "PENCIL_THREADS=4");
  CHECK(t1.exit_code == t4.exit_code);
  CHECK(t1.out == t4.out);

  fs::path p = write_instance(pencil::gen_feasible(3, 5, 23), "det_m3.json");
  RunResult s1 = run("solve --seed 11 " + p.string(), "PENCIL_THREADS=1");
  RunResult s4 = run("solve --seed 11 " + p.string(), "PENCIL_THREADS=4");
  CHECK(s1.exit_code == s4.exit_code);
  CHECK(s1.out == s4.out);
}

TEST_CASE("help is available and exits cleanly") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("solve --help").exit_code == 0);
}
