// pencil: decide and solve A + sum_i lambda_i B_i >= 0 for Hermitian
// matrices, and certify the indefiniteness classes the solver relies on.
//
// Exit codes: 0 = answer computed (including INCONCLUSIVE certificates);
// 1 = negative answer (empty interval, REFUTED, NOT_FEASIBLE) or a search /
// convergence failure, always with a JSON report on stdout; 2 = input error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pencil/eig.hpp"
#include "pencil/indefiniteness.hpp"
#include "pencil/instance.hpp"
#include "pencil/oracle.hpp"
#include "pencil/single_pencil.hpp"
#include "pencil/solver.hpp"

namespace {

using pencil::Json;

struct Opts {
  std::string input;
  double tol = -1.0;  // < 0: use the wrapped operation's default
  std::uint64_t seed = 0;
  int restarts = 64;
  int iters = 500;
  int grid = 4096;
  int pairs = 16;
  int planes = 256;
  int sphere_grid = 20000;
  int json_indent = 2;
  std::string order = "norm-desc";
  std::string cls;
  std::vector<double> box;
  int points = 21;
  // gen
  std::string kind;
  std::size_t m = 3;
  std::size_t n = 5;
  std::uint64_t gen_seed = 1;
  double ridge = 0.05;
  std::string output;
};

void add_input(CLI::App* sub, Opts& o) {
  sub->add_option("input", o.input, "instance JSON file")->required();
  sub->add_option("--json-indent", o.json_indent, "report indentation (default 2)");
}

void add_sampler(CLI::App* sub, Opts& o) {
  sub->add_option("--seed", o.seed, "master RNG seed (default 0)");
  sub->add_option("--budget-restarts", o.restarts, "sphere-search restarts (default 64)");
  sub->add_option("--budget-iters", o.iters, "descent iterations per restart (default 500)");
}

pencil::SamplerBudget sampler_budget(const Opts& o) {
  pencil::SamplerBudget b;
  b.restarts = o.restarts;
  b.iters = o.iters;
  b.seed = o.seed;
  return b;
}

pencil::CertBudget cert_budget(const Opts& o) {
  pencil::CertBudget b;
  b.grid = o.grid;
  b.pairs = o.pairs;
  b.planes = o.planes;
  b.sphere_grid = o.sphere_grid;
  b.seed = o.seed;
  b.sampler = sampler_budget(o);
  return b;
}

Json sampler_json(const Opts& o) {
  Json b = Json::object();
  b["restarts"] = o.restarts;
  b["iters"] = o.iters;
  return b;
}

Json report_head(const char* command) {
  Json j = Json::object();
  j["schema_version"] = "1";
  j["command"] = command;
  return j;
}

int emit(const Json& rep, const Opts& o, int exit_code) {
  std::cout << rep.dump(o.json_indent) << "\n";
  return exit_code;
}

const pencil::HermitianMatrix& require_a(const pencil::InstanceFile& inst, const char* cmd) {
  if (!inst.a)
    pencil::fail(pencil::ErrorCode::BAD_INPUT, std::string(cmd) + " needs the matrix A");
  return *inst.a;
}

int run_classify(const Opts& o) {
  pencil::InstanceFile inst = pencil::load_instance(o.input);
  Json rep = report_head("classify");
  rep["n"] = inst.n;
  rep["tol"] = o.tol >= 0 ? o.tol : 1e-9;
  auto one = [&](const pencil::HermitianMatrix& mat) {
    double tol_abs = o.tol >= 0 ? o.tol * pencil::spectral_norm(mat) : -1.0;
    pencil::Classification c = pencil::classify(mat, tol_abs);
    Json j = Json::object();
    j["kind"] = pencil::definiteness_name(c.kind);
    j["min_eigenvalue"] = c.min_eigenvalue;
    j["max_eigenvalue"] = c.max_eigenvalue;
    return j;
  };
  if (inst.a) rep["A"] = one(*inst.a);
  Json bs = Json::array();
  for (const auto& b : inst.b) bs.push_back(one(b));
  rep["B"] = std::move(bs);
  return emit(rep, o, 0);
}

int run_interval(const Opts& o) {
  pencil::InstanceFile inst = pencil::load_instance(o.input);
  if (inst.b.size() != 1)
    pencil::fail(pencil::ErrorCode::BAD_INPUT,
                 "interval needs exactly one family member, got " + std::to_string(inst.b.size()));
  const auto& a = require_a(inst, "interval");
  double tol = o.tol >= 0 ? o.tol : 1e-9;
  pencil::Interval iv = pencil::feasible_interval(a, inst.b[0], tol);
  Json rep = report_head("interval");
  rep["tol"] = tol;
  rep["empty"] = iv.empty;
  if (!iv.empty) {
    rep["lo"] = iv.lo;
    rep["hi"] = iv.hi;
    rep["midpoint"] = iv.midpoint();
    rep["width"] = iv.width();
  }
  return emit(rep, o, iv.empty ? 1 : 0);
}

int run_solve(const Opts& o) {
  pencil::InstanceFile inst = pencil::load_instance(o.input);
  const auto& a = require_a(inst, "solve");
  pencil::PencilFamily fam = inst.family();
  double tol = o.tol >= 0 ? o.tol : 1e-7;
  pencil::EliminationOrder order = pencil::EliminationOrder::NORM_DESC;
  if (o.order == "norm-asc") order = pencil::EliminationOrder::NORM_ASC;
  else if (o.order == "index") order = pencil::EliminationOrder::INDEX;
  else if (o.order != "norm-desc")
    pencil::fail(pencil::ErrorCode::BAD_INPUT, "unknown --order: " + o.order);
  pencil::FeasiblePoint fp = pencil::solve_feasible(a, fam, sampler_budget(o), tol, order);
  pencil::VerifyResult vr = pencil::verify_feasible(a, fam, fp.lambda, tol);
  Json rep = report_head("solve");
  rep["tol"] = tol;
  rep["seed"] = o.seed;
  rep["budgets"] = sampler_json(o);
  rep["order"] = o.order;
  rep["result"] = pencil::feasible_point_json(fp);
  Json v = Json::object();
  v["feasible"] = vr.feasible;
  v["min_eig"] = vr.min_eig;
  v["scale"] = vr.scale;
  rep["verify"] = std::move(v);
  return emit(rep, o, 0);
}

int run_certify(const Opts& o) {
  pencil::InstanceFile inst = pencil::load_instance(o.input);
  pencil::PencilFamily fam = inst.family();
  pencil::CertBudget budget = cert_budget(o);
  pencil::CertReport rep;
  if (o.cls == "weak") {
    rep = pencil::is_weakly_indefinite(fam, budget);
  } else if (o.cls == "indefinite") {
    rep = pencil::is_indefinite_set(fam, budget, pencil::witness_hints(inst));
  } else if (o.cls == "strong") {
    rep = pencil::is_strongly_indefinite(fam, budget);
  } else if (o.cls == "hm") {
    rep = pencil::hm_check(fam, budget);
  } else {
    pencil::fail(pencil::ErrorCode::BAD_INPUT, "unknown --class: " + o.cls);
  }
  Json out = report_head("certify");
  out["class"] = o.cls;
  out["seed"] = o.seed;
  Json b = sampler_json(o);
  b["grid"] = o.grid;
  b["pairs"] = o.pairs;
  b["planes"] = o.planes;
  b["sphere_grid"] = o.sphere_grid;
  out["budgets"] = std::move(b);
  out["report"] = pencil::cert_report_json(rep);
  return emit(out, o, rep.verdict == pencil::Verdict::REFUTED ? 1 : 0);
}

int run_oracle(const Opts& o) {
  pencil::InstanceFile inst = pencil::load_instance(o.input);
  const auto& a = require_a(inst, "oracle");
  pencil::PencilFamily fam = inst.family();
  if (o.box.size() != 2 || !(o.box[0] < o.box[1]))
    pencil::fail(pencil::ErrorCode::BAD_INPUT, "--box needs two values lo < hi");
  pencil::GridSpec spec;
  spec.lo.assign(fam.size(), o.box[0]);
  spec.hi.assign(fam.size(), o.box[1]);
  spec.points_per_axis = o.points;
  spec.tol = o.tol >= 0 ? o.tol : 1e-9;
  pencil::GridResult gr = pencil::grid_feasibility(a, fam, spec);
  Json rep = report_head("oracle");
  rep["tol"] = spec.tol;
  rep["box"] = Json::array({o.box[0], o.box[1]});
  rep["points_per_axis"] = o.points;
  rep["total_points"] = gr.total_points;
  rep["feasible_count"] = gr.feasible_points.size();
  constexpr std::size_t kMaxListed = 200;
  Json pts = Json::array();
  for (std::size_t i = 0; i < gr.feasible_points.size() && i < kMaxListed; ++i) {
    Json p = Json::array();
    for (double v : gr.feasible_points[i]) p.push_back(v);
    pts.push_back(std::move(p));
  }
  rep["feasible_points"] = std::move(pts);
  if (gr.feasible_points.size() > kMaxListed) rep["feasible_points_truncated"] = true;
  return emit(rep, o, 0);
}

int run_gen(const Opts& o) {
  pencil::InstanceFile inst =
      pencil::generate_instance(o.kind, o.m, o.n, o.gen_seed, o.ridge);
  std::string text = pencil::serialize_instance(inst, o.json_indent);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    pencil::save_instance(inst, o.output, o.json_indent);
  }
  return 0;
}

int exit_code_for(pencil::ErrorCode c) {
  switch (c) {
    case pencil::ErrorCode::BAD_INPUT:
    case pencil::ErrorCode::DIM_MISMATCH:
    case pencil::ErrorCode::NOT_HERMITIAN:
    case pencil::ErrorCode::NOT_INDEFINITE:
    case pencil::ErrorCode::GRID_TOO_LARGE:
      return 2;
    default:
      return 1;  // negative answers and search/convergence failures
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pencil: linear operator inequality solver and certifier"};
  app.require_subcommand(1);
  Opts o;

  CLI::App* classify = app.add_subcommand("classify", "spectrum sign pattern of A and every B");
  add_input(classify, o);
  classify->add_option("--tol", o.tol, "relative eigenvalue tolerance (default 1e-9)");

  CLI::App* interval = app.add_subcommand(
      "interval", "feasible lambda interval for a single indefinite B (m = 1)");
  add_input(interval, o);
  interval->add_option("--tol", o.tol, "relative feasibility tolerance (default 1e-9)");

  CLI::App* solve = app.add_subcommand("solve", "find lambda with A + sum lambda_i B_i >= 0");
  add_input(solve, o);
  solve->add_option("--tol", o.tol, "relative verification tolerance (default 1e-7)");
  add_sampler(solve, o);
  solve->add_option("--order", o.order, "elimination order: norm-desc | norm-asc | index");

  CLI::App* certify = app.add_subcommand("certify", "certify an indefiniteness class");
  add_input(certify, o);
  certify->add_option("--class", o.cls, "weak | indefinite | strong | hm")->required();
  add_sampler(certify, o);
  certify->add_option("--budget-grid", o.grid, "mu-directions for the weak certifier");
  certify->add_option("--budget-pairs", o.pairs, "witness pairs per trio (strong)");
  certify->add_option("--budget-planes", o.planes, "planes tested (hm)");
  certify->add_option("--budget-sphere-grid", o.sphere_grid, "2x2 psd search samples (hm)");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "brute-force lambda-grid feasibility scan (m <= 4)");
  add_input(oracle, o);
  oracle->add_option("--tol", o.tol, "relative feasibility tolerance (default 1e-9)");
  oracle->add_option("--box", o.box, "per-axis bounds lo hi")->expected(2)->required();
  oracle->add_option("--points", o.points, "grid points per axis (default 21)");

  CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("kind", o.kind,
                  "reference-family | indefinite-pair | strongly-indefinite | feasible | feasible-m2")
      ->required();
  gen->add_option("--m", o.m, "family size (default 3)");
  gen->add_option("--n", o.n, "matrix dimension (default 5)");
  gen->add_option("--seed", o.gen_seed, "generator seed (default 1)");
  gen->add_option("--ridge", o.ridge, "definiteness margin of P (feasible kinds)");
  gen->add_option("-o,--output", o.output, "write to file instead of stdout");
  gen->add_option("--json-indent", o.json_indent, "output indentation (default 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit 0, bad usage exits 2
  }

  std::string command = app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
  try {
    if (classify->parsed()) return run_classify(o);
    if (interval->parsed()) return run_interval(o);
    if (solve->parsed()) return run_solve(o);
    if (certify->parsed()) return run_certify(o);
    if (oracle->parsed()) return run_oracle(o);
    if (gen->parsed()) return run_gen(o);
  } catch (const pencil::PencilError& e) {
    Json rep = report_head(command.c_str());
    rep["error"] = pencil::error_code_name(e.code());
    rep["message"] = e.what();
    std::cout << rep.dump(o.json_indent) << "\n";
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
