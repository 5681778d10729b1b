#include "pencil/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pencil/rng.hpp"

namespace pencil {

namespace {

cplx parse_entry(const Json& e) {
  if (e.is_number()) return cplx(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return cplx(e[0].get<double>(), e[1].get<double>());
  fail(ErrorCode::BAD_INPUT, "matrix entry must be a number or a [re, im] pair");
}

HermitianMatrix parse_matrix(const Json& jm, std::size_t n, const char* what) {
  if (!jm.is_array() || jm.size() != n)
    fail(ErrorCode::DIM_MISMATCH, std::string(what) + ": expected " + std::to_string(n) + " rows");
  std::vector<cplx> data;
  data.reserve(n * n);
  for (const auto& row : jm) {
    if (!row.is_array() || row.size() != n)
      fail(ErrorCode::DIM_MISMATCH, std::string(what) + ": expected " + std::to_string(n) + " entries per row");
    for (const auto& e : row) data.push_back(parse_entry(e));
  }
  return HermitianMatrix(n, std::move(data));  // throws NOT_HERMITIAN when violated
}

CVec parse_vector(const Json& jv, std::size_t n, const char* what) {
  if (!jv.is_array() || jv.size() != n)
    fail(ErrorCode::DIM_MISMATCH, std::string(what) + ": expected " + std::to_string(n) + " entries");
  CVec v;
  v.reserve(n);
  for (const auto& e : jv) v.push_back(parse_entry(e));
  return v;
}

}  // namespace

Json entry_json(cplx v) {
  if (v.imag() == 0.0) return Json(v.real());
  return Json::array({v.real(), v.imag()});
}

Json vector_json(const CVec& v) {
  Json out = Json::array();
  for (cplx c : v) out.push_back(entry_json(c));
  return out;
}

Json matrix_json(const HermitianMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(entry_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

InstanceFile parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::BAD_INPUT, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::BAD_INPUT, "instance must be a JSON object");
  InstanceFile inst;
  if (!j.contains("schema_version") || !j["schema_version"].is_string() ||
      j["schema_version"].get<std::string>() != "1")
    fail(ErrorCode::BAD_INPUT, "schema_version must be the string \"1\"");
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0)
    fail(ErrorCode::BAD_INPUT, "n must be a positive integer");
  inst.n = j["n"].get<std::size_t>();
  if (j.contains("A") && !j["A"].is_null()) inst.a = parse_matrix(j["A"], inst.n, "A");
  if (!j.contains("B") || !j["B"].is_array() || j["B"].empty())
    fail(ErrorCode::BAD_INPUT, "B must be a non-empty array of matrices");
  for (std::size_t i = 0; i < j["B"].size(); ++i)
    inst.b.push_back(parse_matrix(j["B"][i], inst.n, ("B[" + std::to_string(i) + "]").c_str()));
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) fail(ErrorCode::BAD_INPUT, "metadata must be an object");
    inst.metadata = j["metadata"];
  }
  return inst;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::BAD_INPUT, "cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const InstanceFile& inst, int indent) {
  Json j = Json::object();
  j["schema_version"] = inst.schema_version;
  j["n"] = inst.n;
  if (inst.a) j["A"] = matrix_json(*inst.a);
  Json bs = Json::array();
  for (const auto& b : inst.b) bs.push_back(matrix_json(b));
  j["B"] = std::move(bs);
  j["metadata"] = inst.metadata;
  return j.dump(indent) + "\n";
}

void save_instance(const InstanceFile& inst, const std::string& path, int indent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::BAD_INPUT, "cannot write instance file: " + path);
  out << serialize_instance(inst, indent);
}

std::vector<SignedWitnessHint> witness_hints(const InstanceFile& inst) {
  std::vector<SignedWitnessHint> out;
  if (!inst.metadata.contains("witnesses") || !inst.metadata["witnesses"].is_array()) return out;
  for (const auto& w : inst.metadata["witnesses"]) {
    if (!w.is_object() || !w.contains("member") || !w.contains("sign") || !w.contains("x"))
      continue;
    if (!w["member"].is_number_integer() || !w["sign"].is_number_integer()) continue;
    long mem = w["member"].get<long>();
    int sign = w["sign"].get<int>();
    if (mem < 1 || mem > static_cast<long>(inst.b.size()) || (sign != 1 && sign != -1)) continue;
    SignedWitnessHint h;
    h.member = static_cast<std::size_t>(mem - 1);
    h.sign = sign;
    h.x = parse_vector(w["x"], inst.n, "witness x");
    out.push_back(std::move(h));
  }
  return out;
}

InstanceFile gen_reference_family() {
  InstanceFile inst;
  inst.n = 4;
  auto mat = [](std::initializer_list<double> v) {
    std::vector<cplx> d;
    for (double x : v) d.push_back(x);
    return HermitianMatrix(4, std::move(d));
  };
  inst.b.push_back(mat({1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}));
  inst.b.push_back(mat({0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}));
  inst.b.push_back(mat({1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, -1}));
  inst.b.push_back(mat({0, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0}));
  const double s2 = std::sqrt(2.0);
  struct W {
    int member;
    int sign;
    double x[4];
  };
  const W ws[] = {
      {1, -1, {1 - s2, -1, 1 - s2, 1}},
      {1, +1, {3 - s2, 1 + 2 * s2, -1 + 5 * s2, 7}},
      {2, -1, {1 - s2, 1, -1 + s2, 1}},
      {2, +1, {1 + s2, 1, -1 - s2, 1}},
      {3, -1, {1 - s2, -1, -1 + s2, 1}},
      {3, +1, {1 - s2, -1 + 2 * s2, 3 - s2, 1}},
      {4, -1, {1 - 5 * s2, -1 - 2 * s2, -3 + s2, 7}},
      {4, +1, {-1 + s2, 1, -1 + s2, 1}},
  };
  Json witnesses = Json::array();
  for (const auto& w : ws) {
    Json jw = Json::object();
    jw["member"] = w.member;
    jw["sign"] = w.sign;
    Json x = Json::array();
    for (double v : w.x) x.push_back(v);
    jw["x"] = std::move(x);
    witnesses.push_back(std::move(jw));
  }
  inst.metadata["name"] = "reference-family";
  inst.metadata["description"] =
      "four real symmetric forms on C^4: an indefinite set (signed witnesses below) that is "
      "not strongly indefinite";
  inst.metadata["witnesses"] = std::move(witnesses);
  return inst;
}

namespace {

// Family of rank-2 coupled forms B_i = s_i (v w_i^* + w_i v^* + t_i v v^*)
// with {v, w_1..w_m} orthonormal, conjugated by a seeded unitary.  Every real
// combination restricts to an indefinite 2x2 block on span{v, w(mu)}, all
// sign witnesses share the v-component alignment, and the common neutral set
// is large; this yields weakly/strongly indefinite families with generic
// spectra.
std::vector<HermitianMatrix> coupled_family(std::size_t m, std::size_t n, Rng& rng) {
  if (n < m + 1) fail(ErrorCode::BAD_INPUT, "this construction needs n >= m + 1");
  std::vector<double> t(m), s(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = rng.uniform(-0.5, 0.5);
  for (std::size_t i = 0; i < m; ++i) s[i] = rng.uniform(0.6, 1.6);
  ColumnMatrix u = random_unitary(rng, n);
  std::vector<HermitianMatrix> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cplx> d(n * n, 0.0);
    d[0 * n + 0] = s[i] * t[i];
    d[0 * n + (i + 1)] = s[i];
    d[(i + 1) * n + 0] = s[i];
    HermitianMatrix base(n, std::move(d));
    out.push_back(conjugate_by(base, u));
  }
  return out;
}

}  // namespace

InstanceFile gen_strongly_indefinite(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 2) fail(ErrorCode::BAD_INPUT, "strongly-indefinite generator needs m >= 2");
  InstanceFile inst;
  inst.n = n;
  Rng rng(derive_seed(seed, 101, 0));
  inst.b = coupled_family(m, n, rng);
  inst.metadata["name"] = "strongly-indefinite";
  inst.metadata["m"] = m;
  inst.metadata["n"] = n;
  inst.metadata["seed"] = seed;
  return inst;
}

InstanceFile gen_indefinite_pair(std::size_t n, std::uint64_t seed) {
  InstanceFile inst = gen_strongly_indefinite(2, n, seed);
  inst.metadata["name"] = "indefinite-pair";
  return inst;
}

InstanceFile gen_feasible(std::size_t m, std::size_t n, std::uint64_t seed, double ridge) {
  if (!(ridge > 0.0)) fail(ErrorCode::BAD_INPUT, "ridge must be positive");
  InstanceFile inst;
  inst.n = n;
  Rng rng(derive_seed(seed, 102, 0));
  inst.b = coupled_family(m, n, rng);
  std::vector<double> lambda_star(m);
  for (std::size_t i = 0; i < m; ++i) lambda_star[i] = rng.uniform(-1.0, 1.0);
  // P = G G^* normalized + ridge * I is positive definite with min_eig >= ridge.
  std::vector<CVec> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) g[i][j] = cplx(rng.gaussian(), rng.gaussian());
  }
  std::vector<cplx> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += g[i][k] * std::conj(g[j][k]);
      p[i * n + j] = sum;
    }
  for (std::size_t i = 0; i < n; ++i) {
    p[i * n + i] = cplx(p[i * n + i].real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx avg = 0.5 * (p[i * n + j] + std::conj(p[j * n + i]));
      p[i * n + j] = avg;
      p[j * n + i] = std::conj(avg);
    }
  }
  HermitianMatrix pmat(n, std::move(p));
  pmat = pmat.times(1.0 / spectral_norm(pmat)).plus(HermitianMatrix::identity(n), ridge);
  HermitianMatrix a = pmat;
  for (std::size_t i = 0; i < m; ++i) a = a.plus(inst.b[i], -lambda_star[i]);
  inst.a = a;
  inst.metadata["name"] = "feasible";
  inst.metadata["m"] = m;
  inst.metadata["n"] = n;
  inst.metadata["seed"] = seed;
  inst.metadata["ridge"] = ridge;
  Json ls = Json::array();
  for (double v : lambda_star) ls.push_back(v);
  inst.metadata["lambda_star"] = std::move(ls);
  return inst;
}

InstanceFile gen_feasible_m2(std::size_t n, std::uint64_t seed, double ridge) {
  InstanceFile inst = gen_feasible(2, n, seed, ridge);
  inst.metadata["name"] = "feasible-m2";
  return inst;
}

InstanceFile generate_instance(const std::string& kind, std::size_t m, std::size_t n,
                               std::uint64_t seed, double ridge) {
  if (kind == "reference-family") return gen_reference_family();
  if (kind == "strongly-indefinite") return gen_strongly_indefinite(m, n, seed);
  if (kind == "indefinite-pair") return gen_indefinite_pair(n, seed);
  if (kind == "feasible") return gen_feasible(m, n, seed, ridge);
  if (kind == "feasible-m2") return gen_feasible_m2(n, seed, ridge);
  fail(ErrorCode::BAD_INPUT, "unknown generator kind: " + kind);
}

Json cert_report_json(const CertReport& rep) {
  Json j = Json::object();
  j["verdict"] = verdict_name(rep.verdict);
  j["vacuous"] = rep.vacuous;
  j["summary"] = rep.summary;
  if (rep.witness) {
    Json w = Json::object();
    if (!rep.witness->mu.empty()) {
      Json mu = Json::array();
      for (double v : rep.witness->mu) mu.push_back(v);
      w["mu"] = std::move(mu);
    }
    if (!rep.witness->vectors.empty()) {
      Json vs = Json::array();
      for (const CVec& v : rep.witness->vectors) vs.push_back(vector_json(v));
      w["vectors"] = std::move(vs);
    }
    if (!rep.witness->members.empty()) {
      Json ms = Json::array();
      for (std::size_t i : rep.witness->members) ms.push_back(i + 1);  // 1-based in reports
      w["members"] = std::move(ms);
    }
    if (!rep.witness->details.empty()) {
      Json d = Json::object();
      for (const auto& [k, v] : rep.witness->details) d[k] = v;
      w["details"] = std::move(d);
    }
    j["witness"] = std::move(w);
  }
  if (!rep.achieved.empty()) {
    Json a = Json::object();
    for (const auto& [k, v] : rep.achieved) a[k] = v;
    j["achieved"] = std::move(a);
  }
  return j;
}

Json feasible_point_json(const FeasiblePoint& fp) {
  Json j = Json::object();
  Json lam = Json::array();
  for (double v : fp.lambda) lam.push_back(v);
  j["lambda"] = std::move(lam);
  j["min_eig"] = fp.min_eig;
  Json tr = Json::array();
  for (const auto& lt : fp.trace) {
    Json l = Json::object();
    l["member"] = lt.member + 1;  // 1-based in reports
    l["window"] = Json::array({lt.lo, lt.hi});
    l["lambda"] = lt.lambda;
    if (lt.witness) {
      Json w = Json::object();
      w["x_minus"] = vector_json(lt.witness->x_minus);
      w["x_plus"] = vector_json(lt.witness->x_plus);
      w["theta"] = lt.witness->theta;
      w["t_plus"] = lt.witness->t0;
      w["t_minus"] = lt.t_minus;
      l["segment_witness"] = std::move(w);
    }
    tr.push_back(std::move(l));
  }
  j["trace"] = std::move(tr);
  return j;
}

}  // namespace pencil
