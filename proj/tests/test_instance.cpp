#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "pencil/eig.hpp"
#include "pencil/instance.hpp"

using namespace pencil;

TEST_CASE("reference instance: exact matrices and metadata witnesses") {
  InstanceFile ex = gen_reference_family();
  CHECK(ex.n == 4);
  REQUIRE(ex.b.size() == 4);
  // first row of the first form
  CHECK(ex.b[0](0, 0) == cplx(1.0));
  CHECK(ex.b[0](0, 1) == cplx(0.0));
  CHECK(ex.b[0](0, 2) == cplx(0.0));
  CHECK(ex.b[0](0, 3) == cplx(0.0));
  // all four are real symmetric with entries in {-1, 0, 1}
  for (const auto& b : ex.b)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(b(i, j).imag() == 0.0);
        double re = b(i, j).real();
        CHECK((re == 0.0 || re == 1.0 || re == -1.0));
      }
  CHECK(!ex.a.has_value());
  REQUIRE(ex.metadata.contains("witnesses"));
  CHECK(ex.metadata["witnesses"].size() == 8);
}

TEST_CASE("serialization round trips are byte-stable") {
  for (const char* kind : {"reference-family", "indefinite-pair", "strongly-indefinite", "feasible",
                           "feasible-m2"}) {
    InstanceFile inst = generate_instance(kind, 3, 5, 9, 0.05);
    std::string s1 = serialize_instance(inst);
    InstanceFile reparsed = parse_instance(s1);
    CHECK(serialize_instance(reparsed) == s1);
    CHECK(reparsed.n == inst.n);
    CHECK(reparsed.b.size() == inst.b.size());
  }
}

TEST_CASE("entry encoding: reals stay scalars, complex entries become pairs") {
  CHECK(entry_json(cplx(1.5, 0.0)).is_number());
  Json e = entry_json(cplx(1.5, -2.0));
  REQUIRE(e.is_array());
  CHECK(e[0].get<double>() == 1.5);
  CHECK(e[1].get<double>() == -2.0);

  InstanceFile inst = gen_strongly_indefinite(2, 4, 3);
  std::string text = serialize_instance(inst);
  InstanceFile back = parse_instance(text);
  for (std::size_t k = 0; k < inst.b.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(back.b[k](i, j) == inst.b[k](i, j));
}

TEST_CASE("generation is deterministic in the seed") {
  CHECK(serialize_instance(gen_feasible(2, 4, 7)) == serialize_instance(gen_feasible(2, 4, 7)));
  CHECK(serialize_instance(gen_feasible(2, 4, 7)) != serialize_instance(gen_feasible(2, 4, 8)));
  CHECK(serialize_instance(gen_strongly_indefinite(3, 5, 1)) !=
        serialize_instance(gen_strongly_indefinite(3, 5, 2)));
}

TEST_CASE("feasible generator records a verifying ground truth") {
  for (std::uint64_t seed : {1, 2, 3}) {
    InstanceFile inst = gen_feasible(3, 5, seed);
    REQUIRE(inst.a.has_value());
    REQUIRE(inst.metadata.contains("lambda_star"));
    HermitianMatrix p = *inst.a;
    std::size_t i = 0;
    for (const auto& v : inst.metadata["lambda_star"]) p = p.plus(inst.b[i++], v.get<double>());
    double ridge = inst.metadata["ridge"].get<double>();
    CHECK(min_eig(p) >= 0.9 * ridge);
  }
}

TEST_CASE("family generator guards and member structure") {
  try {
    gen_strongly_indefinite(4, 4, 1);  // needs n >= m + 1
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::BAD_INPUT);
  }
  InstanceFile inst = gen_strongly_indefinite(3, 6, 5);
  for (const auto& b : inst.b) {
    CHECK(classify(b).kind == DefinitenessKind::INDEFINITE);
    // rank 2: exactly two eigenvalues away from zero
    auto ed = eig(b);
    int nonzero = 0;
    for (double v : ed.values)
      if (std::abs(v) > 1e-9 * spectral_norm(b)) ++nonzero;
    CHECK(nonzero == 2);
  }
}

TEST_CASE("parse rejects malformed input with specific codes") {
  auto code_of = [](const std::string& text) {
    try {
      parse_instance(text);
      return std::string("NONE");
    } catch (const PencilError& e) {
      return std::string(error_code_name(e.code()));
    }
  };
  CHECK(code_of("this is not json") == "BAD_INPUT");
  CHECK(code_of("[]") == "BAD_INPUT");
  CHECK(code_of(R"({"schema_version":"2","n":1,"B":[[[1]]]})") == "BAD_INPUT");
  CHECK(code_of(R"({"n":1,"B":[[[1]]]})") == "BAD_INPUT");
  CHECK(code_of(R"({"schema_version":"1","n":0,"B":[]})") == "BAD_INPUT");
  CHECK(code_of(R"({"schema_version":"1","n":1,"B":[]})") == "BAD_INPUT");
  CHECK(code_of(R"({"schema_version":"1","n":2,"B":[[[1,0],[0,1]]]})") == "NONE");
  // ragged row
  CHECK(code_of(R"({"schema_version":"1","n":2,"B":[[[1,0],[0]]]})") == "DIM_MISMATCH");
  // wrong row count
  CHECK(code_of(R"({"schema_version":"1","n":2,"B":[[[1,0]]]})") == "DIM_MISMATCH");
  // non-Hermitian
  CHECK(code_of(R"({"schema_version":"1","n":2,"B":[[[0,1],[2,0]]]})") == "NOT_HERMITIAN");
  // complex diagonal
  CHECK(code_of(R"({"schema_version":"1","n":1,"B":[[[[0,1]]]]})") == "NOT_HERMITIAN");
  // bad entry shape
  CHECK(code_of(R"({"schema_version":"1","n":1,"B":[[["x"]]]})") == "BAD_INPUT");
  CHECK(code_of(R"({"schema_version":"1","n":1,"B":[[[[1,2,3]]]]})") == "BAD_INPUT");
  // A must match n too
  CHECK(code_of(R"({"schema_version":"1","n":2,"A":[[1]],"B":[[[1,0],[0,1]]]})") ==
        "DIM_MISMATCH");
  // metadata must be an object when present
  CHECK(code_of(R"({"schema_version":"1","n":1,"B":[[[1]]],"metadata":7})") == "BAD_INPUT");
}

TEST_CASE("witness hints skip malformed entries instead of failing") {
  InstanceFile ex = gen_reference_family();
  // member out of range, bad sign, missing x: all skipped
  Json& ws = ex.metadata["witnesses"];
  ws.push_back(Json{{"member", 9}, {"sign", 1}, {"x", Json::array({1, 0, 0, 0})}});
  ws.push_back(Json{{"member", 1}, {"sign", 0}, {"x", Json::array({1, 0, 0, 0})}});
  ws.push_back(Json{{"member", 1}, {"sign", 1}});
  auto hints = witness_hints(ex);
  CHECK(hints.size() == 8);
  // a wrong-length x is a hard dimension error
  ws.push_back(Json{{"member", 1}, {"sign", 1}, {"x", Json::array({1, 0})}});
  try {
    witness_hints(ex);
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::DIM_MISMATCH);
  }
}

TEST_CASE("report encoders produce self-contained JSON") {
  CertReport rep;
  rep.verdict = Verdict::REFUTED;
  rep.summary = "test";
  CertWitness w;
  w.mu = {0.5, -0.5};
  w.vectors = {CVec{cplx(0, 1), cplx(1, 0)}};
  w.members = {0, 2};
  w.details["margin"] = 1e-3;
  rep.witness = w;
  rep.achieved["directions"] = 42.0;
  Json j = cert_report_json(rep);
  CHECK(j["verdict"] == "REFUTED");
  CHECK(j["witness"]["mu"][0].get<double>() == 0.5);
  CHECK(j["witness"]["members"][1].get<int>() == 3);  // 1-based in reports
  CHECK(j["witness"]["vectors"][0][0][1].get<double>() == 1.0);
  CHECK(j["achieved"]["directions"].get<double>() == 42.0);

  FeasiblePoint fp;
  fp.lambda = {1.0, -2.0};
  fp.min_eig = 0.25;
  LevelTrace lt;
  lt.member = 1;
  lt.lo = -1;
  lt.hi = 1;
  lt.lambda = 0.5;
  fp.trace.push_back(lt);
  Json fj = feasible_point_json(fp);
  CHECK(fj["lambda"].size() == 2);
  CHECK(fj["min_eig"].get<double>() == 0.25);
  CHECK(fj["trace"][0]["member"].get<int>() == 2);
  CHECK(fj["trace"][0]["window"][0].get<double>() == -1.0);
}

TEST_CASE("load/save round trip through the filesystem") {
  InstanceFile inst = gen_feasible_m2(4, 13);
  std::string path = "instance_roundtrip_test.json";
  save_instance(inst, path);
  InstanceFile back = load_instance(path);
  CHECK(serialize_instance(back) == serialize_instance(inst));
  std::remove(path.c_str());
  try {
    load_instance("definitely_missing_file.json");
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::BAD_INPUT);
  }
}
