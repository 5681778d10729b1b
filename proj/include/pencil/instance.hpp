#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pencil/certificates.hpp"
#include "pencil/family.hpp"
#include "pencil/indefiniteness.hpp"
#include "pencil/solver.hpp"

namespace pencil {

using Json = nlohmann::ordered_json;

// On-disk problem instance.  Schema version "1":
//   { "schema_version": "1", "n": <int>, "A": <matrix>?, "B": [<matrix>...],
//     "metadata": <object>? }
// where <matrix> is an array of n rows of n entries and an entry is either a
// real number or a [re, im] pair.  Serialization writes real entries as plain
// numbers, making generate -> parse -> serialize byte-stable.
struct InstanceFile {
  std::string schema_version = "1";
  std::size_t n = 0;
  std::optional<HermitianMatrix> a;
  std::vector<HermitianMatrix> b;
  Json metadata = Json::object();

  PencilFamily family() const { return PencilFamily(b); }
};

InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);
std::string serialize_instance(const InstanceFile& inst, int indent = 2);
void save_instance(const InstanceFile& inst, const std::string& path, int indent = 2);

// Signed witness hints stored under metadata["witnesses"]:
//   [{ "member": <1-based int>, "sign": +1|-1, "x": [<entry>...] }, ...]
std::vector<SignedWitnessHint> witness_hints(const InstanceFile& inst);

// ---------------------------------------------------------------------------
// Generators (all deterministic in their arguments).
// ---------------------------------------------------------------------------

// The four-member reference family on C^4: an indefinite set whose strong
// indefiniteness fails, with the eight signed witness vectors in metadata.
InstanceFile gen_reference_family();

// m rank-2 coupled forms on C^n (n >= m + 1), conjugated by a seeded random
// unitary: weakly indefinite, an indefinite set, and strongly indefinite by
// construction.
InstanceFile gen_strongly_indefinite(std::size_t m, std::size_t n, std::uint64_t seed);

// Two-member instance of the same construction.
InstanceFile gen_indefinite_pair(std::size_t n, std::uint64_t seed);

// Strongly indefinite family plus A = P - sum lambda*_i B_i with P >= ridge,
// so lambda* is a known feasible point (recorded in metadata).
InstanceFile gen_feasible(std::size_t m, std::size_t n, std::uint64_t seed, double ridge = 0.05);
InstanceFile gen_feasible_m2(std::size_t n, std::uint64_t seed, double ridge = 0.05);

// Dispatch by kind name: reference-family | strongly-indefinite | indefinite-pair |
// feasible | feasible-m2.
InstanceFile generate_instance(const std::string& kind, std::size_t m, std::size_t n,
                               std::uint64_t seed, double ridge);

// ---------------------------------------------------------------------------
// JSON encoders shared by the CLI and the tests.
// ---------------------------------------------------------------------------

Json entry_json(cplx v);
Json vector_json(const CVec& v);
Json matrix_json(const HermitianMatrix& m);
Json cert_report_json(const CertReport& rep);
Json feasible_point_json(const FeasiblePoint& fp);

}  // namespace pencil
