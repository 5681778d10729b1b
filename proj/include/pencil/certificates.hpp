#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pencil/complexmat.hpp"

namespace pencil {

enum class Verdict { CONFIRMED, REFUTED, INCONCLUSIVE };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CONFIRMED: return "CONFIRMED";
    case Verdict::REFUTED: return "REFUTED";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

// Witness payload attached to certifier verdicts.  Which fields are populated
// depends on the property being certified; `details` carries named scalars
// (margins, residuals, achieved minima) so reports stay self-describing.
struct CertWitness {
  std::vector<double> mu;          // real coefficient vector (weak refutations)
  std::vector<CVec> vectors;       // witness vectors on the sphere
  std::vector<std::size_t> members;  // member indices the witness refers to
  std::map<std::string, double> details;
};

struct CertReport {
  Verdict verdict = Verdict::INCONCLUSIVE;
  bool vacuous = false;            // positivity checks: constraint set empty at resolution
  std::string summary;             // one-line human-readable statement
  std::optional<CertWitness> witness;
  std::map<std::string, double> achieved;  // resolution-bounded diagnostics
};

}  // namespace pencil
