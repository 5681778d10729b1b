#pragma once

#include <cstddef>
#include <vector>

#include "pencil/eig.hpp"

namespace pencil {

// An ordered family {B_1, ..., B_m} of nonzero Hermitian forms on C^n.
// Spectral norms are computed once at construction; certifier tolerances are
// all relative to them.
class PencilFamily {
 public:
  PencilFamily() = default;

  explicit PencilFamily(std::vector<HermitianMatrix> members) : members_(std::move(members)) {
    if (members_.empty()) fail(ErrorCode::BAD_INPUT, "family must have at least one member");
    n_ = members_.front().dim();
    if (n_ == 0) fail(ErrorCode::BAD_INPUT, "family members must be non-empty matrices");
    norms_.reserve(members_.size());
    for (const auto& b : members_) {
      if (b.dim() != n_) fail(ErrorCode::DIM_MISMATCH, "family members must share the dimension");
      double nrm = spectral_norm(b);
      if (nrm <= 0.0) fail(ErrorCode::BAD_INPUT, "family members must be nonzero");
      norms_.push_back(nrm);
    }
  }

  std::size_t size() const { return members_.size(); }
  std::size_t dim() const { return n_; }
  const HermitianMatrix& member(std::size_t i) const { return members_.at(i); }
  double member_norm(std::size_t i) const { return norms_.at(i); }
  const std::vector<HermitianMatrix>& members() const { return members_; }

  double max_norm() const {
    double s = 0.0;
    for (double v : norms_) s = std::max(s, v);
    return s;
  }

  PencilFamily subfamily(const std::vector<std::size_t>& idx) const {
    std::vector<HermitianMatrix> ms;
    ms.reserve(idx.size());
    for (std::size_t i : idx) ms.push_back(member(i));
    return PencilFamily(std::move(ms));
  }

 private:
  std::vector<HermitianMatrix> members_;
  std::vector<double> norms_;
  std::size_t n_ = 0;
};

// A + sum_i lambda_i B_i.
inline HermitianMatrix pencil_value(const HermitianMatrix& a, const PencilFamily& f,
                                    const std::vector<double>& lambda) {
  if (lambda.size() != f.size()) fail(ErrorCode::DIM_MISMATCH, "lambda size != family size");
  if (a.dim() != f.dim()) fail(ErrorCode::DIM_MISMATCH, "A dimension != family dimension");
  HermitianMatrix acc = a;
  for (std::size_t i = 0; i < f.size(); ++i) acc = acc.plus(f.member(i), lambda[i]);
  return acc;
}

}  // namespace pencil
