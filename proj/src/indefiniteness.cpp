#include "pencil/indefiniteness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pencil/optim_util.hpp"
#include "pencil/rng.hpp"

namespace pencil {

namespace {

// Relative indefiniteness margin of M(mu) = sum mu_i B_i: min(-l_min, l_max)
// over the spectral norm.  <= 0 for semidefinite combinations; dependent
// combinations (M = 0) count as semidefinite.
double rel_margin(const PencilFamily& f, const std::vector<double>& mu, double* abs_margin,
                  double* lo_out = nullptr, double* hi_out = nullptr) {
  HermitianMatrix m = f.member(0).times(mu[0]);
  for (std::size_t i = 1; i < f.size(); ++i) m = m.plus(f.member(i), mu[i]);
  auto d = eig(m);
  double lo = d.values.front(), hi = d.values.back();
  if (lo_out) *lo_out = lo;
  if (hi_out) *hi_out = hi;
  double nrm = std::max(std::abs(lo), std::abs(hi));
  double margin = std::min(-lo, hi);
  if (abs_margin) *abs_margin = margin;
  if (nrm <= 0.0) return 0.0;  // exactly dependent: semidefinite (zero)
  return margin / nrm;
}

std::vector<double> normalized_mu(std::vector<double> mu) {
  double n = 0.0;
  for (double v : mu) n += v * v;
  n = std::sqrt(n);
  if (n > 0.0)
    for (double& v : mu) v /= n;
  return mu;
}

// Harvests up to `want` mutually distinct unit vectors x with
// sign * q_{B_target} >= margin while q = 0 on the listed constraints.
std::vector<CVec> harvest_signed(const PencilFamily& f, std::size_t target,
                                 const std::vector<std::size_t>& constraint_idx, int sign,
                                 std::size_t want, const SamplerBudget& sb, std::uint64_t tag) {
  std::vector<const HermitianMatrix*> cons;
  cons.reserve(constraint_idx.size());
  for (std::size_t i : constraint_idx) cons.push_back(&f.member(i));
  HermitianMatrix push = f.member(target).times(sign > 0 ? -1.0 : 1.0);
  auto all = sphere_search_all(&push, cons, f.dim(), sb, tag);
  double margin = 1e-7 * f.member_norm(target);
  std::vector<CVec> out;
  for (const auto& r : all) {
    if (!r.feasible) continue;
    if (sign * quadratic_form(f.member(target), r.argmin) < margin) continue;
    bool distinct = true;
    for (const CVec& e : out)
      if (phase_distance(r.argmin, e) < 0.02) {
        distinct = false;
        break;
      }
    if (distinct) out.push_back(r.argmin);
    if (out.size() >= want) break;
  }
  return out;
}

std::string member_list(std::size_t i, std::size_t j, std::size_t k) {
  return "{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
         "}";
}

}  // namespace

CertReport is_weakly_indefinite(const PencilFamily& f, const CertBudget& budget) {
  const std::size_t m = f.size();
  std::vector<std::vector<double>> grid;
  // Structured directions first: axes and pair diagonals (the latter catch
  // rank-1 cancellations like B_1 = -B_2 exactly).
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> mu(m, 0.0);
    mu[i] = 1.0;
    grid.push_back(mu);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (double s : {1.0, -1.0}) {
        std::vector<double> mu(m, 0.0);
        mu[i] = std::numbers::sqrt2 / 2.0;
        mu[j] = s * std::numbers::sqrt2 / 2.0;
        grid.push_back(mu);
      }
  const int total = std::max<int>(budget.grid, static_cast<int>(grid.size()));
  if (m == 2) {
    int g = total - static_cast<int>(grid.size());
    for (int k = 0; k < g; ++k) {
      double th = std::numbers::pi * k / std::max(1, g);
      grid.push_back({std::cos(th), std::sin(th)});
    }
  } else if (m > 2) {
    std::uint64_t k = 0;
    while (static_cast<int>(grid.size()) < total) {
      Rng rng(derive_seed(budget.seed, oracle_tags::kWeakGrid, k++));
      std::vector<double> mu(m);
      double nn = 0.0;
      for (double& v : mu) {
        v = rng.gaussian();
        nn += v * v;
      }
      if (nn <= 1e-12) continue;
      nn = std::sqrt(nn);
      for (double& v : mu) v /= nn;
      grid.push_back(std::move(mu));
    }
  }

  struct Hit {
    double rel;
    double abs;
    std::vector<double> mu;
    double lo, hi;
  };
  std::vector<Hit> hits;
  hits.reserve(grid.size());
  for (auto& mu : grid) {
    Hit h;
    h.mu = mu;
    h.rel = rel_margin(f, mu, &h.abs, &h.lo, &h.hi);
    hits.push_back(std::move(h));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.rel < b.rel; });

  // Refine the most suspicious directions (skip for m = 1: nothing to vary).
  Hit best = hits.front();
  if (m >= 2) {
    std::size_t refine = std::min<std::size_t>(8, hits.size());
    for (std::size_t r = 0; r < refine; ++r) {
      auto obj = [&](const std::vector<double>& y) {
        double nn = 0.0;
        for (double v : y) nn += v * v;
        if (nn <= 1e-16) return 1.0;
        return rel_margin(f, normalized_mu(y), nullptr);
      };
      auto [ym, fm] = nelder_mead(obj, hits[r].mu, 0.15, 200);
      if (fm < best.rel) {
        best.mu = normalized_mu(ym);
        best.rel = rel_margin(f, best.mu, &best.abs, &best.lo, &best.hi);
      }
    }
  }

  CertReport rep;
  rep.achieved["worst_rel_margin"] = best.rel;
  rep.achieved["worst_abs_margin"] = best.abs;
  rep.achieved["directions_tested"] = static_cast<double>(grid.size());
  if (best.rel <= 1e-9) {
    rep.verdict = Verdict::REFUTED;
    rep.summary = "found a real combination that is semidefinite at resolution";
    CertWitness w;
    w.mu = best.mu;
    w.details["min_eig"] = best.lo;
    w.details["max_eig"] = best.hi;
    w.details["rel_margin"] = best.rel;
    rep.witness = std::move(w);
  } else {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "all sampled real combinations are indefinite with positive margin";
    CertWitness w;
    w.mu = best.mu;  // worst direction found, for reproducibility
    w.details["rel_margin"] = best.rel;
    rep.witness = std::move(w);
  }
  return rep;
}

CertReport sufficient_weak_check(const PencilFamily& f, const CertBudget& budget) {
  const std::size_t m = f.size();
  CertReport rep;
  std::vector<CVec> found;
  double best_rank = 0.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    SamplerBudget sb = budget.sampler.with_seed(derive_seed(budget.seed, 21, attempt));
    auto x = find_common_neutral(f, std::nullopt, sb, &found);
    if (!x) break;
    found.push_back(*x);
    // Real differential stack: columns [Re(B_i x); Im(B_i x)] in R^{2n}.
    // Column rank via the m x m Gram matrix (real inner products).
    std::vector<CVec> cols(m);
    for (std::size_t i = 0; i < m; ++i) cols[i] = f.member(i).apply(*x);
    std::vector<cplx> gram(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) gram[i * m + j] = rdot(cols[i], cols[j]);
    auto gd = eig(HermitianMatrix(m, gram));
    double smax = std::sqrt(std::max(0.0, gd.values.back()));
    std::size_t rank = 0;
    for (double v : gd.values)
      if (std::sqrt(std::max(0.0, v)) > 1e-8 * smax) ++rank;
    best_rank = std::max(best_rank, static_cast<double>(rank));
    if (rank == m) {
      rep.verdict = Verdict::CONFIRMED;
      rep.summary = "common neutral vector with full-rank real differential stack";
      CertWitness w;
      w.vectors.push_back(*x);
      for (std::size_t k = 0; k < m; ++k)
        w.details["sigma_" + std::to_string(k + 1)] =
            std::sqrt(std::max(0.0, gd.values[m - 1 - k]));
      rep.witness = std::move(w);
      rep.achieved["rank"] = static_cast<double>(rank);
      return rep;
    }
  }
  rep.verdict = Verdict::INCONCLUSIVE;
  rep.summary = found.empty()
                    ? "no common neutral vector found at this budget"
                    : "common neutral vectors found, but none with a full-rank stack";
  rep.achieved["candidates"] = static_cast<double>(found.size());
  rep.achieved["best_rank"] = best_rank;
  return rep;
}

CertReport is_indefinite_set(const PencilFamily& f, const CertBudget& budget,
                             const std::vector<SignedWitnessHint>& hints) {
  const std::size_t m = f.size();
  if (m < 2) fail(ErrorCode::BAD_INPUT, "indefinite-set check needs at least two members");
  CertReport rep;
  CertWitness wit;
  bool all_found = true;
  int hints_used = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (int sign : {+1, -1}) {
      std::string key = "q_" + std::to_string(j + 1) + (sign > 0 ? "+" : "-");
      // Try externally supplied witnesses first.
      const CVec* accepted = nullptr;
      CVec accepted_storage;
      for (const auto& h : hints) {
        if (h.member != j || h.sign != sign || h.x.size() != f.dim()) continue;
        double nx2 = norm2(h.x);
        if (!(nx2 > 0.0)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
          if (i == j) continue;
          double rel = std::abs(quadratic_form(f.member(i), h.x)) / (f.member_norm(i) * nx2);
          if (rel > 1e-9) ok = false;
        }
        double margin = sign * quadratic_form(f.member(j), h.x) / (f.member_norm(j) * nx2);
        if (ok && margin >= 1e-3) {
          accepted_storage = scaled(h.x, 1.0 / std::sqrt(nx2));
          accepted = &accepted_storage;
          ++hints_used;
          rep.achieved[key] = sign * quadratic_form(f.member(j), accepted_storage);
          break;
        }
      }
      if (!accepted) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < m; ++i)
          if (i != j) others.push_back(i);
        SamplerBudget sb = budget.sampler.with_seed(
            derive_seed(budget.seed, oracle_tags::kIndefSet, j * 2 + (sign > 0 ? 0 : 1)));
        auto got = harvest_signed(f, j, others, sign, 1, sb, oracle_tags::kIndefSet);
        if (!got.empty()) {
          accepted_storage = got.front();
          accepted = &accepted_storage;
          rep.achieved[key] = sign * quadratic_form(f.member(j), accepted_storage);
        } else {
          all_found = false;
          rep.achieved[key] = 0.0;
        }
      }
      if (accepted) {
        wit.vectors.push_back(*accepted);
        wit.members.push_back(j);
        wit.details[key] = sign * quadratic_form(f.member(j), *accepted);
      }
    }
  }
  rep.achieved["hints_accepted"] = hints_used;
  if (all_found) {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "every member attains both signs on the common neutral set of the others";
    rep.witness = std::move(wit);
  } else {
    rep.verdict = Verdict::INCONCLUSIVE;
    rep.summary = "some sign witnesses were not found at this budget";
    if (!wit.vectors.empty()) rep.witness = std::move(wit);
  }
  return rep;
}

CertReport is_strongly_indefinite(const PencilFamily& f, const CertBudget& budget) {
  const std::size_t m = f.size();
  if (m < 2) fail(ErrorCode::BAD_INPUT, "strong-indefiniteness check needs at least two members");
  CertReport weak = is_weakly_indefinite(f, budget);
  if (weak.verdict == Verdict::REFUTED) {
    weak.summary = "not weakly indefinite: " + weak.summary;
    return weak;
  }
  CertReport rep;
  if (m == 2) {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "two-member weakly indefinite families have no trios to violate";
    rep.achieved = weak.achieved;
    return rep;
  }
  const std::size_t per_side = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(std::ceil(std::sqrt(double(budget.pairs))))));
  bool starved = false;
  std::string starved_trio;
  int ambiguous = 0;
  double worst_mis = 0.0;
  long pairs_tested = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        std::vector<std::size_t> cons = {j, k};
        std::uint64_t code = ((i * m + j) * m + k);
        SamplerBudget sbp = budget.sampler.with_seed(
            derive_seed(budget.seed, oracle_tags::kStrongHarvest, code * 2));
        SamplerBudget sbm = budget.sampler.with_seed(
            derive_seed(budget.seed, oracle_tags::kStrongHarvest, code * 2 + 1));
        auto plus = harvest_signed(f, i, cons, +1, per_side, sbp, oracle_tags::kStrongHarvest);
        auto minus = harvest_signed(f, i, cons, -1, per_side, sbm, oracle_tags::kStrongHarvest);
        if (plus.empty() || minus.empty()) {
          starved = true;
          if (starved_trio.empty()) starved_trio = member_list(i, j, k);
          continue;
        }
        int budget_left = budget.pairs;
        for (std::size_t a = 0; a < plus.size() && budget_left > 0; ++a) {
          for (std::size_t b = 0; b < minus.size() && budget_left > 0; ++b, --budget_left) {
            ++pairs_tested;
            cplx cj = cross_term(f.member(j), plus[a], minus[b]);
            cplx ck = cross_term(f.member(k), plus[a], minus[b]);
            if (std::abs(cj) <= 1e-12 * f.member_norm(j) ||
                std::abs(ck) <= 1e-12 * f.member_norm(k))
              continue;  // degenerate cross term: alignment holds vacuously
            double mis = std::abs(std::imag(cj * std::conj(ck))) / (std::abs(cj) * std::abs(ck));
            worst_mis = std::max(worst_mis, mis);
            if (mis <= 1e-9) continue;
            if (mis >= 1e-3) {
              CertReport out;
              out.verdict = Verdict::REFUTED;
              out.summary = "misaligned cross terms for trio " + member_list(i, j, k);
              CertWitness w;
              w.vectors = {plus[a], minus[b]};
              w.members = {i, j, k};
              w.details["c_j_re"] = cj.real();
              w.details["c_j_im"] = cj.imag();
              w.details["c_k_re"] = ck.real();
              w.details["c_k_im"] = ck.imag();
              w.details["misalignment"] = mis;
              out.witness = std::move(w);
              out.achieved["pairs_tested"] = static_cast<double>(pairs_tested);
              return out;
            }
            ++ambiguous;
          }
        }
      }
    }
  }
  rep.achieved["pairs_tested"] = static_cast<double>(pairs_tested);
  rep.achieved["worst_misalignment"] = worst_mis;
  if (starved) {
    rep.verdict = Verdict::INCONCLUSIVE;
    rep.summary = "sign-witness harvest starved for trio " + starved_trio;
  } else if (ambiguous > 0) {
    rep.verdict = Verdict::INCONCLUSIVE;
    rep.summary = "cross-term misalignments fall between the pass and refute thresholds";
  } else {
    rep.verdict = Verdict::CONFIRMED;
    rep.summary = "all harvested witness pairs have aligned cross terms";
  }
  return rep;
}

CertReport hm_check(const PencilFamily& f, const CertBudget& budget) {
  const std::size_t m = f.size();
  if (m < 3) fail(ErrorCode::BAD_INPUT, "plane-section check needs at least three members");
  CertReport weak = is_weakly_indefinite(f, budget);
  if (weak.verdict == Verdict::REFUTED) {
    weak.summary = "not weakly indefinite: " + weak.summary;
    return weak;
  }

  const int target = std::max(16, budget.planes);
  std::vector<PlaneSection> planes;
  planes.reserve(static_cast<std::size_t>(target));

  // Biased half: planes spanned by harvested sign-witness pairs with the
  // phase of the second leg rotated to null one of the constraint cross
  // terms.  These are exactly the sections on which a misaligned family
  // degenerates, so they do the refuting work.
  for (std::size_t i = 0; i < m && static_cast<int>(planes.size()) < target / 2; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        if (static_cast<int>(planes.size()) >= target / 2) break;
        std::vector<std::size_t> cons = {j, k};
        std::uint64_t code = ((i * m + j) * m + k);
        SamplerBudget sbp =
            budget.sampler.with_seed(derive_seed(budget.seed, oracle_tags::kHmPlanes, code * 2));
        SamplerBudget sbm = budget.sampler.with_seed(
            derive_seed(budget.seed, oracle_tags::kHmPlanes, code * 2 + 1));
        auto plus = harvest_signed(f, i, cons, +1, 2, sbp, oracle_tags::kHmPlanes);
        auto minus = harvest_signed(f, i, cons, -1, 2, sbm, oracle_tags::kHmPlanes);
        for (const CVec& xp : plus) {
          for (const CVec& xm : minus) {
            for (std::size_t c : cons) {
              double th = choose_theta(f.member(c), xp, xm);
              auto pl = PlaneSection::make(xp, scaled(xm, std::polar(1.0, th)));
              if (pl && static_cast<int>(planes.size()) < target / 2)
                planes.push_back(std::move(*pl));
            }
          }
        }
      }
    }
  }
  // Common-neutral pairs add planes inside the full intersection.
  {
    std::vector<CVec> cn;
    for (int attempt = 0; attempt < 2; ++attempt) {
      SamplerBudget sb =
          budget.sampler.with_seed(derive_seed(budget.seed, oracle_tags::kHmPlanes, 1000 + attempt));
      auto x = find_common_neutral(f, std::nullopt, sb, &cn);
      if (!x) break;
      cn.push_back(*x);
    }
    if (cn.size() >= 2) {
      auto pl = PlaneSection::make(cn[0], cn[1]);
      if (pl && static_cast<int>(planes.size()) < target) planes.push_back(std::move(*pl));
    }
  }
  // Uniform half: seeded random spans.
  std::uint64_t rk = 0;
  while (static_cast<int>(planes.size()) < target) {
    Rng rng(derive_seed(budget.seed, oracle_tags::kHmPlanes, 5000 + rk++));
    CVec u = random_unit_vector(rng, f.dim());
    CVec v = random_unit_vector(rng, f.dim());
    auto pl = PlaneSection::make(u, v);
    if (pl) planes.push_back(std::move(*pl));
  }

  long exempt_sections = 0;
  long sections_checked = 0;
  for (std::size_t p = 0; p < planes.size(); ++p) {
    const PlaneSection& pl = planes[p];
    std::vector<Sym2> restricted(m);
    for (std::size_t i = 0; i < m; ++i)
      restricted[i] = pl.restrict_form(f.member(i)).times(1.0 / f.member_norm(i));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
          ++sections_checked;
          // Does the trio's common neutral set meet the plane nontrivially?
          // Minimize the sum of squared restricted forms over the circle.
          const Sym2 &ri = restricted[i], &rj = restricted[j], &rk2 = restricted[k];
          auto h = [&](double phi) {
            double cs = std::cos(phi), sn = std::sin(phi);
            double a = ri.eval(cs, sn), b = rj.eval(cs, sn), c = rk2.eval(cs, sn);
            return a * a + b * b + c * c;
          };
          double best_phi = 0.0, best_h = h(0.0);
          const int scan = 256;
          for (int t = 1; t < scan; ++t) {
            double phi = std::numbers::pi * t / scan;
            double v = h(phi);
            if (v < best_h) {
              best_h = v;
              best_phi = phi;
            }
          }
          // Golden refinement around the best sample.
          {
            double lo = best_phi - std::numbers::pi / scan;
            double hi = best_phi + std::numbers::pi / scan;
            const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = h(x1), f2 = h(x2);
            for (int it = 0; it < 60; ++it) {
              if (f1 > f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = h(x2);
              } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = h(x1);
              }
            }
            best_h = std::min(best_h, std::min(f1, f2));
          }
          if (best_h <= 1e-10) {
            ++exempt_sections;  // nontrivial intersection: the condition does not apply
            continue;
          }
          auto psd = psd_in_span_2x2(restricted[i], restricted[j], restricted[k],
                                     budget.sphere_grid);
          if (!psd) {
            CertReport out;
            out.verdict = Verdict::REFUTED;
            out.summary = "plane with trivial trio section but no nonzero psd combination, trio " +
                          member_list(i, j, k);
            CertWitness w;
            w.vectors = {pl.u(), pl.v()};
            w.members = {i, j, k};
            w.details["section_min"] = best_h;
            w.details["plane_index"] = static_cast<double>(p);
            out.witness = std::move(w);
            out.achieved["planes_tested"] = static_cast<double>(p + 1);
            return out;
          }
        }
      }
    }
  }
  CertReport rep;
  rep.verdict = Verdict::CONFIRMED;
  rep.summary = "every sampled plane admits a nonzero psd combination on all sections tested";
  rep.achieved["planes_tested"] = static_cast<double>(planes.size());
  rep.achieved["sections_checked"] = static_cast<double>(sections_checked);
  rep.achieved["exempt_sections"] = static_cast<double>(exempt_sections);
  return rep;
}

}  // namespace pencil
