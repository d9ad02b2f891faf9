#pragma once

#include <random>

#include "legmcs/enumerate.hpp"
#include "legmcs/mcs.hpp"

namespace legmcs::testsupport {

using Rng = std::mt19937;

inline std::int64_t pick(Rng& rng, std::int64_t n) {
  return static_cast<std::int64_t>(rng() % static_cast<unsigned long>(n));
}

inline Mat random_matrix(Rng& rng, const Field& F, Eigen::Index rows, Eigen::Index cols) {
  Mat m = zeros(F, rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Fp(pick(rng, F.modulus()), F);
  return m;
}

/// Random filtered degree-0 invertible map: unit diagonal entries, random
/// strictly-lower entries wherever mu allows them.
inline Mat random_filtered_auto(Rng& rng, const Field& F, const std::vector<int>& mu) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  Mat g = zeros(F, n, n);
  for (Eigen::Index i = 0; i < n; ++i) g(i, i) = Fp(1 + pick(rng, F.modulus() - 1), F);
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (mu[static_cast<size_t>(i)] == mu[static_cast<size_t>(j)])
        g(j, i) = Fp(pick(rng, F.modulus()), F);
  return g;
}

/// Random valid MCObject: choose a random Barannikov pairing compatible with
/// mu, then conjugate the normal form by a random filtered automorphism.
inline MCObject random_mc_object(Rng& rng, const Field& F, const std::vector<int>& mu) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  Mat d = zeros(F, n, n);
  std::vector<bool> used(mu.size(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    std::vector<Eigen::Index> partners;
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (!used[static_cast<size_t>(j)] &&
          mu[static_cast<size_t>(i)] - mu[static_cast<size_t>(j)] == 1)
        partners.push_back(j);
    if (partners.empty() || pick(rng, 2) == 0) continue;
    Eigen::Index j = partners[static_cast<size_t>(pick(rng, static_cast<std::int64_t>(partners.size())))];
    used[static_cast<size_t>(i)] = used[static_cast<size_t>(j)] = true;
    d(j, i) = Fp(1, F);
  }
  Mat g = random_filtered_auto(rng, F, mu);
  return mc_new(F, mu, (g * d * inverse(g)).eval());
}

inline std::vector<int> random_mu(Rng& rng, int n, int spread = 3) {
  std::vector<int> mu(static_cast<size_t>(n));
  for (int& m : mu) m = 1 + static_cast<int>(pick(rng, spread));
  return mu;
}

/// A valid MCS object on the front with random handle slides, built left to
/// right: slides conjugate the running differential, crossings/deaths are
/// forced, births take a random valid extension. The whole build is retried
/// when a slide breaks a downstream crossing's forced zero.
inline MCSObject random_mcs_with_slides(Rng& rng, const FrontDiagram& front, const Field& F,
                                        int baseline, int target_slides) {
  MaslovPotential maslov = compute_maslov(front, baseline);
  const auto m = front.events().size();

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<int> quota(m, 0);  // slides inserted just before each event
    for (int i = 0; i < target_slides; ++i)
      quota[static_cast<size_t>(pick(rng, static_cast<std::int64_t>(m)))]++;

    MCSObject s{front, F, baseline, maslov, {}, {}};
    Mat d = zeros(F, 0, 0);
    s.intervals.push_back(d);
    bool ok = true;
    for (size_t e = 0; e < m && ok; ++e) {
      const FrontEvent& ev = front.events()[e];
      const std::vector<int>& mu = maslov.per_interval[e];
      for (int q = 0; q < quota[e] && !mu.empty(); ++q) {
        Mat g = random_filtered_auto(rng, F, mu);
        d = (g * d * inverse(g)).eval();
        s.columns.push_back(MCSColumn{true, -1, g});
        s.intervals.push_back(d);
      }
      switch (ev.kind) {
        case EventKind::Crossing:
          if (!d(ev.pos, ev.pos - 1).is_zero()) {
            ok = false;
            break;
          }
          d = crossing_image(d, ev.pos);
          break;
        case EventKind::RightCusp:
          if (d(ev.pos, ev.pos - 1).is_zero()) {
            ok = false;
            break;
          }
          d = death_quotient(F, d, ev.pos);
          break;
        case EventKind::LeftCusp: {
          auto exts = birth_extensions(F, d, maslov.per_interval[e + 1], ev.pos);
          d = exts[static_cast<size_t>(pick(rng, static_cast<std::int64_t>(exts.size())))];
          break;
        }
      }
      if (!ok) break;
      s.columns.push_back(MCSColumn{false, static_cast<int>(e), Mat()});
      s.intervals.push_back(d);
    }
    if (ok) return s;
  }
  fail("Internal", "random MCS generator could not satisfy the crossing constraints");
}

inline const char* kUnknot = "L1 R1";
inline const char* kTrefoil = "L1 L1 X2 X2 X2 R1 R1";

}  // namespace legmcs::testsupport
