#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "legmcs/linalg.hpp"

namespace legmcs {

/// A finite cochain complex: generator degrees plus a degree-1 differential
/// with d^2 = 0. All cohomology in the engine funnels through this type.
struct FiniteComplex {
  std::vector<int> degrees;
  Mat d;  // d(j,i) = coefficient of generator j in d(generator i)
  Eigen::Index size() const { return d.cols(); }
};

/// Cohomology dimensions by degree, ascending; lists every degree that carries
/// a generator (possibly with dimension 0).
std::vector<std::pair<int, int>> complex_cohomology(const Field& F, const FiniteComplex& c);

bool is_acyclic(const Field& F, const FiniteComplex& c);

/// cone(f), for a chain map f: src -> tgt. Quasi-isomorphisms are detected as
/// cone acyclicity.
FiniteComplex cone(const Field& F, const FiniteComplex& src, const FiniteComplex& tgt, const Mat& f);

/// Object of MC_mu: a square-zero, strictly lower triangular, degree-1
/// differential on generators |1>,...,|n> with deg|i> = -mu(i) and decreasing
/// filtration spanned by the lower generators.
struct MCObject {
  Field F;
  std::vector<int> mu;  // mu[i] for 0-based generator i (strand i+1)
  Mat d;

  int n() const { return static_cast<int>(mu.size()); }
  FiniteComplex as_complex() const;
};

/// Validating constructor; throws FiltrationViolation / DegreeViolation /
/// NotSquareZero.
MCObject mc_new(const Field& F, std::vector<int> mu, Mat d);

/// Degree mask checks shared with the MCS layer (no d^2 check).
bool is_strictly_lower(const Mat& d);
bool degree_mask_ok(const std::vector<int>& mu, const Mat& d);        // mu(i)-mu(j)=1
bool hom_mask_ok(const std::vector<int>& mu_src, const std::vector<int>& mu_tgt, const Mat& m,
                 int degree);  // j>=i and mu_src(i)-mu_tgt(j)=degree

/// Filtration-preserving map between MC bases, with its homological degree.
struct FilteredHom {
  Field F;
  std::vector<int> mu_src, mu_tgt;
  int degree = 0;
  Mat m;
};

FilteredHom hom_identity(const Field& F, const std::vector<int>& mu);
FilteredHom hom_compose(const FilteredHom& phi, const FilteredHom& psi);  // phi after psi

/// The dg hom complex Hom(A, B): basis |j><i| with j >= i, grading
/// mu_A(i) - mu_B(j), differential D(phi) = d_B phi - (-1)^{|phi|} phi d_A.
struct HomComplex {
  std::vector<std::pair<int, int>> basis;  // (j, i), 0-based, row-major
  FiniteComplex complex;
};

HomComplex hom_complex(const MCObject& a, const MCObject& b);

/// Barannikov pairing: (i, j) means d|i> = |j> in the normal form; indices are
/// 1-based and each generator occurs at most once.
struct Barcode {
  std::vector<std::pair<int, int>> pairs;  // sorted by first entry
  std::vector<int> unpaired;               // sorted
  bool operator==(const Barcode&) const = default;
};

struct BarannikovResult {
  Barcode barcode;
  /// Filtered degree-0 invertible change of basis with P^{-1} d P in normal form.
  Mat normalizer;
};

BarannikovResult barannikov(const MCObject& a);

/// Witness of isomorphism in MC_mu (closed, degree 0, invertible, intertwining
/// the differentials), or nullopt. Decided by barcode equality.
std::optional<Mat> mc_isomorphic(const MCObject& a, const MCObject& b);

}  // namespace legmcs
