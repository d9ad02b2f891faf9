#pragma once

#include <optional>
#include <string>
#include <vector>

#include "legmcs/front.hpp"
#include "legmcs/mc.hpp"

namespace legmcs {

/// One column of the refined timeline: either a front event (by index into the
/// front's event list) or a formal handle slide with its degree-0 isomorphism.
/// A slide column's matrix g relates the neighboring differentials by
/// d_right = g d_left g^{-1}.
struct MCSColumn {
  bool is_slide = false;
  int front_event = -1;  // valid when !is_slide
  Mat slide;             // valid when is_slide
};

/// Morse complex sequence over a plat front: one differential per refined
/// x-interval, event data per column. Plain data; use mcs_validate for the
/// local conditions. Gluing isomorphisms are not stored: nontrivial gluings
/// must be presented as extra slide columns.
struct MCSObject {
  FrontDiagram front;
  Field F;
  int baseline = 1;
  MaslovPotential maslov;          // per front interval
  std::vector<MCSColumn> columns;  // refined timeline, left to right
  std::vector<Mat> intervals;      // refined differentials, size columns.size()+1

  int column_count() const { return static_cast<int>(columns.size()); }
  int refined_interval_count() const { return static_cast<int>(intervals.size()); }
  /// Front interval containing refined interval t.
  int front_interval_of(int t) const;
  const std::vector<int>& mu_at(int t) const;
  int n_at(int t) const { return static_cast<int>(mu_at(t).size()); }
  MCObject object_at(int t) const;  // validating
};

/// Strict object: differentials per *front* interval, no slides.
MCSObject make_strict_mcs(const FrontDiagram& front, const Field& F, int baseline,
                          std::vector<Mat> interval_d);

struct Diagnostic {
  std::string locus;  // "interval" or "event"
  int index = 0;      // refined interval index / column index
  std::string code;
  std::string detail;
};

/// Empty iff every structural and event-local condition holds.
std::vector<Diagnostic> mcs_validate(const MCSObject& s);

// --- event-local algebra (0-based positions derived from 1-based k) ---

/// s d s for the crossing at strands k, k+1.
Mat crossing_image(const Mat& d, int k);
/// Projection pi: V -> V/(|k>, d|k>) for an invertible cusp entry <k+1|d|k>.
Mat death_projection(const Field& F, const Mat& d, int k);
/// Differential induced by pi on the quotient.
Mat death_quotient(const Field& F, const Mat& d, int k);
/// All valid extensions of d across a birth at k (new generators at k, k+1),
/// lexicographically ordered over the free entries in row-major order.
std::vector<Mat> birth_extensions(const Field& F, const Mat& d_minus,
                                  const std::vector<int>& mu_new, int k);

/// g = (product of elementary factors) * diagonal, factors ordered by the
/// row-reduction schedule (columns left to right, rows bottom to top). Every
/// factor is 1 + c|j><i| with mu(i) = mu(j).
struct ElementaryFactorization {
  std::vector<Mat> factors;
  Mat diagonal;
};

ElementaryFactorization factor_handle_slide(const Field& F, const std::vector<int>& mu,
                                            const Mat& g);

/// Move the diagonal slide at column `at` one event to the right (conjugating
/// through crossings and slides, extending through births, absorbing at
/// deaths). Identity diagonals are simply deleted.
MCSObject push_diagonal_right(const MCSObject& s, int at);

/// Isomorphic object whose only handle slides are elementary: factor every
/// slide, splice the factors, then push every diagonal right to absorption.
MCSObject normalize_elementary(const MCSObject& s);

/// Remove the slide at column `at` by pushing it rightward to extinction
/// (merging into the next slide, passing crossings/cusps). Errors:
/// ObstructedAtCrossing / ObstructedAtDeath when the slide cannot pass.
MCSObject remove_handle_slide(const MCSObject& s, int at);

/// Componentwise morphism data for a pair of refined-aligned objects.
struct MCSHom {
  std::vector<Mat> per_interval;
};

/// Refine two objects over the same front to a common set of 0-strata
/// (identity slides inserted; s's slides placed left of t's in each region).
std::pair<MCSObject, MCSObject> common_refinement(const MCSObject& s, const MCSObject& t);

/// The strict degree-0 cocycle space between refined-aligned objects, as a
/// homogeneous linear system: variables are the deg-0 lower-triangular entries
/// of the per-interval maps.
struct StrictHomSystem {
  struct Var {
    int interval;
    int j, i;  // 0-based entry of phi_interval
  };
  std::vector<Var> vars;
  Mat kernel;  // columns = basis of the cocycle space, in var coordinates
  std::vector<Mat> materialize(const MCSObject& s, const Vec& coeffs) const;
};

StrictHomSystem strict_hom_system(const MCSObject& s, const MCSObject& t);

/// Exhaustive search of the strict cocycle space for a componentwise-invertible
/// element; SearchSpaceTooLarge (with the dimension) when q^dim exceeds bound.
std::optional<MCSHom> mcs_isomorphic(const MCSObject& s, const MCSObject& t,
                                     long long search_bound = 1'000'000);

/// Exact check that phi is a strict isomorphism s -> t (used by tests and
/// class grouping).
bool verify_mcs_witness(const MCSObject& s, const MCSObject& t, const MCSHom& phi);

}  // namespace legmcs
