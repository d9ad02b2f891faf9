#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legmcs/mcs.hpp"

namespace legmcs {

/// Location in the plane stratification: a refined interval column or an event
/// column, plus a gap index g (0 = above all strands, n = below all strands).
/// At an event column the gap at the event's own point is g = k.
struct StalkQuery {
  enum class Loc { Interval, Event };
  Loc loc = Loc::Interval;
  int index = 0;
  int gap = 0;
};

/// The stalk complex at a query point (generators strictly below the gap).
FiniteComplex stalk_at(const MCSObject& s, const StalkQuery& q);

struct ChainMap {
  FiniteComplex src, tgt;
  Mat m;
};

/// The canonical generization map between adjacent strata: vertical moves go
/// upward across one strand (inclusion); horizontal moves go from an event
/// column to a neighboring interval. NotAdjacent otherwise.
ChainMap generization(const MCSObject& s, const StalkQuery& from, const StalkQuery& to);

/// Cohomology of the cone of the inclusion across strand i (1-based) over
/// refined interval t. Rank one in degree -mu(i) for valid objects.
std::vector<std::pair<int, int>> microstalk(const MCSObject& s, int t, int strand);

bool microstalk_is_rank_one(const std::vector<std::pair<int, int>>& table, int mu);

struct MicrosupportReport {
  bool passed = true;
  std::vector<std::string> failures;
  int generizations_checked = 0;
  int microstalks_checked = 0;
  int intervals_checked = 0;
};

/// Checks, exactly: (a) off-front generizations are quasi-isomorphisms,
/// (b) every microstalk is rank one in degree -mu, (c) stalks below all
/// strands vanish, (d) full-interval complexes are acyclic.
MicrosupportReport verify_microsupport(const MCSObject& s);

/// The Cech-style homotopy-limit complex computing Hom(S, T) in the sheaf
/// model: interval hom complexes, event pair subspaces, and one shifted arrow
/// summand per (event, adjacent interval).
class TotalComplex {
public:
  TotalComplex(const MCSObject& s, const MCSObject& t);

  const MCSObject& left() const { return s_; }
  const MCSObject& right() const { return t_; }

  int dim_at(int degree) const;
  Mat differential_at(int degree) const;  // C^degree -> C^{degree+1}
  int min_degree() const { return deg_min_; }
  int max_degree() const { return deg_max_; }

  std::vector<std::pair<int, int>> cohomology() const;
  long long euler_characteristic() const;

  /// Coordinates in C^0 of a strict cocycle given by per-interval maps
  /// (arrow components zero); the family must satisfy the event relations.
  Vec embed_strict(const std::vector<Mat>& family) const;

private:
  struct Gen {
    enum class Kind { IntervalHom, EventPair, Arrow };
    Kind kind;
    int stratum;  // interval index / column index
    int side;     // arrows: 0 = left target, 1 = right target
    int local;    // index into the interval hom basis or the pair kernel basis
  };

  explicit TotalComplex(std::pair<MCSObject, MCSObject> refined);
  friend struct TotalAssembler;

  MCSObject s_, t_;
  Field F_;
  int deg_min_ = 0, deg_max_ = -1;
  std::vector<HomComplex> interval_homs_;                  // per refined interval
  std::map<std::pair<int, int>, Mat> pair_kernels_;        // (column, degree) -> kernel basis
  std::map<std::pair<int, int>, std::vector<int>> pairL_;  // deg-n hom indices, left/right
  std::map<std::pair<int, int>, std::vector<int>> pairR_;
  std::map<int, std::vector<Gen>> gens_;
};

TotalComplex hom_total(const MCSObject& s, const MCSObject& t);

/// Endomorphism cohomology table of S; equals the generating family homology
/// (degrees unshifted).
std::vector<std::pair<int, int>> gf_homology(const MCSObject& s);

struct EndRingReport {
  std::vector<std::pair<int, int>> cohomology;
  int h0_dim = 0;
  std::vector<std::int64_t> unit;                           // coordinates in the H^0 basis
  std::vector<std::vector<std::vector<std::int64_t>>> table;  // table[i][j] = coords of e_i e_j
  bool unital = false;
  bool associative = false;
};

/// Ring structure on H^0 of End(S) via strict-cocycle representatives;
/// NonStrictRepresentative when some class has no strict representative.
EndRingReport end_ring(const MCSObject& s);

}  // namespace legmcs
