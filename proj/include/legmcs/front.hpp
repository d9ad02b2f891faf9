#pragma once

#include <string>
#include <vector>

#include "legmcs/errors.hpp"

namespace legmcs {

enum class EventKind { LeftCusp, RightCusp, Crossing };

/// One event of a plat front, acting at 1-based strand position `pos` of the
/// interval to its left (LeftCusp inserts new strands at pos, pos+1).
struct FrontEvent {
  EventKind kind;
  int pos;
  bool operator==(const FrontEvent&) const = default;
};

/// Plat-position front diagram: an event word, validated so that strand counts
/// start and end at zero and every position is in range.
class FrontDiagram {
public:
  explicit FrontDiagram(std::vector<FrontEvent> events);

  /// Text format: whitespace-separated tokens [LRX]<k>, '#' comments to end of line.
  static FrontDiagram parse(const std::string& text);
  std::string render() const;

  const std::vector<FrontEvent>& events() const { return events_; }
  /// Strand counts on the events.size()+1 open x-intervals.
  const std::vector<int>& strand_counts() const { return counts_; }
  int interval_count() const { return static_cast<int>(counts_.size()); }

  bool operator==(const FrontDiagram& o) const { return events_ == o.events_; }

private:
  std::vector<FrontEvent> events_;
  std::vector<int> counts_;
};

/// Maslov potential: per interval, mu(1..n) with strand 1 topmost.
struct MaslovPotential {
  std::vector<std::vector<int>> per_interval;
};

/// Potential satisfying mu(k) = mu(k+1) + 1 at every cusp, normalized so each
/// constraint component's minimum equals `baseline`. NoPotential when a link
/// component has nonzero rotation.
MaslovPotential compute_maslov(const FrontDiagram& fd, int baseline = 1);

struct ClassicalInvariants {
  int tb = 0;
  std::vector<int> rotation;  // per component, in component discovery order
  int components = 0;
};

ClassicalInvariants classical_invariants(const FrontDiagram& fd);

enum class MoveKind { FarCommute, Braid };

/// Legendrian isotopy moves: far-commutation of the events at `at`, `at`+1
/// (disjoint strand supports, with index shifts), or the braid relation on the
/// crossings at `at`, `at`+1, `at`+2. IllegalMove when the pattern does not match.
FrontDiagram apply_move(const FrontDiagram& fd, MoveKind kind, int at);

}  // namespace legmcs
