#pragma once

#include <vector>

#include "legmcs/mcs.hpp"

namespace legmcs {

struct EnumerationOptions {
  long long branch_cap = 10'000'000;
  long long search_bound = 1'000'000;  // for the isomorphism grouping
};

/// All strict (no-slide, identity-gluing) microlocal-rank-one objects over the
/// front, in the deterministic order given by lexicographic branch choices.
struct EnumerationResult {
  std::vector<MCSObject> objects;
  long long branches_explored = 0;
  long long strict_count() const { return static_cast<long long>(objects.size()); }
};

EnumerationResult enumerate_strict(const FrontDiagram& front, const Field& F, int baseline = 1,
                                   const EnumerationOptions& opts = {});

/// Partition into isomorphism classes; class_of[i] is the class of objects[i],
/// representatives[c] indexes the first member of class c. Witnesses are
/// verified exactly before two objects are identified.
struct IsoClasses {
  std::vector<int> class_of;
  std::vector<int> representatives;
  std::vector<int> sizes;
  int count() const { return static_cast<int>(representatives.size()); }
};

IsoClasses group_iso_classes(const std::vector<MCSObject>& objects,
                             long long search_bound = 1'000'000);

}  // namespace legmcs
