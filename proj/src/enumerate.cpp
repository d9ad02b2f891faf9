#include "legmcs/enumerate.hpp"

namespace legmcs {

namespace {

struct Search {
  const FrontDiagram& front;
  const Field& F;
  const MaslovPotential& maslov;
  const EnumerationOptions& opts;
  int baseline;
  std::vector<Mat> path;  // differentials per interval so far
  EnumerationResult result;

  void dfs(size_t event) {
    if (++result.branches_explored > opts.branch_cap)
      fail("BranchExplosion", "branch count exceeded the cap of " +
                                  std::to_string(opts.branch_cap) + "; raise --branch-cap");
    if (event == front.events().size()) {
      result.objects.push_back(make_strict_mcs(front, F, baseline, path));
      return;
    }
    const FrontEvent& ev = front.events()[event];
    const Mat& d = path.back();
    const int k = ev.pos;
    switch (ev.kind) {
      case EventKind::Crossing: {
        if (!d(k, k - 1).is_zero()) return;  // branch dies
        path.push_back(crossing_image(d, k));
        dfs(event + 1);
        path.pop_back();
        return;
      }
      case EventKind::RightCusp: {
        if (d(k, k - 1).is_zero()) return;  // branch dies
        path.push_back(death_quotient(F, d, k));
        dfs(event + 1);
        path.pop_back();
        return;
      }
      case EventKind::LeftCusp: {
        const std::vector<int>& mu_new = maslov.per_interval[event + 1];
        for (Mat& ext : birth_extensions(F, d, mu_new, k)) {
          path.push_back(std::move(ext));
          dfs(event + 1);
          path.pop_back();
        }
        return;
      }
    }
  }
};

}  // namespace

EnumerationResult enumerate_strict(const FrontDiagram& front, const Field& F, int baseline,
                                   const EnumerationOptions& opts) {
  MaslovPotential maslov = compute_maslov(front, baseline);  // NoPotential propagates
  Search search{front, F, maslov, opts, baseline, {}, {}};
  search.path.push_back(zeros(F, 0, 0));
  search.dfs(0);
  return std::move(search.result);
}

IsoClasses group_iso_classes(const std::vector<MCSObject>& objects, long long search_bound) {
  IsoClasses out;
  out.class_of.assign(objects.size(), -1);
  for (size_t i = 0; i < objects.size(); ++i) {
    for (size_t c = 0; c < out.representatives.size(); ++c) {
      const MCSObject& rep = objects[static_cast<size_t>(out.representatives[c])];
      auto witness = mcs_isomorphic(rep, objects[i], search_bound);
      if (witness) {
        if (!verify_mcs_witness(rep, objects[i], *witness))
          fail("Internal", "isomorphism witness failed exact verification");
        out.class_of[i] = static_cast<int>(c);
        out.sizes[c]++;
        break;
      }
    }
    if (out.class_of[i] < 0) {
      out.class_of[i] = static_cast<int>(out.representatives.size());
      out.representatives.push_back(static_cast<int>(i));
      out.sizes.push_back(1);
    }
  }
  return out;
}

}  // namespace legmcs
