#include "legmcs/mcs.hpp"

#include <algorithm>
#include <cassert>

namespace legmcs {

namespace {

bool is_diagonal(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && !m(i, j).is_zero()) return false;
  return true;
}

bool is_identity(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j ? m(i, j) != Fp(1) : !m(i, j).is_zero()) return false;
    }
  return true;
}

bool diag_invertible(const Mat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m(i, i).is_zero()) return false;
  return true;
}

Mat permute_swap(const Field& F, int n, int k) {
  Mat s = identity(F, n);
  s(k - 1, k - 1) = Fp(0, F);
  s(k, k) = Fp(0, F);
  s(k - 1, k) = Fp(1, F);
  s(k, k - 1) = Fp(1, F);
  return s;
}

}  // namespace

int MCSObject::front_interval_of(int t) const {
  int fi = 0;
  for (int c = 0; c < t && c < column_count(); ++c)
    if (!columns[static_cast<size_t>(c)].is_slide) ++fi;
  return fi;
}

const std::vector<int>& MCSObject::mu_at(int t) const {
  return maslov.per_interval[static_cast<size_t>(front_interval_of(t))];
}

MCObject MCSObject::object_at(int t) const {
  return mc_new(F, mu_at(t), intervals[static_cast<size_t>(t)]);
}

MCSObject make_strict_mcs(const FrontDiagram& front, const Field& F, int baseline,
                          std::vector<Mat> interval_d) {
  if (interval_d.size() != front.strand_counts().size())
    fail("DimensionMismatch", "strict MCS needs one differential per front interval");
  MCSObject s{front, F, baseline, compute_maslov(front, baseline), {}, std::move(interval_d)};
  for (size_t e = 0; e < front.events().size(); ++e)
    s.columns.push_back(MCSColumn{false, static_cast<int>(e), Mat()});
  return s;
}

Mat crossing_image(const Mat& d, int k) {
  Mat out = d;
  out.row(k - 1).swap(out.row(k));
  out.col(k - 1).swap(out.col(k));
  return out;
}

Mat death_projection(const Field& F, const Mat& d, int k) {
  const Eigen::Index n = d.rows();
  const Eigen::Index c0 = k - 1, c1 = k;
  Fp u = d(c1, c0);
  if (u.is_zero()) fail("NotInvertible", "cusp entry <k+1|d|k> is zero");
  Fp uinv = u.inverse();
  Mat pi = zeros(F, n - 2, n);
  auto relabel = [&](Eigen::Index m) { return m < c0 ? m : m - 2; };
  for (Eigen::Index m = 0; m < n; ++m) {
    if (m == c0 || m == c1) continue;
    pi(relabel(m), m) = Fp(1, F);
  }
  for (Eigen::Index j = c1 + 1; j < n; ++j)
    if (!d(j, c0).is_zero()) pi(relabel(j), c1) = -(uinv * d(j, c0));
  return pi;
}

Mat death_quotient(const Field& F, const Mat& d, int k) {
  const Eigen::Index n = d.rows();
  Mat pi = death_projection(F, d, k);
  Mat q = zeros(F, n - 2, n - 2);
  Eigen::Index qc = 0;
  for (Eigen::Index m = 0; m < n; ++m) {
    if (m == k - 1 || m == k) continue;
    q.col(qc++) = pi * d.col(m);
  }
  return q;
}

std::vector<Mat> birth_extensions(const Field& F, const Mat& d_minus,
                                  const std::vector<int>& mu_new, int k) {
  const auto n_new = static_cast<Eigen::Index>(mu_new.size());
  const Eigen::Index n_old = n_new - 2;
  const Eigen::Index c0 = k - 1, c1 = k;
  assert(d_minus.rows() == n_old && d_minus.cols() == n_old);
  auto new_of_old = [&](Eigen::Index m) { return m < c0 ? m : m + 2; };
  const std::int64_t q = F.modulus();

  // free entries in row-major order: rows c0 (x), c1 (y then u), then the
  // column-k tail (b)
  struct Free {
    Eigen::Index r, c;
    bool unit;
  };
  std::vector<Free> free_pos;
  for (Eigen::Index i = 0; i < c0; ++i)
    if (mu_new[static_cast<size_t>(i)] - mu_new[static_cast<size_t>(c0)] == 1)
      free_pos.push_back({c0, i, false});
  for (Eigen::Index i = 0; i < c0; ++i)
    if (mu_new[static_cast<size_t>(i)] - mu_new[static_cast<size_t>(c1)] == 1)
      free_pos.push_back({c1, i, false});
  free_pos.push_back({c1, c0, true});
  for (Eigen::Index j = c1 + 1; j < n_new; ++j)
    if (mu_new[static_cast<size_t>(j)] == mu_new[static_cast<size_t>(c1)])
      free_pos.push_back({j, c0, false});
  std::sort(free_pos.begin(), free_pos.end(), [](const Free& a, const Free& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });

  std::vector<std::int64_t> vals(free_pos.size(), 0);
  for (size_t i = 0; i < free_pos.size(); ++i)
    if (free_pos[i].unit) vals[i] = 1;

  std::vector<Mat> out;
  for (;;) {
    Mat d = zeros(F, n_new, n_new);
    for (size_t i = 0; i < free_pos.size(); ++i)
      d(free_pos[i].r, free_pos[i].c) = Fp(vals[i], F);
    Fp uinv = d(c1, c0).inverse();
    // embed the old block
    for (Eigen::Index i = 0; i < n_old; ++i)
      for (Eigen::Index j = 0; j < n_old; ++j)
        if (!d_minus(j, i).is_zero()) d(new_of_old(j), new_of_old(i)) = d_minus(j, i);
    // pi-compatibility correction on columns above the cusp
    for (Eigen::Index jj = c1 + 1; jj < n_new; ++jj) {
      if (d(jj, c0).is_zero()) continue;
      for (Eigen::Index ii = 0; ii < c0; ++ii)
        if (!d(c1, ii).is_zero()) d(jj, ii) += uinv * d(jj, c0) * d(c1, ii);
    }
    // column of the lower new generator: z = -u^{-1} d_minus b
    Vec b_old = zero_vec(F, n_old);
    for (Eigen::Index jj = c1 + 1; jj < n_new; ++jj) b_old(jj - 2) = d(jj, c0);
    Vec w = d_minus * b_old;
    for (Eigen::Index m = 0; m < n_old; ++m)
      if (!w(m).is_zero()) d(new_of_old(m), c1) = -(uinv * w(m));

    if (mat_is_zero((d * d).eval())) {
      assert(is_strictly_lower(d) && degree_mask_ok(mu_new, d));
      assert(mat_equal(death_quotient(F, d, k), d_minus));
      out.push_back(std::move(d));
    }

    // odometer, last position fastest
    size_t pos = free_pos.size();
    while (pos > 0) {
      --pos;
      ++vals[pos];
      if (vals[pos] < q) break;
      vals[pos] = free_pos[pos].unit ? 1 : 0;
      if (pos == 0) return out;
    }
    if (free_pos.empty()) return out;  // unreachable: u always present
  }
}

std::vector<Diagnostic> mcs_validate(const MCSObject& s) {
  std::vector<Diagnostic> out;
  const Field& F = s.F;
  if (s.intervals.size() != s.columns.size() + 1) {
    out.push_back({"event", 0, "Structure", "interval count != column count + 1"});
    return out;
  }
  {
    int fe = 0;
    for (const MCSColumn& c : s.columns)
      if (!c.is_slide && c.front_event != fe++) {
        out.push_back({"event", 0, "Structure", "front events out of order"});
        return out;
      }
    if (fe != static_cast<int>(s.front.events().size())) {
      out.push_back({"event", 0, "Structure", "front events missing from timeline"});
      return out;
    }
  }
  std::vector<bool> shape_ok(s.intervals.size(), true);
  for (int t = 0; t < s.refined_interval_count(); ++t) {
    const Mat& d = s.intervals[static_cast<size_t>(t)];
    const auto n = static_cast<Eigen::Index>(s.n_at(t));
    if (d.rows() != n || d.cols() != n) {
      out.push_back({"interval", t, "Structure", "differential has wrong shape"});
      shape_ok[static_cast<size_t>(t)] = false;
      continue;
    }
    if (!is_strictly_lower(d))
      out.push_back({"interval", t, "FiltrationViolation", "not strictly lower triangular"});
    if (!degree_mask_ok(s.mu_at(t), d))
      out.push_back({"interval", t, "DegreeViolation", "entry violates mu(i)-mu(j)=1"});
    if (!mat_is_zero((d * d).eval()))
      out.push_back({"interval", t, "NotSquareZero", "d^2 != 0"});
  }
  for (int c = 0; c < s.column_count(); ++c) {
    if (!shape_ok[static_cast<size_t>(c)] || !shape_ok[static_cast<size_t>(c + 1)]) continue;
    const Mat& dl = s.intervals[static_cast<size_t>(c)];
    const Mat& dr = s.intervals[static_cast<size_t>(c + 1)];
    const MCSColumn& col = s.columns[static_cast<size_t>(c)];
    if (col.is_slide) {
      const Mat& g = col.slide;
      if (g.rows() != dl.rows() || g.cols() != dl.rows()) {
        out.push_back({"event", c, "Structure", "slide matrix has wrong shape"});
        continue;
      }
      if (!hom_mask_ok(s.mu_at(c), s.mu_at(c), g, 0))
        out.push_back({"event", c, "SlideNotDegreeZero",
                       "slide is not lower triangular of degree 0"});
      if (!diag_invertible(g))
        out.push_back({"event", c, "SlideNotInvertible", "slide has a zero diagonal entry"});
      else if (!mat_equal((g * dl).eval(), (dr * g).eval()))
        out.push_back({"event", c, "SlideRelation", "g d_- != d_+ g"});
      continue;
    }
    const FrontEvent& ev = s.front.events()[static_cast<size_t>(col.front_event)];
    const int k = ev.pos;
    switch (ev.kind) {
      case EventKind::Crossing:
        if (!dl(k, k - 1).is_zero())
          out.push_back({"event", c, "ForcedEntryNonzero",
                         "<k+1|d_-|k> must vanish at a crossing"});
        if (!mat_equal(dr, crossing_image(dl, k)))
          out.push_back({"event", c, "CrossingRelation", "d_+ != s d_- s"});
        break;
      case EventKind::RightCusp:
        if (dl(k, k - 1).is_zero())
          out.push_back({"event", c, "CuspEntryNotInvertible",
                         "<k+1|d_-|k> must be invertible at a death"});
        else if (!mat_equal(dr, death_quotient(F, dl, k)))
          out.push_back({"event", c, "DeathRelation", "d_+ is not the induced quotient"});
        break;
      case EventKind::LeftCusp:
        if (dr(k, k - 1).is_zero())
          out.push_back({"event", c, "CuspEntryNotInvertible",
                         "<k+1|d_+|k> must be invertible at a birth"});
        else if (!mat_equal(death_quotient(F, dr, k), dl))
          out.push_back({"event", c, "BirthRelation", "d_- is not the induced quotient"});
        break;
    }
  }
  return out;
}

ElementaryFactorization factor_handle_slide(const Field& F, const std::vector<int>& mu,
                                            const Mat& g) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  if (g.rows() != n || g.cols() != n) fail("DimensionMismatch", "slide matrix has wrong shape");
  if (!hom_mask_ok(mu, mu, g, 0))
    fail("NotDegreeZero", "slide is not lower triangular of degree 0");
  if (!diag_invertible(g)) fail("NotInvertible", "slide has a zero diagonal entry");

  ElementaryFactorization out;
  out.diagonal = zeros(F, n, n);
  for (Eigen::Index i = 0; i < n; ++i) out.diagonal(i, i) = g(i, i);
  Mat w = g;
  for (Eigen::Index i = 0; i < n; ++i) {
    Fp inv = g(i, i).inverse();
    for (Eigen::Index j = 0; j < n; ++j) w(j, i) *= inv;
  }
  // eliminate columns left to right, rows bottom to top; each step peels one
  // elementary factor off the left
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = n - 1; j > i; --j) {
      Fp c = w(j, i);
      if (c.is_zero()) continue;
      Mat f = identity(F, n);
      f(j, i) = c;
      out.factors.push_back(f);
      w.row(j) -= c * w.row(i);
      assert(mu[static_cast<size_t>(i)] == mu[static_cast<size_t>(j)]);
    }
  }
  assert(is_identity(w));
  return out;
}

namespace {

// timeline splice: replace columns [at, at+count) by new_cols, with
// new_interior holding the intervals between consecutive new columns. The
// boundary interval at `at` is kept; the one at `at+count` is kept unless
// new_cols is empty (pure deletion, where the two boundaries must agree).
MCSObject splice(const MCSObject& s, int at, int count, std::vector<MCSColumn> new_cols,
                 std::vector<Mat> new_interior) {
  assert(new_cols.empty() ? new_interior.empty() : new_interior.size() + 1 == new_cols.size());
  MCSObject out{s.front, s.F, s.baseline, s.maslov, {}, {}};
  for (int c = 0; c < at; ++c) {
    out.columns.push_back(s.columns[static_cast<size_t>(c)]);
    out.intervals.push_back(s.intervals[static_cast<size_t>(c)]);
  }
  out.intervals.push_back(s.intervals[static_cast<size_t>(at)]);
  for (size_t i = 0; i < new_cols.size(); ++i) {
    out.columns.push_back(new_cols[i]);
    out.intervals.push_back(i < new_interior.size()
                                ? new_interior[i]
                                : s.intervals[static_cast<size_t>(at + count)]);
  }
  for (int c = at + count; c < s.column_count(); ++c) {
    out.columns.push_back(s.columns[static_cast<size_t>(c)]);
    out.intervals.push_back(s.intervals[static_cast<size_t>(c + 1)]);
  }
  return out;
}

MCSColumn slide_column(Mat g) { return MCSColumn{true, -1, std::move(g)}; }

}  // namespace

MCSObject push_diagonal_right(const MCSObject& s, int at) {
  if (at < 0 || at >= s.column_count() || !s.columns[static_cast<size_t>(at)].is_slide)
    fail("NotHandleSlide", "column is not a handle slide");
  const Mat& delta = s.columns[static_cast<size_t>(at)].slide;
  if (!is_diagonal(delta)) fail("NotDiagonal", "slide matrix is not diagonal");
  const Field& F = s.F;

  if (is_identity(delta)) {
    assert(mat_equal(s.intervals[static_cast<size_t>(at)], s.intervals[static_cast<size_t>(at + 1)]));
    return splice(s, at, 1, {}, {});
  }
  assert(at + 1 < s.column_count());  // plat fronts end with 0 strands
  const Mat& dl = s.intervals[static_cast<size_t>(at)];
  const Mat& dr = s.intervals[static_cast<size_t>(at + 2)];
  const MCSColumn& next = s.columns[static_cast<size_t>(at + 1)];

  if (next.is_slide) {
    Mat conj = inverse(delta) * next.slide * delta;
    Mat mid = conj * dl * inverse(conj);
    assert(mat_equal((delta * mid * inverse(delta)).eval(), dr));
    return splice(s, at, 2, {slide_column(conj), slide_column(delta)}, {mid});
  }
  const FrontEvent& ev = s.front.events()[static_cast<size_t>(next.front_event)];
  const int k = ev.pos;
  switch (ev.kind) {
    case EventKind::Crossing: {
      assert(dl(k, k - 1).is_zero());
      Mat mid = crossing_image(dl, k);
      Mat moved = crossing_image(delta, k);  // conjugation by s swaps the two entries
      assert(mat_equal((moved * mid * inverse(moved)).eval(), dr));
      return splice(s, at, 2, {next, slide_column(moved)}, {mid});
    }
    case EventKind::RightCusp: {
      Mat mid = death_quotient(F, dl, k);
      const Eigen::Index n = delta.rows();
      Mat shrunk = zeros(F, n - 2, n - 2);
      Eigen::Index r = 0;
      for (Eigen::Index m = 0; m < n; ++m) {
        if (m == k - 1 || m == k) continue;
        shrunk(r, r) = delta(m, m);
        ++r;
      }
      if (is_identity(shrunk)) {
        assert(mat_equal(mid, dr));
        return splice(s, at, 2, {next}, {});
      }
      assert(mat_equal((shrunk * mid * inverse(shrunk)).eval(), dr));
      return splice(s, at, 2, {next, slide_column(shrunk)}, {mid});
    }
    case EventKind::LeftCusp: {
      const Eigen::Index n = delta.rows();
      Mat grown = identity(F, n + 2);
      auto place = [&](Eigen::Index m) { return m < k - 1 ? m : m + 2; };
      for (Eigen::Index m = 0; m < n; ++m) grown(place(m), place(m)) = delta(m, m);
      Mat mid = inverse(grown) * dr * grown;
      assert(!mid(k, k - 1).is_zero());
      assert(mat_equal(death_quotient(F, mid, k), dl));
      return splice(s, at, 2, {next, slide_column(grown)}, {mid});
    }
  }
  fail("Internal", "unreachable");
}

MCSObject normalize_elementary(const MCSObject& s) {
  const Field& F = s.F;
  // pass 1: factor every slide into a diagonal followed by elementary columns
  MCSObject obj{s.front, F, s.baseline, s.maslov, {}, {}};
  obj.intervals.push_back(s.intervals[0]);
  for (int c = 0; c < s.column_count(); ++c) {
    const MCSColumn& col = s.columns[static_cast<size_t>(c)];
    if (!col.is_slide) {
      obj.columns.push_back(col);
      obj.intervals.push_back(s.intervals[static_cast<size_t>(c + 1)]);
      continue;
    }
    ElementaryFactorization fac = factor_handle_slide(F, s.mu_at(c), col.slide);
    Mat cur = obj.intervals.back();
    // realize g = f_1 ... f_m D as timeline columns: D first, then f_m ... f_1
    std::vector<Mat> order;
    if (!is_identity(fac.diagonal)) order.push_back(fac.diagonal);
    for (auto it = fac.factors.rbegin(); it != fac.factors.rend(); ++it) order.push_back(*it);
    for (const Mat& g : order) {
      cur = (g * cur * inverse(g)).eval();
      obj.columns.push_back(slide_column(g));
      obj.intervals.push_back(cur);
    }
    assert(mat_equal(cur, s.intervals[static_cast<size_t>(c + 1)]));
    obj.intervals.back() = s.intervals[static_cast<size_t>(c + 1)];
  }
  // pass 2: push diagonals right, rightmost first, until all are absorbed
  for (;;) {
    int at = -1;
    for (int c = obj.column_count() - 1; c >= 0; --c) {
      const MCSColumn& col = obj.columns[static_cast<size_t>(c)];
      if (col.is_slide && is_diagonal(col.slide)) {
        at = c;
        break;
      }
    }
    if (at < 0) break;
    obj = push_diagonal_right(obj, at);
  }
  return obj;
}

MCSObject remove_handle_slide(const MCSObject& s, int at) {
  if (at < 0 || at >= s.column_count() || !s.columns[static_cast<size_t>(at)].is_slide)
    fail("NotHandleSlide", "column is not a handle slide");
  const Field& F = s.F;
  MCSObject obj = s;
  int cur = at;
  for (;;) {
    Mat g = obj.columns[static_cast<size_t>(cur)].slide;
    if (is_identity(g)) return splice(obj, cur, 1, {}, {});
    assert(cur + 1 < obj.column_count());
    const MCSColumn& next = obj.columns[static_cast<size_t>(cur + 1)];
    const Mat& dl = obj.intervals[static_cast<size_t>(cur)];
    const Mat& dm = obj.intervals[static_cast<size_t>(cur + 1)];

    if (next.is_slide) {  // compose into the next slide
      Mat merged = next.slide * g;
      return splice(obj, cur, 2, {slide_column(merged)}, {});
    }
    const FrontEvent& ev = obj.front.events()[static_cast<size_t>(next.front_event)];
    const int k = ev.pos;
    switch (ev.kind) {
      case EventKind::Crossing: {
        if (!g(k, k - 1).is_zero())
          fail("ObstructedAtCrossing",
               "slide entry <k+1|g|k> becomes upper triangular across X" + std::to_string(k));
        if (!dl(k, k - 1).is_zero())
          fail("ObstructedAtCrossing",
               "conjugated differential violates <k+1|d|k> = 0 at X" + std::to_string(k));
        Mat mid = crossing_image(dl, k);
        Mat moved = crossing_image(g, k);
        obj = splice(obj, cur, 2, {next, slide_column(moved)}, {mid});
        cur = cur + 1;
        break;
      }
      case EventKind::RightCusp: {
        Mat pi_m = death_projection(F, dm, k);
        Vec im0 = pi_m * g.col(k - 1);
        Vec im1 = pi_m * (g * dl.col(k - 1));
        if (!mat_is_zero(im0) || !mat_is_zero(im1))
          fail("ObstructedAtDeath",
               "slide does not preserve the contractible pair at R" + std::to_string(k));
        const Eigen::Index n = g.rows();
        Mat moved = zeros(F, n - 2, n - 2);
        Eigen::Index qc = 0;
        for (Eigen::Index m = 0; m < n; ++m) {
          if (m == k - 1 || m == k) continue;
          moved.col(qc++) = pi_m * g.col(m);
        }
        assert(diag_invertible(moved));
        Mat mid = death_quotient(F, dl, k);
        obj = splice(obj, cur, 2, {next, slide_column(moved)}, {mid});
        cur = cur + 1;
        break;
      }
      case EventKind::LeftCusp: {
        const Eigen::Index n = g.rows();
        Mat grown = identity(F, n + 2);
        auto place = [&](Eigen::Index m) { return m < k - 1 ? m : m + 2; };
        for (Eigen::Index c2 = 0; c2 < n; ++c2)
          for (Eigen::Index r2 = 0; r2 < n; ++r2)
            if (!g(r2, c2).is_zero()) grown(place(r2), place(c2)) = g(r2, c2);
        const Mat& dp = obj.intervals[static_cast<size_t>(cur + 2)];
        Mat mid = inverse(grown) * dp * grown;
        assert(!mid(k, k - 1).is_zero());
        assert(mat_equal(death_quotient(F, mid, k), dl));
        obj = splice(obj, cur, 2, {next, slide_column(grown)}, {mid});
        cur = cur + 1;
        break;
      }
    }
  }
}

std::pair<MCSObject, MCSObject> common_refinement(const MCSObject& s, const MCSObject& t) {
  if (!(s.front == t.front) || s.F != t.F || s.maslov.per_interval != t.maslov.per_interval)
    fail("StrataMismatch", "objects live on different fronts / potentials / primes");
  const int m = static_cast<int>(s.front.events().size());

  // already aligned (in particular End computations): nothing to insert
  if (s.column_count() == t.column_count()) {
    bool aligned = true;
    for (int c = 0; c < s.column_count() && aligned; ++c) {
      const MCSColumn& a = s.columns[static_cast<size_t>(c)];
      const MCSColumn& b = t.columns[static_cast<size_t>(c)];
      aligned = a.is_slide == b.is_slide && (a.is_slide || a.front_event == b.front_event);
    }
    if (aligned) return {s, t};
  }

  // slides per region (region r = between front events r-1 and r)
  auto regions = [&](const MCSObject& o) {
    std::vector<std::vector<Mat>> reg(static_cast<size_t>(m + 1));
    int fe = 0;
    for (const MCSColumn& c : o.columns) {
      if (c.is_slide)
        reg[static_cast<size_t>(fe)].push_back(c.slide);
      else
        ++fe;
    }
    return reg;
  };
  auto sreg = regions(s), treg = regions(t);

  // in every region, s's slides come first, then t's; the other object gets
  // identity slides at the foreign positions
  auto rebuild = [&](const MCSObject& o, bool is_s) {
    MCSObject out{o.front, o.F, o.baseline, o.maslov, {}, {}};
    auto oreg = regions(o);
    int oi = 0;  // index into o.intervals
    out.intervals.push_back(o.intervals[0]);
    for (int r = 0; r <= m; ++r) {
      size_t own = 0;
      auto push_own = [&]() {
        out.columns.push_back(slide_column(oreg[static_cast<size_t>(r)][own++]));
        ++oi;
        out.intervals.push_back(o.intervals[static_cast<size_t>(oi)]);
      };
      auto push_id = [&]() {
        out.columns.push_back(slide_column(identity(o.F, out.intervals.back().rows())));
        out.intervals.push_back(out.intervals.back());
      };
      for (size_t i2 = 0; i2 < sreg[static_cast<size_t>(r)].size(); ++i2)
        is_s ? push_own() : push_id();
      for (size_t i2 = 0; i2 < treg[static_cast<size_t>(r)].size(); ++i2)
        is_s ? push_id() : push_own();
      if (r < m) {
        out.columns.push_back(MCSColumn{false, r, Mat()});
        ++oi;
        out.intervals.push_back(o.intervals[static_cast<size_t>(oi)]);
      }
    }
    return out;
  };
  return {rebuild(s, true), rebuild(t, false)};
}

std::vector<Mat> StrictHomSystem::materialize(const MCSObject& s, const Vec& values) const {
  std::vector<Mat> phi;
  for (int t = 0; t < s.refined_interval_count(); ++t)
    phi.push_back(zeros(s.F, s.n_at(t), s.n_at(t)));
  for (size_t v = 0; v < vars.size(); ++v)
    phi[static_cast<size_t>(vars[v].interval)](vars[v].j, vars[v].i) = values(static_cast<Eigen::Index>(v));
  return phi;
}

StrictHomSystem strict_hom_system(const MCSObject& s, const MCSObject& t) {
  assert(s.column_count() == t.column_count());
  const Field& F = s.F;
  StrictHomSystem sys;
  std::vector<std::vector<int>> var_of(static_cast<size_t>(s.refined_interval_count()));
  for (int ti = 0; ti < s.refined_interval_count(); ++ti) {
    const auto& mu = s.mu_at(ti);
    const int n = s.n_at(ti);
    var_of[static_cast<size_t>(ti)].assign(static_cast<size_t>(n) * static_cast<size_t>(n), -1);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i)
        if (mu[static_cast<size_t>(i)] == mu[static_cast<size_t>(j)]) {
          var_of[static_cast<size_t>(ti)][static_cast<size_t>(j * n + i)] =
              static_cast<int>(sys.vars.size());
          sys.vars.push_back({ti, j, i});
        }
  }
  auto var = [&](int ti, Eigen::Index j, Eigen::Index i) {
    const int n = s.n_at(ti);
    return var_of[static_cast<size_t>(ti)][static_cast<size_t>(j * n + i)];
  };

  std::vector<std::vector<std::pair<int, Fp>>> rows;
  auto add_term = [&](std::vector<std::pair<int, Fp>>& row, int v, Fp c) {
    if (v >= 0 && !c.is_zero()) row.push_back({v, c});
  };
  // closedness per interval: d_t phi - phi d_s = 0
  for (int ti = 0; ti < s.refined_interval_count(); ++ti) {
    const Mat& ds = s.intervals[static_cast<size_t>(ti)];
    const Mat& dt = t.intervals[static_cast<size_t>(ti)];
    const int n = s.n_at(ti);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        std::vector<std::pair<int, Fp>> row;
        for (Eigen::Index a = 0; a < n; ++a) {
          if (a >= c && !dt(r, a).is_zero()) add_term(row, var(ti, a, c), dt(r, a));
          if (r >= a && !ds(a, c).is_zero()) add_term(row, var(ti, r, a), -ds(a, c));
        }
        if (!row.empty()) rows.push_back(std::move(row));
      }
  }
  // event relations per column
  for (int c = 0; c < s.column_count(); ++c) {
    const int L = c, R = c + 1;
    const int nl = s.n_at(L), nr = s.n_at(R);
    const MCSColumn& cs = s.columns[static_cast<size_t>(c)];
    const MCSColumn& ct = t.columns[static_cast<size_t>(c)];
    assert(cs.is_slide == ct.is_slide);
    if (cs.is_slide) {
      // g_t phi_L - phi_R g_s = 0
      const Mat& gs = cs.slide;
      const Mat& gt = ct.slide;
      for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index k2 = 0; k2 < nl; ++k2) {
          std::vector<std::pair<int, Fp>> row;
          for (Eigen::Index a = 0; a < nl; ++a) {
            if (a >= k2 && !gt(r, a).is_zero()) add_term(row, var(L, a, k2), gt(r, a));
            if (r >= a && !gs(a, k2).is_zero()) add_term(row, var(R, r, a), -gs(a, k2));
          }
          if (!row.empty()) rows.push_back(std::move(row));
        }
      continue;
    }
    const FrontEvent& ev = s.front.events()[static_cast<size_t>(cs.front_event)];
    const int k = ev.pos;
    switch (ev.kind) {
      case EventKind::Crossing: {
        // s phi_R = phi_L s, i.e. phi_R(sig r, sig c) = phi_L(r, c)
        auto sig = [&](Eigen::Index x) {
          return x == k - 1 ? k : (x == k ? Eigen::Index(k - 1) : x);
        };
        for (Eigen::Index r = 0; r < nl; ++r)
          for (Eigen::Index c2 = 0; c2 < nl; ++c2) {
            std::vector<std::pair<int, Fp>> row;
            add_term(row, r >= c2 ? var(L, r, c2) : -1, Fp(1, F));
            Eigen::Index rr = sig(r), cc = sig(c2);
            add_term(row, rr >= cc ? var(R, rr, cc) : -1, Fp(-1, F));
            if (!row.empty()) rows.push_back(std::move(row));
          }
        break;
      }
      case EventKind::RightCusp: {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(L)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(L)], k);
        // pi_t phi_L - phi_R pi_s = 0   (nr x nl entries)
        for (Eigen::Index r = 0; r < nr; ++r)
          for (Eigen::Index c2 = 0; c2 < nl; ++c2) {
            std::vector<std::pair<int, Fp>> row;
            for (Eigen::Index a = 0; a < nl; ++a)
              if (a >= c2 && !pit(r, a).is_zero()) add_term(row, var(L, a, c2), pit(r, a));
            for (Eigen::Index b = 0; b < nr; ++b)
              if (r >= b && !pis(b, c2).is_zero()) add_term(row, var(R, r, b), -pis(b, c2));
            if (!row.empty()) rows.push_back(std::move(row));
          }
        break;
      }
      case EventKind::LeftCusp: {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(R)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(R)], k);
        // pi_t phi_R - phi_L pi_s = 0   (nl x nr entries)
        for (Eigen::Index r = 0; r < nl; ++r)
          for (Eigen::Index c2 = 0; c2 < nr; ++c2) {
            std::vector<std::pair<int, Fp>> row;
            for (Eigen::Index a = 0; a < nr; ++a)
              if (a >= c2 && !pit(r, a).is_zero()) add_term(row, var(R, a, c2), pit(r, a));
            for (Eigen::Index b = 0; b < nl; ++b)
              if (r >= b && !pis(b, c2).is_zero()) add_term(row, var(L, r, b), -pis(b, c2));
            if (!row.empty()) rows.push_back(std::move(row));
          }
        break;
      }
    }
  }

  Mat system = zeros(F, static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(sys.vars.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (auto [v, coef] : rows[r]) system(static_cast<Eigen::Index>(r), v) += coef;
  sys.kernel = kernel_basis(F, system);
  return sys;
}

bool verify_mcs_witness(const MCSObject& s0, const MCSObject& t0, const MCSHom& hom) {
  auto [s, t] = common_refinement(s0, t0);
  if (static_cast<int>(hom.per_interval.size()) != s.refined_interval_count()) return false;
  for (int ti = 0; ti < s.refined_interval_count(); ++ti) {
    const Mat& phi = hom.per_interval[static_cast<size_t>(ti)];
    const int n = s.n_at(ti);
    if (phi.rows() != n || phi.cols() != n) return false;
    if (!hom_mask_ok(s.mu_at(ti), s.mu_at(ti), phi, 0)) return false;
    if (!diag_invertible(phi)) return false;
    if (!mat_equal((t.intervals[static_cast<size_t>(ti)] * phi).eval(),
                   (phi * s.intervals[static_cast<size_t>(ti)]).eval()))
      return false;
  }
  const Field& F = s.F;
  for (int c = 0; c < s.column_count(); ++c) {
    const Mat& pl = hom.per_interval[static_cast<size_t>(c)];
    const Mat& pr = hom.per_interval[static_cast<size_t>(c + 1)];
    const MCSColumn& cs = s.columns[static_cast<size_t>(c)];
    if (cs.is_slide) {
      const Mat& gt = t.columns[static_cast<size_t>(c)].slide;
      if (!mat_equal((gt * pl).eval(), (pr * cs.slide).eval())) return false;
      continue;
    }
    const FrontEvent& ev = s.front.events()[static_cast<size_t>(cs.front_event)];
    const int k = ev.pos;
    switch (ev.kind) {
      case EventKind::Crossing: {
        Mat sw = permute_swap(F, s.n_at(c), k);
        if (!mat_equal((sw * pr).eval(), (pl * sw).eval())) return false;
        break;
      }
      case EventKind::RightCusp: {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(c)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(c)], k);
        if (!mat_equal((pit * pl).eval(), (pr * pis).eval())) return false;
        break;
      }
      case EventKind::LeftCusp: {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(c + 1)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(c + 1)], k);
        if (!mat_equal((pit * pr).eval(), (pl * pis).eval())) return false;
        break;
      }
    }
  }
  return true;
}

std::optional<MCSHom> mcs_isomorphic(const MCSObject& s0, const MCSObject& t0,
                                     long long search_bound) {
  auto [s, t] = common_refinement(s0, t0);
  StrictHomSystem sys = strict_hom_system(s, t);
  const Eigen::Index dim = sys.kernel.cols();
  const std::int64_t q = s.F.modulus();
  {
    long long space = 1;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (space > search_bound / q) {
        fail("SearchSpaceTooLarge", "cocycle space dimension " + std::to_string(dim) +
                                        " exceeds the search bound; raise --search-bound");
      }
      space *= q;
    }
  }
  const Field& F = s.F;
  if (dim == 0) {
    // only the zero map; it is a witness exactly when every interval is empty
    std::vector<Mat> phi = sys.materialize(s, zero_vec(F, static_cast<Eigen::Index>(sys.vars.size())));
    for (const Mat& m2 : phi)
      if (m2.rows() > 0) return std::nullopt;
    return MCSHom{std::move(phi)};
  }
  std::vector<std::int64_t> coeff(static_cast<size_t>(dim), 0);
  for (;;) {
    // next vector (lexicographic, first coordinate most significant)
    size_t pos = coeff.size();
    bool done = false;
    while (pos > 0) {
      --pos;
      if (++coeff[pos] < q) break;
      coeff[pos] = 0;
      if (pos == 0) done = true;
    }
    if (done) return std::nullopt;

    Vec values = zero_vec(F, static_cast<Eigen::Index>(sys.vars.size()));
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (coeff[static_cast<size_t>(c)] == 0) continue;
      values += Fp(coeff[static_cast<size_t>(c)], F) * sys.kernel.col(c);
    }
    std::vector<Mat> phi = sys.materialize(s, values);
    bool invertible = true;
    for (const Mat& m : phi)
      if (!diag_invertible(m)) {
        invertible = false;
        break;
      }
    if (!invertible) continue;
    MCSHom hom{std::move(phi)};
    assert(verify_mcs_witness(s0, t0, hom));
    return hom;
  }
}

}  // namespace legmcs
