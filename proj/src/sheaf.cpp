#include "legmcs/sheaf.hpp"

#include <algorithm>
#include <cassert>

namespace legmcs {

namespace {

FiniteComplex interval_stalk(const MCSObject& s, int t, int gap) {
  const int n = s.n_at(t);
  if (gap < 0 || gap > n) fail("InvalidQuery", "gap out of range");
  FiniteComplex c;
  const auto& mu = s.mu_at(t);
  for (int i = gap; i < n; ++i) c.degrees.push_back(-mu[static_cast<size_t>(i)]);
  c.d = s.intervals[static_cast<size_t>(t)].block(gap, gap, n - gap, n - gap);
  return c;
}

// inclusion of the span of generators >= g into the span of generators >= g'
// (g' <= g), as a matrix in the truncated bases
Mat span_inclusion(const Field& F, int n, int g, int gp) {
  Mat m = zeros(F, n - gp, n - g);
  for (int i = g; i < n; ++i) m(i - gp, i - g) = Fp(1, F);
  return m;
}

struct EventGap {
  FiniteComplex stalk;
  bool special = false;  // the event's own point on the front
  int left_gap = 0, right_gap = 0;
  Mat to_left, to_right;
};

// restrict a map m: V_src -> V_tgt to the generators >= g_src / >= g_tgt,
// checking that no entry escapes above the target cut
Mat restrict_map(const Mat& m, int g_tgt, int g_src) {
  for (Eigen::Index i = g_src; i < m.cols(); ++i)
    for (Eigen::Index j = 0; j < g_tgt; ++j)
      assert(m(j, i).is_zero());
  return m.block(g_tgt, g_src, m.rows() - g_tgt, m.cols() - g_src);
}

EventGap event_gap(const MCSObject& s, int c, int g) {
  const Field& F = s.F;
  const MCSColumn& col = s.columns[static_cast<size_t>(c)];
  const int nl = s.n_at(c), nr = s.n_at(c + 1);
  EventGap out;

  if (col.is_slide) {
    if (g < 0 || g > nl) fail("InvalidQuery", "gap out of range");
    out.stalk = interval_stalk(s, c, g);
    out.left_gap = g;
    out.right_gap = g;
    out.to_left = identity(F, nl - g);
    out.to_right = restrict_map(col.slide, g, g);
    return out;
  }
  const FrontEvent& ev = s.front.events()[static_cast<size_t>(col.front_event)];
  const int k = ev.pos;
  switch (ev.kind) {
    case EventKind::Crossing: {
      if (g < 0 || g > nl) fail("InvalidQuery", "gap out of range");
      out.special = (g == k);
      int src = out.special ? k + 1 : g;
      out.stalk = interval_stalk(s, c, src);
      out.left_gap = g;
      out.to_left = span_inclusion(F, nl, src, g);
      out.right_gap = g;
      Mat sw = zeros(F, nl, nl);
      auto sig = [&](int x) { return x == k - 1 ? k : (x == k ? k - 1 : x); };
      for (int i = 0; i < nl; ++i) sw(sig(i), i) = Fp(1, F);
      out.to_right = restrict_map(sw, g, src);
      return out;
    }
    case EventKind::RightCusp: {
      if (g < 0 || g > nl) fail("InvalidQuery", "gap out of range");
      out.special = (g == k);
      int src = out.special ? k + 1 : g;
      out.stalk = interval_stalk(s, c, src);
      out.left_gap = g;
      out.to_left = span_inclusion(F, nl, src, g);
      out.right_gap = g < k ? g : (out.special ? k - 1 : g - 2);
      Mat pi = death_projection(F, s.intervals[static_cast<size_t>(c)], k);
      out.to_right = restrict_map(pi, out.right_gap, src);
      return out;
    }
    case EventKind::LeftCusp: {
      if (g < 0 || g > nr) fail("InvalidQuery", "gap out of range");
      out.special = (g == k);
      int src = out.special ? k + 1 : g;
      out.stalk = interval_stalk(s, c + 1, src);
      out.right_gap = g;
      out.to_right = span_inclusion(F, nr, src, g);
      out.left_gap = g < k ? g : (out.special ? k - 1 : g - 2);
      Mat pi = death_projection(F, s.intervals[static_cast<size_t>(c + 1)], k);
      out.to_left = restrict_map(pi, out.left_gap, src);
      return out;
    }
  }
  fail("Internal", "unreachable");
}

bool quasi_iso(const Field& F, const FiniteComplex& src, const FiniteComplex& tgt, const Mat& m) {
  return is_acyclic(F, cone(F, src, tgt, m));
}

}  // namespace

FiniteComplex stalk_at(const MCSObject& s, const StalkQuery& q) {
  if (q.loc == StalkQuery::Loc::Interval) {
    if (q.index < 0 || q.index >= s.refined_interval_count())
      fail("InvalidQuery", "interval index out of range");
    return interval_stalk(s, q.index, q.gap);
  }
  if (q.index < 0 || q.index >= s.column_count()) fail("InvalidQuery", "event index out of range");
  return event_gap(s, q.index, q.gap).stalk;
}

ChainMap generization(const MCSObject& s, const StalkQuery& from, const StalkQuery& to) {
  const Field& F = s.F;
  if (from.loc == StalkQuery::Loc::Interval) {
    if (to.loc != StalkQuery::Loc::Interval || to.index != from.index || to.gap != from.gap - 1)
      fail("NotAdjacent", "vertical generizations go upward across one strand");
    FiniteComplex src = stalk_at(s, from);
    FiniteComplex tgt = stalk_at(s, to);
    return {src, tgt, span_inclusion(F, s.n_at(from.index), from.gap, to.gap)};
  }
  if (to.loc != StalkQuery::Loc::Interval) fail("NotAdjacent", "horizontal moves end on an interval");
  EventGap eg = event_gap(s, from.index, from.gap);
  if (to.index == from.index && to.gap == eg.left_gap)
    return {eg.stalk, interval_stalk(s, from.index, eg.left_gap), eg.to_left};
  if (to.index == from.index + 1 && to.gap == eg.right_gap)
    return {eg.stalk, interval_stalk(s, from.index + 1, eg.right_gap), eg.to_right};
  fail("NotAdjacent", "queries are not adjacent in the stratification");
}

std::vector<std::pair<int, int>> microstalk(const MCSObject& s, int t, int strand) {
  const int n = s.n_at(t);
  if (strand < 1 || strand > n) fail("InvalidQuery", "strand index out of range");
  const Field& F = s.F;
  FiniteComplex below = interval_stalk(s, t, strand);
  FiniteComplex above = interval_stalk(s, t, strand - 1);
  FiniteComplex c = cone(F, below, above, span_inclusion(F, n, strand, strand - 1));
  std::vector<std::pair<int, int>> table;
  for (auto [deg, dim] : complex_cohomology(F, c))
    if (dim != 0) table.push_back({deg, dim});
  return table;
}

bool microstalk_is_rank_one(const std::vector<std::pair<int, int>>& table, int mu) {
  return table.size() == 1 && table[0] == std::pair<int, int>{-mu, 1};
}

MicrosupportReport verify_microsupport(const MCSObject& s) {
  const Field& F = s.F;
  MicrosupportReport rep;
  auto failed = [&](const std::string& msg) {
    rep.passed = false;
    rep.failures.push_back(msg);
  };

  // (a) horizontal generizations across every event column, away from the front
  for (int c = 0; c < s.column_count(); ++c) {
    const MCSColumn& col = s.columns[static_cast<size_t>(c)];
    int gaps;
    if (col.is_slide)
      gaps = s.n_at(c);
    else {
      const FrontEvent& ev = s.front.events()[static_cast<size_t>(col.front_event)];
      gaps = ev.kind == EventKind::LeftCusp ? s.n_at(c + 1) : s.n_at(c);
    }
    for (int g = 0; g <= gaps; ++g) {
      EventGap eg = event_gap(s, c, g);
      if (eg.special) continue;
      ++rep.generizations_checked;
      if (!quasi_iso(F, eg.stalk, interval_stalk(s, c, eg.left_gap), eg.to_left))
        failed("generization not a quasi-isomorphism: column " + std::to_string(c) + " gap " +
               std::to_string(g) + " leftward");
      if (!quasi_iso(F, eg.stalk, interval_stalk(s, c + 1, eg.right_gap), eg.to_right))
        failed("generization not a quasi-isomorphism: column " + std::to_string(c) + " gap " +
               std::to_string(g) + " rightward");
    }
  }
  // (b) microstalks rank one in degree -mu
  for (int t = 0; t < s.refined_interval_count(); ++t) {
    const auto& mu = s.mu_at(t);
    for (int i = 1; i <= s.n_at(t); ++i) {
      ++rep.microstalks_checked;
      auto table = microstalk(s, t, i);
      if (!microstalk_is_rank_one(table, mu[static_cast<size_t>(i - 1)]))
        failed("microstalk not rank one in degree -mu: interval " + std::to_string(t) +
               " strand " + std::to_string(i));
    }
  }
  // (c) stalks below all strands vanish; (d) full complexes acyclic
  for (int t = 0; t < s.refined_interval_count(); ++t) {
    ++rep.intervals_checked;
    if (interval_stalk(s, t, s.n_at(t)).size() != 0)
      failed("stalk below all strands is nonzero: interval " + std::to_string(t));
    if (!is_acyclic(F, interval_stalk(s, t, 0)))
      failed("full-interval complex not acyclic: interval " + std::to_string(t));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Total complex

struct TotalAssembler {
  TotalComplex& T;
  const Field& F;

  void run() {
    const MCSObject& s = T.s_;
    const MCSObject& t = T.t_;
    for (int ti = 0; ti < s.refined_interval_count(); ++ti)
      T.interval_homs_.push_back(hom_complex(s.object_at(ti), t.object_at(ti)));

    for (int c = 0; c < s.column_count(); ++c) build_pairs(c);

    // generator list by degree
    for (int ti = 0; ti < s.refined_interval_count(); ++ti) {
      const HomComplex& h = T.interval_homs_[static_cast<size_t>(ti)];
      for (size_t e = 0; e < h.basis.size(); ++e)
        T.gens_[h.complex.degrees[e]].push_back(
            {TotalComplex::Gen::Kind::IntervalHom, ti, 0, static_cast<int>(e)});
    }
    for (const auto& [key, kern] : T.pair_kernels_)
      for (Eigen::Index col = 0; col < kern.cols(); ++col)
        T.gens_[key.second].push_back(
            {TotalComplex::Gen::Kind::EventPair, key.first, 0, static_cast<int>(col)});
    for (int c = 0; c < s.column_count(); ++c)
      for (int side = 0; side < 2; ++side) {
        const HomComplex& h = T.interval_homs_[static_cast<size_t>(c + side)];
        for (size_t e = 0; e < h.basis.size(); ++e)
          T.gens_[h.complex.degrees[e] + 1].push_back(
              {TotalComplex::Gen::Kind::Arrow, c, side, static_cast<int>(e)});
      }
    if (!T.gens_.empty()) {
      T.deg_min_ = T.gens_.begin()->first;
      T.deg_max_ = T.gens_.rbegin()->first;
    }
  }

  // event pair space at column c: kernel of the event relation on
  // Hom_L^deg + Hom_R^deg, one kernel per degree
  void build_pairs(int c) {
    const MCSObject& s = T.s_;
    const MCSObject& t = T.t_;
    const HomComplex& HL = T.interval_homs_[static_cast<size_t>(c)];
    const HomComplex& HR = T.interval_homs_[static_cast<size_t>(c + 1)];
    const int nl = s.n_at(c), nr = s.n_at(c + 1);

    std::vector<int> degrees;
    for (int d : HL.complex.degrees) degrees.push_back(d);
    for (int d : HR.complex.degrees) degrees.push_back(d);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());

    // relation as linear forms on (phi_L, phi_R) entries
    const MCSColumn& col = s.columns[static_cast<size_t>(c)];
    Mat relL, relR;  // relation: sum relL(row, Lentry) phi_L + relR(row, Rentry) phi_R = 0
    // represent entries by full (j,i) grids and cut to the hom bases below
    auto entry = [](int n, Eigen::Index j, Eigen::Index i) { return static_cast<Eigen::Index>(j * n + i); };
    Eigen::Index rows = 0;
    std::vector<std::vector<std::pair<Eigen::Index, Fp>>> L_terms, R_terms;
    auto new_row = [&]() {
      L_terms.emplace_back();
      R_terms.emplace_back();
      return rows++;
    };
    if (col.is_slide) {
      const Mat& gs = col.slide;
      const Mat& gt = t.columns[static_cast<size_t>(c)].slide;
      for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c2 = 0; c2 < nl; ++c2) {
          Eigen::Index row = new_row();
          for (Eigen::Index a = 0; a < nl; ++a) {
            if (!gt(r, a).is_zero()) L_terms[row].push_back({entry(nl, a, c2), gt(r, a)});
            if (!gs(a, c2).is_zero()) R_terms[row].push_back({entry(nr, r, a), -gs(a, c2)});
          }
        }
    } else {
      const FrontEvent& ev = s.front.events()[static_cast<size_t>(col.front_event)];
      const int k = ev.pos;
      if (ev.kind == EventKind::Crossing) {
        auto sig = [&](Eigen::Index x) {
          return x == k - 1 ? Eigen::Index(k) : (x == k ? Eigen::Index(k - 1) : x);
        };
        for (Eigen::Index r = 0; r < nl; ++r)
          for (Eigen::Index c2 = 0; c2 < nl; ++c2) {
            Eigen::Index row = new_row();
            L_terms[row].push_back({entry(nl, r, c2), Fp(1, F)});
            R_terms[row].push_back({entry(nr, sig(r), sig(c2)), Fp(-1, F)});
          }
      } else if (ev.kind == EventKind::RightCusp) {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(c)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(c)], k);
        for (Eigen::Index r = 0; r < nr; ++r)
          for (Eigen::Index c2 = 0; c2 < nl; ++c2) {
            Eigen::Index row = new_row();
            for (Eigen::Index a = 0; a < nl; ++a)
              if (!pit(r, a).is_zero()) L_terms[row].push_back({entry(nl, a, c2), pit(r, a)});
            for (Eigen::Index b = 0; b < nr; ++b)
              if (!pis(b, c2).is_zero()) R_terms[row].push_back({entry(nr, r, b), -pis(b, c2)});
          }
      } else {
        Mat pis = death_projection(F, s.intervals[static_cast<size_t>(c + 1)], k);
        Mat pit = death_projection(F, t.intervals[static_cast<size_t>(c + 1)], k);
        for (Eigen::Index r = 0; r < nl; ++r)
          for (Eigen::Index c2 = 0; c2 < nr; ++c2) {
            Eigen::Index row = new_row();
            for (Eigen::Index a = 0; a < nr; ++a)
              if (!pit(r, a).is_zero()) R_terms[row].push_back({entry(nr, a, c2), pit(r, a)});
            for (Eigen::Index b = 0; b < nl; ++b)
              if (!pis(b, c2).is_zero()) L_terms[row].push_back({entry(nl, r, b), -pis(b, c2)});
          }
      }
    }

    for (int deg : degrees) {
      std::vector<int> elemsL, elemsR;
      for (size_t e = 0; e < HL.basis.size(); ++e)
        if (HL.complex.degrees[e] == deg) elemsL.push_back(static_cast<int>(e));
      for (size_t e = 0; e < HR.basis.size(); ++e)
        if (HR.complex.degrees[e] == deg) elemsR.push_back(static_cast<int>(e));
      const auto dim = static_cast<Eigen::Index>(elemsL.size() + elemsR.size());
      // entry-grid position -> column, for this degree
      std::vector<Eigen::Index> colL(static_cast<size_t>(nl) * static_cast<size_t>(nl), -1);
      std::vector<Eigen::Index> colR(static_cast<size_t>(nr) * static_cast<size_t>(nr), -1);
      for (size_t x = 0; x < elemsL.size(); ++x) {
        auto [j, i] = HL.basis[static_cast<size_t>(elemsL[x])];
        colL[static_cast<size_t>(j * nl + i)] = static_cast<Eigen::Index>(x);
      }
      for (size_t x = 0; x < elemsR.size(); ++x) {
        auto [j, i] = HR.basis[static_cast<size_t>(elemsR[x])];
        colR[static_cast<size_t>(j * nr + i)] = static_cast<Eigen::Index>(elemsL.size() + x);
      }
      Mat rel = zeros(F, rows, dim);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (auto [pos, coef] : L_terms[static_cast<size_t>(r)])
          if (colL[static_cast<size_t>(pos)] >= 0) rel(r, colL[static_cast<size_t>(pos)]) += coef;
        for (auto [pos, coef] : R_terms[static_cast<size_t>(r)])
          if (colR[static_cast<size_t>(pos)] >= 0) rel(r, colR[static_cast<size_t>(pos)]) += coef;
      }
      T.pair_kernels_[{c, deg}] = kernel_basis(F, rel);
      T.pairL_[{c, deg}] = elemsL;
      T.pairR_[{c, deg}] = elemsR;
    }
  }
};

TotalComplex::TotalComplex(const MCSObject& s, const MCSObject& t)
    : TotalComplex(common_refinement(s, t)) {}

TotalComplex::TotalComplex(std::pair<MCSObject, MCSObject> refined)
    : s_(std::move(refined.first)), t_(std::move(refined.second)), F_(s_.F) {
  TotalAssembler{*this, F_}.run();
}

int TotalComplex::dim_at(int degree) const {
  auto it = gens_.find(degree);
  return it == gens_.end() ? 0 : static_cast<int>(it->second.size());
}

Mat TotalComplex::differential_at(int degree) const {
  const int nc = dim_at(degree), nr = dim_at(degree + 1);
  // index of each degree+1 generator
  std::map<std::tuple<int, int, int, int>, Eigen::Index> row_of;
  if (nr > 0) {
    const auto& tg = gens_.at(degree + 1);
    for (size_t i = 0; i < tg.size(); ++i)
      row_of[{static_cast<int>(tg[i].kind), tg[i].stratum, tg[i].side, tg[i].local}] =
          static_cast<Eigen::Index>(i);
  }
  Mat d = zeros(F_, nr, nc);
  if (nc == 0) return d;
  auto row = [&](Gen::Kind k, int stratum, int side, int local) -> Eigen::Index {
    auto it = row_of.find({static_cast<int>(k), stratum, side, local});
    return it == row_of.end() ? -1 : it->second;
  };
  auto add = [&](Eigen::Index r, Eigen::Index c, Fp v) {
    if (r >= 0 && !v.is_zero()) d(r, c) += v;
  };

  const auto& src = gens_.at(degree);
  for (size_t ci = 0; ci < src.size(); ++ci) {
    const Gen& g = src[ci];
    const auto col = static_cast<Eigen::Index>(ci);
    switch (g.kind) {
      case Gen::Kind::IntervalHom: {
        const HomComplex& h = interval_homs_[static_cast<size_t>(g.stratum)];
        for (Eigen::Index e2 = 0; e2 < h.complex.d.rows(); ++e2)
          add(row(Gen::Kind::IntervalHom, g.stratum, 0, static_cast<int>(e2)), col,
              h.complex.d(e2, g.local));
        // Cech terms: -xi_I into both adjacent arrows
        if (g.stratum - 1 >= 0)
          add(row(Gen::Kind::Arrow, g.stratum - 1, 1, g.local), col, Fp(-1, F_));
        if (g.stratum < s_.column_count())
          add(row(Gen::Kind::Arrow, g.stratum, 0, g.local), col, Fp(-1, F_));
        break;
      }
      case Gen::Kind::EventPair: {
        const int c = g.stratum;
        const Mat& K = pair_kernels_.at({c, degree});
        const auto& eL = pairL_.at({c, degree});
        const auto& eR = pairR_.at({c, degree});
        const HomComplex& HL = interval_homs_[static_cast<size_t>(c)];
        const HomComplex& HR = interval_homs_[static_cast<size_t>(c + 1)];
        // restriction into the arrows
        for (size_t x = 0; x < eL.size(); ++x)
          add(row(Gen::Kind::Arrow, c, 0, eL[x]), col, K(static_cast<Eigen::Index>(x), g.local));
        for (size_t x = 0; x < eR.size(); ++x)
          add(row(Gen::Kind::Arrow, c, 1, eR[x]), col,
              K(static_cast<Eigen::Index>(eL.size() + x), g.local));
        // internal differential, expressed in the degree+1 pair basis
        auto itK = pair_kernels_.find({c, degree + 1});
        Vec imgL = zero_vec(F_, HL.complex.d.rows());
        Vec imgR = zero_vec(F_, HR.complex.d.rows());
        for (size_t x = 0; x < eL.size(); ++x)
          imgL += K(static_cast<Eigen::Index>(x), g.local) * HL.complex.d.col(eL[x]);
        for (size_t x = 0; x < eR.size(); ++x)
          imgR += K(static_cast<Eigen::Index>(eL.size() + x), g.local) * HR.complex.d.col(eR[x]);
        if (itK != pair_kernels_.end() && itK->second.cols() > 0) {
          const auto& eL1 = pairL_.at({c, degree + 1});
          const auto& eR1 = pairR_.at({c, degree + 1});
          Vec v = zero_vec(F_, static_cast<Eigen::Index>(eL1.size() + eR1.size()));
          for (size_t x = 0; x < eL1.size(); ++x) v(static_cast<Eigen::Index>(x)) = imgL(eL1[x]);
          for (size_t x = 0; x < eR1.size(); ++x)
            v(static_cast<Eigen::Index>(eL1.size() + x)) = imgR(eR1[x]);
          Vec coords = solve_exact(F_, itK->second, v);
          for (Eigen::Index p = 0; p < coords.size(); ++p)
            add(row(Gen::Kind::EventPair, c, 0, static_cast<int>(p)), col, coords(p));
        } else {
          assert(mat_is_zero(imgL) && mat_is_zero(imgR));
        }
        break;
      }
      case Gen::Kind::Arrow: {
        const int target = g.stratum + g.side;
        const HomComplex& h = interval_homs_[static_cast<size_t>(target)];
        for (Eigen::Index e2 = 0; e2 < h.complex.d.rows(); ++e2)
          add(row(Gen::Kind::Arrow, g.stratum, g.side, static_cast<int>(e2)), col,
              -h.complex.d(e2, g.local));
        break;
      }
    }
  }
  return d;
}

std::vector<std::pair<int, int>> TotalComplex::cohomology() const {
  std::vector<std::pair<int, int>> out;
  std::map<int, int> ranks;
  for (int n = deg_min_; n <= deg_max_; ++n) ranks[n] = rank(differential_at(n));
  for (int n = deg_min_; n <= deg_max_; ++n) {
    int r_in = n - 1 >= deg_min_ ? ranks[n - 1] : 0;
    out.push_back({n, dim_at(n) - ranks[n] - r_in});
  }
  return out;
}

long long TotalComplex::euler_characteristic() const {
  long long chi = 0;
  for (int n = deg_min_; n <= deg_max_; ++n)
    chi += (n % 2 == 0 ? 1 : -1) * static_cast<long long>(dim_at(n));
  return chi;
}

Vec TotalComplex::embed_strict(const std::vector<Mat>& family) const {
  const int n0 = dim_at(0);
  Vec out = zero_vec(F_, n0);
  if (n0 == 0) return out;
  const auto& gens = gens_.at(0);
  for (size_t i = 0; i < gens.size(); ++i) {
    const Gen& g = gens[i];
    if (g.kind == Gen::Kind::IntervalHom) {
      auto [j, jj] = interval_homs_[static_cast<size_t>(g.stratum)].basis[static_cast<size_t>(g.local)];
      out(static_cast<Eigen::Index>(i)) = family[static_cast<size_t>(g.stratum)](j, jj);
    }
  }
  // pair coordinates: solve K x = (phi_L, phi_R) on each column, degree 0
  for (size_t i = 0; i < gens.size(); ++i) {
    const Gen& g = gens[i];
    if (g.kind != Gen::Kind::EventPair || g.local != 0) continue;
    const int c = g.stratum;
    const Mat& K = pair_kernels_.at({c, 0});
    const auto& eL = pairL_.at({c, 0});
    const auto& eR = pairR_.at({c, 0});
    Vec v = zero_vec(F_, static_cast<Eigen::Index>(eL.size() + eR.size()));
    for (size_t x = 0; x < eL.size(); ++x) {
      auto [j, jj] = interval_homs_[static_cast<size_t>(c)].basis[static_cast<size_t>(eL[x])];
      v(static_cast<Eigen::Index>(x)) = family[static_cast<size_t>(c)](j, jj);
    }
    for (size_t x = 0; x < eR.size(); ++x) {
      auto [j, jj] = interval_homs_[static_cast<size_t>(c + 1)].basis[static_cast<size_t>(eR[x])];
      v(static_cast<Eigen::Index>(eL.size() + x)) = family[static_cast<size_t>(c + 1)](j, jj);
    }
    Vec coords = solve_exact(F_, K, v);
    for (Eigen::Index p = 0; p < coords.size(); ++p)
      out(static_cast<Eigen::Index>(i) + p) = coords(p);
  }
  return out;
}

TotalComplex hom_total(const MCSObject& s, const MCSObject& t) { return TotalComplex(s, t); }

std::vector<std::pair<int, int>> gf_homology(const MCSObject& s) {
  return TotalComplex(s, s).cohomology();
}

EndRingReport end_ring(const MCSObject& s) {
  const Field& F = s.F;
  TotalComplex T(s, s);
  EndRingReport rep;
  rep.cohomology = T.cohomology();

  Mat d0 = T.differential_at(0);
  Mat dm1 = T.differential_at(-1);
  Mat Z = kernel_basis(F, d0.rows() > 0 ? d0 : zeros(F, 0, T.dim_at(0)));
  const int rank_b = dm1.cols() > 0 ? rank(dm1) : 0;
  const int h0 = static_cast<int>(Z.cols()) - rank_b;
  rep.h0_dim = h0;

  // strict cocycles between the refined copies
  StrictHomSystem sys = strict_hom_system(T.left(), T.right());
  std::vector<std::vector<Mat>> strict_families;
  std::vector<Vec> strict_embedded;
  for (Eigen::Index c = 0; c < sys.kernel.cols(); ++c) {
    std::vector<Mat> fam = sys.materialize(T.left(), sys.kernel.col(c).eval());
    strict_embedded.push_back(T.embed_strict(fam));
    strict_families.push_back(std::move(fam));
  }

  // greedy basis of H^0 drawn from strict classes
  const Eigen::Index n0 = T.dim_at(0);
  Mat span = dm1.rows() == n0 ? dm1 : zeros(F, n0, 0);
  std::vector<int> chosen;
  for (size_t i = 0; i < strict_embedded.size() && static_cast<int>(chosen.size()) < h0; ++i) {
    Mat aug(n0, span.cols() + 1);
    if (span.cols() > 0) aug.block(0, 0, n0, span.cols()) = span;
    aug.col(span.cols()) = strict_embedded[i];
    if (rank(aug) > rank(span)) {
      span = aug;
      chosen.push_back(static_cast<int>(i));
    }
  }
  if (static_cast<int>(chosen.size()) < h0)
    fail("NonStrictRepresentative",
         "some H^0 class admits no strict cocycle representative");

  // coordinates: solve [boundaries | chosen] x = z, read off the tail
  Mat basis_mat(n0, dm1.cols() + static_cast<Eigen::Index>(chosen.size()));
  if (dm1.cols() > 0) basis_mat.block(0, 0, n0, dm1.cols()) = dm1;
  for (size_t i = 0; i < chosen.size(); ++i)
    basis_mat.col(dm1.cols() + static_cast<Eigen::Index>(i)) =
        strict_embedded[static_cast<size_t>(chosen[i])];
  auto coords = [&](const Vec& z) {
    std::vector<std::int64_t> out(static_cast<size_t>(h0), 0);
    if (n0 == 0) return out;
    Vec x = solve_exact(F, basis_mat, z);
    for (int i = 0; i < h0; ++i)
      out[static_cast<size_t>(i)] = x(dm1.cols() + i).value();
    return out;
  };

  // unit = class of the identity family
  std::vector<Mat> id_family;
  for (int t = 0; t < T.left().refined_interval_count(); ++t)
    id_family.push_back(identity(F, T.left().n_at(t)));
  rep.unit = coords(T.embed_strict(id_family));

  // multiplication table on the chosen basis
  auto compose = [&](const std::vector<Mat>& a, const std::vector<Mat>& b) {
    std::vector<Mat> out;
    for (size_t t = 0; t < a.size(); ++t) out.push_back((a[t] * b[t]).eval());
    return out;
  };
  rep.table.assign(static_cast<size_t>(h0),
                   std::vector<std::vector<std::int64_t>>(static_cast<size_t>(h0)));
  for (int i = 0; i < h0; ++i)
    for (int j = 0; j < h0; ++j)
      rep.table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          coords(T.embed_strict(compose(strict_families[static_cast<size_t>(chosen[static_cast<size_t>(i)])],
                                        strict_families[static_cast<size_t>(chosen[static_cast<size_t>(j)])])));

  // unitality and associativity on the computed table, exactly
  auto mul_coords = [&](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    std::vector<Fp> acc(static_cast<size_t>(h0), Fp(0, F));
    for (int i = 0; i < h0; ++i)
      for (int j = 0; j < h0; ++j) {
        Fp c = Fp(a[static_cast<size_t>(i)], F) * Fp(b[static_cast<size_t>(j)], F);
        if (c.is_zero()) continue;
        const auto& tij = rep.table[static_cast<size_t>(i)][static_cast<size_t>(j)];
        for (int m = 0; m < h0; ++m) acc[static_cast<size_t>(m)] += c * Fp(tij[static_cast<size_t>(m)], F);
      }
    std::vector<std::int64_t> out(static_cast<size_t>(h0));
    for (int m = 0; m < h0; ++m) out[static_cast<size_t>(m)] = acc[static_cast<size_t>(m)].value();
    return out;
  };
  auto basis_coords = [&](int i) {
    std::vector<std::int64_t> e(static_cast<size_t>(h0), 0);
    e[static_cast<size_t>(i)] = 1;
    return e;
  };
  rep.unital = true;
  for (int j = 0; j < h0; ++j) {
    if (mul_coords(rep.unit, basis_coords(j)) != basis_coords(j)) rep.unital = false;
    if (mul_coords(basis_coords(j), rep.unit) != basis_coords(j)) rep.unital = false;
  }
  rep.associative = true;
  for (int i = 0; i < h0 && rep.associative; ++i)
    for (int j = 0; j < h0 && rep.associative; ++j)
      for (int k = 0; k < h0; ++k) {
        auto left = mul_coords(rep.table[static_cast<size_t>(i)][static_cast<size_t>(j)], basis_coords(k));
        auto right = mul_coords(basis_coords(i), rep.table[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        if (left != right) {
          rep.associative = false;
          break;
        }
      }
  return rep;
}

}  // namespace legmcs
