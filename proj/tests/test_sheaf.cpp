#include <doctest.h>

#include <map>

#include "legmcs/enumerate.hpp"
#include "legmcs/sheaf.hpp"
#include "support.hpp"

using namespace legmcs;
namespace ts = legmcs::testsupport;

namespace {

MCSObject unknot_mcs(const Field& F, std::int64_t c = 1) {
  FrontDiagram fd = FrontDiagram::parse(ts::kUnknot);
  Mat d = zeros(F, 2, 2);
  d(1, 0) = Fp(c, F);
  return make_strict_mcs(fd, F, 1, {zeros(F, 0, 0), d, zeros(F, 0, 0)});
}

std::map<int, int> table_map(const std::vector<std::pair<int, int>>& table) {
  std::map<int, int> out;
  for (auto [deg, dim] : table) out[deg] = dim;
  return out;
}

}  // namespace

TEST_CASE("stalks of the unknot object") {
  Field F(2);
  MCSObject s = unknot_mcs(F);
  SUBCASE("below all strands: zero") {
    FiniteComplex c = stalk_at(s, {StalkQuery::Loc::Interval, 1, 2});
    CHECK(c.size() == 0);
  }
  SUBCASE("above all strands: the full, acyclic complex") {
    FiniteComplex c = stalk_at(s, {StalkQuery::Loc::Interval, 1, 0});
    CHECK(c.size() == 2);
    CHECK(is_acyclic(F, c));
  }
  SUBCASE("the middle gap: one generator in degree -1") {
    FiniteComplex c = stalk_at(s, {StalkQuery::Loc::Interval, 1, 1});
    REQUIRE(c.size() == 1);
    CHECK(c.degrees[0] == -1);
  }
  SUBCASE("invalid gap") {
    CHECK_THROWS_AS(stalk_at(s, {StalkQuery::Loc::Interval, 1, 3}), Error);
  }
}

TEST_CASE("event-point stalks follow the construction rules") {
  Field F(3);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  MCSObject s = enumerate_strict(trefoil, F, 1).objects[0];
  // at a crossing column the stalk at the crossing gap equals the one below
  for (int c : {2, 3, 4}) {
    const FrontEvent& ev = trefoil.events()[static_cast<size_t>(c)];
    REQUIRE(ev.kind == EventKind::Crossing);
    FiniteComplex at_point = stalk_at(s, {StalkQuery::Loc::Event, c, ev.pos});
    FiniteComplex below = stalk_at(s, {StalkQuery::Loc::Interval, c, ev.pos + 1});
    CHECK(at_point.degrees == below.degrees);
    CHECK(mat_equal(at_point.d, below.d));
  }
  // at the death column the cusp-point stalk comes from the left, just below
  FiniteComplex at_cusp = stalk_at(s, {StalkQuery::Loc::Event, 5, 1});
  FiniteComplex left_below = stalk_at(s, {StalkQuery::Loc::Interval, 5, 2});
  CHECK(at_cusp.degrees == left_below.degrees);
  CHECK(mat_equal(at_cusp.d, left_below.d));
}

TEST_CASE("generization maps") {
  Field F(2);
  MCSObject s = unknot_mcs(F);
  SUBCASE("vertical move across a strand is the inclusion") {
    ChainMap m = generization(s, {StalkQuery::Loc::Interval, 1, 1}, {StalkQuery::Loc::Interval, 1, 0});
    CHECK(m.src.size() == 1);
    CHECK(m.tgt.size() == 2);
    CHECK(m.m(1, 0) == Fp(1, F));
    CHECK(m.m(0, 0).is_zero());
  }
  SUBCASE("horizontal move across the right cusp above the cusp point") {
    // gap 0 at the death column: pi restricted to the full complexes
    ChainMap m = generization(s, {StalkQuery::Loc::Event, 1, 0}, {StalkQuery::Loc::Interval, 2, 0});
    CHECK(m.src.size() == 2);
    CHECK(m.tgt.size() == 0);
    CHECK(is_acyclic(F, cone(F, m.src, m.tgt, m.m)));  // quasi-isomorphism
  }
  SUBCASE("adjacency is enforced") {
    CHECK_THROWS_AS(
        generization(s, {StalkQuery::Loc::Interval, 1, 0}, {StalkQuery::Loc::Interval, 1, 1}),
        Error);
    CHECK_THROWS_AS(
        generization(s, {StalkQuery::Loc::Interval, 1, 2}, {StalkQuery::Loc::Interval, 0, 0}),
        Error);
  }
}

TEST_CASE("horizontal generization across a handle slide is the slide's filtered piece") {
  Field F(3);
  ts::Rng rng(42);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  MCSObject s = ts::random_mcs_with_slides(rng, trefoil, F, 1, 2);
  for (int c = 0; c < s.column_count(); ++c) {
    if (!s.columns[static_cast<size_t>(c)].is_slide) continue;
    const int n = s.n_at(c);
    for (int g = 0; g <= n; ++g) {
      ChainMap m = generization(s, {StalkQuery::Loc::Event, c, g}, {StalkQuery::Loc::Interval, c + 1, g});
      Mat block = s.columns[static_cast<size_t>(c)].slide.block(g, g, n - g, n - g);
      CHECK(mat_equal(m.m, block));
    }
  }
}

TEST_CASE("microstalks of the unknot") {
  Field F(2);
  MCSObject s = unknot_mcs(F);
  auto upper = microstalk(s, 1, 1);
  auto lower = microstalk(s, 1, 2);
  CHECK(upper == std::vector<std::pair<int, int>>{{-2, 1}});
  CHECK(lower == std::vector<std::pair<int, int>>{{-1, 1}});
  CHECK(microstalk_is_rank_one(upper, 2));
  CHECK(microstalk_is_rank_one(lower, 1));
}

TEST_CASE("microstalks are rank one in degree -mu over the full trefoil enumeration") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
    for (const MCSObject& obj : enumerate_strict(trefoil, F, 1).objects)
      for (int t = 0; t < obj.refined_interval_count(); ++t)
        for (int i = 1; i <= obj.n_at(t); ++i)
          CHECK(microstalk_is_rank_one(microstalk(obj, t, i),
                                       obj.mu_at(t)[static_cast<size_t>(i - 1)]));
  }
}

TEST_CASE("a rank-two microstalk fails the rank-one check (cone additivity)") {
  Field F(2);
  // direct sum of two copies of the unknot stalk picture across the upper strand
  FiniteComplex below{{-1, -1}, zeros(F, 2, 2)};
  FiniteComplex above{{-2, -1, -2, -1}, zeros(F, 4, 4)};
  above.d(1, 0) = above.d(3, 2) = Fp(1, F);
  Mat incl = zeros(F, 4, 2);
  incl(1, 0) = incl(3, 1) = Fp(1, F);
  FiniteComplex c = cone(F, below, above, incl);
  std::vector<std::pair<int, int>> table;
  for (auto [deg, dim] : complex_cohomology(F, c))
    if (dim != 0) table.push_back({deg, dim});
  CHECK(table == std::vector<std::pair<int, int>>{{-2, 2}});
  CHECK(!microstalk_is_rank_one(table, 2));
}

TEST_CASE("verify_microsupport passes on every enumerated object") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    for (const char* text : {ts::kUnknot, ts::kTrefoil}) {
      for (const MCSObject& obj : enumerate_strict(FrontDiagram::parse(text), F, 1).objects) {
        MicrosupportReport rep = verify_microsupport(obj);
        CHECK(rep.passed);
        CHECK(rep.failures.empty());
        CHECK(rep.microstalks_checked > 0);
      }
    }
  }
}

TEST_CASE("unknot endomorphism cohomology fixture") {
  Field F(2);
  MCSObject s = unknot_mcs(F);
  TotalComplex total(s, s);
  auto hm = table_map(total.cohomology());
  CHECK(hm == std::map<int, int>{{0, 1}, {1, 0}, {2, 0}});
  CHECK(total.euler_characteristic() == 1);
  // H^0 contains the identity class: the identity family is a strict cocycle
  std::vector<Mat> id_family;
  for (int t = 0; t < total.left().refined_interval_count(); ++t)
    id_family.push_back(identity(F, total.left().n_at(t)));
  Vec v = total.embed_strict(id_family);
  CHECK(!mat_is_zero(v));
  CHECK(mat_is_zero((total.differential_at(0) * v).eval()));
}

TEST_CASE("euler characteristic equals the alternating sum of cohomology") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    for (const char* text : {ts::kUnknot, ts::kTrefoil, "L1 L3 X2 X2 R1 R1"}) {
      auto objects = enumerate_strict(FrontDiagram::parse(text), F, 1).objects;
      for (size_t i = 0; i < objects.size(); ++i)
        for (size_t j = 0; j < objects.size() && j < 3; ++j) {
          TotalComplex total(objects[i], objects[j]);
          long long alt = 0;
          for (auto [deg, dim] : total.cohomology())
            alt += (deg % 2 == 0 ? 1 : -1) * static_cast<long long>(dim);
          CHECK(alt == total.euler_characteristic());
        }
    }
  }
}

TEST_CASE("total differential squares to zero") {
  Field F(3);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  auto objects = enumerate_strict(trefoil, F, 1).objects;
  TotalComplex total(objects[0], objects[1 % objects.size()]);
  for (int n = total.min_degree(); n < total.max_degree(); ++n) {
    Mat d1 = total.differential_at(n);
    Mat d2 = total.differential_at(n + 1);
    CHECK(mat_is_zero((d2 * d1).eval()));
  }
}

TEST_CASE("gf_homology is invariant under normalize_elementary") {
  ts::Rng rng(2718);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    MCSObject s = ts::random_mcs_with_slides(rng, trefoil, F, 1, 2);
    CHECK(table_map(gf_homology(normalize_elementary(s))) == table_map(gf_homology(s)));
  }
}

TEST_CASE("gf_homology is invariant under push_diagonal_right and remove_handle_slide") {
  Field F(3);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  auto objects = enumerate_strict(trefoil, F, 1).objects;
  // a diagonal slide before the first crossing
  {
    MCSObject strict = objects[0];
    MCSObject s{strict.front, F, strict.baseline, strict.maslov, {}, {}};
    Mat delta = identity(F, 4);
    delta(1, 1) = Fp(2, F);
    // build via the tested path: insert through the forced tail
    s = strict;
    // reuse: construct with enumerate-provided object and a slide at event 2
    Mat d = strict.intervals[2];
    MCSObject with_slide{strict.front, F, strict.baseline, strict.maslov, {}, {}};
    with_slide.intervals.push_back(strict.intervals[0]);
    for (int e = 0; e < 7; ++e) {
      if (e == 2) {
        d = (delta * strict.intervals[2] * inverse(delta)).eval();
        with_slide.columns.push_back(MCSColumn{true, -1, delta});
        with_slide.intervals.push_back(d);
        d = crossing_image(d, 2);
      } else if (e < 2) {
        d = strict.intervals[static_cast<size_t>(e + 1)];
      } else {
        const FrontEvent& ev = trefoil.events()[static_cast<size_t>(e)];
        d = ev.kind == EventKind::Crossing ? crossing_image(d, ev.pos)
                                           : death_quotient(F, d, ev.pos);
      }
      with_slide.columns.push_back(MCSColumn{false, e, Mat()});
      with_slide.intervals.push_back(d);
    }
    REQUIRE(mcs_validate(with_slide).empty());
    auto base = table_map(gf_homology(with_slide));
    CHECK(table_map(gf_homology(push_diagonal_right(with_slide, 2))) == base);
  }
  // an elementary slide before the deaths, removable
  {
    Mat g = identity(F, 4);
    g(2, 1) = Fp(1, F);
    MCSObject strict = objects[0];
    MCSObject s{strict.front, F, strict.baseline, strict.maslov, {}, {}};
    s.intervals.push_back(strict.intervals[0]);
    Mat d = strict.intervals[0];
    for (int e = 0; e < 7; ++e) {
      if (e == 5) {
        d = (g * d * inverse(g)).eval();
        s.columns.push_back(MCSColumn{true, -1, g});
        s.intervals.push_back(d);
      }
      if (e < 5) {
        d = strict.intervals[static_cast<size_t>(e + 1)];
      } else {
        const FrontEvent& ev = trefoil.events()[static_cast<size_t>(e)];
        d = ev.kind == EventKind::Crossing ? crossing_image(d, ev.pos)
                                           : death_quotient(F, d, ev.pos);
      }
      s.columns.push_back(MCSColumn{false, e, Mat()});
      s.intervals.push_back(d);
    }
    REQUIRE(mcs_validate(s).empty());
    auto base = table_map(gf_homology(s));
    CHECK(table_map(gf_homology(remove_handle_slide(s, 5))) == base);
  }
}

TEST_CASE("gf_homology is constant on isomorphism classes") {
  Field F(3);
  FrontDiagram trefoil = FrontDiagram::parse(ts::kTrefoil);
  auto objects = enumerate_strict(trefoil, F, 1).objects;
  auto base = table_map(gf_homology(objects[0]));
  for (const MCSObject& obj : objects) CHECK(table_map(gf_homology(obj)) == base);
}

TEST_CASE("interval stalk dimensions are reproduced by counting bars") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    for (const char* text : {ts::kUnknot, ts::kTrefoil, "L1 L3 X2 X2 R1 R1"}) {
      for (const MCSObject& obj : enumerate_strict(FrontDiagram::parse(text), F, 1).objects) {
        for (int t = 0; t < obj.refined_interval_count(); ++t) {
          Barcode bc = barannikov(obj.object_at(t)).barcode;
          const auto& mu = obj.mu_at(t);
          const int n = obj.n_at(t);
          for (int g = 0; g <= n; ++g) {
            std::map<int, int> bars;
            for (auto [i, j] : bc.pairs)
              if (i <= g && g < j) bars[-mu[static_cast<size_t>(j - 1)]]++;
            for (int u : bc.unpaired)
              if (u > g) bars[-mu[static_cast<size_t>(u - 1)]]++;
            auto hm = table_map(
                complex_cohomology(F, stalk_at(obj, {StalkQuery::Loc::Interval, t, g})));
            for (auto [deg, dim] : hm) CHECK(dim == bars[deg]);
            int total_h = 0, total_b = 0;
            for (auto [deg, dim] : hm) total_h += dim;
            for (auto [deg, dim] : bars) total_b += dim;
            CHECK(total_h == total_b);
          }
        }
      }
    }
  }
}

TEST_CASE("end_ring of the unknot is the unital ring on one generator") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    EndRingReport rep = end_ring(unknot_mcs(F));
    CHECK(rep.h0_dim == 1);
    CHECK(rep.unit == std::vector<std::int64_t>{1});
    CHECK(rep.table[0][0] == std::vector<std::int64_t>{1});  // unit * unit = unit
    CHECK(rep.unital);
    CHECK(rep.associative);
  }
}

TEST_CASE("end_ring is unital and associative with nonzero unit on enumerated objects") {
  for (std::int64_t p : {2, 3}) {
    Field F(p);
    for (const char* text : {ts::kUnknot, ts::kTrefoil}) {
      for (const MCSObject& obj : enumerate_strict(FrontDiagram::parse(text), F, 1).objects) {
        EndRingReport rep = end_ring(obj);
        CHECK(rep.unital);
        CHECK(rep.associative);
        bool unit_nonzero = false;
        for (std::int64_t u : rep.unit) unit_nonzero |= (u != 0);
        CHECK(unit_nonzero);
      }
    }
  }
}

TEST_CASE("end_ring reports classes without strict representatives instead of guessing") {
  // on this Hopf presentation, End has dim H^0 = 3 but the strict cocycle
  // space only reaches a 2-dimensional subspace
  Field F(2);
  FrontDiagram hopf = FrontDiagram::parse("L1 L3 X2 X2 R1 R1");
  auto objects = enumerate_strict(hopf, F, 1).objects;
  REQUIRE(!objects.empty());
  try {
    end_ring(objects[0]);
    FAIL("expected NonStrictRepresentative");
  } catch (const Error& e) {
    CHECK(e.code() == "NonStrictRepresentative");
  }
}

TEST_CASE("the empty front's zero object has trivial End") {
  Field F(2);
  MCSObject zero = make_strict_mcs(FrontDiagram::parse(""), F, 1, {zeros(F, 0, 0)});
  TotalComplex total(zero, zero);
  CHECK(total.cohomology().empty());
  CHECK(total.euler_characteristic() == 0);
  EndRingReport rep = end_ring(zero);
  CHECK(rep.h0_dim == 0);
  CHECK(rep.unital);
  CHECK(rep.associative);
}

TEST_CASE("composition of strict cocycles is associative stratum-wise") {
  ts::Rng rng(1618);
  Field F(3);
  MCSObject s = unknot_mcs(F);
  TotalComplex total(s, s);
  StrictHomSystem sys = strict_hom_system(total.left(), total.right());
  REQUIRE(sys.kernel.cols() >= 1);
  int trials = 0;
  while (trials < 200) {
    auto sample = [&]() {
      Vec coeffs = ts::random_matrix(rng, F, static_cast<Eigen::Index>(sys.vars.size()), 1);
      Vec values = zero_vec(F, static_cast<Eigen::Index>(sys.vars.size()));
      for (Eigen::Index c = 0; c < sys.kernel.cols(); ++c)
        values += coeffs(c % coeffs.size()) * sys.kernel.col(c);
      return sys.materialize(total.left(), values);
    };
    auto a = sample(), b = sample(), c = sample();
    for (size_t t = 0; t < a.size(); ++t) {
      Mat left = ((a[t] * b[t]).eval() * c[t]).eval();
      Mat right = (a[t] * (b[t] * c[t]).eval()).eval();
      CHECK(mat_equal(left, right));
    }
    ++trials;
  }
}

TEST_CASE("H^0 has an invertible strict cocycle iff the objects are isomorphic") {
  Field F(3);
  FrontDiagram unknot = FrontDiagram::parse(ts::kUnknot);
  auto objects = enumerate_strict(unknot, F, 1).objects;
  REQUIRE(objects.size() == 2);
  for (size_t i = 0; i < objects.size(); ++i)
    for (size_t j = 0; j < objects.size(); ++j) {
      auto witness = mcs_isomorphic(objects[i], objects[j]);
      // the strict cocycle space is searched independently via the system
      auto [a, b] = common_refinement(objects[i], objects[j]);
      StrictHomSystem sys = strict_hom_system(a, b);
      bool found = false;
      std::vector<std::int64_t> coeff(static_cast<size_t>(sys.kernel.cols()), 0);
      for (;;) {
        size_t pos = coeff.size();
        bool done = coeff.empty();
        while (pos > 0) {
          --pos;
          if (++coeff[pos] < 3) break;
          coeff[pos] = 0;
          if (pos == 0) done = true;
        }
        if (done) break;
        Vec values = zero_vec(F, static_cast<Eigen::Index>(sys.vars.size()));
        for (Eigen::Index c = 0; c < sys.kernel.cols(); ++c)
          values += Fp(coeff[static_cast<size_t>(c)], F) * sys.kernel.col(c);
        auto fam = sys.materialize(a, values);
        bool invertible = true;
        for (const Mat& m : fam) {
          for (Eigen::Index d = 0; d < m.rows(); ++d)
            if (m(d, d).is_zero()) invertible = false;
        }
        if (invertible) {
          found = true;
          break;
        }
      }
      CHECK(found == witness.has_value());
    }
}
