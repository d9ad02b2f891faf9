#include "legmcs/json_io.hpp"

#include <fstream>
#include <sstream>

namespace legmcs {

namespace {

Json matrix_to_triples(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index i = 0; i < m.cols(); ++i)
      if (!m(j, i).is_zero()) out.push_back({j + 1, i + 1, m(j, i).value()});
  return out;
}

Mat matrix_from_triples(const Field& F, Eigen::Index rows, Eigen::Index cols, const Json& j) {
  Mat m = zeros(F, rows, cols);
  if (!j.is_array()) fail("SyntaxError", "matrix must be an array of [j, i, value] triples");
  for (const Json& t : j) {
    if (!t.is_array() || t.size() != 3) fail("SyntaxError", "matrix entry is not a triple");
    Eigen::Index r = t[0].get<Eigen::Index>() - 1;
    Eigen::Index c = t[1].get<Eigen::Index>() - 1;
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      fail("SyntaxError", "matrix entry index out of range");
    m(r, c) = Fp(t[2].get<std::int64_t>(), F);
  }
  return m;
}

}  // namespace

Json mcs_to_json(const MCSObject& s) {
  Json j;
  j["formatVersion"] = 1;
  j["prime"] = s.F.modulus();
  j["front"] = s.front.render();
  j["maslovBaseline"] = s.baseline;
  Json intervals = Json::array();
  for (const Mat& d : s.intervals) intervals.push_back(matrix_to_triples(d));
  j["intervals"] = intervals;
  Json slides = Json::array();
  int fe = 0;
  for (const MCSColumn& c : s.columns) {
    if (!c.is_slide) {
      ++fe;
      continue;
    }
    Json sj;
    sj["afterEvent"] = fe;
    sj["matrix"] = matrix_to_triples(c.slide);
    slides.push_back(sj);
  }
  j["extraSlides"] = slides;
  return j;
}

MCSObject mcs_from_json(const Json& j) {
  if (!j.is_object()) fail("SyntaxError", "MCS document must be a JSON object");
  for (const char* key : {"prime", "front", "intervals"})
    if (!j.contains(key)) fail("SyntaxError", std::string("MCS document missing '") + key + "'");
  Field F(j["prime"].get<std::int64_t>());
  FrontDiagram front = FrontDiagram::parse(j["front"].get<std::string>());
  int baseline = j.value("maslovBaseline", 1);
  MaslovPotential maslov = compute_maslov(front, baseline);
  const int m = static_cast<int>(front.events().size());

  // slides per region, in array order
  std::vector<std::vector<Json>> region_slides(static_cast<size_t>(m + 1));
  if (j.contains("extraSlides")) {
    for (const Json& sj : j["extraSlides"]) {
      int after = sj.at("afterEvent").get<int>();
      if (after < 0 || after > m) fail("SyntaxError", "extraSlides afterEvent out of range");
      region_slides[static_cast<size_t>(after)].push_back(sj.at("matrix"));
    }
  }
  MCSObject s{front, F, baseline, maslov, {}, {}};
  for (int r = 0; r <= m; ++r) {
    for (size_t x = 0; x < region_slides[static_cast<size_t>(r)].size(); ++x)
      s.columns.push_back(MCSColumn{true, -1, Mat()});
    if (r < m) s.columns.push_back(MCSColumn{false, r, Mat()});
  }
  const Json& intervals = j["intervals"];
  if (!intervals.is_array() || static_cast<int>(intervals.size()) != static_cast<int>(s.columns.size()) + 1)
    fail("SyntaxError", "intervals array must have one entry per refined interval (" +
                            std::to_string(s.columns.size() + 1) + " expected)");
  {
    int fi = 0;
    size_t t = 0;
    auto push_interval = [&]() {
      int n = front.strand_counts()[static_cast<size_t>(fi)];
      s.intervals.push_back(matrix_from_triples(F, n, n, intervals[t]));
      ++t;
    };
    push_interval();
    size_t slide_cursor = 0;
    int region = 0;
    for (MCSColumn& c : s.columns) {
      if (c.is_slide) {
        int n = front.strand_counts()[static_cast<size_t>(fi)];
        c.slide = matrix_from_triples(F, n, n,
                                      region_slides[static_cast<size_t>(region)][slide_cursor++]);
      } else {
        ++fi;
        ++region;
        slide_cursor = 0;
      }
      push_interval();
    }
  }
  return s;
}

MCSObject load_mcs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IOError", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail("SyntaxError", std::string("invalid JSON: ") + e.what());
  }
  return mcs_from_json(j);
}

FrontDiagram load_front_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IOError", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FrontDiagram::parse(buf.str());
}

Json diagnostics_to_json(const std::vector<Diagnostic>& diags) {
  Json out = Json::array();
  for (const Diagnostic& d : diags) {
    Json dj;
    dj["locus"] = d.locus;
    dj["index"] = d.index;
    dj["code"] = d.code;
    dj["detail"] = d.detail;
    out.push_back(dj);
  }
  return out;
}

Json front_invariants_to_json(const ClassicalInvariants& inv) {
  Json j;
  j["formatVersion"] = 1;
  j["tb"] = inv.tb;
  j["rotation"] = inv.rotation;
  j["components"] = inv.components;
  return j;
}

Json barcodes_to_json(const MCSObject& s) {
  Json j;
  j["formatVersion"] = 1;
  Json list = Json::array();
  for (int t = 0; t < s.refined_interval_count(); ++t) {
    BarannikovResult r = barannikov(s.object_at(t));
    Json ij;
    ij["interval"] = t;
    Json pairs = Json::array();
    for (auto [i, k] : r.barcode.pairs) pairs.push_back({i, k});
    ij["pairs"] = pairs;
    ij["unpaired"] = r.barcode.unpaired;
    list.push_back(ij);
  }
  j["intervals"] = list;
  return j;
}

Json microsupport_to_json(const MicrosupportReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  j["failures"] = rep.failures;
  j["generizationsChecked"] = rep.generizations_checked;
  j["microstalksChecked"] = rep.microstalks_checked;
  j["intervalsChecked"] = rep.intervals_checked;
  return j;
}

Json cohomology_to_json(const std::vector<std::pair<int, int>>& table) {
  Json out = Json::array();
  for (auto [deg, dim] : table) {
    Json e;
    e["degree"] = deg;
    e["dim"] = dim;
    out.push_back(e);
  }
  return out;
}

Json end_ring_to_json(const EndRingReport& rep) {
  Json j;
  j["unit"] = rep.unit;
  j["table"] = rep.table;
  j["h0Dim"] = rep.h0_dim;
  j["unital"] = rep.unital;
  j["associative"] = rep.associative;
  return j;
}

Json enumeration_to_json(const FrontDiagram& front, const Field& F,
                         const EnumerationResult& result, const IsoClasses& classes,
                         bool include_representatives) {
  Json j;
  j["formatVersion"] = 1;
  j["prime"] = F.modulus();
  j["front"] = front.render();
  j["strictCount"] = result.strict_count();
  j["isoClassCount"] = classes.count();
  j["branchesExplored"] = result.branches_explored;
  if (include_representatives) {
    Json cl = Json::array();
    for (int c = 0; c < classes.count(); ++c) {
      Json cj;
      cj["size"] = classes.sizes[static_cast<size_t>(c)];
      cj["representative"] =
          mcs_to_json(result.objects[static_cast<size_t>(classes.representatives[static_cast<size_t>(c)])]);
      cl.push_back(cj);
    }
    j["classes"] = cl;
  }
  return j;
}

}  // namespace legmcs
