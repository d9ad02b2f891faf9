#include "legmcs/front.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace legmcs {

FrontDiagram::FrontDiagram(std::vector<FrontEvent> events) : events_(std::move(events)) {
  int n = 0;
  counts_.push_back(0);
  for (size_t e = 0; e < events_.size(); ++e) {
    const FrontEvent& ev = events_[e];
    if (ev.pos < 1)
      fail("PositionError", "event " + std::to_string(e + 1) + ": position must be >= 1");
    switch (ev.kind) {
      case EventKind::LeftCusp:
        if (ev.pos > n + 1)
          fail("PositionError", "event " + std::to_string(e + 1) + ": L" + std::to_string(ev.pos) +
                                    " needs position <= " + std::to_string(n + 1));
        n += 2;
        break;
      case EventKind::RightCusp:
      case EventKind::Crossing:
        if (ev.pos + 1 > n)
          fail("PositionError", "event " + std::to_string(e + 1) + ": needs strands " +
                                    std::to_string(ev.pos) + "," + std::to_string(ev.pos + 1) +
                                    " but only " + std::to_string(n) + " exist");
        if (ev.kind == EventKind::RightCusp) n -= 2;
        break;
    }
    counts_.push_back(n);
  }
  if (n != 0) fail("NotClosed", "front ends with " + std::to_string(n) + " open strands");
}

FrontDiagram FrontDiagram::parse(const std::string& text) {
  std::vector<FrontEvent> events;
  std::string stripped;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      stripped += '\n';
    } else {
      stripped += text[i];
    }
  }
  std::istringstream in(stripped);
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2) fail("SyntaxError", "bad token '" + tok + "'");
    EventKind kind;
    switch (tok[0]) {
      case 'L': kind = EventKind::LeftCusp; break;
      case 'R': kind = EventKind::RightCusp; break;
      case 'X': kind = EventKind::Crossing; break;
      default: fail("SyntaxError", "bad token '" + tok + "'");
    }
    for (size_t i = 1; i < tok.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        fail("SyntaxError", "bad token '" + tok + "'");
    events.push_back({kind, std::stoi(tok.substr(1))});
  }
  return FrontDiagram(std::move(events));
}

std::string FrontDiagram::render() const {
  std::string out;
  for (const FrontEvent& ev : events_) {
    if (!out.empty()) out += ' ';
    switch (ev.kind) {
      case EventKind::LeftCusp: out += 'L'; break;
      case EventKind::RightCusp: out += 'R'; break;
      case EventKind::Crossing: out += 'X'; break;
    }
    out += std::to_string(ev.pos);
  }
  return out;
}

namespace {

// Arc decomposition: an arc is a maximal strand segment; crossings continue
// arcs, cusps start/end them. arc_of[interval][pos-1] identifies arcs; cusp
// records pair up arcs for the component graph and the mu constraints.
struct Arcs {
  std::vector<std::vector<int>> arc_of;  // per interval, per position (0-based)
  int count = 0;
  struct Cusp {
    bool left;     // left cusp (birth) or right cusp (death)
    int upper;     // arc at position pos
    int lower;     // arc at position pos+1
    size_t event;  // event index
  };
  std::vector<Cusp> cusps;
};

Arcs trace_arcs(const FrontDiagram& fd) {
  Arcs a;
  const auto& counts = fd.strand_counts();
  a.arc_of.resize(counts.size());
  for (size_t t = 0; t < counts.size(); ++t) a.arc_of[t].assign(counts[t], -1);
  for (size_t e = 0; e < fd.events().size(); ++e) {
    const FrontEvent& ev = fd.events()[e];
    const std::vector<int>& left = a.arc_of[e];
    std::vector<int>& right = a.arc_of[e + 1];
    const int k = ev.pos;  // 1-based
    switch (ev.kind) {
      case EventKind::LeftCusp: {
        for (int i = 0; i < static_cast<int>(left.size()); ++i)
          right[i < k - 1 ? i : i + 2] = left[i];
        right[k - 1] = a.count++;
        right[k] = a.count++;
        a.cusps.push_back({true, right[k - 1], right[k], e});
        break;
      }
      case EventKind::RightCusp: {
        for (int i = 0; i < static_cast<int>(left.size()); ++i) {
          if (i == k - 1 || i == k) continue;
          right[i < k - 1 ? i : i - 2] = left[i];
        }
        a.cusps.push_back({false, left[k - 1], left[k], e});
        break;
      }
      case EventKind::Crossing: {
        for (int i = 0; i < static_cast<int>(left.size()); ++i) right[i] = left[i];
        std::swap(right[k - 1], right[k]);
        break;
      }
    }
  }
  return a;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

MaslovPotential compute_maslov(const FrontDiagram& fd, int baseline) {
  Arcs a = trace_arcs(fd);
  // difference constraints mu(upper) = mu(lower) + 1 at every cusp
  std::vector<std::vector<std::pair<int, int>>> adj(a.count);  // (arc, delta)
  for (const auto& c : a.cusps) {
    adj[c.lower].push_back({c.upper, 1});
    adj[c.upper].push_back({c.lower, -1});
  }
  std::vector<int> mu(a.count, 0);
  std::vector<int> comp(a.count, -1);
  int ncomp = 0;
  for (int s = 0; s < a.count; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = ncomp;
    mu[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (auto [y, d] : adj[x]) {
        if (comp[y] < 0) {
          comp[y] = ncomp;
          mu[y] = mu[x] + d;
          stack.push_back(y);
        } else if (mu[y] != mu[x] + d) {
          fail("NoPotential", "cusp relations are inconsistent (nonzero rotation)");
        }
      }
    }
    ++ncomp;
  }
  // shift each constraint component so its minimum is the baseline
  std::vector<int> cmin(ncomp, 0);
  std::vector<bool> seen(ncomp, false);
  for (int x = 0; x < a.count; ++x) {
    int c = comp[x];
    if (!seen[c] || mu[x] < cmin[c]) cmin[c] = mu[x];
    seen[c] = true;
  }
  for (int x = 0; x < a.count; ++x) mu[x] += baseline - cmin[comp[x]];

  MaslovPotential p;
  p.per_interval.resize(a.arc_of.size());
  for (size_t t = 0; t < a.arc_of.size(); ++t) {
    p.per_interval[t].resize(a.arc_of[t].size());
    for (size_t i = 0; i < a.arc_of[t].size(); ++i) p.per_interval[t][i] = mu[a.arc_of[t][i]];
  }
  return p;
}

ClassicalInvariants classical_invariants(const FrontDiagram& fd) {
  Arcs a = trace_arcs(fd);
  ClassicalInvariants inv;
  if (a.count == 0) return inv;

  // partner arcs at each arc end: arc -> (cusp at its left end, cusp at its right end)
  std::vector<int> left_cusp(a.count, -1), right_cusp(a.count, -1);
  for (size_t c = 0; c < a.cusps.size(); ++c) {
    if (a.cusps[c].left) {
      left_cusp[a.cusps[c].upper] = static_cast<int>(c);
      left_cusp[a.cusps[c].lower] = static_cast<int>(c);
    } else {
      right_cusp[a.cusps[c].upper] = static_cast<int>(c);
      right_cusp[a.cusps[c].lower] = static_cast<int>(c);
    }
  }

  // orientation tracing: +1 = rightward; component starts at its smallest arc id
  std::vector<int> dir(a.count, 0);
  std::vector<int> comp_of(a.count, -1);
  std::vector<int> up_cusps, down_cusps;
  for (int s = 0; s < a.count; ++s) {
    if (comp_of[s] >= 0) continue;
    int comp = inv.components++;
    up_cusps.push_back(0);
    down_cusps.push_back(0);
    int arc = s, d = +1;
    do {
      comp_of[arc] = comp;
      dir[arc] = d;
      int cusp_idx = d > 0 ? right_cusp[arc] : left_cusp[arc];
      const Arcs::Cusp& c = a.cusps[static_cast<size_t>(cusp_idx)];
      bool entered_upper = (c.upper == arc);
      // moving through the turning point: upper in -> downward turn
      (entered_upper ? down_cusps : up_cusps)[static_cast<size_t>(comp)]++;
      arc = entered_upper ? c.lower : c.upper;
      d = -d;
    } while (arc != s);
  }
  for (int c = 0; c < inv.components; ++c)
    inv.rotation.push_back((down_cusps[static_cast<size_t>(c)] - up_cusps[static_cast<size_t>(c)]) / 2);

  // writhe: crossing is positive iff the two strands run in the same x-direction
  int writhe = 0, right_cusps = 0;
  for (const FrontEvent& ev : fd.events())
    if (ev.kind == EventKind::RightCusp) ++right_cusps;
  for (size_t e = 0; e < fd.events().size(); ++e) {
    const FrontEvent& ev = fd.events()[e];
    if (ev.kind != EventKind::Crossing) continue;
    int upper = a.arc_of[e][ev.pos - 1];
    int lower = a.arc_of[e][ev.pos];
    writhe += dir[upper] == dir[lower] ? 1 : -1;
  }
  inv.tb = writhe - right_cusps;
  return inv;
}

namespace {

[[noreturn]] void illegal(const std::string& why) { fail("IllegalMove", why); }

// Far-commutation of consecutive events e then f (f's position given in the
// middle-interval numbering). Returns the swapped pair (f', e') with positions
// renumbered, or throws IllegalMove when the supports interact.
//
// Renumbering rules: a LeftCusp at k shifts positions >= k up by 2, a
// RightCusp at k shifts positions > k+1 down by 2, a Crossing shifts nothing.
std::pair<FrontEvent, FrontEvent> commute(const FrontEvent& e, const FrontEvent& f) {
  const int a = e.pos, b = f.pos;
  const bool fL = f.kind == EventKind::LeftCusp;
  const bool fR = f.kind == EventKind::RightCusp;

  switch (e.kind) {
    case EventKind::LeftCusp:
      if (fL) {
        if (b <= a) return {{f.kind, b}, {e.kind, a + 2}};
        if (b >= a + 2) return {{f.kind, b - 2}, {e.kind, a}};
        illegal("left cusp inserted between a cusp pair");
      }
      // f acts on strands {b, b+1}; e created {a, a+1}
      if (b + 1 < a) return {{f.kind, b}, {e.kind, fR ? a - 2 : a}};
      if (b > a + 1) return {{f.kind, b - 2}, {e.kind, a}};
      illegal("event touches the strands created by the left cusp");

    case EventKind::RightCusp:
      if (fL) {
        if (b <= a - 1) return {{f.kind, b}, {e.kind, a + 2}};
        return {{f.kind, b + 2}, {e.kind, a}};
      }
      if (b + 1 < a) return {{f.kind, b}, {e.kind, fR ? a - 2 : a}};
      if (b >= a) return {{f.kind, b + 2}, {e.kind, a}};
      illegal("event straddles the right cusp position");

    case EventKind::Crossing:
      if (fL) {
        if (b <= a) return {{f.kind, b}, {e.kind, a + 2}};
        if (b >= a + 2) return {{f.kind, b}, {e.kind, a}};
        illegal("left cusp inserted between crossing strands");
      }
      if (b + 1 < a) return {{f.kind, b}, {e.kind, fR ? a - 2 : a}};
      if (b > a + 1) return {{f.kind, b}, {e.kind, a}};
      illegal("overlapping crossing/cusp supports");
  }
  illegal("unreachable");
}

}  // namespace

FrontDiagram apply_move(const FrontDiagram& fd, MoveKind kind, int at) {
  std::vector<FrontEvent> ev = fd.events();
  const int m = static_cast<int>(ev.size());
  switch (kind) {
    case MoveKind::FarCommute: {
      if (at < 0 || at + 1 >= m) illegal("far-commutation needs two consecutive events");
      auto [f2, e2] = commute(ev[at], ev[at + 1]);
      ev[at] = f2;
      ev[at + 1] = e2;
      break;
    }
    case MoveKind::Braid: {
      if (at < 0 || at + 2 >= m) illegal("braid move needs three consecutive events");
      const FrontEvent x = ev[at], y = ev[at + 1], z = ev[at + 2];
      bool all_cross = x.kind == EventKind::Crossing && y.kind == EventKind::Crossing &&
                       z.kind == EventKind::Crossing;
      if (!all_cross || x.pos != z.pos || std::abs(x.pos - y.pos) != 1)
        illegal("pattern is not X_k X_k' X_k with |k-k'| = 1");
      ev[at] = {EventKind::Crossing, y.pos};
      ev[at + 1] = {EventKind::Crossing, x.pos};
      ev[at + 2] = {EventKind::Crossing, y.pos};
      break;
    }
  }
  return FrontDiagram(std::move(ev));
}

}  // namespace legmcs
