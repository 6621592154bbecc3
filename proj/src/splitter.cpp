#include "splitter.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "error.hpp"
#include "homology.hpp"

namespace dms {

std::string_view boundary_kind_name(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Circle: return "circle";
    case BoundaryKind::SingleWedge: return "single-wedge";
    case BoundaryKind::WedgesWithConnectingCircles: return "wedges-with-connecting-circles";
    case BoundaryKind::WedgesWithArcs: return "wedges-with-arcs";
    case BoundaryKind::Scattered: return "scattered";
  }
  return "?";
}

SplitEdges select_split_edges(const Complex& k, const MorseFunction& f, int g1, int g2) {
  if (g1 < 0 || g2 < 0) throw Error(Errc::WrongGenus, "summand genera must be non-negative");
  const VectorField v = induced_field(k, f);
  std::vector<CellIndex> crit;
  for (CellIndex e = k.begin(1); e < k.end(1); ++e)
    if (v.critical(e)) crit.push_back(e);
  const std::size_t want = 2 * static_cast<std::size_t>(g1 + g2);
  if (crit.size() != want)
    throw Error(Errc::WrongCriticalCount, "expected " + std::to_string(want) +
                                              " critical edges, found " +
                                              std::to_string(crit.size()));
  std::stable_sort(crit.begin(), crit.end(),
                   [&](CellIndex a, CellIndex b) { return f[a] < f[b]; });
  SplitEdges out;
  out.low.assign(crit.begin(), crit.begin() + 2 * g1);
  out.high.assign(crit.begin() + 2 * g1, crit.end());
  std::sort(out.low.begin(), out.low.end());
  std::sort(out.high.begin(), out.high.end());
  return out;
}

CoreRegion carve_core(const Complex& k, const VectorField& v, std::span<const CellIndex> high) {
  CoreRegion core;
  for (CellIndex t = k.begin(2); t < k.end(2); ++t) {
    if (!v.critical(t)) continue;
    if (core.critical != kNoCell)
      throw Error(Errc::NotPerfectInput, "more than one critical 2-cell", k.id(t));
    core.critical = t;
  }
  if (core.critical == kNoCell) throw Error(Errc::NotPerfectInput, "no critical 2-cell");
  std::set<CellIndex> cells{core.critical};
  for (CellIndex h : high) {
    if (k.dim(h) != 1 || !v.critical(h))
      throw Error(Errc::InvalidField, "'" + k.id(h) + "' is not a critical edge", k.id(h));
    core.high.push_back(h);
    for (CellIndex t : k.cofaces(h)) {
      if (t == core.critical) continue;
      GradientPath gp = trace_2path(k, v, t);
      if (gp.origin != core.critical)
        throw Error(Errc::PathEscapes, "2-path from '" + k.id(t) + "' starts elsewhere", k.id(t));
      for (CellIndex c : gp.steps)
        if (k.dim(c) == 2) cells.insert(c);
      core.paths.push_back(std::move(gp));
    }
  }
  core.cells.assign(cells.begin(), cells.end());
  return core;
}

namespace {

struct RegionView {
  std::vector<char> in_region;
  std::vector<char> is_high;

  RegionView(const Complex& k, std::span<const CellIndex> region, std::span<const CellIndex> high)
      : in_region(k.size(), 0), is_high(k.size(), 0) {
    for (CellIndex t : region) in_region[t] = 1;
    for (CellIndex h : high) is_high[h] = 1;
  }

  bool interior(const VectorField& v, const Complex& k, CellIndex e) const {
    if (is_high[e]) return true;
    auto p = v.partner(e);
    return p && k.dim(*p) == 2 && in_region[*p];
  }

  int region_cofaces(const Complex& k, CellIndex e) const {
    int n = 0;
    for (CellIndex t : k.cofaces(e)) n += in_region[t];
    return n;
  }
};

std::vector<CellIndex> region_cells_at(const Complex& k, const std::vector<char>& in_region,
                                       CellIndex x) {
  std::set<CellIndex> out;
  if (k.dim(x) == 1) {
    for (CellIndex t : k.cofaces(x))
      if (in_region[t]) out.insert(t);
  } else {
    for (CellIndex e : k.cofaces(x))
      for (CellIndex t : k.cofaces(e))
        if (in_region[t]) out.insert(t);
  }
  return {out.begin(), out.end()};
}

}  // namespace

BoundaryGraph classify_boundary(const Complex& k, const VectorField& v,
                                std::span<const CellIndex> region,
                                std::span<const CellIndex> high) {
  RegionView rv(k, region, high);
  BoundaryGraph bg;
  std::map<CellIndex, int> curve_deg, slit_deg;
  std::set<CellIndex> verts;
  for (CellIndex t : region)
    for (CellIndex e : k.faces(t))
      for (CellIndex x : k.faces(e)) verts.insert(x);
  for (CellIndex x : verts) curve_deg[x] = slit_deg[x] = 0;
  std::vector<char> is_slit(k.size(), 0);
  for (CellIndex e = k.begin(1); e < k.end(1); ++e) {
    const int rc = rv.region_cofaces(k, e);
    if (rc == 0 || rv.interior(v, k, e)) continue;
    if (rc == 1) {
      bg.curve.push_back(e);
      for (CellIndex x : k.faces(e)) ++curve_deg[x];
    } else {
      bg.slits.push_back(e);
      is_slit[e] = 1;
      for (CellIndex x : k.faces(e)) ++slit_deg[x];
    }
  }
  for (CellIndex x : verts) bg.degree[x] = curve_deg[x] + 2 * slit_deg[x];

  auto passes = [&](CellIndex x) { return slit_deg[x] == 2 && curve_deg[x] == 0; };
  std::vector<char> used(k.size(), 0);
  std::set<CellIndex> arc_interior;
  for (CellIndex s : bg.slits) {
    if (used[s]) continue;
    Arc arc;
    std::deque<CellIndex> chain{s};
    used[s] = 1;
    for (int side = 0; side < 2; ++side) {
      CellIndex e = s;
      CellIndex x = k.ends(s)[side];
      while (passes(x)) {
        CellIndex next = kNoCell;
        for (CellIndex f : k.cofaces(x))
          if (is_slit[f] && f != e) next = f;
        if (next == kNoCell || used[next]) {
          arc.interior.push_back(x);
          break;
        }
        arc.interior.push_back(x);
        used[next] = 1;
        if (side == 0) chain.push_front(next); else chain.push_back(next);
        auto ends = k.ends(next);
        x = ends[0] == x ? ends[1] : ends[0];
        e = next;
      }
    }
    std::sort(arc.interior.begin(), arc.interior.end());
    arc.interior.erase(std::unique(arc.interior.begin(), arc.interior.end()), arc.interior.end());
    arc_interior.insert(arc.interior.begin(), arc.interior.end());
    arc.edges.assign(chain.begin(), chain.end());
    bg.arcs.push_back(std::move(arc));
  }
  for (CellIndex x : verts)
    if (bg.degree[x] >= 4 && !arc_interior.count(x)) bg.wedges.push_back(x);

  for (CellIndex x : verts)
    if (v.critical(x)) bg.stray_criticals.push_back(x);
  for (CellIndex e = k.begin(1); e < k.end(1); ++e)
    if (v.critical(e) && !rv.is_high[e] && rv.region_cofaces(k, e) > 0)
      bg.stray_criticals.push_back(e);

  // Components of the curve graph.
  std::map<CellIndex, CellIndex> parent;
  std::function<CellIndex(CellIndex)> root = [&](CellIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (CellIndex e : bg.curve)
    for (CellIndex x : k.faces(e)) parent.emplace(x, x);
  for (CellIndex e : bg.curve) parent[root(k.ends(e)[0])] = root(k.ends(e)[1]);
  for (auto& [x, p] : parent)
    if (root(x) == x) ++bg.components;

  if (!bg.arcs.empty()) bg.kind = BoundaryKind::WedgesWithArcs;
  else if (bg.wedges.size() >= 2) bg.kind = BoundaryKind::WedgesWithConnectingCircles;
  else if (bg.wedges.size() == 1) bg.kind = BoundaryKind::SingleWedge;
  else if (bg.components == 1) bg.kind = BoundaryKind::Circle;
  else bg.kind = BoundaryKind::Scattered;

  for (CellIndex x : verts) bg.metric += bg.degree[x] - 2;
  bg.metric += 2 * static_cast<long>(bg.arcs.size()) + 2 * static_cast<long>(bg.stray_criticals.size());
  return bg;
}

RegionState::RegionState(const Complex& k, const VectorField& v,
                         const std::vector<CellId>& region, const std::vector<CellId>& high)
    : s_(k, v), k_(k), v_(v), region_(region.begin(), region.end()), high_(high) {}

void RegionState::refresh() {
  auto [k, v] = s_.finish();
  k_ = std::move(k);
  v_ = std::move(v);
}

std::vector<CellIndex> RegionState::region() const {
  std::vector<CellIndex> out;
  for (const CellId& id : region_) out.push_back(k_.at(id));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CellIndex> RegionState::high() const {
  std::vector<CellIndex> out;
  for (const CellId& id : high_) out.push_back(k_.at(s_.current(id)));
  std::sort(out.begin(), out.end());
  return out;
}

BoundaryGraph RegionState::classify() const {
  auto r = region();
  auto h = high();
  return classify_boundary(k_, v_, r, h);
}

std::set<CellId> RegionState::expand(const std::set<CellId>& ids) const {
  std::map<CellId, const BisectionRecord*> by_old;
  for (const auto& rec : s_.log()) by_old[rec.old_cell] = &rec;
  std::set<CellId> out;
  std::vector<CellId> todo(ids.begin(), ids.end());
  while (!todo.empty()) {
    CellId id = todo.back();
    todo.pop_back();
    if (s_.has(id)) {
      out.insert(id);
    } else if (auto it = by_old.find(id); it != by_old.end()) {
      todo.insert(todo.end(), it->second->new_cells.begin(), it->second->new_cells.end());
    }
  }
  return out;
}

CellId RegionState::push_runs(CellId cur, const std::set<CellId>& pushed) {
  for (int guard = 0; guard < 1000; ++guard) {
    const std::set<CellId> p = expand(pushed);
    const Cycle<CellId> cyc = s_.cycle(cur);
    const std::size_t n = cyc.vertices.size();
    std::vector<char> vp(n), ep(n);
    for (std::size_t i = 0; i < n; ++i) {
      vp[i] = p.count(cyc.vertices[i]) ? 1 : 0;
      ep[i] = p.count(cyc.edges[i]) ? 1 : 0;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (ep[i]) vp[i] = vp[(i + 1) % n] = 1;
    if (std::none_of(vp.begin(), vp.end(), [](char c) { return c != 0; })) return cur;
    const auto kept = std::count(ep.begin(), ep.end(), 0);
    if (kept == 0) throw Error(Errc::NoFlankingCells, "every edge of '" + cur + "' is pushed", cur);
    // A run starts at a pushed vertex preceded by a kept edge.
    std::size_t i = 0;
    while (!(vp[i] && !ep[(i + n - 1) % n])) ++i;
    std::size_t j = i;
    while (ep[j]) j = (j + 1) % n;
    const CellId before = cyc.edges[(i + n - 1) % n];
    const CellId after = cyc.edges[j];
    const CellId start = cyc.vertices[i], stop = cyc.vertices[j];
    if (before != after) {
      const CellId pp = s_.bisect_edge(before, cyc.vertices[(i + n - 1) % n]).new_cells[0];
      const CellId qq = s_.bisect_edge(after, cyc.vertices[(j + 1) % n]).new_cells[0];
      cur = s_.cut(cur, pp, qq, start).heir;
    } else {
      // Only one kept edge, running from stop to start. Split it into four
      // and keep the middle triangle; the inner halves take over any pairing.
      auto mid = s_.bisect_edge(before);
      const CellId w = mid.new_cells[0];
      const CellId u1 = s_.bisect_edge(mid.new_cells[1], w).new_cells[0];
      const CellId u2 = s_.bisect_edge(mid.new_cells[2], w).new_cells[0];
      cur = s_.cut(cur, u1, u2, start).heir;
    }
  }
  throw Error(Errc::Internal, "pushing faces off '" + cur + "' does not settle", cur);
}

void RegionState::push_away(const std::map<CellId, std::set<CellId>, IdLess>& pushes) {
  for (const auto& [cell, faces] : pushes) {
    const CellId cur = s_.current(cell);
    if (!region_.count(cur)) continue;
    const CellId heir = push_runs(cur, faces);
    if (heir != cur) {
      region_.erase(cur);
      region_.insert(heir);
    }
  }
  refresh();
}

void RegionState::resolve_arc(const Arc& arc) {
  auto r = region();
  RegionView rv(k_, r, high());
  std::map<CellId, std::set<CellId>, IdLess> pushes;
  for (CellIndex e : arc.edges)
    for (CellIndex t : region_cells_at(k_, rv.in_region, e)) pushes[k_.id(t)].insert(k_.id(e));
  for (CellIndex x : arc.interior)
    for (CellIndex t : region_cells_at(k_, rv.in_region, x)) pushes[k_.id(t)].insert(k_.id(x));
  push_away(pushes);
}

void RegionState::resolve_wedge(CellIndex x) {
  auto r = region();
  auto h = high();
  RegionView rv(k_, r, h);
  CellIndex first = kNoCell;
  for (CellIndex e : k_.cofaces(x))
    if (!rv.interior(v_, k_, e) && (first == kNoCell || e < first)) first = e;
  if (first == kNoCell)
    throw Error(Errc::Internal, "vertex '" + k_.id(x) + "' is interior to the region", k_.id(x));
  // Walk the rotation at x; runs of region cells joined by interior edges are sectors.
  std::vector<std::vector<CellIndex>> sectors;
  std::vector<CellIndex> current;
  CellIndex e = first;
  CellIndex t = *std::min_element(k_.cofaces(e).begin(), k_.cofaces(e).end());
  for (std::size_t step = 0; step <= k_.size(); ++step) {
    if (!rv.in_region[t] || !rv.interior(v_, k_, e)) {
      if (!current.empty()) sectors.push_back(std::move(current));
      current.clear();
    }
    if (rv.in_region[t]) current.push_back(t);
    CellIndex next = kNoCell;
    for (CellIndex f : k_.faces(t))
      if (f != e && k_.is_face(x, f)) next = f;
    if (next == first) break;
    auto cof = k_.cofaces(next);
    t = cof[0] == t ? cof[1] : cof[0];
    e = next;
  }
  if (!current.empty()) sectors.push_back(std::move(current));
  std::map<CellId, std::set<CellId>, IdLess> pushes;
  for (std::size_t i = 1; i < sectors.size(); ++i)
    for (CellIndex c : sectors[i]) pushes[k_.id(c)].insert(k_.id(x));
  push_away(pushes);
}

void RegionState::push_criticals(const BoundaryGraph& bg) {
  auto r = region();
  RegionView rv(k_, r, high());
  std::map<CellId, std::set<CellId>, IdLess> pushes;
  for (CellIndex c : bg.stray_criticals)
    for (CellIndex t : region_cells_at(k_, rv.in_region, c)) pushes[k_.id(t)].insert(k_.id(c));
  push_away(pushes);
}

namespace {

CellId chase(const std::vector<BisectionRecord>& log, CellId id) {
  for (const auto& rec : log)
    if (rec.old_cell == id) id = rec.heir;
  return id;
}

void check_decomposable(const Complex& k, const MorseFunction& f, int g1, int g2) {
  if (k.top_dim() != 2) throw Error(Errc::NotClosedSurface, "input is not a surface");
  SurfaceInfo info = verify_closed_surface(k);
  if (!info.connected) throw Error(Errc::Disconnected, "input surface is not connected");
  if (!info.orientable) throw Error(Errc::NonOrientableInput, "input surface is not orientable");
  if (g1 < 0 || g2 < 0) throw Error(Errc::WrongGenus, "summand genera must be non-negative");
  if (g1 + g2 != info.genus)
    throw Error(Errc::WrongGenus, "input has genus " + std::to_string(info.genus) + ", not " +
                                      std::to_string(g1 + g2));
  if (g1 + g2 == 0) throw Error(Errc::WrongGenus, "a sphere has nothing to decompose");
  if (!validate_function(k, f).ok) throw Error(Errc::InvalidFunction, "input is not a Morse function");
  if (!is_perfect(k, induced_field(k, f)))
    throw Error(Errc::NotPerfectInput, "input function is not perfect");
}

}  // namespace

CircleSearch find_separating_circle(const Complex& k, const MorseFunction& f, int g1, int g2) {
  check_decomposable(k, f, g1, g2);
  const MorseFunction fi = make_injective(k, f);
  const VectorField v = induced_field(k, fi);
  const SplitEdges sel = select_split_edges(k, fi, g1, g2);
  Separation sep = separate_critical_cells(k, v);

  CircleSearch out;
  for (CellIndex e : sel.low) out.low.push_back(chase(sep.log, k.id(e)));
  for (CellIndex e : sel.high) out.high.push_back(chase(sep.log, k.id(e)));
  std::vector<CellIndex> high;
  for (const CellId& h : out.high) high.push_back(sep.k.at(h));
  const CoreRegion core = carve_core(sep.k, sep.v, high);
  out.critical2 = sep.k.id(core.critical);
  std::vector<CellId> region;
  for (CellIndex t : core.cells) region.push_back(sep.k.id(t));

  RegionState st(sep.k, sep.v, region, out.high);
  for (int guard = 0;; ++guard) {
    if (guard > 5000) throw Error(Errc::Internal, "boundary repair does not settle");
    const BoundaryGraph bg = st.classify();
    out.metrics.push_back(bg.metric);
    if (!bg.arcs.empty()) {
      out.stages.push_back("arc");
      st.resolve_arc(bg.arcs.front());
    } else if (!bg.wedges.empty()) {
      out.stages.push_back("wedge");
      st.resolve_wedge(bg.wedges.front());
    } else if (!bg.stray_criticals.empty()) {
      out.stages.push_back("critical");
      st.push_criticals(bg);
    } else if (bg.kind == BoundaryKind::Circle) {
      out.stages.push_back("circle");
      Cycle<CellIndex> cyc;
      const Complex& kk = st.complex();
      if (!walk_cycle(bg.curve, [&](CellIndex e) { return kk.ends(e); }, std::less<CellIndex>{}, cyc))
        throw Error(Errc::NotSeparating, "boundary curve is not a single cycle");
      for (CellIndex e : cyc.edges) out.circle.push_back(kk.id(e));
      break;
    } else {
      throw Error(Errc::NotSeparating, "boundary curve splits into " +
                                           std::to_string(bg.components) + " circles");
    }
  }
  out.k = st.complex();
  out.v = st.field();
  for (CellIndex t : st.region()) out.region.push_back(out.k.id(t));
  for (CellId& h : out.high) h = out.k.id(out.k.at(chase(st.log(), h)));
  for (CellId& l : out.low) l = chase(st.log(), l);
  out.bisections = sep.log;
  out.bisections.insert(out.bisections.end(), st.log().begin(), st.log().end());
  return out;
}

namespace {

Piece sub_piece(const Complex& k, const VectorField& v, const std::vector<char>& keep) {
  std::vector<CellRecord> recs;
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (!keep[c]) continue;
    recs.push_back({k.id(c), k.dim(c), {}, k.tag(c)});
    for (CellIndex f : k.faces(c)) recs.back().boundary.push_back(k.id(f));
  }
  Piece p;
  p.k = build_poset(std::move(recs));
  p.v = VectorField(p.k.size());
  for (auto [lo, hi] : v.pairs())
    if (keep[lo] && keep[hi]) p.v.add_pair(p.k.at(k.id(lo)), p.k.at(k.id(hi)));
  return p;
}

}  // namespace

SplitPieces split_along_circle(const Complex& k, const VectorField& v,
                               const std::vector<CellId>& circle) {
  std::vector<char> on_c(k.size(), 0);
  for (const CellId& id : circle) {
    const CellIndex e = k.at(id);
    if (k.dim(e) != 1) throw Error(Errc::NotAnEdge, "'" + id + "' is not an edge", id);
    on_c[e] = 1;
    for (CellIndex x : k.faces(e)) on_c[x] = 1;
  }
  std::vector<int> comp(k.size(), -1);
  int ncomp = 0;
  for (CellIndex t = k.begin(2); t < k.end(2); ++t) {
    if (comp[t] >= 0) continue;
    std::deque<CellIndex> q{t};
    comp[t] = ncomp;
    while (!q.empty()) {
      CellIndex c = q.front();
      q.pop_front();
      for (CellIndex e : k.faces(c)) {
        if (on_c[e]) continue;
        for (CellIndex u : k.cofaces(e))
          if (comp[u] < 0) {
            comp[u] = ncomp;
            q.push_back(u);
          }
      }
    }
    ++ncomp;
  }
  if (ncomp != 2)
    throw Error(Errc::NotSeparating, "curve leaves " + std::to_string(ncomp) + " pieces");
  std::vector<std::vector<char>> keep(2, std::vector<char>(k.size(), 0));
  for (CellIndex t = k.begin(2); t < k.end(2); ++t) {
    auto& kp = keep[comp[t]];
    kp[t] = 1;
    for (CellIndex e : k.faces(t)) {
      kp[e] = 1;
      for (CellIndex x : k.faces(e)) kp[x] = 1;
    }
  }
  CellIndex x0 = kNoCell;
  for (CellIndex x = k.begin(0); x < k.end(0) && x0 == kNoCell; ++x)
    if (v.critical(x)) x0 = x;
  if (x0 == kNoCell || on_c[x0])
    throw Error(Errc::NotSeparating, "critical vertex is missing or lies on the curve");
  const int lo = keep[0][x0] ? 0 : 1, hi = 1 - lo;
  // No arrow may leave the curve into the interior of the max side.
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (!on_c[c]) continue;
    if (auto p = v.partner(c); p && !on_c[*p] && keep[hi][*p])
      throw Error(Errc::Internal, "arrow from curve cell '" + k.id(c) + "' points into the max side",
                  k.id(c));
  }
  SplitPieces out;
  out.circle = circle;
  out.min_side = sub_piece(k, v, keep[lo]);
  out.max_side = sub_piece(k, v, keep[hi]);
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (!on_c[c]) continue;
    if (out.max_side.v.critical(out.max_side.k.at(k.id(c))))
      ++(k.dim(c) == 0 ? out.boundary_critical_vertices : out.boundary_critical_edges);
  }
  return out;
}

namespace {

struct Cone {
  std::vector<CellRecord> recs;
  Cycle<CellId> cyc;
};

Cone cone_over(const Piece& piece, const std::vector<CellId>& circle) {
  Cone cone;
  if (!walk_cycle(circle, [&](const CellId& e) {
        auto ends = piece.k.ends(piece.k.at(e));
        return std::array<CellId, 2>{piece.k.id(ends[0]), piece.k.id(ends[1])};
      }, IdLess{}, cone.cyc))
    throw Error(Errc::NotSeparating, "cap curve is not a single cycle");
  cone.recs = piece.k.records();
  cone.recs.push_back({"cap:apex", 0, {}, CellTag::Cone});
  for (const CellId& x : cone.cyc.vertices) cone.recs.push_back({"cap:" + x, 1, {"cap:apex", x}, CellTag::Cone});
  const std::size_t n = cone.cyc.edges.size();
  for (std::size_t i = 0; i < n; ++i)
    cone.recs.push_back({"cap:" + cone.cyc.edges[i], 2,
                         {cone.cyc.edges[i], "cap:" + cone.cyc.vertices[i],
                          "cap:" + cone.cyc.vertices[(i + 1) % n]},
                         CellTag::Cone});
  return cone;
}

Piece with_cone(const Piece& piece, Cone cone) {
  Piece out;
  out.k = build_poset(std::move(cone.recs));
  out.v = VectorField(out.k.size());
  for (auto [lo, hi] : piece.v.pairs())
    out.v.add_pair(out.k.at(piece.k.id(lo)), out.k.at(piece.k.id(hi)));
  return out;
}

}  // namespace

Piece cap_with_min_cone(const Piece& piece, const std::vector<CellId>& circle) {
  Cone cone = cone_over(piece, circle);
  std::vector<CellId> bv, be;
  std::set<CellId> on_c(circle.begin(), circle.end());
  on_c.insert(cone.cyc.vertices.begin(), cone.cyc.vertices.end());
  for (const CellId& x : cone.cyc.vertices)
    if (piece.v.critical(piece.k.at(x))) bv.push_back(x);
  for (const CellId& e : cone.cyc.edges)
    if (piece.v.critical(piece.k.at(e))) be.push_back(e);
  if (bv.size() != be.size())
    throw Error(Errc::UnbalancedBoundaryCriticals,
                std::to_string(bv.size()) + " boundary-critical vertices against " +
                    std::to_string(be.size()) + " edges");
  Piece out = with_cone(piece, std::move(cone));
  auto at = [&](const CellId& id) { return out.k.at(id); };
  for (auto [lo, hi] : piece.v.pairs()) {
    const CellId& a = piece.k.id(lo);
    const CellId& b = piece.k.id(hi);
    if (on_c.count(a) && on_c.count(b)) out.v.add_pair(at("cap:" + a), at("cap:" + b));
  }
  for (const CellId& x : bv) out.v.add_pair(at(x), at("cap:" + x));
  for (const CellId& e : be) out.v.add_pair(at(e), at("cap:" + e));
  return out;
}

Piece cap_with_max_cone(const Piece& piece, const std::vector<CellId>& circle) {
  Cone cone = cone_over(piece, circle);
  for (const auto* list : {&cone.cyc.vertices, &cone.cyc.edges})
    for (const CellId& c : *list)
      if (piece.v.critical(piece.k.at(c)))
        throw Error(Errc::BoundaryCriticalPresent, "'" + c + "' on the curve is critical", c);
  const std::vector<CellId> verts = cone.cyc.vertices, edges = cone.cyc.edges;
  Piece out = with_cone(piece, std::move(cone));
  const std::size_t n = edges.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    out.v.add_pair(out.k.at("cap:" + verts[i]), out.k.at("cap:" + edges[i]));
  out.v.add_pair(out.k.at("cap:apex"), out.k.at("cap:" + verts[n - 1]));
  return out;
}

namespace {

PieceReport report_piece(const Complex& k, const VectorField& v, const MorseFunction& f,
                         bool resynthesized) {
  PieceReport r;
  r.counts = critical_cells(k, v).m;
  r.betti = betti_mod2(k);
  r.chi = euler_characteristic(k);
  try {
    r.genus = verify_closed_surface(k).genus;
  } catch (const Error&) {
    r.genus = -1;
  }
  r.field_ok = validate_field(k, v).ok;
  r.function_ok = validate_function(k, f).ok && induced_field(k, f) == v;
  r.perfect = r.field_ok && is_perfect(k, v);
  r.resynthesized = resynthesized;
  return r;
}

Extension values_for(const Complex& orig, const MorseFunction& f, const Piece& p) {
  std::vector<std::optional<double>> fixed(p.k.size());
  for (CellIndex c = 0; c < p.k.size(); ++c)
    if (auto o = orig.find(p.k.id(c))) fixed[c] = f[*o];
  return extend_function(p.k, p.v, fixed);
}

}  // namespace

DecomposeResult decompose(const Complex& k, const MorseFunction& f, int g1, int g2) {
  CircleSearch cs = find_separating_circle(k, f, g1, g2);
  DecomposeResult out;
  out.circle = cs.circle;
  out.pieces = split_along_circle(cs.k, cs.v, cs.circle);
  Piece p1 = cap_with_max_cone(out.pieces.min_side, cs.circle);
  Piece p2 = cap_with_min_cone(out.pieces.max_side, cs.circle);
  Extension e1 = values_for(k, f, p1), e2 = values_for(k, f, p2);
  DecomposeReport& rep = out.report;
  rep.g1 = g1;
  rep.g2 = g2;
  rep.chi = euler_characteristic(k);
  const VectorField v = induced_field(k, f);
  rep.counts = critical_cells(k, v).m;
  rep.betti = betti_mod2(k);
  rep.perfect = is_perfect(k, v);
  rep.m1 = report_piece(p1.k, p1.v, e1.f, e1.resynthesized);
  rep.m2 = report_piece(p2.k, p2.v, e2.f, e2.resynthesized);
  rep.min_side_chi = euler_characteristic(out.pieces.min_side.k);
  rep.max_side_chi = euler_characteristic(out.pieces.max_side.k);
  rep.boundary_critical_vertices = out.pieces.boundary_critical_vertices;
  rep.boundary_critical_edges = out.pieces.boundary_critical_edges;
  rep.no_inward_arrows = true;  // split_along_circle throws otherwise
  rep.bisections = std::move(cs.bisections);
  rep.metrics = std::move(cs.metrics);
  rep.stages = std::move(cs.stages);
  out.m1 = std::move(p1.k);
  out.v1 = std::move(p1.v);
  out.f1 = std::move(e1.f);
  out.m2 = std::move(p2.k);
  out.v2 = std::move(p2.v);
  out.f2 = std::move(e2.f);
  return out;
}

}  // namespace dms
