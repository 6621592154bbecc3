#include "surgery.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"

namespace dms {

Surgeon::Surgeon(const Complex& k, const VectorField& v) {
  cells_.reserve(k.size() * 2);
  for (CellIndex c = 0; c < k.size(); ++c) {
    Entry e;
    e.dim = k.dim(c);
    e.tag = k.tag(c);
    for (CellIndex f : k.faces(c)) e.faces.push_back(k.id(f));
    for (CellIndex u : k.cofaces(c)) e.cofaces.push_back(k.id(u));
    if (auto p = v.partner(c)) e.partner = k.id(*p);
    cells_.emplace(k.id(c), std::move(e));
  }
}

std::pair<Complex, VectorField> Surgeon::finish() const {
  std::vector<CellRecord> recs;
  recs.reserve(cells_.size());
  for (const auto& [id, e] : cells_) recs.push_back({id, e.dim, e.faces, e.tag});
  Complex k = build_poset(std::move(recs));
  VectorField v(k.size());
  for (CellIndex c = 0; c < k.size(); ++c) {
    const Entry& e = entry(k.id(c));
    if (!e.partner.empty() && entry(e.partner).dim == e.dim + 1) v.add_pair(c, k.at(e.partner));
  }
  return {std::move(k), std::move(v)};
}

const Surgeon::Entry& Surgeon::entry(const CellId& c) const {
  auto it = cells_.find(c);
  if (it == cells_.end()) throw Error(Errc::UnknownCell, "no cell named '" + c + "'", c);
  return it->second;
}

Surgeon::Entry& Surgeon::entry(const CellId& c) {
  auto it = cells_.find(c);
  if (it == cells_.end()) throw Error(Errc::UnknownCell, "no cell named '" + c + "'", c);
  return it->second;
}

std::array<CellId, 2> Surgeon::ends(const CellId& edge) const {
  const Entry& e = entry(edge);
  if (e.dim != 1) throw Error(Errc::NotAnEdge, "'" + edge + "' is not an edge", edge);
  if (id_less(e.faces[1], e.faces[0])) return {e.faces[1], e.faces[0]};
  return {e.faces[0], e.faces[1]};
}

Cycle<CellId> Surgeon::cycle(const CellId& c) const {
  const Entry& e = entry(c);
  if (e.dim != 2) throw Error(Errc::NotA2Cell, "'" + c + "' is not a 2-cell", c);
  Cycle<CellId> out;
  if (!walk_cycle(e.faces, [this](const CellId& x) { return ends(x); }, IdLess{}, out))
    throw Error(Errc::BoundaryNotCycle, "boundary of '" + c + "' is not one cycle", c);
  return out;
}

std::optional<CellId> Surgeon::partner(const CellId& c) const {
  const Entry& e = entry(c);
  if (e.partner.empty()) return std::nullopt;
  return e.partner;
}

CellId Surgeon::current(const CellId& c) const {
  CellId cur = c;
  for (auto it = heir_.find(cur); it != heir_.end(); it = heir_.find(cur)) cur = it->second;
  return cur;
}

CellId Surgeon::fresh(const CellId& base, int k) const {
  CellId id = base + "~b" + std::to_string(k);
  if (cells_.count(id)) throw Error(Errc::Internal, "generated id '" + id + "' already exists", id);
  return id;
}

void Surgeon::pair(const CellId& lo, const CellId& hi) {
  entry(lo).partner = hi;
  entry(hi).partner = lo;
}

void Surgeon::replace(std::vector<CellId>& list, const CellId& from,
                      std::initializer_list<CellId> to) {
  auto it = std::find(list.begin(), list.end(), from);
  if (it != list.end()) list.erase(it);
  list.insert(list.end(), to.begin(), to.end());
}

BisectionRecord Surgeon::bisect_edge(const CellId& e, const std::optional<CellId>& heir_end) {
  if (entry(e).dim != 1) throw Error(Errc::NotAnEdge, "'" + e + "' is not an edge", e);
  auto [x, y] = ends(e);
  const CellId p = entry(e).partner;
  CellId a = x;
  if (!p.empty() && entry(p).dim == 0) {
    a = p;  // a vertex-edge pair keeps its vertex on the surviving half
  } else if (heir_end) {
    if (*heir_end != x && *heir_end != y)
      throw Error(Errc::VertexNotOnCell, "'" + *heir_end + "' is not an end of '" + e + "'",
                  *heir_end);
    a = *heir_end;
  }
  const CellId b = a == x ? y : x;
  const CellId w = fresh(e, 0), e1 = fresh(e, 1), e2 = fresh(e, 2);
  const std::vector<CellId> cof = entry(e).cofaces;
  cells_[w] = Entry{0, CellTag::Bisection, {}, {e1, e2}, {}};
  cells_[e1] = Entry{1, CellTag::Bisection, {a, w}, cof, {}};
  cells_[e2] = Entry{1, CellTag::Bisection, {w, b}, cof, {}};
  for (const CellId& t : cof) replace(entry(t).faces, e, {e1, e2});
  replace(entry(a).cofaces, e, {e1});
  replace(entry(b).cofaces, e, {e2});
  BisectionRecord rec{e, {w, e1, e2}, {}, e1};
  if (!p.empty()) {
    entry(p).partner.clear();
    if (entry(p).dim == 0) {
      pair(p, e1);
      rec.new_pairings.push_back({p, e1});
    } else {
      pair(e1, p);
      rec.new_pairings.push_back({e1, p});
    }
  }
  pair(w, e2);
  rec.new_pairings.push_back({w, e2});
  cells_.erase(e);
  heir_[e] = e1;
  log_.push_back(rec);
  return rec;
}

BisectionRecord Surgeon::bisect_2cell(const CellId& c, const CellId& u, const CellId& w) {
  if (entry(c).dim != 2) throw Error(Errc::NotA2Cell, "'" + c + "' is not a 2-cell", c);
  if (!entry(c).cofaces.empty())
    throw Error(Errc::NotA2Cell, "'" + c + "' is not a top-dimensional 2-cell", c);
  const Cycle<CellId> cyc = cycle(c);
  const std::size_t k = cyc.vertices.size();
  auto pos = [&](const CellId& x) {
    auto it = std::find(cyc.vertices.begin(), cyc.vertices.end(), x);
    if (it == cyc.vertices.end())
      throw Error(Errc::BadChord, "'" + x + "' is not on the boundary of '" + c + "'", x);
    return static_cast<std::size_t>(it - cyc.vertices.begin());
  };
  const std::size_t iu = pos(u), iw = pos(w);
  const std::size_t gap = (iw + k - iu) % k;
  if (gap == 0 || gap == 1 || gap == k - 1)
    throw Error(Errc::BadChord, "chord " + u + "-" + w + " of '" + c + "' is degenerate", c);
  std::vector<CellId> side1, side2;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t off = (i + k - iu) % k;
    (off < gap ? side1 : side2).push_back(cyc.edges[i]);
  }
  const CellId d = fresh(c, 0), c1 = fresh(c, 1), c2 = fresh(c, 2);
  cells_[d] = Entry{1, CellTag::Bisection, {u, w}, {c1, c2}, {}};
  side1.push_back(d);
  side2.push_back(d);
  cells_[c1] = Entry{2, CellTag::Bisection, side1, {}, {}};
  cells_[c2] = Entry{2, CellTag::Bisection, side2, {}, {}};
  for (std::size_t i = 0; i + 1 < side1.size(); ++i) replace(entry(side1[i]).cofaces, c, {c1});
  for (std::size_t i = 0; i + 1 < side2.size(); ++i) replace(entry(side2[i]).cofaces, c, {c2});
  entry(u).cofaces.push_back(d);
  entry(w).cofaces.push_back(d);
  const CellId p = entry(c).partner;
  BisectionRecord rec{c, {d, c1, c2}, {}, c1};
  if (!p.empty()) {
    if (entry(p).dim != 1)
      throw Error(Errc::NotA2Cell, "'" + c + "' is paired with a higher cell", c);
    const bool in1 = std::find(side1.begin(), side1.end(), p) != side1.end();
    rec.heir = in1 ? c1 : c2;
    const CellId other = in1 ? c2 : c1;
    pair(p, rec.heir);
    pair(d, other);
    rec.new_pairings = {{p, rec.heir}, {d, other}};
  } else {
    pair(d, c2);
    rec.new_pairings = {{d, c2}};
  }
  cells_.erase(c);
  heir_[c] = rec.heir;
  log_.push_back(rec);
  return rec;
}

BisectionRecord Surgeon::cut(const CellId& c, const CellId& a, const CellId& b,
                             const CellId& avoid) {
  const Cycle<CellId> cyc = cycle(c);
  const std::size_t k = cyc.vertices.size();
  auto pos = [&](const CellId& x) {
    auto it = std::find(cyc.vertices.begin(), cyc.vertices.end(), x);
    if (it == cyc.vertices.end())
      throw Error(Errc::BadChord, "'" + x + "' is not on the boundary of '" + c + "'", x);
    return static_cast<std::size_t>(it - cyc.vertices.begin());
  };
  const std::size_t ia = pos(a), ib = pos(b), iv = pos(avoid);
  if (iv == ia || iv == ib) throw Error(Errc::Internal, "cut endpoint coincides with avoided vertex");
  // The walk a -> b in canonical order becomes the first piece.
  const bool walk_hits = (iv + k - ia) % k < (ib + k - ia) % k;
  return walk_hits ? bisect_2cell(c, b, a) : bisect_2cell(c, a, b);
}

SurgeryResult bisect_edge(const Complex& k, const VectorField& v, std::string_view e) {
  Surgeon s(k, v);
  if (k.dim(k.at(e)) != 1) throw Error(Errc::NotAnEdge, "'" + std::string(e) + "' is not an edge");
  auto rec = s.bisect_edge(std::string(e));
  auto [k2, v2] = s.finish();
  return {std::move(k2), std::move(v2), std::move(rec)};
}

SurgeryResult bisect_2cell(const Complex& k, const VectorField& v, std::string_view c,
                           std::string_view u, std::string_view w) {
  Surgeon s(k, v);
  k.at(c);
  auto rec = s.bisect_2cell(std::string(c), std::string(u), std::string(w));
  auto [k2, v2] = s.finish();
  return {std::move(k2), std::move(v2), std::move(rec)};
}

namespace {

// Cuts a critical polygon down to a triangle; the heir stays critical and the
// cut-off pieces pair with the chords.
CellId fan_to_triangle(Surgeon& s, CellId t) {
  while (true) {
    auto cyc = s.cycle(t);
    if (cyc.vertices.size() <= 3) return t;
    auto rec = s.cut(t, cyc.vertices[0], cyc.vertices[2], cyc.vertices[1]);
    t = rec.heir;
  }
}

}  // namespace

CellId isolate_critical_2cell(Surgeon& s, const CellId& t) {
  if (s.partner(t)) throw Error(Errc::Internal, "'" + t + "' is not critical", t);
  const Cycle<CellId> cyc = s.cycle(t);
  const std::size_t k = cyc.vertices.size();
  std::vector<CellId> mids(k);
  for (std::size_t i = 0; i < k; ++i) mids[i] = s.bisect_edge(cyc.edges[i]).new_cells[0];
  CellId cur = t;
  for (std::size_t i = 0; i < k; ++i)
    cur = s.cut(cur, mids[(i + k - 1) % k], mids[i], cyc.vertices[i]).heir;
  return fan_to_triangle(s, cur);
}

namespace {

enum class ClashKind { None, IsolateTop, CornerCut, SplitNear, Chord };

struct Clash {
  ClashKind kind = ClashKind::None;
  CellIndex a = kNoCell, b = kNoCell, c = kNoCell;
};

Clash find_clash(const Complex& k, const VectorField& v) {
  auto shared_vertex = [&](CellIndex e, CellIndex f) -> CellIndex {
    for (CellIndex x : k.faces(e))
      if (k.is_face(x, f)) return x;
    return kNoCell;
  };
  for (CellIndex t = k.begin(2); t < k.end(2); ++t) {
    std::vector<CellIndex> crit;
    if (v.critical(t)) crit.push_back(t);
    std::set<CellIndex> verts;
    for (CellIndex e : k.faces(t)) {
      if (v.critical(e)) crit.push_back(e);
      for (CellIndex x : k.faces(e)) verts.insert(x);
    }
    for (CellIndex x : verts)
      if (v.critical(x)) crit.push_back(x);
    if (crit.size() < 2) continue;
    if (v.critical(t)) return {ClashKind::IsolateTop, t};
    for (CellIndex x : crit)
      if (k.dim(x) == 0) return {ClashKind::CornerCut, x};
    CellIndex e = crit[0], f = crit[1];
    if (CellIndex x = shared_vertex(e, f); x != kNoCell) return {ClashKind::SplitNear, f, x};
    return {ClashKind::Chord, t, e, f};
  }
  for (CellIndex x = k.begin(0); x < k.end(0); ++x) {
    std::vector<CellIndex> crit;
    for (CellIndex e : k.cofaces(x))
      if (v.critical(e)) crit.push_back(e);
    if (crit.empty()) continue;
    if (v.critical(x)) return {ClashKind::CornerCut, x};
    if (crit.size() >= 2) return {ClashKind::SplitNear, crit[1], x};
  }
  return {};
}

void corner_cut(Surgeon& s, const CellId& x) {
  std::vector<CellId> edges = s.cofaces(x);
  std::sort(edges.begin(), edges.end(), IdLess{});
  std::map<CellId, CellId> near_point;  // near half of each edge -> its new point
  for (const CellId& e : edges) {
    auto [a, b] = s.ends(e);
    const CellId far = a == x ? b : a;
    auto rec = s.bisect_edge(e, far);
    const CellId near = rec.new_cells[1] == rec.heir ? rec.new_cells[2] : rec.new_cells[1];
    near_point[near] = rec.new_cells[0];
  }
  std::vector<CellId> cells;
  for (const auto& [near, p] : near_point)
    for (const CellId& t : s.cofaces(near))
      if (std::find(cells.begin(), cells.end(), t) == cells.end()) cells.push_back(t);
  std::sort(cells.begin(), cells.end(), IdLess{});
  for (const CellId& t : cells) {
    std::vector<CellId> pts;
    for (const CellId& e : s.faces(t))
      if (auto it = near_point.find(e); it != near_point.end()) pts.push_back(it->second);
    if (pts.size() != 2) throw Error(Errc::Internal, "corner of '" + t + "' is not a wedge", t);
    s.cut(t, pts[0], pts[1], x);
  }
}

}  // namespace

bool critical_cells_separated(const Complex& k, const VectorField& v) {
  return find_clash(k, v).kind == ClashKind::None;
}

Separation separate_critical_cells(const Complex& k, const VectorField& v) {
  Separation out{k, v, {}};
  if (k.top_dim() != 2) return out;
  Surgeon s(k, v);
  for (int guard = 0;; ++guard) {
    Clash cl = find_clash(out.k, out.v);
    if (cl.kind == ClashKind::None) break;
    if (guard > 10000) throw Error(Errc::Internal, "critical-cell separation does not settle");
    const Complex& kk = out.k;
    switch (cl.kind) {
      case ClashKind::IsolateTop:
        isolate_critical_2cell(s, kk.id(cl.a));
        break;
      case ClashKind::CornerCut:
        corner_cut(s, kk.id(cl.a));
        break;
      case ClashKind::SplitNear: {
        auto e = kk.ends(cl.a);
        s.bisect_edge(kk.id(cl.a), kk.id(e[0] == cl.b ? e[1] : e[0]));
        break;
      }
      case ClashKind::Chord: {
        auto cyc = kk.cycle(cl.a);
        const std::size_t n = cyc.edges.size();
        std::size_t i = 0, j = 0;
        for (std::size_t q = 0; q < n; ++q) {
          if (cyc.edges[q] == cl.b) i = q;
          if (cyc.edges[q] == cl.c) j = q;
        }
        s.bisect_2cell(kk.id(cl.a), kk.id(cyc.vertices[(i + 1) % n]),
                       kk.id(cyc.vertices[(j + 1) % n]));
        break;
      }
      case ClashKind::None:
        break;
    }
    auto [k2, v2] = s.finish();
    out.k = std::move(k2);
    out.v = std::move(v2);
  }
  out.log = s.log();
  return out;
}

TubeRegion build_prism_over_boundary(const Complex& k, std::string_view alpha) {
  const CellIndex a = k.at(alpha);
  if (k.dim(a) != k.top_dim())
    throw Error(Errc::NotTopCell, "'" + k.id(a) + "' is not top-dimensional", k.id(a));
  TubeRegion tube;
  tube.alpha = k.id(a);
  const CellIndex self[1] = {a};
  for (CellIndex c : closure(k, self))
    if (c != a) tube.base.push_back(k.id(c));
  for (const CellId& s : tube.base) {
    tube.top[s] = "tube:" + s + ":top";
    tube.prism[s] = "tube:" + s + ":prism";
  }
  for (const CellId& s : tube.base) {
    const CellIndex c = k.at(s);
    CellRecord top{tube.top[s], k.dim(c), {}, CellTag::Tube};
    CellRecord prism{tube.prism[s], k.dim(c) + 1, {s, tube.top[s]}, CellTag::Tube};
    for (CellIndex f : k.faces(c)) {
      top.boundary.push_back(tube.top[k.id(f)]);
      prism.boundary.push_back(tube.prism[k.id(f)]);
    }
    tube.records.push_back(std::move(top));
    tube.records.push_back(std::move(prism));
  }
  return tube;
}

namespace {

std::vector<CellIndex> vertices_of(const Complex& k, CellIndex c) {
  const CellIndex self[1] = {c};
  std::vector<CellIndex> out;
  for (CellIndex x : closure(k, self))
    if (k.dim(x) == 0) out.push_back(x);
  return out;
}

// Maps each cell of closure(c) to its vertex set; throws unless it is a simplex.
std::map<std::vector<CellIndex>, CellIndex> simplex_faces(const Complex& k, CellIndex c) {
  const CellIndex self[1] = {c};
  auto cl = closure(k, self);
  std::map<std::vector<CellIndex>, CellIndex> by_verts;
  const std::size_t n = static_cast<std::size_t>(k.dim(c));
  for (CellIndex x : cl) {
    auto vs = vertices_of(k, x);
    if (vs.size() != static_cast<std::size_t>(k.dim(x)) + 1 || !by_verts.emplace(vs, x).second)
      throw Error(Errc::NotSimplex, "'" + k.id(c) + "' is not a simplex", k.id(c));
  }
  if (cl.size() != (std::size_t{1} << (n + 1)) - 1)
    throw Error(Errc::NotSimplex, "'" + k.id(c) + "' is not a simplex", k.id(c));
  return by_verts;
}

bool is_simplex(const Complex& k, CellIndex c) {
  try {
    simplex_faces(k, c);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

InnerCopy shrink_closed_star(const Complex& k, std::string_view beta, std::string_view v) {
  const CellIndex b = k.at(beta), x = k.at(v);
  if (k.dim(b) != k.top_dim())
    throw Error(Errc::NotTopCell, "'" + k.id(b) + "' is not top-dimensional", k.id(b));
  const auto verts = vertices_of(k, b);
  if (k.dim(x) != 0 || !std::binary_search(verts.begin(), verts.end(), x))
    throw Error(Errc::VertexNotOnCell, "'" + k.id(x) + "' is not a vertex of '" + k.id(b) + "'",
                k.id(x));
  auto faces_by_verts = simplex_faces(k, b);
  InnerCopy ic;
  ic.beta = k.id(b);
  ic.v = k.id(x);
  std::map<CellIndex, CellIndex> join;  // rho -> v*rho, for rho not containing v
  std::vector<CellIndex> link;
  for (const auto& [vs, c] : faces_by_verts) {
    ic.j.push_back(k.id(c));
    if (std::binary_search(vs.begin(), vs.end(), x)) continue;
    link.push_back(c);
    auto with = vs;
    with.insert(std::lower_bound(with.begin(), with.end(), x), x);
    join[c] = faces_by_verts.at(with);
  }
  std::sort(link.begin(), link.end());
  std::sort(ic.j.begin(), ic.j.end(), IdLess{});
  auto inner = [&](CellIndex c) { return "inner:" + k.id(c); };
  auto prism = [&](CellIndex c) { return "inner:" + k.id(c) + ":prism"; };
  std::map<CellId, std::vector<CellId>> split;  // v*rho -> its two pieces
  std::set<CellIndex> removed;
  for (CellIndex r : link) {
    removed.insert(join[r]);
    split[k.id(join[r])] = {inner(join[r]), prism(r)};
  }
  std::vector<CellRecord> recs;
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (removed.count(c)) continue;
    CellRecord rec{k.id(c), k.dim(c), {}, k.tag(c)};
    for (CellIndex f : k.faces(c)) {
      auto it = split.find(k.id(f));
      if (it == split.end())
        rec.boundary.push_back(k.id(f));
      else
        rec.boundary.insert(rec.boundary.end(), it->second.begin(), it->second.end());
    }
    recs.push_back(std::move(rec));
  }
  ic.j_inner.push_back(ic.v);
  for (CellIndex r : link) {
    CellRecord in{inner(r), k.dim(r), {}, CellTag::InnerCopy};
    CellRecord cone{inner(join[r]), k.dim(r) + 1, {inner(r)}, CellTag::InnerCopy};
    CellRecord pr{prism(r), k.dim(r) + 1, {k.id(r), inner(r)}, CellTag::InnerCopy};
    for (CellIndex f : k.faces(r)) {
      in.boundary.push_back(inner(f));
      cone.boundary.push_back(inner(join[f]));
      pr.boundary.push_back(prism(f));
    }
    if (k.dim(r) == 0) cone.boundary.push_back(ic.v);
    ic.j_inner.push_back(in.id);
    ic.j_inner.push_back(cone.id);
    ic.j_collar.push_back(k.id(r));
    ic.j_collar.push_back(in.id);
    ic.j_collar.push_back(pr.id);
    ic.correspondence[k.id(r)] = k.id(r);
    ic.correspondence[k.id(join[r])] = pr.id;
    recs.push_back(std::move(in));
    recs.push_back(std::move(cone));
    recs.push_back(std::move(pr));
  }
  ic.beta_inner = "inner:" + ic.beta;
  ic.result = build_poset(std::move(recs));
  return ic;
}

Complex rename_cells(const Complex& k, const std::string& prefix) {
  auto recs = k.records();
  for (auto& r : recs) {
    r.id = prefix + r.id;
    for (auto& b : r.boundary) b = prefix + b;
  }
  return build_poset(std::move(recs));
}

namespace {

MorseFunction carry_values(const Complex& from, const MorseFunction& f, const Complex& to,
                           const std::string& prefix) {
  MorseFunction g;
  g.values.resize(to.size());
  for (CellIndex c = 0; c < from.size(); ++c) g[to.at(prefix + from.id(c))] = f[c];
  return g;
}

// Keeps the values of cells that survived a batch of surgery and extends the rest.
Extension extend_after(const Complex& before, const MorseFunction& f, const Complex& after,
                       const VectorField& v) {
  std::vector<std::optional<double>> fixed(after.size());
  for (CellIndex c = 0; c < after.size(); ++c)
    if (auto old = before.find(after.id(c))) fixed[c] = f[*old];
  return extend_function(after, v, fixed);
}

struct Prepared {
  Complex k;
  VectorField v;
  MorseFunction f;
};

VectorField check_input(const Complex& m, const MorseFunction& f, const char* which) {
  const std::string w = which;
  if (!m.flags().pseudomanifold || (m.top_dim() == 2 && !m.flags().closed_surface))
    throw Error(Errc::NotPerfectInput, w + " input is not a closed pseudomanifold");
  VectorField v = induced_field(m, f);
  if (!validate_field(m, v).ok) throw Error(Errc::NotPerfectInput, w + " field is not acyclic");
  auto counts = critical_cells(m, v).m;
  if (counts.front() != 1 || counts.back() != 1 || !is_perfect(m, v))
    throw Error(Errc::NotPerfectInput, w + " function is not perfect");
  return v;
}

CellIndex unique_critical(const Complex& k, const VectorField& v, int p) {
  for (CellIndex c = k.begin(p); c < k.end(p); ++c)
    if (v.critical(c)) return c;
  throw Error(Errc::NotPerfectInput, "no critical cell of dimension " + std::to_string(p));
}

bool clean_boundary(const Complex& k, const VectorField& v, CellIndex a) {
  const CellIndex self[1] = {a};
  auto cl = closure(k, self);
  for (CellIndex c : cl) {
    if (c == a) continue;
    auto p = v.partner(c);
    if (!p || std::binary_search(cl.begin(), cl.end(), *p)) return false;
  }
  return true;
}

// Replaces alpha by a collar over its boundary plus an inner copy whose
// boundary cells each pair with their collar prism.
Prepared collar_isolate(const Prepared& in, CellIndex a, CellId& alpha_out) {
  const Complex& k = in.k;
  const int n = k.dim(a);
  double top = in.f.values.empty() ? 0.0 : *std::max_element(in.f.values.begin(), in.f.values.end());
  std::vector<CellId> base;
  const CellIndex self[1] = {a};
  for (CellIndex c : closure(k, self))
    if (c != a) base.push_back(k.id(c));
  auto top_id = [](const CellId& s) { return "collar:" + s + ":top"; };
  auto prism_id = [](const CellId& s) { return "collar:" + s + ":prism"; };
  alpha_out = "collar:" + k.id(a);
  std::vector<CellRecord> recs;
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (c == a) continue;
    recs.push_back({k.id(c), k.dim(c), {}, k.tag(c)});
    for (CellIndex f : k.faces(c)) recs.back().boundary.push_back(k.id(f));
  }
  std::map<CellId, double> value;
  for (const CellId& s : base) {
    const CellIndex c = k.at(s);
    CellRecord t{top_id(s), k.dim(c), {}, CellTag::Tube};
    CellRecord p{prism_id(s), k.dim(c) + 1, {s, top_id(s)}, CellTag::Tube};
    for (CellIndex f : k.faces(c)) {
      t.boundary.push_back(top_id(k.id(f)));
      p.boundary.push_back(prism_id(k.id(f)));
    }
    value[t.id] = value[p.id] = top + 1 + k.dim(c);
    recs.push_back(std::move(t));
    recs.push_back(std::move(p));
  }
  CellRecord inner{alpha_out, n, {}, CellTag::Tube};
  for (CellIndex f : k.faces(a)) inner.boundary.push_back(top_id(k.id(f)));
  value[alpha_out] = top + 1 + n;
  recs.push_back(std::move(inner));
  Prepared out;
  out.k = build_poset(std::move(recs));
  out.v = VectorField(out.k.size());
  out.f.values.resize(out.k.size());
  for (CellIndex c = 0; c < out.k.size(); ++c) {
    const CellId& id = out.k.id(c);
    if (auto old = k.find(id)) {
      out.f[c] = in.f[*old];
      if (auto p = in.v.partner(*old); p && !in.v.is_head(*old)) out.v.add_pair(c, out.k.at(k.id(*p)));
    } else {
      out.f[c] = value.at(id);
    }
  }
  for (const CellId& s : base) out.v.add_pair(out.k.at(top_id(s)), out.k.at(prism_id(s)));
  return out;
}

}  // namespace

ComposeResult compose(const Complex& m1_in, const MorseFunction& f1_in, const Complex& m2_in,
                      const MorseFunction& f2_in) {
  const int n = m1_in.top_dim();
  if (n != m2_in.top_dim())
    throw Error(Errc::DimensionMismatch, "inputs have dimensions " + std::to_string(n) + " and " +
                                             std::to_string(m2_in.top_dim()));
  if (n < 1) throw Error(Errc::NotPerfectInput, "inputs must have dimension at least 1");
  check_input(m1_in, f1_in, "left");
  check_input(m2_in, f2_in, "right");
  ComposeReport rep;

  // Left summand: make the critical top cell a simplex with a clean boundary.
  Prepared p1;
  p1.k = rename_cells(m1_in, "m1/");
  p1.f = carry_values(m1_in, f1_in, p1.k, "m1/");
  p1.v = induced_field(p1.k, p1.f);
  CellIndex a = unique_critical(p1.k, p1.v, n);
  if (!is_simplex(p1.k, a)) {
    if (n != 2) throw Error(Errc::NotSimplex, "critical top cell must be a simplex");
    Surgeon s(p1.k, p1.v);
    CellId tri = fan_to_triangle(s, p1.k.id(a));
    auto [k2, v2] = s.finish();
    auto ext = extend_after(p1.k, p1.f, k2, v2);
    rep.f1_resynthesized = ext.resynthesized;
    rep.bisections.insert(rep.bisections.end(), s.log().begin(), s.log().end());
    p1 = {std::move(k2), std::move(v2), std::move(ext.f)};
    a = p1.k.at(tri);
  }
  CellId alpha = p1.k.id(a);
  if (!clean_boundary(p1.k, p1.v, a)) {
    p1 = collar_isolate(p1, a, alpha);
    a = p1.k.at(alpha);
    rep.alpha_isolated = true;
  }
  rep.alpha = alpha;

  // Right summand: find a non-critical simplex beta at the critical vertex.
  Prepared p2;
  p2.k = rename_cells(m2_in, "m2/");
  p2.f = carry_values(m2_in, f2_in, p2.k, "m2/");
  p2.v = induced_field(p2.k, p2.f);
  const CellIndex v = unique_critical(p2.k, p2.v, 0);
  auto tops_at = [](const Complex& k, CellIndex x) {
    std::vector<CellIndex> layer{x}, tops;
    for (int d = 0; d < k.top_dim(); ++d) {
      std::set<CellIndex> next;
      for (CellIndex c : layer)
        for (CellIndex u : k.cofaces(c)) next.insert(u);
      layer.assign(next.begin(), next.end());
    }
    return layer;
  };
  std::optional<CellIndex> beta;
  for (CellIndex t : tops_at(p2.k, v))
    if (!p2.v.critical(t) && is_simplex(p2.k, t)) {
      beta = t;
      break;
    }
  if (!beta) {
    if (n != 2) throw Error(Errc::NoEligibleBeta, "no non-critical simplex at the critical vertex");
    std::optional<CellIndex> poly;
    for (CellIndex t : tops_at(p2.k, v))
      if (!p2.v.critical(t)) {
        poly = t;
        break;
      }
    if (!poly) throw Error(Errc::NoEligibleBeta, "every 2-cell at the critical vertex is critical");
    Surgeon s(p2.k, p2.v);
    auto cyc = p2.k.cycle(*poly);
    const std::size_t k = cyc.vertices.size();
    std::size_t iv = 0;
    while (cyc.vertices[iv] != v) ++iv;
    const CellId before = p2.k.id(cyc.vertices[(iv + k - 1) % k]);
    const CellId after = p2.k.id(cyc.vertices[(iv + 1) % k]);
    auto rec = s.bisect_2cell(p2.k.id(*poly), before, after);
    auto [k2, v2] = s.finish();
    auto ext = extend_after(p2.k, p2.f, k2, v2);
    rep.f2_resynthesized = ext.resynthesized;
    rep.bisections.insert(rep.bisections.end(), s.log().begin(), s.log().end());
    const CellId vid = p2.k.id(v);
    p2 = {std::move(k2), std::move(v2), std::move(ext.f)};
    for (std::size_t piece = 1; piece <= 2; ++piece) {
      CellIndex t = p2.k.at(rec.new_cells[piece]);
      if (is_simplex(p2.k, t)) {
        auto vs = vertices_of(p2.k, t);
        if (std::binary_search(vs.begin(), vs.end(), p2.k.at(vid))) beta = t;
      }
    }
    if (!beta) throw Error(Errc::Internal, "chord did not produce a triangle at the vertex");
    rep.beta_bisected = true;
  }
  const CellId vid = p2.k.id(unique_critical(p2.k, p2.v, 0));
  rep.beta = p2.k.id(*beta);
  rep.v = vid;

  // Shift so the left maximum sits at 0 and the right minimum at 0; then C = 2.
  rep.shift1 = -p1.f[a];
  rep.shift2 = -p2.f[p2.k.at(vid)];
  for (double& x : p1.f.values) x += rep.shift1;
  for (double& x : p2.f.values) x += rep.shift2;
  rep.c = p1.f[a] + 2.0;
  const double c = rep.c;

  TubeRegion tube = build_prism_over_boundary(p1.k, alpha);
  InnerCopy ic = shrink_closed_star(p2.k, rep.beta, vid);
  const Complex& k2 = ic.result;

  // Vertex sets for the gluing.
  auto alpha_faces = simplex_faces(p1.k, a);
  auto beta_faces = simplex_faces(k2, k2.at(ic.beta_inner));
  std::vector<CellIndex> averts = vertices_of(p1.k, a);
  std::vector<CellIndex> bverts = vertices_of(k2, k2.at(ic.beta_inner));
  std::sort(averts.begin(), averts.end());
  std::sort(bverts.begin(), bverts.end());

  auto glue = [&](bool flip) -> ComposeResult {
    std::vector<CellIndex> target = averts;
    if (flip) std::swap(target[target.size() - 2], target[target.size() - 1]);
    std::map<CellIndex, CellIndex> phi;
    for (std::size_t i = 0; i < bverts.size(); ++i) phi[bverts[i]] = target[i];
    std::map<CellId, CellId> rename;  // boundary of beta' -> tube top
    for (const auto& [vs, cell] : beta_faces) {
      if (k2.id(cell) == ic.beta_inner) continue;
      std::vector<CellIndex> img;
      for (CellIndex x : vs) img.push_back(phi.at(x));
      std::sort(img.begin(), img.end());
      rename[k2.id(cell)] = tube.top.at(p1.k.id(alpha_faces.at(img)));
    }
    auto rn = [&](const CellId& id) {
      auto it = rename.find(id);
      return it == rename.end() ? id : it->second;
    };
    std::vector<CellRecord> recs;
    std::map<CellId, double> val;
    for (CellIndex x = 0; x < p1.k.size(); ++x) {
      if (x == a) continue;
      recs.push_back({p1.k.id(x), p1.k.dim(x), {}, p1.k.tag(x)});
      for (CellIndex f : p1.k.faces(x)) recs.back().boundary.push_back(p1.k.id(f));
      val[p1.k.id(x)] = p1.f[x];
    }
    for (const CellRecord& r : tube.records) recs.push_back(r);
    for (const CellId& s : tube.base) {
      val[tube.top.at(s)] = val[tube.prism.at(s)] = p1.f[p1.k.at(s)] + c / 2;
    }
    std::set<CellId> jset(ic.j.begin(), ic.j.end());
    std::map<CellId, CellId> back;  // J'' prism -> the J cell it corresponds to
    for (const auto& [from, to] : ic.correspondence) back[to] = from;
    for (CellIndex x = 0; x < k2.size(); ++x) {
      const CellId& id = k2.id(x);
      if (id == ic.beta_inner || rename.count(id)) continue;
      recs.push_back({id, k2.dim(x), {}, k2.tag(x)});
      for (CellIndex f : k2.faces(x)) recs.back().boundary.push_back(rn(k2.id(f)));
      const CellId src = back.count(id) ? back[id] : id;
      val[id] = p2.f[p2.k.at(src)] + c;
    }
    ComposeResult out;
    out.k = build_poset(std::move(recs));
    out.f.values.resize(out.k.size());
    for (CellIndex x = 0; x < out.k.size(); ++x) out.f[x] = val.at(out.k.id(x));
    out.v = VectorField(out.k.size());
    for (auto [lo, hi] : p1.v.pairs()) out.v.add_pair(out.k.at(p1.k.id(lo)), out.k.at(p1.k.id(hi)));
    for (const CellId& s : tube.base) out.v.add_pair(out.k.at(tube.top.at(s)), out.k.at(tube.prism.at(s)));
    auto through = [&](const CellId& id) {
      auto it = ic.correspondence.find(id);
      return it == ic.correspondence.end() ? id : it->second;
    };
    for (auto [lo, hi] : p2.v.pairs())
      out.v.add_pair(out.k.at(through(p2.k.id(lo))), out.k.at(through(p2.k.id(hi))));
    return out;
  };

  ComposeResult res = glue(false);
  if (n == 2 && !res.k.flags().oriented) {
    ComposeResult alt = glue(true);
    if (alt.k.flags().oriented) {
      res = std::move(alt);
      rep.orientation_flipped = true;
    }
  }
  auto counts = critical_cells(res.k, res.v);
  rep.counts = counts.m;
  rep.chi = euler_characteristic(res.k);
  rep.field_ok = validate_field(res.k, res.v).ok;
  rep.function_ok = validate_function(res.k, res.f).ok;
  rep.induced_matches = rep.function_ok && induced_field(res.k, res.f) == res.v;
  rep.perfect = rep.field_ok && is_perfect(res.k, res.v);
  res.report = std::move(rep);
  return res;
}

}  // namespace dms
