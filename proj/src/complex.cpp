#include "complex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "error.hpp"

namespace dms {

std::string_view tag_name(CellTag tag) {
  switch (tag) {
    case CellTag::Original: return "original";
    case CellTag::Tube: return "tube";
    case CellTag::InnerCopy: return "inner-copy";
    case CellTag::Cone: return "cone";
    case CellTag::Bisection: return "bisection";
  }
  return "original";
}

std::optional<CellTag> parse_tag(std::string_view name) {
  for (CellTag t : {CellTag::Original, CellTag::Tube, CellTag::InnerCopy, CellTag::Cone,
                    CellTag::Bisection})
    if (tag_name(t) == name) return t;
  return std::nullopt;
}

namespace {
bool is_digit(char c) { return c >= '0' && c <= '9'; }
}  // namespace

bool id_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && is_digit(a[i2])) ++i2;
      while (j2 < b.size() && is_digit(b[j2])) ++j2;
      std::string_view ra = a.substr(i, i2 - i), rb = b.substr(j, j2 - j);
      while (ra.size() > 1 && ra[0] == '0') ra.remove_prefix(1);
      while (rb.size() > 1 && rb[0] == '0') rb.remove_prefix(1);
      if (ra.size() != rb.size()) return ra.size() < rb.size();
      if (ra != rb) return ra < rb;
      i = i2;
      j = j2;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;  // numerically equal runs with different zero padding
}

std::size_t Complex::count(int p) const {
  if (p < 0 || p > top_dim()) return 0;
  return dim_begin_[p + 1] - dim_begin_[p];
}

CellIndex Complex::begin(int p) const {
  if (p < 0) return 0;
  if (p > top_dim()) return static_cast<CellIndex>(size());
  return dim_begin_[p];
}

CellIndex Complex::end(int p) const {
  if (p < 0) return 0;
  if (p > top_dim()) return static_cast<CellIndex>(size());
  return dim_begin_[p + 1];
}

bool Complex::is_face(CellIndex face, CellIndex cell) const {
  auto f = faces_[cell];
  return std::binary_search(f.begin(), f.end(), face);
}

std::optional<CellIndex> Complex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CellIndex Complex::at(std::string_view id) const {
  if (auto c = find(id)) return *c;
  throw Error(Errc::UnknownCell, "no cell named '" + std::string(id) + "'", std::string(id));
}

Cycle<CellIndex> Complex::cycle(CellIndex c) const {
  if (dims_[c] != 2) throw Error(Errc::NotA2Cell, "'" + ids_[c] + "' is not a 2-cell", ids_[c]);
  Cycle<CellIndex> out;
  std::vector<CellIndex> edges(faces_[c].begin(), faces_[c].end());
  walk_cycle(edges, [this](CellIndex e) { return ends(e); }, std::less<CellIndex>{}, out);
  return out;
}

std::vector<CellRecord> Complex::records() const {
  std::vector<CellRecord> out;
  out.reserve(size());
  for (CellIndex c = 0; c < size(); ++c) {
    CellRecord r{ids_[c], dims_[c], {}, tags_[c]};
    for (CellIndex f : faces_[c]) r.boundary.push_back(ids_[f]);
    out.push_back(std::move(r));
  }
  return out;
}

bool Complex::operator==(const Complex& other) const {
  return ids_ == other.ids_ && dims_ == other.dims_ && tags_ == other.tags_ &&
         faces_ == other.faces_;
}

std::string vertex_id(int i) { return "v" + std::to_string(i); }
std::string edge_id(int i, int j) {
  if (i > j) std::swap(i, j);
  return "e" + std::to_string(i) + "-" + std::to_string(j);
}
std::string triangle_id(int i, int j, int k) {
  std::array<int, 3> a{i, j, k};
  std::sort(a.begin(), a.end());
  return "t" + std::to_string(a[0]) + "-" + std::to_string(a[1]) + "-" + std::to_string(a[2]);
}

Complex build_simplicial(std::span<const Triangle> triangles, bool closed_surface) {
  std::set<std::array<int, 3>> seen;
  std::set<int> verts;
  std::map<std::pair<int, int>, int> edge_use;
  for (const Triangle& t : triangles) {
    auto s = t.v;
    for (int x : s)
      if (x < 0) throw Error(Errc::ParseError, "negative vertex index " + std::to_string(x));
    std::sort(s.begin(), s.end());
    if (s[0] == s[1] || s[1] == s[2])
      throw Error(Errc::DegenerateFacet,
                  "triangle " + std::to_string(t.v[0]) + " " + std::to_string(t.v[1]) + " " +
                      std::to_string(t.v[2]) + " repeats a vertex");
    if (!seen.insert(s).second)
      throw Error(Errc::DuplicateFacet, "duplicate triangle " + triangle_id(s[0], s[1], s[2]),
                  triangle_id(s[0], s[1], s[2]));
    for (int x : s) verts.insert(x);
    ++edge_use[{s[0], s[1]}];
    ++edge_use[{s[0], s[2]}];
    ++edge_use[{s[1], s[2]}];
  }
  if (closed_surface) {
    for (auto& [e, n] : edge_use)
      if (n != 2)
        throw Error(Errc::NonPseudomanifold,
                    "edge " + edge_id(e.first, e.second) + " lies in " + std::to_string(n) +
                        " triangles",
                    edge_id(e.first, e.second));
  }
  std::vector<CellRecord> recs;
  for (int v : verts) recs.push_back({vertex_id(v), 0, {}, CellTag::Original});
  for (auto& [e, n] : edge_use)
    recs.push_back({edge_id(e.first, e.second), 1, {vertex_id(e.first), vertex_id(e.second)},
                    CellTag::Original});
  for (const auto& s : seen)
    recs.push_back({triangle_id(s[0], s[1], s[2]),
                    2,
                    {edge_id(s[0], s[1]), edge_id(s[0], s[2]), edge_id(s[1], s[2])},
                    CellTag::Original});
  Complex k = build_poset(std::move(recs));
  if (closed_surface && !k.flags().closed_surface) verify_closed_surface(k);
  return k;
}

namespace {

bool vertex_link_is_cycle(const Complex& k, CellIndex v) {
  auto edges = k.cofaces(v);
  if (edges.empty()) return false;
  // Edges at v are nodes; each 2-cell at v joins its two edges at v.
  std::map<CellIndex, std::vector<CellIndex>> adj;
  for (CellIndex e : edges) {
    adj[e];
    for (CellIndex t : k.cofaces(e)) {
      for (CellIndex e2 : k.faces(t))
        if (e2 != e && k.is_face(v, e2)) adj[e].push_back(e2);
    }
  }
  for (auto& [e, nb] : adj)
    if (nb.size() != 2) return false;
  std::set<CellIndex> seen{edges[0]};
  std::vector<CellIndex> stack{edges[0]};
  while (!stack.empty()) {
    CellIndex e = stack.back();
    stack.pop_back();
    for (CellIndex n : adj[e])
      if (seen.insert(n).second) stack.push_back(n);
  }
  return seen.size() == edges.size();
}

// Direction (+1 along index order of endpoints, -1 against) in which the
// canonical walk of `t` traverses edge `e`.
int walk_direction(const Complex& k, const Cycle<CellIndex>& cyc, CellIndex e) {
  const std::size_t n = cyc.edges.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cyc.edges[i] == e) return cyc.vertices[i] < cyc.vertices[(i + 1) % n] ? 1 : -1;
  (void)k;
  return 0;
}

bool orientable(const Complex& k) {
  const CellIndex b = k.begin(2), e = k.end(2);
  std::vector<int> sign(k.size(), 0);
  std::vector<Cycle<CellIndex>> cycles(k.size());
  for (CellIndex t = b; t < e; ++t) cycles[t] = k.cycle(t);
  for (CellIndex root = b; root < e; ++root) {
    if (sign[root]) continue;
    sign[root] = 1;
    std::deque<CellIndex> queue{root};
    while (!queue.empty()) {
      CellIndex t = queue.front();
      queue.pop_front();
      for (CellIndex edge : k.faces(t)) {
        int d = sign[t] * walk_direction(k, cycles[t], edge);
        for (CellIndex u : k.cofaces(edge)) {
          if (u == t) continue;
          int want = -d * walk_direction(k, cycles[u], edge);
          if (!sign[u]) {
            sign[u] = want;
            queue.push_back(u);
          } else if (sign[u] != want) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

Complex build_poset(std::vector<CellRecord> records) {
  std::sort(records.begin(), records.end(), [](const CellRecord& a, const CellRecord& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return id_less(a.id, b.id);
  });
  Complex k;
  const std::size_t n = records.size();
  int top = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const CellRecord& r = records[i];
    if (r.dim < 0) throw Error(Errc::BadDimension, "negative dimension on '" + r.id + "'", r.id);
    if (r.id.empty()) throw Error(Errc::MalformedCell, "empty cell id");
    if (!k.lookup_.emplace(r.id, static_cast<CellIndex>(i)).second)
      throw Error(Errc::DuplicateCell, "cell '" + r.id + "' defined twice", r.id);
    top = std::max(top, r.dim);
  }
  k.ids_.reserve(n);
  k.dims_.reserve(n);
  k.tags_.reserve(n);
  k.faces_.resize(n);
  k.cofaces_.resize(n);
  k.dim_begin_.assign(top + 2, static_cast<CellIndex>(n));
  for (std::size_t i = n; i-- > 0;) k.dim_begin_[records[i].dim] = static_cast<CellIndex>(i);
  for (int p = top; p >= 0; --p)
    if (k.dim_begin_[p] > k.dim_begin_[p + 1]) k.dim_begin_[p] = k.dim_begin_[p + 1];
  for (std::size_t i = 0; i < n; ++i) {
    CellRecord& r = records[i];
    k.ids_.push_back(r.id);
    k.dims_.push_back(r.dim);
    k.tags_.push_back(r.tag);
    auto& f = k.faces_[i];
    for (const CellId& b : r.boundary) {
      auto it = k.lookup_.find(b);
      if (it == k.lookup_.end())
        throw Error(Errc::MissingFace, "'" + r.id + "' names missing face '" + b + "'", b);
      if (records[it->second].dim != r.dim - 1)
        throw Error(Errc::BadDimensionDrop,
                    "'" + r.id + "' (dim " + std::to_string(r.dim) + ") lists '" + b + "' (dim " +
                        std::to_string(records[it->second].dim) + ")",
                    r.id);
      f.push_back(it->second);
    }
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      throw Error(Errc::MalformedCell, "'" + r.id + "' repeats a face", r.id);
    if (r.dim == 1 && f.size() != 2)
      throw Error(Errc::MalformedCell, "edge '" + r.id + "' needs exactly 2 vertices", r.id);
    if (r.dim >= 2 && f.empty())
      throw Error(Errc::MalformedCell, "'" + r.id + "' has an empty boundary", r.id);
    for (CellIndex b : f) k.cofaces_[b].push_back(static_cast<CellIndex>(i));
  }
  for (CellIndex c = k.dim_begin_.empty() ? 0 : k.begin(2); c < k.end(2); ++c) {
    if (k.faces_[c].size() < 3)
      throw Error(Errc::BoundaryNotCycle, "2-cell '" + k.ids_[c] + "' has fewer than 3 edges",
                  k.ids_[c]);
    Cycle<CellIndex> cyc;
    std::vector<CellIndex> edges(k.faces_[c].begin(), k.faces_[c].end());
    if (!walk_cycle(edges, [&k](CellIndex e) { return k.ends(e); }, std::less<CellIndex>{}, cyc))
      throw Error(Errc::BoundaryNotCycle,
                  "edges of 2-cell '" + k.ids_[c] + "' do not form one cycle", k.ids_[c]);
  }
  if (top >= 1) {
    bool pm = true;
    for (CellIndex c = k.begin(top - 1); c < k.end(top - 1) && pm; ++c)
      pm = k.cofaces_[c].size() == 2;
    // Every lower cell must sit under some top cell.
    for (CellIndex c = 0; c < k.begin(top) && pm; ++c) pm = !k.cofaces_[c].empty();
    k.flags_.pseudomanifold = pm;
  }
  if (top == 2 && k.flags_.pseudomanifold) {
    bool surf = true;
    for (CellIndex v = k.begin(0); v < k.end(0) && surf; ++v) surf = vertex_link_is_cycle(k, v);
    k.flags_.closed_surface = surf;
    if (surf) k.flags_.oriented = orientable(k);
  }
  return k;
}

long euler_characteristic(const Complex& k) {
  long chi = 0;
  for (int p = 0; p <= k.top_dim(); ++p)
    chi += (p % 2 == 0 ? 1 : -1) * static_cast<long>(k.count(p));
  return chi;
}

std::vector<CellIndex> closure(const Complex& k, std::span<const CellIndex> cells) {
  std::vector<char> in(k.size(), 0);
  std::vector<CellIndex> stack(cells.begin(), cells.end());
  for (CellIndex c : cells) in[c] = 1;
  while (!stack.empty()) {
    CellIndex c = stack.back();
    stack.pop_back();
    for (CellIndex f : k.faces(c))
      if (!in[f]) {
        in[f] = 1;
        stack.push_back(f);
      }
  }
  std::vector<CellIndex> out;
  for (CellIndex c = 0; c < k.size(); ++c)
    if (in[c]) out.push_back(c);
  return out;
}

Neighborhood local_neighborhood(const Complex& k, std::string_view cell) {
  const CellIndex c = k.at(cell);
  std::vector<CellIndex> up{c};
  std::vector<char> seen(k.size(), 0);
  seen[c] = 1;
  for (std::size_t i = 0; i < up.size(); ++i)
    for (CellIndex u : k.cofaces(up[i]))
      if (!seen[u]) {
        seen[u] = 1;
        up.push_back(u);
      }
  Neighborhood nb;
  nb.star = closure(k, up);
  const CellIndex self[1] = {c};
  auto cc = closure(k, self);
  std::vector<char> near(k.size(), 0);
  for (CellIndex x : cc) near[x] = 1;
  for (CellIndex x : nb.star) {
    const CellIndex one[1] = {x};
    bool touches = false;
    for (CellIndex y : closure(k, one))
      if (near[y]) {
        touches = true;
        break;
      }
    if (!touches) nb.link.push_back(x);
  }
  return nb;
}

SurfaceInfo verify_closed_surface(const Complex& k) {
  if (k.top_dim() != 2)
    throw Error(Errc::NotClosedSurface, "complex has top dimension " + std::to_string(k.top_dim()));
  for (CellIndex e = k.begin(1); e < k.end(1); ++e)
    if (k.cofaces(e).size() != 2)
      throw Error(Errc::NotClosedSurface,
                  "edge '" + k.id(e) + "' has " + std::to_string(k.cofaces(e).size()) +
                      " 2-cofaces",
                  k.id(e));
  for (CellIndex v = k.begin(0); v < k.end(0); ++v)
    if (!vertex_link_is_cycle(k, v))
      throw Error(Errc::NotClosedSurface, "link of '" + k.id(v) + "' is not one cycle", k.id(v));
  SurfaceInfo info;
  info.chi = euler_characteristic(k);
  info.orientable = k.flags().oriented;
  // Connectivity through the 1-skeleton.
  std::vector<char> seen(k.size(), 0);
  std::vector<CellIndex> stack{k.begin(0)};
  seen[k.begin(0)] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    CellIndex v = stack.back();
    stack.pop_back();
    for (CellIndex e : k.cofaces(v))
      for (CellIndex w : k.faces(e))
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
  }
  info.connected = reached == k.count(0);
  info.genus = static_cast<int>(info.orientable ? (2 - info.chi) / 2 : 2 - info.chi);
  return info;
}

}  // namespace dms
