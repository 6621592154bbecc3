#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dms {

using CellId = std::string;
using CellIndex = std::uint32_t;

enum class CellTag : std::uint8_t { Original, Tube, InnerCopy, Cone, Bisection };

std::string_view tag_name(CellTag tag);
std::optional<CellTag> parse_tag(std::string_view name);

// Natural order on ids: digit runs compare numerically, so "v2" < "v10".
bool id_less(std::string_view a, std::string_view b);

struct IdLess {
  bool operator()(std::string_view a, std::string_view b) const { return id_less(a, b); }
};

struct CellRecord {
  CellId id;
  int dim = 0;
  std::vector<CellId> boundary;
  CellTag tag = CellTag::Original;

  bool operator==(const CellRecord&) const = default;
};

struct ManifoldFlags {
  bool pseudomanifold = false;
  bool closed_surface = false;
  bool oriented = false;  // closed surface that admits a coherent orientation
};

// Ordered boundary walk of a polygonal 2-cell. edges[i] joins vertices[i] and
// vertices[(i+1) % k]. The walk starts at the smallest vertex and heads to its
// smaller neighbour, so it is canonical.
template <class T>
struct Cycle {
  std::vector<T> vertices;
  std::vector<T> edges;
};

// Immutable face poset. Cells are indexed by (dim, natural id order), so index
// order coincides with the deterministic id order inside each dimension.
class Complex {
 public:
  Complex() = default;

  std::size_t size() const { return ids_.size(); }
  int top_dim() const { return dim_begin_.empty() ? -1 : static_cast<int>(dim_begin_.size()) - 2; }
  std::size_t count(int p) const;
  // Indices of p-cells form the half-open range [begin(p), end(p)).
  CellIndex begin(int p) const;
  CellIndex end(int p) const;

  const CellId& id(CellIndex c) const { return ids_[c]; }
  int dim(CellIndex c) const { return dims_[c]; }
  CellTag tag(CellIndex c) const { return tags_[c]; }
  std::span<const CellIndex> faces(CellIndex c) const { return faces_[c]; }
  std::span<const CellIndex> cofaces(CellIndex c) const { return cofaces_[c]; }
  bool is_face(CellIndex face, CellIndex cell) const;

  std::optional<CellIndex> find(std::string_view id) const;
  CellIndex at(std::string_view id) const;  // throws UnknownCell

  const ManifoldFlags& flags() const { return flags_; }

  // Canonical boundary walk of a 2-cell.
  Cycle<CellIndex> cycle(CellIndex c) const;
  // The two endpoints of an edge, in index order.
  std::array<CellIndex, 2> ends(CellIndex edge) const { return {faces_[edge][0], faces_[edge][1]}; }

  std::vector<CellRecord> records() const;
  bool operator==(const Complex& other) const;

 private:
  friend Complex build_poset(std::vector<CellRecord> records);

  std::vector<CellId> ids_;
  std::vector<int> dims_;
  std::vector<CellTag> tags_;
  std::vector<std::vector<CellIndex>> faces_;
  std::vector<std::vector<CellIndex>> cofaces_;
  std::vector<CellIndex> dim_begin_;  // size top_dim + 2
  std::unordered_map<std::string, CellIndex> lookup_;
  ManifoldFlags flags_;
};

struct Triangle {
  std::array<int, 3> v;
};

std::string vertex_id(int i);
std::string edge_id(int i, int j);
std::string triangle_id(int i, int j, int k);

Complex build_simplicial(std::span<const Triangle> triangles, bool closed_surface = true);
Complex build_poset(std::vector<CellRecord> records);

long euler_characteristic(const Complex& k);

struct Neighborhood {
  std::vector<CellIndex> star;  // closed star, index order
  std::vector<CellIndex> link;
};
Neighborhood local_neighborhood(const Complex& k, std::string_view cell);

// All faces of the given cells (transitively), including the cells.
std::vector<CellIndex> closure(const Complex& k, std::span<const CellIndex> cells);

struct SurfaceInfo {
  int genus = 0;  // orientable genus, or number of crosscaps when non-orientable
  bool orientable = false;
  bool connected = false;
  long chi = 0;
};
SurfaceInfo verify_closed_surface(const Complex& k);

// Walks a set of edges forming one cycle. Returns false when they do not.
template <class T, class EndsFn, class Less>
bool walk_cycle(const std::vector<T>& edges, EndsFn ends, Less less, Cycle<T>& out) {
  out.vertices.clear();
  out.edges.clear();
  const std::size_t k = edges.size();
  if (k < 2) return false;
  auto incident = [&](const T& v) {
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < k; ++i) {
      auto e = ends(edges[i]);
      if (e[0] == v || e[1] == v) at.push_back(i);
    }
    return at;
  };
  auto other = [&](std::size_t ei, const T& v) {
    auto e = ends(edges[ei]);
    return e[0] == v ? e[1] : e[0];
  };
  T start = ends(edges[0])[0];
  for (const T& e : edges)
    for (const T& v : ends(e))
      if (less(v, start)) start = v;
  auto at = incident(start);
  if (at.size() != 2) return false;
  std::size_t first = less(other(at[1], start), other(at[0], start)) ? at[1] : at[0];
  std::vector<char> used(k, 0);
  T cur = start;
  std::size_t ei = first;
  for (std::size_t step = 0; step < k; ++step) {
    if (used[ei]) return false;
    used[ei] = 1;
    out.vertices.push_back(cur);
    out.edges.push_back(edges[ei]);
    cur = other(ei, cur);
    if (step + 1 == k) break;
    auto next = incident(cur);
    if (next.size() != 2) return false;
    ei = next[0] == ei ? next[1] : next[0];
  }
  return cur == start;
}

}  // namespace dms
