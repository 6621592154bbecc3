#include "fixtures.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include "error.hpp"
#include "surgery.hpp"

namespace dms {

std::vector<Triangle> sphere_triangles() {
  return {{{0, 1, 2}}, {{0, 1, 3}}, {{0, 2, 3}}, {{1, 2, 3}}};
}

std::vector<Triangle> torus7_triangles() {
  std::vector<Triangle> out;
  for (int i = 0; i < 7; ++i) {
    out.push_back({{i, (i + 1) % 7, (i + 3) % 7}});
    out.push_back({{i, (i + 2) % 7, (i + 3) % 7}});
  }
  return out;
}

std::vector<Triangle> rp2_triangles() {
  const int t[10][3] = {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 6, 2},
                        {2, 3, 5}, {3, 4, 6}, {4, 5, 2}, {5, 6, 3}, {6, 2, 4}};
  std::vector<Triangle> out;
  for (const auto& f : t) out.push_back({{f[0] - 1, f[1] - 1, f[2] - 1}});
  return out;
}

std::vector<Triangle> permute_labels(std::vector<Triangle> tris, std::uint64_t seed) {
  if (seed == 0) return tris;
  int n = 0;
  for (const auto& t : tris)
    for (int x : t.v) n = std::max(n, x + 1);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draws so the result does not depend on
  // the standard library's shuffle implementation.
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
  for (auto& t : tris)
    for (int& x : t.v) x = perm[x];
  return tris;
}

Complex pillow_complex() {
  std::vector<CellRecord> recs;
  for (int i = 0; i < 4; ++i) recs.push_back({vertex_id(i), 0, {}});
  std::vector<CellId> edges;
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    edges.push_back(edge_id(std::min(i, j), std::max(i, j)));
    recs.push_back({edges.back(), 1, {vertex_id(i), vertex_id(j)}});
  }
  recs.push_back({"q0", 2, edges});
  recs.push_back({"q1", 2, edges});
  return build_poset(std::move(recs));
}

VectorField tree_cotree_field(const Complex& k) {
  VectorField v(k.size());
  if (k.count(0) == 0) return v;
  std::vector<char> seen(k.size(), 0);
  std::deque<CellIndex> q{k.begin(0)};
  seen[k.begin(0)] = 1;
  std::vector<char> tree(k.size(), 0);
  while (!q.empty()) {
    CellIndex x = q.front();
    q.pop_front();
    for (CellIndex e : k.cofaces(x)) {
      auto ends = k.ends(e);
      CellIndex y = ends[0] == x ? ends[1] : ends[0];
      if (seen[y]) continue;
      seen[y] = 1;
      tree[e] = 1;
      v.add_pair(y, e);
      q.push_back(y);
    }
  }
  for (CellIndex x = k.begin(0); x < k.end(0); ++x)
    if (!seen[x]) throw Error(Errc::Disconnected, "1-skeleton is not connected", k.id(x));
  if (k.top_dim() < 2) return v;
  q = {k.begin(2)};
  seen[k.begin(2)] = 1;
  while (!q.empty()) {
    CellIndex t = q.front();
    q.pop_front();
    for (CellIndex e : k.faces(t)) {
      if (tree[e] || !v.critical(e)) continue;
      for (CellIndex u : k.cofaces(e)) {
        if (seen[u]) continue;
        seen[u] = 1;
        v.add_pair(e, u);
        q.push_back(u);
      }
    }
  }
  for (CellIndex t = k.begin(2); t < k.end(2); ++t)
    if (!seen[t]) throw Error(Errc::Disconnected, "dual graph is not connected", k.id(t));
  return v;
}

namespace {

Fixture from_complex(Complex k) {
  Fixture fx;
  fx.v = tree_cotree_field(k);
  fx.f = synthesize_function(k, fx.v);
  fx.k = std::move(k);
  return fx;
}

}  // namespace

Fixture make_fixture(const std::string& kind, int genus, std::uint64_t seed) {
  if (kind == "sphere") return from_complex(build_simplicial(permute_labels(sphere_triangles(), seed)));
  if (kind == "torus7") return from_complex(build_simplicial(permute_labels(torus7_triangles(), seed)));
  if (kind == "rp2") return from_complex(build_simplicial(permute_labels(rp2_triangles(), seed)));
  if (kind == "pillow") return from_complex(pillow_complex());
  if (kind == "genus") {
    if (genus < 0) throw Error(Errc::WrongGenus, "genus must be non-negative");
    if (genus == 0) return make_fixture("sphere", 0, seed);
    Fixture acc = make_fixture("torus7", 0, seed);
    for (int g = 2; g <= genus; ++g) {
      Fixture t = make_fixture("torus7", 0, seed == 0 ? 0 : seed + static_cast<std::uint64_t>(g));
      auto res = compose(acc.k, acc.f, t.k, t.f);
      acc = {std::move(res.k), std::move(res.v), std::move(res.f)};
    }
    return acc;
  }
  throw Error(Errc::ParseError, "unknown fixture kind '" + kind + "'");
}

}  // namespace dms
