#include "morse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "error.hpp"
#include "homology.hpp"

namespace dms {

bool VectorField::add_pair(CellIndex low, CellIndex high) {
  if (partner_[low] != kNoCell || partner_[high] != kNoCell || low == high) return false;
  partner_[low] = high;
  partner_[high] = low;
  head_[high] = 1;
  head_[low] = 0;
  return true;
}

void VectorField::remove(CellIndex c) {
  CellIndex p = partner_[c];
  if (p == kNoCell) return;
  partner_[c] = partner_[p] = kNoCell;
  head_[c] = head_[p] = 0;
}

std::vector<std::pair<CellIndex, CellIndex>> VectorField::pairs() const {
  std::vector<std::pair<CellIndex, CellIndex>> out;
  for (CellIndex c = 0; c < partner_.size(); ++c)
    if (partner_[c] != kNoCell && !head_[c]) out.emplace_back(c, partner_[c]);
  return out;
}

namespace {

void require_values(const Complex& k, const MorseFunction& f) {
  if (f.size() != k.size()) {
    CellIndex missing = static_cast<CellIndex>(std::min(f.size(), k.size()));
    std::string id = missing < k.size() ? k.id(missing) : std::string("?");
    throw Error(Errc::MissingValue, "no value for cell '" + id + "'", id);
  }
}

void require_sized(const Complex& k, const VectorField& v) {
  if (v.size() != k.size())
    throw Error(Errc::InvalidField, "field does not belong to this complex");
}

// Arcs point the way values increase: face -> coface, except a matched pair
// where the coface may not exceed the face.
template <class Fn>
void for_each_value_arc(const Complex& k, const VectorField& v, Fn&& fn) {
  for (CellIndex c = 0; c < k.size(); ++c)
    for (CellIndex s : k.faces(c)) {
      if (v.partner(c) == s)
        fn(c, s, false);
      else
        fn(s, c, true);
    }
}

// Kahn's algorithm, smallest index first. Empty result means a cycle.
std::vector<CellIndex> value_order(const Complex& k, const VectorField& v) {
  const std::size_t n = k.size();
  std::vector<std::vector<CellIndex>> out(n);
  std::vector<int> indeg(n, 0);
  for_each_value_arc(k, v, [&](CellIndex a, CellIndex b, bool) {
    out[a].push_back(b);
    ++indeg[b];
  });
  std::priority_queue<CellIndex, std::vector<CellIndex>, std::greater<>> ready;
  for (CellIndex c = 0; c < n; ++c)
    if (indeg[c] == 0) ready.push(c);
  std::vector<CellIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    CellIndex c = ready.top();
    ready.pop();
    order.push_back(c);
    for (CellIndex d : out[c])
      if (--indeg[d] == 0) ready.push(d);
  }
  if (order.size() != n) order.clear();
  return order;
}

}  // namespace

FunctionReport validate_function(const Complex& k, const MorseFunction& f) {
  require_values(k, f);
  FunctionReport rep;
  for (CellIndex c = 0; c < k.size(); ++c) {
    int high_faces = 0, low_cofaces = 0;
    for (CellIndex s : k.faces(c))
      if (f[s] >= f[c]) ++high_faces;
    for (CellIndex u : k.cofaces(c))
      if (f[u] <= f[c]) ++low_cofaces;
    if (high_faces > 1)
      rep.violations.push_back({c, "face", std::to_string(high_faces) + " faces with value >= own"});
    if (low_cofaces > 1)
      rep.violations.push_back(
          {c, "coface", std::to_string(low_cofaces) + " cofaces with value <= own"});
    if (high_faces >= 1 && low_cofaces >= 1)
      rep.violations.push_back({c, "exclusivity", "has both an exceptional face and coface"});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

VectorField induced_field(const Complex& k, const MorseFunction& f) {
  auto rep = validate_function(k, f);
  if (!rep.ok) {
    const auto& v = rep.violations.front();
    throw Error(Errc::InvalidFunction, "'" + k.id(v.cell) + "': " + v.detail, k.id(v.cell));
  }
  VectorField v(k.size());
  for (CellIndex c = 0; c < k.size(); ++c)
    for (CellIndex s : k.faces(c))
      if (f[s] >= f[c]) v.add_pair(s, c);
  return v;
}

FieldReport validate_field(const Complex& k, const VectorField& v) {
  require_sized(k, v);
  FieldReport rep;
  for (auto [lo, hi] : v.pairs()) {
    if (k.dim(hi) != k.dim(lo) + 1 || !k.is_face(lo, hi))
      rep.violations.push_back(
          {lo, "incidence", "'" + k.id(lo) + "' is not a codimension-1 face of '" + k.id(hi) + "'"});
  }
  // DFS on the modified Hasse digraph: sigma -> tau for a pair, tau -> sigma'
  // for every other face.
  const std::size_t n = k.size();
  auto successors = [&](CellIndex c, std::vector<CellIndex>& out) {
    out.clear();
    if (!v.is_head(c)) {
      if (auto p = v.partner(c); p && k.dim(*p) == k.dim(c) + 1 && k.is_face(c, *p))
        out.push_back(*p);
      return;
    }
    for (CellIndex s : k.faces(c))
      if (v.partner(c) != s) out.push_back(s);
  };
  std::vector<char> color(n, 0);
  std::vector<std::vector<CellIndex>> succ_cache;
  struct Frame {
    CellIndex cell;
    std::vector<CellIndex> next;
    std::size_t i;
  };
  for (CellIndex root = 0; root < n && rep.cycle_witness.empty(); ++root) {
    if (color[root]) continue;
    std::vector<Frame> stack;
    stack.push_back({root, {}, 0});
    successors(root, stack.back().next);
    color[root] = 1;
    while (!stack.empty() && rep.cycle_witness.empty()) {
      Frame& fr = stack.back();
      if (fr.i == fr.next.size()) {
        color[fr.cell] = 2;
        stack.pop_back();
        continue;
      }
      CellIndex w = fr.next[fr.i++];
      if (color[w] == 1) {
        std::size_t at = 0;
        while (stack[at].cell != w) ++at;
        for (std::size_t j = at; j < stack.size(); ++j) rep.cycle_witness.push_back(stack[j].cell);
        // Start the witness at a tail cell so it reads sigma0, tau0, ...
        if (v.is_head(rep.cycle_witness.front()))
          std::rotate(rep.cycle_witness.begin(), rep.cycle_witness.begin() + 1,
                      rep.cycle_witness.end());
      } else if (color[w] == 0) {
        color[w] = 1;
        stack.push_back({w, {}, 0});
        successors(w, stack.back().next);
      }
    }
  }
  if (!rep.cycle_witness.empty()) {
    std::string path;
    for (CellIndex c : rep.cycle_witness) path += (path.empty() ? "" : " ") + k.id(c);
    rep.violations.push_back({rep.cycle_witness.front(), "cycle", "closed V-path: " + path});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

MorseCounts critical_cells(const Complex& k, const VectorField& v) {
  require_sized(k, v);
  MorseCounts mc;
  const int top = std::max(k.top_dim(), 0);
  mc.m.assign(top + 1, 0);
  mc.cells.assign(top + 1, {});
  for (CellIndex c = 0; c < k.size(); ++c)
    if (v.critical(c)) {
      ++mc.m[k.dim(c)];
      mc.cells[k.dim(c)].push_back(c);
    }
  return mc;
}

bool is_perfect(const Complex& k, const VectorField& v) {
  return critical_cells(k, v).m == betti_mod2(k);
}

bool morse_inequalities_hold(const Complex& k, const VectorField& v) {
  auto m = critical_cells(k, v).m;
  auto b = betti_mod2(k);
  if (m.size() != b.size()) return false;
  long alt = 0;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] < b[p]) return false;
    alt += (p % 2 == 0 ? 1 : -1) * m[p];
  }
  return alt == euler_characteristic(k);
}

PathTree trace_1path_tree(const Complex& k, const VectorField& v) {
  require_sized(k, v);
  PathTree tree;
  tree.parent.assign(k.size(), kNoCell);
  tree.via.assign(k.size(), kNoCell);
  std::vector<CellIndex> roots;
  for (CellIndex x = k.begin(0); x < k.end(0); ++x) {
    auto p = v.partner(x);
    if (!p) {
      roots.push_back(x);
      continue;
    }
    if (k.dim(*p) != 1 || !k.is_face(x, *p))
      throw Error(Errc::SplitDetected, "vertex '" + k.id(x) + "' is not matched to an incident edge",
                  k.id(x));
    auto e = k.ends(*p);
    tree.parent[x] = e[0] == x ? e[1] : e[0];
    tree.via[x] = *p;
  }
  if (roots.size() != 1)
    throw Error(Errc::MultipleRoots,
                std::to_string(roots.size()) + " critical vertices, expected exactly one");
  tree.root = roots.front();
  // Every vertex must reach the root without revisiting anything.
  std::vector<char> state(k.size(), 0);  // 1 on current walk, 2 known to reach root
  state[tree.root] = 2;
  for (CellIndex x = k.begin(0); x < k.end(0); ++x) {
    std::vector<CellIndex> walk;
    CellIndex cur = x;
    while (state[cur] == 0) {
      state[cur] = 1;
      walk.push_back(cur);
      cur = tree.parent[cur];
    }
    if (state[cur] == 1)
      throw Error(Errc::SplitDetected, "1-paths close up into a loop at '" + k.id(cur) + "'",
                  k.id(cur));
    for (CellIndex w : walk) state[w] = 2;
  }
  return tree;
}

GradientPath trace_2path(const Complex& k, const VectorField& v, CellIndex start) {
  require_sized(k, v);
  const int n = k.dim(start);
  if (n < 1) throw Error(Errc::BadDimension, "start cell must have positive dimension");
  if (v.critical(start))
    throw Error(Errc::StartIsCritical, "'" + k.id(start) + "' is critical", k.id(start));
  GradientPath path;
  path.dim = n;
  std::vector<CellIndex> rev;  // tau_r, sigma_r, tau_{r-1}, ...
  std::vector<char> seen(k.size(), 0);
  CellIndex cur = start;
  while (true) {
    if (seen[cur])
      throw Error(Errc::InconsistentField, "reverse trace revisits '" + k.id(cur) + "'", k.id(cur));
    seen[cur] = 1;
    auto p = v.partner(cur);
    if (!p || !v.is_head(cur) || k.dim(*p) != n - 1)
      throw Error(Errc::InconsistentField,
                  "'" + k.id(cur) + "' is not the head of a pair with a facet", k.id(cur));
    auto cof = k.cofaces(*p);
    if (cof.size() != 2)
      throw Error(Errc::InconsistentField,
                  "facet '" + k.id(*p) + "' has " + std::to_string(cof.size()) + " cofaces",
                  k.id(*p));
    rev.push_back(cur);
    rev.push_back(*p);
    CellIndex prev = cof[0] == cur ? cof[1] : cof[0];
    if (v.critical(prev)) {
      path.origin = prev;
      break;
    }
    cur = prev;
  }
  path.steps.assign(rev.rbegin(), rev.rend());
  return path;
}

MorseFunction synthesize_function(const Complex& k, const VectorField& v) {
  require_sized(k, v);
  // Contract each pair to one node; its cells share the node's position.
  const std::size_t n = k.size();
  std::vector<CellIndex> node(n);
  for (CellIndex c = 0; c < n; ++c) {
    auto p = v.partner(c);
    node[c] = p ? std::min(c, *p) : c;
  }
  std::vector<std::vector<CellIndex>> out(n);
  std::vector<int> indeg(n, 0);
  for (CellIndex c = 0; c < n; ++c)
    for (CellIndex s : k.faces(c)) {
      if (v.partner(c) == s) continue;
      out[node[s]].push_back(node[c]);
      ++indeg[node[c]];
    }
  std::priority_queue<CellIndex, std::vector<CellIndex>, std::greater<>> ready;
  std::size_t nodes = 0;
  for (CellIndex c = 0; c < n; ++c)
    if (node[c] == c) {
      ++nodes;
      if (indeg[c] == 0) ready.push(c);
    }
  std::vector<double> pos(n, 0.0);
  std::size_t next = 0;
  while (!ready.empty()) {
    CellIndex c = ready.top();
    ready.pop();
    pos[c] = static_cast<double>(next++);
    for (CellIndex d : out[c])
      if (--indeg[d] == 0) ready.push(d);
  }
  if (next != nodes) throw Error(Errc::CyclicField, "vector field has a closed V-path");
  MorseFunction f;
  f.values.resize(n);
  for (CellIndex c = 0; c < n; ++c) f[c] = pos[node[c]];
  return f;
}

MorseFunction make_injective(const Complex& k, const MorseFunction& f) {
  VectorField v = induced_field(k, f);
  auto order = value_order(k, v);
  if (order.empty()) throw Error(Errc::CyclicField, "induced field has a closed V-path");
  const std::size_t n = k.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<CellIndex> cells(n);
  for (CellIndex c = 0; c < n; ++c) cells[c] = c;
  std::sort(cells.begin(), cells.end(), [&](CellIndex a, CellIndex b) {
    if (f[a] != f[b]) return f[a] < f[b];
    return pos[a] < pos[b];
  });
  double gap = 1.0;
  std::size_t widest = 1;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && f[cells[j]] == f[cells[i]]) ++j;
    widest = std::max(widest, j - i);
    if (j < n) gap = std::min(gap, f[cells[j]] - f[cells[i]]);
    i = j;
  }
  const double eps = gap / static_cast<double>(2 * widest);
  MorseFunction g = f;
  bool exact = true;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && f[cells[j]] == f[cells[i]]) ++j;
    for (std::size_t r = i; r < j; ++r) {
      g[cells[r]] = f[cells[i]] + eps * static_cast<double>(r - i);
      if (r > i && !(g[cells[r]] > g[cells[r - 1]])) exact = false;
    }
    i = j;
  }
  if (!exact) {
    // Values too large for the perturbation to register; fall back to ranks.
    for (std::size_t i = 0; i < n; ++i) g[cells[i]] = static_cast<double>(i);
  }
  return g;
}

Extension extend_function(const Complex& k, const VectorField& v,
                          const std::vector<std::optional<double>>& fixed) {
  require_sized(k, v);
  const std::size_t n = k.size();
  auto order = value_order(k, v);
  if (order.empty()) throw Error(Errc::CyclicField, "vector field has a closed V-path");
  std::vector<std::vector<std::pair<CellIndex, bool>>> preds(n), succs(n);
  for_each_value_arc(k, v, [&](CellIndex a, CellIndex b, bool strict) {
    succs[a].push_back({b, strict});
    preds[b].push_back({a, strict});
  });
  constexpr double inf = std::numeric_limits<double>::infinity();
  // hi: tightest fixed value reachable downstream; depth: longest run of free
  // cells ahead, used to space values evenly instead of halving repeatedly.
  std::vector<double> hi(n, inf);
  std::vector<int> depth(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    CellIndex c = order[i];
    for (auto [s, strict] : succs[c]) {
      (void)strict;
      if (fixed[s]) {
        hi[c] = std::min(hi[c], *fixed[s]);
      } else {
        hi[c] = std::min(hi[c], hi[s]);
        depth[c] = std::max(depth[c], depth[s] + 1);
      }
    }
  }
  Extension ext;
  ext.f.values.assign(n, 0.0);
  bool feasible = true;
  for (CellIndex c : order) {
    double lo = -inf;
    for (auto [p, strict] : preds[c]) {
      double pv = ext.f[p];
      if (fixed[c] && (strict ? pv >= *fixed[c] : pv > *fixed[c])) feasible = false;
      lo = std::max(lo, pv);
    }
    if (fixed[c]) {
      ext.f[c] = *fixed[c];
      continue;
    }
    const double h = hi[c];
    double val;
    if (lo == -inf && h == inf)
      val = 0.0;
    else if (lo == -inf)
      val = h - static_cast<double>(depth[c] + 1);
    else if (h == inf)
      val = lo + 1.0;
    else if (lo < h)
      val = lo + (h - lo) / static_cast<double>(depth[c] + 2);
    else {
      feasible = false;
      val = lo + 1.0;
    }
    ext.f[c] = val;
  }
  if (feasible && validate_function(k, ext.f).ok && induced_field(k, ext.f) == v) return ext;
  ext.f = synthesize_function(k, v);
  ext.resynthesized = true;
  return ext;
}

}  // namespace dms
