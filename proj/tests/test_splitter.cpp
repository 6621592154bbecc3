#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "splitter.hpp"
#include "surgery.hpp"

using namespace dms;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Internal;
}

std::vector<CellIndex> indices(const Complex& k, std::initializer_list<const char*> ids) {
  std::vector<CellIndex> out;
  for (auto id : ids) out.push_back(k.at(id));
  std::sort(out.begin(), out.end());
  return out;
}

long metric_of(const BoundaryGraph& bg) {
  long m = 0;
  for (auto [vtx, d] : bg.degree) m += d - 2;
  return m + 2 * static_cast<long>(bg.arcs.size()) + 2 * static_cast<long>(bg.stray_criticals.size());
}

}  // namespace

TEST_CASE("split edges are the extreme critical edges") {
  auto fx = make_fixture("genus", 2, 0);
  auto se = select_split_edges(fx.k, fx.f, 1, 1);
  REQUIRE(se.low.size() == 2);
  REQUIRE(se.high.size() == 2);
  double top_low = std::max(fx.f[se.low[0]], fx.f[se.low[1]]);
  double bottom_high = std::min(fx.f[se.high[0]], fx.f[se.high[1]]);
  CHECK(top_low < bottom_high);
  for (auto e : se.low) CHECK(fx.v.critical(e));
  for (auto e : se.high) CHECK(fx.v.critical(e));
  auto all = select_split_edges(fx.k, fx.f, 0, 2);
  CHECK(all.low.empty());
  CHECK(all.high.size() == 4);
}

TEST_CASE("a single triangle has a circle boundary") {
  auto k = build_simplicial(torus7_triangles());
  VectorField v(k.size());
  auto region = indices(k, {"t0-1-3"});
  auto bg = classify_boundary(k, v, region, {});
  CHECK(bg.kind == BoundaryKind::Circle);
  CHECK(bg.curve.size() == 3);
  CHECK(bg.slits.empty());
  CHECK(bg.wedges.empty());
  CHECK(bg.components == 1);
  // Every vertex is critical in the empty field, as are the three edges.
  CHECK(bg.stray_criticals.size() == 6);
  CHECK(bg.metric == metric_of(bg));
}

TEST_CASE("an unmatched spoke of a vertex star is a slit") {
  auto k = build_simplicial(torus7_triangles());
  VectorField v(k.size());
  auto nb = local_neighborhood(k, "v3");
  std::vector<CellIndex> region;
  for (auto c : nb.star)
    if (k.dim(c) == 2) region.push_back(c);
  auto bg = classify_boundary(k, v, region, {});
  CHECK(bg.curve.size() == 6);
  CHECK(bg.slits.size() == 6);
  CHECK(bg.degree.at(k.at("v3")) == 12);
  CHECK(bg.kind != BoundaryKind::Circle);
}

TEST_CASE("two triangles meeting at one vertex form a single wedge") {
  auto k = build_simplicial(torus7_triangles());
  VectorField v(k.size());
  auto region = indices(k, {"t0-1-3", "t0-4-5"});
  auto bg = classify_boundary(k, v, region, {});
  CHECK(bg.kind == BoundaryKind::SingleWedge);
  CHECK(bg.wedges == std::vector<CellIndex>{k.at("v0")});
  CHECK(bg.degree.at(k.at("v0")) == 4);
  CHECK(bg.metric == metric_of(bg));
  CHECK(boundary_kind_name(bg.kind) == "single-wedge");
}

TEST_CASE("an unpaired shared edge is a slit arc") {
  auto k = build_simplicial(torus7_triangles());
  VectorField v(k.size());
  auto region = indices(k, {"t0-1-3", "t0-1-5"});
  auto bg = classify_boundary(k, v, region, {});
  CHECK(bg.slits == std::vector<CellIndex>{k.at("e0-1")});
  REQUIRE(bg.arcs.size() == 1);
  CHECK(bg.arcs[0].edges == std::vector<CellIndex>{k.at("e0-1")});
  CHECK(bg.degree.at(k.at("v0")) == 4);
  CHECK(bg.degree.at(k.at("v3")) == 2);
  CHECK(bg.kind == BoundaryKind::WedgesWithArcs);
  CHECK(bg.metric == metric_of(bg));
  // The same pair joined through a matched interior edge is a disk.
  v.add_pair(k.at("e0-1"), k.at("t0-1-3"));
  auto disk = classify_boundary(k, v, region, {});
  CHECK(disk.kind == BoundaryKind::Circle);
  CHECK(disk.curve.size() == 4);
}

TEST_CASE("region reshaping resolves an arc and lowers the metric") {
  auto fx = make_fixture("torus7");
  auto region = std::vector<CellId>{"t0-1-3", "t0-1-5"};
  // A field where e0-1 is not interior to the region.
  VectorField v(fx.k.size());
  RegionState rs(fx.k, v, region, {});
  auto before = rs.classify();
  REQUIRE(before.arcs.size() == 1);
  rs.resolve_arc(before.arcs[0]);
  auto after = rs.classify();
  CHECK(after.arcs.empty());
  CHECK(after.metric < before.metric);
  CHECK(oracle::closed_surface(rs.complex()));
  CHECK(oracle::critical_counts(rs.complex(), rs.field()) ==
        oracle::critical_counts(fx.k, v));
  CHECK_FALSE(rs.log().empty());
}

TEST_CASE("region reshaping resolves a wedge") {
  auto fx = make_fixture("torus7");
  VectorField v(fx.k.size());
  RegionState rs(fx.k, v, {"t0-1-3", "t0-4-5"}, {});
  auto before = rs.classify();
  REQUIRE(before.wedges.size() == 1);
  rs.resolve_wedge(before.wedges[0]);
  auto after = rs.classify();
  CHECK(after.metric < before.metric);
  CHECK(oracle::closed_surface(rs.complex()));
}

TEST_CASE("critical cells are pushed off the region boundary") {
  auto fx = make_fixture("torus7");
  // The tree-cotree root v0 is critical and lies on this star.
  auto nb = local_neighborhood(fx.k, "v3");
  std::vector<CellId> region;
  for (auto c : nb.star)
    if (fx.k.dim(c) == 2 && fx.v.partner(c)) region.push_back(fx.k.id(c));
  RegionState rs(fx.k, fx.v, region, {});
  auto before = rs.classify();
  REQUIRE_FALSE(before.stray_criticals.empty());
  rs.push_criticals(before);
  auto after = rs.classify();
  CHECK(after.stray_criticals.size() < before.stray_criticals.size());
  CHECK(oracle::field_valid(rs.complex(), rs.field()));
  CHECK(oracle::critical_counts(rs.complex(), rs.field()) == std::vector<int>{1, 2, 1});
  CHECK(oracle::closed_surface(rs.complex()));
}

TEST_CASE("separating circle on genus two") {
  auto fx = make_fixture("genus", 2, 0);
  auto cs = find_separating_circle(fx.k, fx.f, 1, 1);
  CHECK(cs.circle.size() >= 3);
  for (std::size_t i = 1; i < cs.metrics.size(); ++i) CHECK(cs.metrics[i] < cs.metrics[i - 1]);
  CHECK(cs.metrics.back() == 0);
  CHECK(oracle::critical_counts(cs.k, cs.v) == std::vector<int>{1, 4, 1});
  CHECK(oracle::field_valid(cs.k, cs.v));
  auto sp = split_along_circle(cs.k, cs.v, cs.circle);
  CHECK(sp.boundary_critical_vertices == sp.boundary_critical_edges);
  // Each piece is a surface with one boundary circle: chi = 1 - 2g.
  CHECK(oracle::euler(sp.min_side.k) == -1);
  CHECK(oracle::euler(sp.max_side.k) == -1);
  auto m1 = cap_with_max_cone(sp.min_side, sp.circle);
  auto m2 = cap_with_min_cone(sp.max_side, sp.circle);
  CHECK(oracle::closed_surface(m1.k));
  CHECK(oracle::closed_surface(m2.k));
  CHECK(oracle::critical_counts(m1.k, m1.v) == std::vector<int>{1, 2, 1});
  CHECK(oracle::critical_counts(m2.k, m2.v) == std::vector<int>{1, 2, 1});
  CHECK(oracle::field_valid(m1.k, m1.v));
  CHECK(oracle::field_valid(m2.k, m2.v));
}

TEST_CASE("decompose composed tori back into tori") {
  auto t = make_fixture("torus7");
  auto c = compose(t.k, t.f, t.k, t.f);
  auto start = std::chrono::steady_clock::now();
  auto r = decompose(c.k, c.f, 1, 1);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
  for (auto* piece : {&r.m1, &r.m2}) {
    CHECK(oracle::euler(*piece) == 0);
    CHECK(oracle::betti(*piece) == std::vector<int>{1, 2, 1});
    CHECK(oracle::closed_surface(*piece));
  }
  CHECK(oracle::critical_counts(r.m1, r.v1) == std::vector<int>{1, 2, 1});
  CHECK(oracle::critical_counts(r.m2, r.v2) == std::vector<int>{1, 2, 1});
  CHECK(oracle::function_valid(r.m1, r.f1));
  CHECK(oracle::function_valid(r.m2, r.f2));
  CHECK(oracle::gradient_of(r.m1, r.f1) == r.v1);
  CHECK(oracle::gradient_of(r.m2, r.f2) == r.v2);
  CHECK(r.report.no_inward_arrows);
  CHECK(r.report.boundary_critical_vertices == r.report.boundary_critical_edges);
  CHECK(r.report.chi == -2);
}

TEST_CASE("decompose into uneven genera") {
  for (auto [g1, g2] : {std::pair{1, 2}, {2, 1}, {0, 2}, {2, 0}}) {
    auto fx = make_fixture("genus", g1 + g2, 4);
    auto r = decompose(fx.k, fx.f, g1, g2);
    CHECK(oracle::euler(r.m1) == 2 - 2 * g1);
    CHECK(oracle::euler(r.m2) == 2 - 2 * g2);
    CHECK(oracle::critical_counts(r.m1, r.v1) == oracle::betti(r.m1));
    CHECK(oracle::critical_counts(r.m2, r.v2) == oracle::betti(r.m2));
    CHECK(r.report.min_side_chi == 1 - 2 * g1);
    CHECK(r.report.max_side_chi == 1 - 2 * g2);
  }
}

TEST_CASE("decompose preconditions") {
  auto g2 = make_fixture("genus", 2, 0);
  CHECK(code_of([&] { decompose(g2.k, g2.f, 1, 2); }) == Errc::WrongGenus);
  CHECK(code_of([&] { decompose(g2.k, g2.f, -1, 3); }) == Errc::WrongGenus);
  auto s = make_fixture("sphere");
  CHECK(code_of([&] { decompose(s.k, s.f, 0, 0); }) == Errc::WrongGenus);
  auto rp2 = make_fixture("rp2");
  CHECK(code_of([&] { decompose(rp2.k, rp2.f, 0, 1); }) == Errc::NonOrientableInput);
  MorseFunction dim;
  for (CellIndex c = 0; c < g2.k.size(); ++c) dim.values.push_back(g2.k.dim(c));
  CHECK(code_of([&] { decompose(g2.k, dim, 1, 1); }) == Errc::NotPerfectInput);
  std::vector<Triangle> disk{{{0, 1, 2}}, {{0, 2, 3}}};
  auto dk = build_simplicial(disk, false);
  MorseFunction dd;
  for (CellIndex c = 0; c < dk.size(); ++c) dd.values.push_back(dk.dim(c));
  CHECK(code_of([&] { decompose(dk, dd, 0, 0); }) == Errc::NotClosedSurface);
}
