#include <doctest.h>

#include "complex.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

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

}  // namespace

TEST_CASE("natural id order compares digit runs numerically") {
  CHECK(id_less("v2", "v10"));
  CHECK_FALSE(id_less("v10", "v2"));
  CHECK(id_less("e1-2", "e1-10"));
  CHECK(id_less("a", "b"));
  CHECK_FALSE(id_less("v3", "v3"));
}

TEST_CASE("tetrahedron boundary has the expected cell counts and indices") {
  auto k = build_simplicial(sphere_triangles());
  CHECK(k.count(0) == 4);
  CHECK(k.count(1) == 6);
  CHECK(k.count(2) == 4);
  CHECK(k.top_dim() == 2);
  CHECK(k.begin(1) == 4);
  CHECK(k.end(1) == 10);
  CHECK(euler_characteristic(k) == oracle::euler(k));
  CHECK(euler_characteristic(k) == 2);
  auto t = k.at("t0-1-2");
  CHECK(k.faces(t).size() == 3);
  CHECK(k.is_face(k.at("e0-1"), t));
  CHECK_FALSE(k.is_face(k.at("v0"), t));  // immediate faces only
  CHECK_FALSE(k.is_face(k.at("v3"), t));
  CHECK(k.cofaces(k.at("e0-1")).size() == 2);
}

TEST_CASE("canonical cycle starts at the smallest vertex") {
  auto k = build_simplicial(torus7_triangles());
  auto c = k.cycle(k.at("t0-1-3"));
  REQUIRE(c.vertices.size() == 3);
  CHECK(k.id(c.vertices[0]) == "v0");
  CHECK(k.id(c.vertices[1]) == "v1");
  CHECK(k.id(c.edges[0]) == "e0-1");
}

TEST_CASE("closed-surface recognition agrees with the oracle") {
  for (auto tris : {sphere_triangles(), torus7_triangles(), rp2_triangles()}) {
    auto k = build_simplicial(tris);
    CHECK(oracle::closed_surface(k));
    auto info = verify_closed_surface(k);
    CHECK(info.connected);
    CHECK(info.chi == oracle::euler(k));
  }
  CHECK(verify_closed_surface(build_simplicial(sphere_triangles())).orientable);
  CHECK(verify_closed_surface(build_simplicial(torus7_triangles())).genus == 1);
  CHECK_FALSE(verify_closed_surface(build_simplicial(rp2_triangles())).orientable);
}

TEST_CASE("disk is rejected as a closed surface") {
  std::vector<Triangle> disk{{{0, 1, 2}}, {{0, 2, 3}}};
  auto k = build_simplicial(disk, false);
  CHECK_FALSE(oracle::closed_surface(k));
  CHECK(code_of([&] { verify_closed_surface(k); }) == Errc::NotClosedSurface);
}

TEST_CASE("pinched vertex is rejected") {
  // Two tetrahedra sharing the vertex 0.
  std::vector<Triangle> tris{{{0, 1, 2}}, {{0, 1, 3}}, {{0, 2, 3}}, {{1, 2, 3}},
                             {{0, 4, 5}}, {{0, 4, 6}}, {{0, 5, 6}}, {{4, 5, 6}}};
  CHECK(code_of([&] { build_simplicial(tris); }) == Errc::NotClosedSurface);
  auto k = build_simplicial(tris, false);
  CHECK_FALSE(oracle::closed_surface(k));
  CHECK(code_of([&] { verify_closed_surface(k); }) == Errc::NotClosedSurface);
}

TEST_CASE("simplicial builder rejects bad facets") {
  std::vector<Triangle> degenerate{{{0, 0, 1}}};
  CHECK(code_of([&] { build_simplicial(degenerate, false); }) == Errc::DegenerateFacet);
  std::vector<Triangle> dup{{{0, 1, 2}}, {{2, 1, 0}}};
  CHECK(code_of([&] { build_simplicial(dup, false); }) == Errc::DuplicateFacet);
  std::vector<Triangle> fin{{{0, 1, 2}}, {{0, 1, 3}}, {{0, 1, 4}}};
  CHECK(code_of([&] { build_simplicial(fin); }) == Errc::NonPseudomanifold);
}

TEST_CASE("poset builder checks structure") {
  using R = CellRecord;
  CHECK(code_of([] { build_poset({R{"a", 0}, R{"a", 0}}); }) == Errc::DuplicateCell);
  CHECK(code_of([] { build_poset({R{"a", 0}, R{"e", 1, {"a", "b"}}}); }) == Errc::MissingFace);
  CHECK(code_of([] { build_poset({R{"a", 0}, R{"b", 0}, R{"t", 2, {"a", "b"}}}); }) ==
        Errc::BadDimensionDrop);
  CHECK(code_of([] { build_poset({R{"a", 0}, R{"e", 1, {"a"}}}); }) == Errc::MalformedCell);
  // A bigon boundary is not a cycle of length >= 3.
  CHECK(code_of([] {
          build_poset({R{"a", 0}, R{"b", 0}, R{"e", 1, {"a", "b"}}, R{"f", 1, {"a", "b"}},
                       R{"t", 2, {"e", "f"}}});
        }) == Errc::BoundaryNotCycle);
  // Edges that do not close up.
  CHECK(code_of([] {
          build_poset({R{"a", 0}, R{"b", 0}, R{"c", 0}, R{"d", 0}, R{"e1", 1, {"a", "b"}},
                       R{"e2", 1, {"b", "c"}}, R{"e3", 1, {"c", "d"}}, R{"t", 2, {"e1", "e2", "e3"}}});
        }) == Errc::BoundaryNotCycle);
}

TEST_CASE("pillow is a regular CW sphere with two square faces") {
  auto k = pillow_complex();
  CHECK(k.count(0) == 4);
  CHECK(k.count(1) == 4);
  CHECK(k.count(2) == 2);
  CHECK(k.cycle(k.begin(2)).edges.size() == 4);
  auto info = verify_closed_surface(k);
  CHECK(info.chi == 2);
  CHECK(info.orientable);
}

TEST_CASE("closed star and link of a torus vertex") {
  auto k = build_simplicial(torus7_triangles());
  auto nb = local_neighborhood(k, "v0");
  // v0 with its 6 spokes and 6 triangles, plus the link: 6 vertices and 6 edges.
  CHECK(nb.star.size() == 25);
  CHECK(nb.link.size() == 12);
  for (auto c : nb.link) CHECK(k.id(c) != "v0");
  auto en = local_neighborhood(k, "e0-1");
  // Closure of the two triangles on e0-1: 4 vertices, 5 edges, 2 triangles.
  CHECK(en.star.size() == 11);
  CHECK(en.link.size() == 2);
}

TEST_CASE("closure contains all faces") {
  auto k = build_simplicial(sphere_triangles());
  const CellIndex t[1] = {k.at("t0-1-2")};
  CHECK(closure(k, t).size() == 7);
}

TEST_CASE("unknown ids throw UnknownCell") {
  auto k = build_simplicial(sphere_triangles());
  CHECK(code_of([&] { (void)k.at("nope"); }) == Errc::UnknownCell);
  CHECK_FALSE(k.find("nope").has_value());
}

TEST_CASE("records rebuild the same complex") {
  auto k = make_fixture("genus", 2, 3).k;
  CHECK(build_poset(k.records()) == k);
}
