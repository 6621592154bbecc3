#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "complex.hpp"
#include "morse.hpp"

namespace dms {

std::vector<Triangle> sphere_triangles();
std::vector<Triangle> torus7_triangles();
std::vector<Triangle> rp2_triangles();

// Relabels vertices with a seeded permutation; seed 0 keeps the labels.
std::vector<Triangle> permute_labels(std::vector<Triangle> tris, std::uint64_t seed);

Complex pillow_complex();

// Vertex-edge pairs along a BFS spanning tree, edge-2-cell pairs along a BFS
// tree of the dual graph on the remaining edges.
VectorField tree_cotree_field(const Complex& k);

struct Fixture {
  Complex k;
  VectorField v;
  MorseFunction f;
};

// kind is one of sphere, torus7, rp2, pillow, genus. genus g >= 2 is built by
// repeated connected sums with torus7.
Fixture make_fixture(const std::string& kind, int genus = 0, std::uint64_t seed = 0);

}  // namespace dms
