// Randomised checks of the invariants that every operation must keep.
#include <doctest.h>

#include <random>
#include <set>

#include "error.hpp"
#include "fixtures.hpp"
#include "formats.hpp"
#include "oracles.hpp"
#include "splitter.hpp"
#include "surgery.hpp"

using namespace dms;

namespace {

// Applies n random bisections, choosing an edge or a chord of a polygon.
std::pair<Complex, VectorField> random_surgery(const Complex& k0, const VectorField& v0, int n,
                                               std::mt19937_64& rng) {
  Surgeon s(k0, v0);
  std::vector<CellId> edges, faces;
  for (CellIndex c = 0; c < k0.size(); ++c)
    (k0.dim(c) == 1 ? edges : faces).push_back(k0.id(c));
  std::erase_if(faces, [&](const CellId& id) { return k0.dim(k0.at(id)) != 2; });
  for (int done = 0; done < n;) {
    if (rng() % 2 == 0) {
      auto& e = edges[rng() % edges.size()];
      auto rec = s.bisect_edge(e);
      e = rec.new_cells[1];
      edges.push_back(rec.new_cells[2]);
      ++done;
    } else {
      auto& t = faces[rng() % faces.size()];
      auto cyc = s.cycle(t);
      const std::size_t m = cyc.vertices.size();
      if (m < 4) continue;
      std::size_t a = rng() % m, b = (a + 2 + rng() % (m - 3)) % m;
      auto rec = s.bisect_2cell(t, cyc.vertices[a], cyc.vertices[b]);
      t = rec.new_cells[1];
      faces.push_back(rec.new_cells[2]);
      edges.push_back(rec.new_cells[0]);
      ++done;
    }
  }
  return s.finish();
}

}  // namespace

TEST_CASE("500 random bisections keep the field valid and the counts fixed") {
  std::mt19937_64 rng(2024);
  auto fx = make_fixture("genus", 2, 1);
  auto [k, v] = random_surgery(fx.k, fx.v, 500, rng);
  CHECK(k.size() == fx.k.size() + 2 * 500);  // three cells in, one out
  CHECK(oracle::field_valid(k, v));
  CHECK(oracle::critical_counts(k, v) == std::vector<int>{1, 4, 1});
  CHECK(oracle::euler(k) == -2);
  CHECK(oracle::closed_surface(k));
  CHECK(oracle::betti(k) == std::vector<int>{1, 4, 1});
}

TEST_CASE("random surgery on each fixture") {
  std::mt19937_64 rng(99);
  for (const char* kind : {"sphere", "torus7", "rp2", "pillow"}) {
    auto fx = make_fixture(kind);
    for (int trial = 0; trial < 5; ++trial) {
      auto [k, v] = random_surgery(fx.k, fx.v, 40, rng);
      CHECK(oracle::field_valid(k, v));
      CHECK(oracle::critical_counts(k, v) == oracle::critical_counts(fx.k, fx.v));
      CHECK(read_complex(write_cwp(k)) == k);
      CHECK(read_dvf(k, write_dvf(k, v)) == v);
    }
  }
}

TEST_CASE("Morse inequalities hold for 100 random fields") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int g = 0; g <= 2; ++g) {
    auto k = make_fixture("genus", g, 0).k;
    auto b = oracle::betti(k);
    for (int trial = 0; trial < (g == 2 ? 20 : 40); ++trial) {
      auto v = oracle::random_field(k, rng, static_cast<int>(2 * k.size()));
      REQUIRE(validate_field(k, v).ok);
      auto m = critical_cells(k, v).m;
      for (int p = 0; p <= 2; ++p) CHECK(m[p] >= b[p]);
      CHECK(m[0] - m[1] + m[2] == oracle::euler(k));
      CHECK(morse_inequalities_hold(k, v));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("synthesis inverts induction on random fields") {
  std::mt19937_64 rng(8);
  auto k = make_fixture("genus", 2, 3).k;
  for (int trial = 0; trial < 20; ++trial) {
    auto v = oracle::random_field(k, rng, static_cast<int>(k.size()));
    auto f = synthesize_function(k, v);
    CHECK(validate_function(k, f).ok);
    CHECK(induced_field(k, f) == v);
  }
}

TEST_CASE("make_injective preserves the induced field on tied functions") {
  std::mt19937_64 rng(13);
  for (int g = 0; g <= 2; ++g) {
    auto k = make_fixture("genus", g, 0).k;
    for (int trial = 0; trial < 10; ++trial) {
      auto v = oracle::random_field(k, rng, static_cast<int>(k.size()));
      // Synthesis gives both cells of a pair the same value.
      auto f = synthesize_function(k, v);
      std::set<double> tied(f.values.begin(), f.values.end());
      REQUIRE(tied.size() < k.size());
      auto g2 = make_injective(k, f);
      std::set<double> distinct(g2.values.begin(), g2.values.end());
      CHECK(distinct.size() == k.size());
      CHECK(induced_field(k, g2) == v);
    }
  }
}

TEST_CASE("compose then decompose on random relabellings") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    CAPTURE(seed);
    auto a = make_fixture("torus7", 0, seed);
    auto b = make_fixture("torus7", 0, seed + 100);
    auto c = compose(a.k, a.f, b.k, b.f);
    REQUIRE(oracle::critical_counts(c.k, c.v) == std::vector<int>{1, 4, 1});
    auto d = decompose(c.k, c.f, 1, 1);
    CHECK(oracle::critical_counts(d.m1, d.v1) == std::vector<int>{1, 2, 1});
    CHECK(oracle::critical_counts(d.m2, d.v2) == std::vector<int>{1, 2, 1});
    CHECK(oracle::gradient_of(d.m1, d.f1) == d.v1);
    CHECK(oracle::gradient_of(d.m2, d.f2) == d.v2);
    CHECK(d.report.no_inward_arrows);
  }
}
