#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "fixtures.hpp"
#include "formats.hpp"
#include "oracles.hpp"
#include "splitter.hpp"
#include "surgery.hpp"

using namespace dms;

namespace {

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(Errc::Internal, "");
}

}  // namespace

TEST_CASE("TRI text with comments parses to the tetrahedron") {
  const char* text =
      "# boundary of a tetrahedron\n"
      "tri 4\n"
      "t 0 1 2   # first face\n"
      "t 0 1 3\n"
      "\n"
      "t 0 2 3\n"
      "t 1 2 3\n";
  auto k = read_complex(text);
  CHECK(k.count(0) == 4);
  CHECK(k.count(2) == 4);
  CHECK(k == build_simplicial(sphere_triangles()));
  int n = 0;
  auto tris = parse_tri(text, &n);
  CHECK(n == 4);
  CHECK(parse_tri(write_tri(tris)).size() == 4);
}

TEST_CASE("TRI errors carry line numbers") {
  auto e = error_of([] { read_tri("tri 3\nt 0 1 2\nt 0 1 7\n"); });
  CHECK(e.code() == Errc::ParseError);
  CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  CHECK(error_of([] { read_tri("t 0 1 2\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_tri("tri 3\nt 0 1 x\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_tri("tri 3\nt 0 1 1\n"); }).code() == Errc::DegenerateFacet);
}

TEST_CASE("CWP round trip keeps ids, order and tags") {
  auto t = make_fixture("torus7");
  auto c = compose(t.k, t.f, t.k, t.f);
  auto text = write_cwp(c.k);
  auto back = read_cwp(text);
  CHECK(back == c.k);
  CHECK(write_cwp(back) == text);
  bool tagged = false;
  for (CellIndex x = 0; x < back.size(); ++x) tagged |= back.tag(x) != CellTag::Original;
  CHECK(tagged);
}

TEST_CASE("CWP pillow by hand") {
  const char* text =
      "cell a 0\ncell b 0\ncell c 0\ncell d 0\n"
      "cell ab 1\ncell bc 1\ncell cd 1\ncell da 1\n"
      "cell top 2\ncell bottom 2\n"
      "bnd ab a b\nbnd bc b c\nbnd cd c d\nbnd da d a\n"
      "bnd top ab bc cd da\nbnd bottom ab bc cd da\n";
  auto k = read_complex(text);
  CHECK(oracle::closed_surface(k));
  CHECK(oracle::betti(k) == std::vector<int>{1, 0, 1});
}

TEST_CASE("CWP errors") {
  CHECK(error_of([] { read_cwp("cell a 0\ncell a 0\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_cwp("cell a 0\nbnd z a\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_cwp("cell a x\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_cwp("cell a 0 weird\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_cwp("face a 0\n"); }).code() == Errc::ParseError);
  CHECK(error_of([] { read_cwp("cell a 0\ncell e 1\nbnd e a b\n"); }).code() == Errc::MissingFace);
}

TEST_CASE("DVF round trip") {
  for (int g = 0; g <= 2; ++g) {
    auto fx = make_fixture("genus", g, 6);
    auto text = write_dvf(fx.k, fx.v);
    CHECK(read_dvf(fx.k, text) == fx.v);
    auto lenient = read_dvf_lenient(fx.k, text);
    CHECK(lenient.problems.empty());
    CHECK(lenient.v == fx.v);
  }
}

TEST_CASE("doubly matched cells: strict parse fails, lenient parse names the cell") {
  auto k = build_simplicial(sphere_triangles());
  const char* text = "pair v0 e0-1\npair v0 e0-2\n";
  auto e = error_of([&] { read_dvf(k, text); });
  CHECK(e.code() == Errc::ParseError);
  CHECK(e.cell() == "v0");
  auto lenient = read_dvf_lenient(k, text);
  REQUIRE(lenient.problems.size() == 1);
  CHECK(lenient.problems[0].find("'v0'") != std::string::npos);
  CHECK(lenient.problems[0].find("line 2") != std::string::npos);
  auto crit = read_dvf_lenient(k, "pair v0 e0-1\ncrit v0\n");
  CHECK(crit.problems.size() == 1);
  CHECK(error_of([&] { read_dvf(k, "pair v0 zz\n"); }).code() == Errc::ParseError);
  CHECK(error_of([&] { read_dvf(k, "pair v0 t0-1-2\n"); }).code() == Errc::ParseError);
}

TEST_CASE("DMF round trip is exact") {
  auto t = make_fixture("torus7");
  auto c = compose(t.k, t.f, t.k, t.f);
  auto inj = make_injective(c.k, c.f);
  for (const auto* f : {&c.f, &inj}) {
    auto text = write_dmf(c.k, *f);
    CHECK(read_dmf(c.k, text) == *f);
  }
}

TEST_CASE("DMF errors") {
  auto k = build_simplicial(sphere_triangles());
  std::string all;
  for (CellIndex c = 0; c < k.size(); ++c) all += "val " + k.id(c) + " " + std::to_string(k.dim(c)) + "\n";
  CHECK(read_dmf(k, all)[k.at("t0-1-2")] == 2.0);
  CHECK(error_of([&] { read_dmf(k, "val v0 0\n"); }).code() == Errc::MissingValue);
  CHECK(error_of([&] { read_dmf(k, all + "val v0 1\n"); }).code() == Errc::ParseError);
  CHECK(error_of([&] { read_dmf(k, "val v0 abc\n"); }).code() == Errc::ParseError);
  CHECK(error_of([&] { read_dmf(k, "val nope 1\n"); }).code() == Errc::ParseError);
}

TEST_CASE("OFF export lists every face as a vertex cycle") {
  auto k = pillow_complex();
  std::istringstream in(export_off(k));
  std::string head;
  std::size_t nv, nf, ne;
  in >> head >> nv >> nf >> ne;
  CHECK(head == "OFF");
  CHECK(nv == 4);
  CHECK(nf == 2);
  CHECK(ne == 4);
  double x, y, z;
  for (std::size_t i = 0; i < nv; ++i) in >> x >> y >> z;
  for (std::size_t i = 0; i < nf; ++i) {
    std::size_t deg;
    in >> deg;
    CHECK(deg == 4);
    for (std::size_t j = 0; j < deg; ++j) {
      std::size_t idx;
      in >> idx;
      CHECK(idx < nv);
    }
  }
}

TEST_CASE("DOT export marks matched arrows") {
  auto fx = make_fixture("sphere");
  auto dot = export_dot(fx.k, &fx.v);
  CHECK(dot.rfind("digraph", 0) == 0);
  std::size_t red = 0;
  for (auto p = dot.find("color=red"); p != std::string::npos; p = dot.find("color=red", p + 1)) ++red;
  CHECK(red == fx.v.pairs().size());
}

TEST_CASE("report JSON carries the required keys") {
  auto t = make_fixture("torus7");
  auto c = compose(t.k, t.f, t.k, t.f);
  auto cj = nlohmann::json::parse(compose_report_json(c));
  for (const char* key : {"chi", "betti", "morseCounts", "perfect", "bisections", "circleLength"})
    CHECK(cj.contains(key));
  CHECK(cj["chi"] == -2);
  CHECK(cj["morseCounts"] == nlohmann::json({1, 4, 1}));
  CHECK(cj["perfect"] == true);

  auto d = decompose(c.k, c.f, 1, 1);
  auto dj = nlohmann::json::parse(decompose_report_json(d));
  for (const char* key : {"chi", "betti", "morseCounts", "perfect", "bisections", "circleLength"})
    CHECK(dj.contains(key));
  CHECK(dj["circleLength"] == d.circle.size());
  CHECK(dj["m1"]["chi"] == 0);
  CHECK(dj["m2"]["morseCounts"] == nlohmann::json({1, 2, 1}));
  CHECK(dj["bisections"].size() == d.report.bisections.size());
}

TEST_CASE("decompose outputs round trip through the parsers") {
  auto fx = make_fixture("genus", 2, 2);
  auto d = decompose(fx.k, fx.f, 1, 1);
  for (auto [k, v, f] : {std::tuple{&d.m1, &d.v1, &d.f1}, {&d.m2, &d.v2, &d.f2}}) {
    auto k2 = read_complex(write_cwp(*k));
    CHECK(k2 == *k);
    CHECK(read_dvf(k2, write_dvf(*k, *v)) == *v);
    CHECK(read_dmf(k2, write_dmf(*k, *f)) == *f);
  }
}

TEST_CASE("file helpers report io errors") {
  auto dir = std::filesystem::temp_directory_path() / "dms_formats_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "x.txt").string();
  write_file(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK(error_of([&] { read_file((dir / "missing").string()); }).code() == Errc::IoError);
  CHECK(error_of([&] { write_file((dir / "no" / "such" / "dir").string(), "x"); }).code() ==
        Errc::IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bundled data files load and match the fixtures") {
  const std::string dir = DMS_DATA;
  CHECK(read_complex(read_file(dir + "/sphere.tri")) == make_fixture("sphere").k);
  CHECK(read_complex(read_file(dir + "/torus7.tri")) == make_fixture("torus7").k);
  CHECK(read_complex(read_file(dir + "/rp2.tri")) == make_fixture("rp2").k);
  auto pillow = read_complex(read_file(dir + "/pillow.cwp"));
  CHECK(oracle::closed_surface(pillow));
  CHECK(oracle::betti(pillow) == std::vector<int>{1, 0, 1});
}
