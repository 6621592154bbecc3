#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "dms/dms.h"

namespace fs = std::filesystem;

namespace {

const std::string data = DMS_DATA;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("dms_capi_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  dms_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("load a complex and query it") {
  dms_complex* k = nullptr;
  REQUIRE(dms_complex_load((data + "/torus7.tri").c_str(), &k) == DMS_OK);
  CHECK(dms_complex_size(k) == 42);
  CHECK(dms_complex_top_dim(k) == 2);
  CHECK(dms_complex_euler(k) == 0);
  int b[3] = {0, 0, 0};
  size_t n = 0;
  CHECK(dms_betti(k, b, 3, &n) == DMS_OK);
  CHECK(n == 3);
  CHECK(b[0] == 1);
  CHECK(b[1] == 2);
  CHECK(b[2] == 1);
  int genus = -1, orientable = -1, connected = -1;
  CHECK(dms_complex_surface_info(k, &genus, &orientable, &connected) == DMS_OK);
  CHECK(genus == 1);
  CHECK(orientable == 1);
  CHECK(connected == 1);
  dms_complex_free(k);
}

TEST_CASE("status codes and thread-local messages") {
  dms_complex* k = nullptr;
  CHECK(dms_complex_load("/nonexistent/file.tri", &k) == DMS_IO);
  CHECK(std::string(dms_last_error_kind()) == "IoError");
  CHECK(dms_complex_parse("tri 3\nt 0 1 x\n", &k) == DMS_PARSE);
  CHECK(std::string(dms_last_error()).find("line 2") != std::string::npos);
  CHECK(dms_complex_parse(nullptr, &k) == DMS_INVALID_ARGUMENT);
  CHECK(dms_complex_parse("tri 4\nt 0 1 2\nt 0 1 3\nt 0 1 2\n", &k) == DMS_PARSE);
  CHECK(std::string(dms_last_error_kind()) == "DuplicateFacet");
  CHECK(k == nullptr);
}

TEST_CASE("fixtures, fields and functions") {
  dms_complex* k = nullptr;
  dms_field* v = nullptr;
  dms_function* f = nullptr;
  REQUIRE(dms_fixture("genus", 2, 0, &k, &v, &f) == DMS_OK);
  int m[3];
  size_t n = 0;
  CHECK(dms_critical_counts(k, v, m, 3, &n) == DMS_OK);
  CHECK(m[1] == 4);
  int perfect = 0;
  CHECK(dms_is_perfect(k, v, &perfect) == DMS_OK);
  CHECK(perfect == 1);
  int ok = 0;
  char* diag = nullptr;
  CHECK(dms_validate_field(k, v, &ok, &diag) == DMS_OK);
  CHECK(ok == 1);
  CHECK(diag == nullptr);
  CHECK(dms_validate_function(k, f, &ok, &diag) == DMS_OK);
  CHECK(ok == 1);
  dms_field* induced = nullptr;
  CHECK(dms_field_from_function(k, f, &induced) == DMS_OK);
  dms_function* synth = nullptr;
  CHECK(dms_function_from_field(k, induced, &synth) == DMS_OK);
  char* raw = nullptr;
  CHECK(dms_critical_cells(k, induced, &raw) == DMS_OK);
  auto listing = take(raw);
  CHECK(listing.rfind("0 ", 0) == 0);
  CHECK(dms_fixture("klein", 0, 0, nullptr, nullptr, nullptr) == DMS_PARSE);
  dms_function_free(synth);
  dms_field_free(induced);
  dms_function_free(f);
  dms_field_free(v);
  dms_complex_free(k);
}

TEST_CASE("handles from different complexes are rejected") {
  dms_complex *a = nullptr, *b = nullptr;
  dms_field* va = nullptr;
  REQUIRE(dms_fixture("sphere", 0, 0, &a, &va, nullptr) == DMS_OK);
  REQUIRE(dms_fixture("torus7", 0, 0, &b, nullptr, nullptr) == DMS_OK);
  int perfect = 0;
  CHECK(dms_is_perfect(b, va, &perfect) == DMS_INVALID_ARGUMENT);
  dms_field_free(va);
  dms_complex_free(a);
  dms_complex_free(b);
}

TEST_CASE("save and reload through files") {
  TempDir dir;
  dms_complex* k = nullptr;
  dms_field* v = nullptr;
  dms_function* f = nullptr;
  REQUIRE(dms_fixture("torus7", 0, 4, &k, &v, &f) == DMS_OK);
  CHECK(dms_complex_save(k, (dir / "t.cwp").c_str()) == DMS_OK);
  CHECK(dms_field_save(k, v, (dir / "t.dvf").c_str()) == DMS_OK);
  CHECK(dms_function_save(k, f, (dir / "t.dmf").c_str()) == DMS_OK);
  dms_complex* k2 = nullptr;
  REQUIRE(dms_complex_load((dir / "t.cwp").c_str(), &k2) == DMS_OK);
  dms_field* v2 = nullptr;
  char* problems = nullptr;
  CHECK(dms_field_load(k2, (dir / "t.dvf").c_str(), 0, &v2, &problems) == DMS_OK);
  CHECK(problems == nullptr);
  dms_function* f2 = nullptr;
  CHECK(dms_function_load(k2, (dir / "t.dmf").c_str(), &f2) == DMS_OK);
  int ok = 0;
  CHECK(dms_validate_function(k2, f2, &ok, nullptr) == DMS_OK);
  CHECK(ok == 1);
  dms_function_free(f2);
  dms_field_free(v2);
  dms_complex_free(k2);
  dms_function_free(f);
  dms_field_free(v);
  dms_complex_free(k);
}

TEST_CASE("double matching: lenient load reports, strict load fails") {
  dms_complex* k = nullptr;
  REQUIRE(dms_complex_load((data + "/sphere.tri").c_str(), &k) == DMS_OK);
  const std::string path = data + "/double_match.dvf";
  dms_field* v = nullptr;
  char* problems = nullptr;
  CHECK(dms_field_load(k, path.c_str(), 0, &v, &problems) == DMS_OK);
  CHECK(take(problems).find("'v0'") != std::string::npos);
  dms_field_free(v);
  v = nullptr;
  CHECK(dms_field_load(k, path.c_str(), 1, &v, nullptr) == DMS_PARSE);
  CHECK(v == nullptr);
  dms_complex_free(k);
}

TEST_CASE("compose and decompose through the C interface") {
  dms_complex* t = nullptr;
  dms_function* ft = nullptr;
  REQUIRE(dms_fixture("torus7", 0, 0, &t, nullptr, &ft) == DMS_OK);
  dms_complex* k = nullptr;
  dms_field* v = nullptr;
  dms_function* f = nullptr;
  char* report = nullptr;
  REQUIRE(dms_compose(t, ft, t, ft, &k, &v, &f, &report) == DMS_OK);
  CHECK(take(report).find("\"chi\": -2") != std::string::npos);
  CHECK(dms_complex_euler(k) == -2);

  dms_decomposition* d = nullptr;
  REQUIRE(dms_decompose(k, f, 1, 1, &d) == DMS_OK);
  for (int which : {1, 2}) {
    const dms_complex* pk = nullptr;
    const dms_field* pv = nullptr;
    const dms_function* pf = nullptr;
    CHECK(dms_decomposition_piece(d, which, &pk, &pv, &pf) == DMS_OK);
    CHECK(dms_complex_euler(pk) == 0);
    int m[3];
    size_t n = 0;
    CHECK(dms_critical_counts(pk, pv, m, 3, &n) == DMS_OK);
    CHECK(m[0] == 1);
    CHECK(m[1] == 2);
    CHECK(m[2] == 1);
  }
  CHECK(dms_decomposition_piece(d, 3, nullptr, nullptr, nullptr) == DMS_INVALID_ARGUMENT);
  char* circle = nullptr;
  CHECK(dms_decomposition_circle(d, &circle) == DMS_OK);
  CHECK_FALSE(take(circle).empty());
  char* json = nullptr;
  CHECK(dms_decomposition_report(d, &json) == DMS_OK);
  CHECK(take(json).find("circleLength") != std::string::npos);
  dms_decomposition_free(d);

  dms_decomposition* bad = nullptr;
  CHECK(dms_decompose(k, f, 2, 1, &bad) == DMS_PRECONDITION);
  CHECK(std::string(dms_last_error_kind()) == "WrongGenus");
  CHECK(bad == nullptr);

  char* off = nullptr;
  CHECK(dms_export(k, nullptr, "off", &off) == DMS_OK);
  CHECK(take(off).rfind("OFF", 0) == 0);
  char* dot = nullptr;
  CHECK(dms_export(k, v, "dot", &dot) == DMS_OK);
  CHECK(take(dot).rfind("digraph", 0) == 0);
  CHECK(dms_export(k, v, "svg", &dot) == DMS_INVALID_ARGUMENT);

  dms_function_free(f);
  dms_field_free(v);
  dms_complex_free(k);
  dms_function_free(ft);
  dms_complex_free(t);
}

TEST_CASE("non-perfect compose input is a precondition failure") {
  dms_complex* s = nullptr;
  REQUIRE(dms_complex_load((data + "/sphere.tri").c_str(), &s) == DMS_OK);
  dms_field* empty = nullptr;
  REQUIRE(dms_field_load(s, (data + "/double_match.dvf").c_str(), 0, &empty, nullptr) == DMS_OK);
  dms_function* g = nullptr;
  REQUIRE(dms_function_from_field(s, empty, &g) == DMS_OK);
  dms_complex* t = nullptr;
  dms_function* ft = nullptr;
  REQUIRE(dms_fixture("torus7", 0, 0, &t, nullptr, &ft) == DMS_OK);
  dms_complex* k = nullptr;
  CHECK(dms_compose(s, g, t, ft, &k, nullptr, nullptr, nullptr) == DMS_PRECONDITION);
  CHECK(std::string(dms_last_error_kind()) == "NotPerfectInput");
  dms_function_free(ft);
  dms_complex_free(t);
  dms_function_free(g);
  dms_field_free(empty);
  dms_complex_free(s);
}
