#include "dms/dms.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "complex.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "formats.hpp"
#include "homology.hpp"
#include "morse.hpp"
#include "splitter.hpp"
#include "surgery.hpp"

struct dms_complex {
  dms::Complex k;
};
struct dms_field {
  dms::VectorField v;
};
struct dms_function {
  dms::MorseFunction f;
};
struct dms_decomposition {
  dms::DecomposeResult r;
  dms_complex k1, k2;
  dms_field v1, v2;
  dms_function f1, f2;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;

dms_status fail(dms_status s, std::string kind, std::string message) {
  last_kind = std::move(kind);
  last_error = std::move(message);
  return s;
}

dms_status status_of(dms::Errc code) {
  switch (dms::error_class(code)) {
    case dms::ErrorClass::Parse: return DMS_PARSE;
    case dms::ErrorClass::Io: return DMS_IO;
    case dms::ErrorClass::Precondition: return DMS_PRECONDITION;
    case dms::ErrorClass::Validation: return DMS_VALIDATION;
    case dms::ErrorClass::Internal: return DMS_INTERNAL;
  }
  return DMS_INTERNAL;
}

// Runs body, translating exceptions into a status and the thread-local message.
template <class F>
dms_status guarded(F&& body) {
  try {
    body();
    return DMS_OK;
  } catch (const dms::Error& e) {
    return fail(status_of(e.code()), std::string(dms::errc_name(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DMS_INTERNAL, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return fail(DMS_INTERNAL, "Internal", e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

bool null_arg(const void* p, const char* name, dms_status& st) {
  if (p) return false;
  st = fail(DMS_INVALID_ARGUMENT, "InvalidArgument", std::string(name) + " is null");
  return true;
}

#define DMS_REQUIRE(p)                             \
  do {                                             \
    dms_status st_;                                \
    if (null_arg((p), #p, st_)) return st_;        \
  } while (0)

dms_status check_size(const dms_complex* k, std::size_t n) {
  if (k->k.size() == n) return DMS_OK;
  return fail(DMS_INVALID_ARGUMENT, "InvalidArgument",
              "handle belongs to a complex with " + std::to_string(n) + " cells, not " +
                  std::to_string(k->k.size()));
}

std::string describe(const dms::Complex& k, const std::vector<dms::Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    out += v.cell == dms::kNoCell ? std::string("-") : k.id(v.cell);
    out += ": " + v.kind;
    if (!v.detail.empty()) out += ": " + v.detail;
    out += '\n';
  }
  return out;
}

void copy_ints(const std::vector<int>& src, int* out, std::size_t cap, std::size_t* len) {
  for (std::size_t i = 0; i < src.size() && i < cap; ++i) out[i] = src[i];
  if (len) *len = src.size();
}

}  // namespace

extern "C" {

const char* dms_last_error(void) { return last_error.c_str(); }
const char* dms_last_error_kind(void) { return last_kind.c_str(); }
const char* dms_version(void) { return "1.0.0"; }

void dms_string_free(char* s) { std::free(s); }

dms_status dms_complex_parse(const char* text, dms_complex** out) {
  DMS_REQUIRE(text);
  DMS_REQUIRE(out);
  return guarded([&] { *out = new dms_complex{dms::read_complex(text)}; });
}

dms_status dms_complex_load(const char* path, dms_complex** out) {
  DMS_REQUIRE(path);
  DMS_REQUIRE(out);
  return guarded([&] { *out = new dms_complex{dms::read_complex(dms::read_file(path))}; });
}

dms_status dms_complex_save(const dms_complex* k, const char* path) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(path);
  return guarded([&] { dms::write_file(path, dms::write_cwp(k->k)); });
}

void dms_complex_free(dms_complex* k) { delete k; }

size_t dms_complex_size(const dms_complex* k) { return k ? k->k.size() : 0; }
int dms_complex_top_dim(const dms_complex* k) { return k ? k->k.top_dim() : -1; }
long dms_complex_euler(const dms_complex* k) { return k ? dms::euler_characteristic(k->k) : 0; }

dms_status dms_complex_surface_info(const dms_complex* k, int* genus, int* orientable,
                                    int* connected) {
  DMS_REQUIRE(k);
  return guarded([&] {
    auto info = dms::verify_closed_surface(k->k);
    if (genus) *genus = info.genus;
    if (orientable) *orientable = info.orientable;
    if (connected) *connected = info.connected;
  });
}

dms_status dms_betti(const dms_complex* k, int* out, size_t cap, size_t* len) {
  DMS_REQUIRE(k);
  if (cap) DMS_REQUIRE(out);
  return guarded([&] { copy_ints(dms::betti_mod2(k->k), out, cap, len); });
}

dms_status dms_field_load(const dms_complex* k, const char* path, int strict, dms_field** out,
                          char** problems) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(path);
  DMS_REQUIRE(out);
  if (problems) *problems = nullptr;
  return guarded([&] {
    auto text = dms::read_file(path);
    if (strict) {
      *out = new dms_field{dms::read_dvf(k->k, text)};
      return;
    }
    auto parsed = dms::read_dvf_lenient(k->k, text);
    std::string joined;
    for (const auto& p : parsed.problems) joined += p + '\n';
    auto h = std::make_unique<dms_field>(dms_field{std::move(parsed.v)});
    if (problems && !joined.empty()) *problems = dup(joined);
    *out = h.release();
  });
}

dms_status dms_field_save(const dms_complex* k, const dms_field* v, const char* path) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  DMS_REQUIRE(path);
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] { dms::write_file(path, dms::write_dvf(k->k, v->v)); });
}

void dms_field_free(dms_field* v) { delete v; }

dms_status dms_function_load(const dms_complex* k, const char* path, dms_function** out) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(path);
  DMS_REQUIRE(out);
  return guarded([&] { *out = new dms_function{dms::read_dmf(k->k, dms::read_file(path))}; });
}

dms_status dms_function_save(const dms_complex* k, const dms_function* f, const char* path) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(f);
  DMS_REQUIRE(path);
  if (auto s = check_size(k, f->f.size())) return s;
  return guarded([&] { dms::write_file(path, dms::write_dmf(k->k, f->f)); });
}

void dms_function_free(dms_function* f) { delete f; }

dms_status dms_field_from_function(const dms_complex* k, const dms_function* f, dms_field** out) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(f);
  DMS_REQUIRE(out);
  if (auto s = check_size(k, f->f.size())) return s;
  return guarded([&] { *out = new dms_field{dms::induced_field(k->k, f->f)}; });
}

dms_status dms_function_from_field(const dms_complex* k, const dms_field* v, dms_function** out) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  DMS_REQUIRE(out);
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] { *out = new dms_function{dms::synthesize_function(k->k, v->v)}; });
}

dms_status dms_validate_field(const dms_complex* k, const dms_field* v, int* ok,
                              char** diagnostics) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  DMS_REQUIRE(ok);
  if (diagnostics) *diagnostics = nullptr;
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] {
    auto rep = dms::validate_field(k->k, v->v);
    *ok = rep.ok;
    if (diagnostics && !rep.violations.empty()) *diagnostics = dup(describe(k->k, rep.violations));
  });
}

dms_status dms_validate_function(const dms_complex* k, const dms_function* f, int* ok,
                                 char** diagnostics) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(f);
  DMS_REQUIRE(ok);
  if (diagnostics) *diagnostics = nullptr;
  if (auto s = check_size(k, f->f.size())) return s;
  return guarded([&] {
    auto rep = dms::validate_function(k->k, f->f);
    *ok = rep.ok;
    if (diagnostics && !rep.violations.empty()) *diagnostics = dup(describe(k->k, rep.violations));
  });
}

dms_status dms_critical_counts(const dms_complex* k, const dms_field* v, int* out, size_t cap,
                               size_t* len) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  if (cap) DMS_REQUIRE(out);
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] { copy_ints(dms::critical_cells(k->k, v->v).m, out, cap, len); });
}

dms_status dms_critical_cells(const dms_complex* k, const dms_field* v, char** listing) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  DMS_REQUIRE(listing);
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] {
    auto mc = dms::critical_cells(k->k, v->v);
    std::string text;
    for (std::size_t p = 0; p < mc.cells.size(); ++p)
      for (auto c : mc.cells[p]) text += std::to_string(p) + ' ' + k->k.id(c) + '\n';
    *listing = dup(text);
  });
}

dms_status dms_is_perfect(const dms_complex* k, const dms_field* v, int* perfect) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(v);
  DMS_REQUIRE(perfect);
  if (auto s = check_size(k, v->v.size())) return s;
  return guarded([&] { *perfect = dms::is_perfect(k->k, v->v); });
}

dms_status dms_compose(const dms_complex* m1, const dms_function* f1, const dms_complex* m2,
                       const dms_function* f2, dms_complex** out_k, dms_field** out_v,
                       dms_function** out_f, char** report_json) {
  DMS_REQUIRE(m1);
  DMS_REQUIRE(f1);
  DMS_REQUIRE(m2);
  DMS_REQUIRE(f2);
  if (auto s = check_size(m1, f1->f.size())) return s;
  if (auto s = check_size(m2, f2->f.size())) return s;
  return guarded([&] {
    auto r = dms::compose(m1->k, f1->f, m2->k, f2->f);
    std::string json = report_json ? dms::compose_report_json(r) : std::string();
    auto k = std::make_unique<dms_complex>(dms_complex{std::move(r.k)});
    auto v = std::make_unique<dms_field>(dms_field{std::move(r.v)});
    auto f = std::make_unique<dms_function>(dms_function{std::move(r.f)});
    char* js = report_json ? dup(json) : nullptr;
    if (report_json) *report_json = js;
    if (out_k) *out_k = k.release();
    if (out_v) *out_v = v.release();
    if (out_f) *out_f = f.release();
  });
}

dms_status dms_decompose(const dms_complex* k, const dms_function* f, int g1, int g2,
                         dms_decomposition** out) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(f);
  DMS_REQUIRE(out);
  if (auto s = check_size(k, f->f.size())) return s;
  return guarded([&] {
    auto d = std::make_unique<dms_decomposition>();
    d->r = dms::decompose(k->k, f->f, g1, g2);
    d->k1.k = d->r.m1;
    d->k2.k = d->r.m2;
    d->v1.v = d->r.v1;
    d->v2.v = d->r.v2;
    d->f1.f = d->r.f1;
    d->f2.f = d->r.f2;
    *out = d.release();
  });
}

dms_status dms_decomposition_piece(const dms_decomposition* d, int which, const dms_complex** k,
                                   const dms_field** v, const dms_function** f) {
  DMS_REQUIRE(d);
  if (which != 1 && which != 2)
    return fail(DMS_INVALID_ARGUMENT, "InvalidArgument", "piece must be 1 or 2");
  bool first = which == 1;
  if (k) *k = first ? &d->k1 : &d->k2;
  if (v) *v = first ? &d->v1 : &d->v2;
  if (f) *f = first ? &d->f1 : &d->f2;
  return DMS_OK;
}

dms_status dms_decomposition_circle(const dms_decomposition* d, char** text) {
  DMS_REQUIRE(d);
  DMS_REQUIRE(text);
  return guarded([&] {
    std::string s;
    for (const auto& id : d->r.circle) s += id + '\n';
    *text = dup(s);
  });
}

dms_status dms_decomposition_report(const dms_decomposition* d, char** json) {
  DMS_REQUIRE(d);
  DMS_REQUIRE(json);
  return guarded([&] { *json = dup(dms::decompose_report_json(d->r)); });
}

void dms_decomposition_free(dms_decomposition* d) { delete d; }

dms_status dms_fixture(const char* kind, int genus, uint64_t seed, dms_complex** out_k,
                       dms_field** out_v, dms_function** out_f) {
  DMS_REQUIRE(kind);
  return guarded([&] {
    auto fx = dms::make_fixture(kind, genus, seed);
    auto k = std::make_unique<dms_complex>(dms_complex{std::move(fx.k)});
    auto v = std::make_unique<dms_field>(dms_field{std::move(fx.v)});
    auto f = std::make_unique<dms_function>(dms_function{std::move(fx.f)});
    if (out_k) *out_k = k.release();
    if (out_v) *out_v = v.release();
    if (out_f) *out_f = f.release();
  });
}

dms_status dms_export(const dms_complex* k, const dms_field* v, const char* format, char** out) {
  DMS_REQUIRE(k);
  DMS_REQUIRE(format);
  DMS_REQUIRE(out);
  if (v)
    if (auto s = check_size(k, v->v.size())) return s;
  std::string fmt = format;
  if (fmt != "off" && fmt != "dot")
    return fail(DMS_INVALID_ARGUMENT, "InvalidArgument", "unknown export format: " + fmt);
  return guarded([&] {
    *out = dup(fmt == "off" ? dms::export_off(k->k) : dms::export_dot(k->k, v ? &v->v : nullptr));
  });
}

}  // extern "C"
