#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dms/dms.h"

namespace {

int exit_code(dms_status s) {
  switch (s) {
    case DMS_OK: return 0;
    case DMS_VALIDATION: return 2;
    case DMS_PARSE:
    case DMS_IO: return 3;
    case DMS_PRECONDITION: return 4;
    default: return 1;
  }
}

struct Failure {
  int code;
};

void check(dms_status s) {
  if (s == DMS_OK) return;
  std::cerr << "error: " << dms_last_error_kind() << ": " << dms_last_error() << '\n';
  throw Failure{exit_code(s)};
}

struct StrDel {
  void operator()(char* s) const { dms_string_free(s); }
};
using Str = std::unique_ptr<char, StrDel>;
struct CxDel {
  void operator()(dms_complex* p) const { dms_complex_free(p); }
};
struct FdDel {
  void operator()(dms_field* p) const { dms_field_free(p); }
};
struct FnDel {
  void operator()(dms_function* p) const { dms_function_free(p); }
};
struct DcDel {
  void operator()(dms_decomposition* p) const { dms_decomposition_free(p); }
};
using Cx = std::unique_ptr<dms_complex, CxDel>;
using Fd = std::unique_ptr<dms_field, FdDel>;
using Fn = std::unique_ptr<dms_function, FnDel>;
using Dc = std::unique_ptr<dms_decomposition, DcDel>;

Cx load_complex(const std::string& path) {
  dms_complex* k = nullptr;
  check(dms_complex_load(path.c_str(), &k));
  return Cx(k);
}

Fn load_function(const dms_complex* k, const std::string& path) {
  dms_function* f = nullptr;
  check(dms_function_load(k, path.c_str(), &f));
  return Fn(f);
}

void write_text(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: IoError: cannot write " << path << '\n';
    throw Failure{3};
  }
}

// Prints each non-empty line of a diagnostics block to stderr.
int emit(const char* block) {
  int n = 0;
  if (!block) return 0;
  std::istringstream in(block);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) {
      std::cerr << line << '\n';
      ++n;
    }
  return n;
}

void print_ints(const int* v, size_t n) {
  for (size_t i = 0; i < n; ++i) std::cout << (i ? " " : "") << v[i];
  std::cout << '\n';
}

void save_triple(const std::string& prefix, const dms_complex* k, const dms_field* v,
                 const dms_function* f) {
  check(dms_complex_save(k, (prefix + ".cwp").c_str()));
  check(dms_field_save(k, v, (prefix + ".dvf").c_str()));
  check(dms_function_save(k, f, (prefix + ".dmf").c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Morse functions on surfaces: validation, connected sums and splitting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dms_version());

  std::string complex_path, field_path, function_path, out, format;
  std::string left, right, left_fn, right_fn, kind;
  int g1 = 0, g2 = 0, genus = 0;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check a complex and optionally a field or function");
  validate->add_option("--complex", complex_path)->required();
  auto* vf = validate->add_option("--field", field_path);
  auto* vh = validate->add_option("--function", function_path);
  vf->excludes(vh);

  auto* betti = app.add_subcommand("betti", "Print mod-2 Betti numbers");
  betti->add_option("--complex", complex_path)->required();

  auto* critical = app.add_subcommand("critical", "Print critical counts and critical cells");
  critical->add_option("--complex", complex_path)->required();
  critical->add_option("--field", field_path)->required();

  auto* compose = app.add_subcommand("compose", "Connected sum of two surfaces with perfect functions");
  compose->add_option("--left", left)->required();
  compose->add_option("--left-function", left_fn)->required();
  compose->add_option("--right", right)->required();
  compose->add_option("--right-function", right_fn)->required();
  compose->add_option("--out", out)->required();

  auto* decompose = app.add_subcommand("decompose", "Split a perfect surface into two of given genera");
  decompose->add_option("--complex", complex_path)->required();
  decompose->add_option("--function", function_path)->required();
  decompose->add_option("--g1", g1)->required();
  decompose->add_option("--g2", g2)->required();
  decompose->add_option("--out", out)->required();

  auto* fixture = app.add_subcommand("fixture", "Write a built-in surface with a perfect field");
  fixture->add_option("kind", kind, "sphere, torus7, rp2, pillow, genus or genusN")->required();
  fixture->add_option("--genus", genus, "genus for kind 'genus'");
  fixture->add_option("--seed", seed, "vertex relabelling seed; 0 keeps canonical labels");
  fixture->add_option("--out", out)->required();

  auto* exporter = app.add_subcommand("export", "Write OFF or Graphviz DOT");
  exporter->add_option("--complex", complex_path)->required();
  exporter->add_option("--format", format)->required()->check(CLI::IsMember({"off", "dot"}));
  exporter->add_option("--field", field_path, "draw the matching in DOT output");
  exporter->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*validate) {
      Cx k = load_complex(complex_path);
      int problems = 0;
      if (!field_path.empty()) {
        dms_field* raw = nullptr;
        char* parse_problems = nullptr;
        check(dms_field_load(k.get(), field_path.c_str(), 0, &raw, &parse_problems));
        Fd v(raw);
        Str pp(parse_problems);
        problems += emit(pp.get());
        int ok = 0;
        char* diag = nullptr;
        check(dms_validate_field(k.get(), v.get(), &ok, &diag));
        Str d(diag);
        problems += emit(d.get());
        if (!ok && !d) ++problems;
      } else if (!function_path.empty()) {
        Fn f = load_function(k.get(), function_path);
        int ok = 0;
        char* diag = nullptr;
        check(dms_validate_function(k.get(), f.get(), &ok, &diag));
        Str d(diag);
        problems += emit(d.get());
        if (!ok && !d) ++problems;
      }
      if (problems) return 2;
      std::cout << "ok\n";
      return 0;
    }

    if (*betti) {
      Cx k = load_complex(complex_path);
      int b[8];
      size_t n = 0;
      check(dms_betti(k.get(), b, 8, &n));
      print_ints(b, n);
      return 0;
    }

    if (*critical) {
      Cx k = load_complex(complex_path);
      dms_field* raw = nullptr;
      check(dms_field_load(k.get(), field_path.c_str(), 1, &raw, nullptr));
      Fd v(raw);
      int m[8];
      size_t n = 0;
      check(dms_critical_counts(k.get(), v.get(), m, 8, &n));
      print_ints(m, n);
      char* listing = nullptr;
      check(dms_critical_cells(k.get(), v.get(), &listing));
      Str l(listing);
      std::cout << l.get();
      return 0;
    }

    if (*compose) {
      Cx a = load_complex(left);
      Fn fa = load_function(a.get(), left_fn);
      Cx b = load_complex(right);
      Fn fb = load_function(b.get(), right_fn);
      dms_complex* k = nullptr;
      dms_field* v = nullptr;
      dms_function* f = nullptr;
      char* report = nullptr;
      check(dms_compose(a.get(), fa.get(), b.get(), fb.get(), &k, &v, &f, &report));
      Cx kk(k);
      Fd vv(v);
      Fn ff(f);
      Str rr(report);
      save_triple(out, kk.get(), vv.get(), ff.get());
      write_text(out + ".report.json", rr.get());
      return 0;
    }

    if (*decompose) {
      Cx k = load_complex(complex_path);
      Fn f = load_function(k.get(), function_path);
      dms_decomposition* raw = nullptr;
      check(dms_decompose(k.get(), f.get(), g1, g2, &raw));
      Dc d(raw);
      for (int which : {1, 2}) {
        const dms_complex* pk = nullptr;
        const dms_field* pv = nullptr;
        const dms_function* pf = nullptr;
        check(dms_decomposition_piece(d.get(), which, &pk, &pv, &pf));
        save_triple(out + ".m" + std::to_string(which), pk, pv, pf);
      }
      char* circle = nullptr;
      check(dms_decomposition_circle(d.get(), &circle));
      Str c(circle);
      write_text(out + ".circle.txt", c.get());
      char* report = nullptr;
      check(dms_decomposition_report(d.get(), &report));
      Str r(report);
      write_text(out + ".report.json", r.get());
      return 0;
    }

    if (*fixture) {
      if (kind.rfind("genus", 0) == 0 && kind.size() > 5) {
        try {
          genus = std::stoi(kind.substr(5));
        } catch (const std::exception&) {
          std::cerr << "error: ParseError: bad fixture kind " << kind << '\n';
          return 3;
        }
        kind = "genus";
      }
      dms_complex* k = nullptr;
      dms_field* v = nullptr;
      dms_function* f = nullptr;
      check(dms_fixture(kind.c_str(), genus, seed, &k, &v, &f));
      Cx kk(k);
      Fd vv(v);
      Fn ff(f);
      save_triple(out, kk.get(), vv.get(), ff.get());
      return 0;
    }

    if (*exporter) {
      Cx k = load_complex(complex_path);
      Fd v;
      if (!field_path.empty()) {
        dms_field* raw = nullptr;
        check(dms_field_load(k.get(), field_path.c_str(), 1, &raw, nullptr));
        v.reset(raw);
      }
      char* text = nullptr;
      check(dms_export(k.get(), v.get(), format.c_str(), &text));
      Str t(text);
      write_text(out, t.get());
      return 0;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 1;
}
