#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "complex.hpp"
#include "morse.hpp"
#include "splitter.hpp"
#include "surgery.hpp"

namespace dms {

// TRI v1: "tri <n>" then "t a b c" per facet.
std::vector<Triangle> parse_tri(std::string_view text, int* nverts = nullptr);
Complex read_tri(std::string_view text);
std::string write_tri(const std::vector<Triangle>& tris);

// CWP v1: "cell <id> <dim> [tag]" and "bnd <id> <face>...". The optional tag
// carries provenance of derived cells.
Complex read_cwp(std::string_view text);
std::string write_cwp(const Complex& k);

// Loads either format, picking by the first keyword.
Complex read_complex(std::string_view text);

struct FieldParse {
  VectorField v;
  std::vector<std::string> problems;  // one diagnostic per offending cell
};
// Strict parsing throws ParseError on unknown ids, double matchings and
// contradicting crit lines. Lenient parsing reports the last two instead.
VectorField read_dvf(const Complex& k, std::string_view text);
FieldParse read_dvf_lenient(const Complex& k, std::string_view text);
std::string write_dvf(const Complex& k, const VectorField& v);

MorseFunction read_dmf(const Complex& k, std::string_view text);
std::string write_dmf(const Complex& k, const MorseFunction& f);

std::string export_off(const Complex& k);
std::string export_dot(const Complex& k, const VectorField* v = nullptr);

std::string compose_report_json(const ComposeResult& r);
std::string decompose_report_json(const DecomposeResult& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace dms
