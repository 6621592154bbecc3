#include "formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "homology.hpp"

namespace dms {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> words;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Line l{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) l.words.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!l.words.empty()) out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] void fail(const Line& l, const std::string& msg, std::string cell = {}) {
  throw Error(Errc::ParseError, "line " + std::to_string(l.number) + ": " + msg, std::move(cell));
}

template <class T>
T number(const Line& l, std::string_view w) {
  T value{};
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
  if (ec != std::errc{} || ptr != w.data() + w.size())
    fail(l, "'" + std::string(w) + "' is not a number");
  return value;
}

CellIndex known(const Complex& k, const Line& l, std::string_view id) {
  auto c = k.find(id);
  if (!c) fail(l, "unknown cell '" + std::string(id) + "'", std::string(id));
  return *c;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Triangle> parse_tri(std::string_view text, int* nverts) {
  auto lines = tokenize(text);
  if (lines.empty() || lines[0].words[0] != "tri" || lines[0].words.size() != 2)
    throw Error(Errc::ParseError, "missing 'tri <nverts>' header");
  const int n = number<int>(lines[0], lines[0].words[1]);
  if (n < 0) fail(lines[0], "negative vertex count");
  std::vector<Triangle> tris;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.words[0] != "t" || l.words.size() != 4) fail(l, "expected 't a b c'");
    Triangle t;
    for (int j = 0; j < 3; ++j) {
      t.v[j] = number<int>(l, l.words[j + 1]);
      if (t.v[j] < 0 || t.v[j] >= n) fail(l, "vertex index out of range");
    }
    tris.push_back(t);
  }
  if (nverts) *nverts = n;
  return tris;
}

Complex read_tri(std::string_view text) { return build_simplicial(parse_tri(text)); }

std::string write_tri(const std::vector<Triangle>& tris) {
  int n = 0;
  for (const auto& t : tris)
    for (int x : t.v) n = std::max(n, x + 1);
  std::string out = "tri " + std::to_string(n) + "\n";
  for (const auto& t : tris)
    out += "t " + std::to_string(t.v[0]) + " " + std::to_string(t.v[1]) + " " +
           std::to_string(t.v[2]) + "\n";
  return out;
}

Complex read_cwp(std::string_view text) {
  std::vector<CellRecord> recs;
  std::map<std::string, std::size_t, std::less<>> where;
  std::set<std::string, std::less<>> bounded;
  for (const Line& l : tokenize(text)) {
    if (l.words[0] == "cell") {
      if (l.words.size() != 3 && l.words.size() != 4) fail(l, "expected 'cell <id> <dim> [tag]'");
      std::string id(l.words[1]);
      const int dim = number<int>(l, l.words[2]);
      if (dim < 0) fail(l, "negative dimension", id);
      CellTag tag = CellTag::Original;
      if (l.words.size() == 4) {
        auto t = parse_tag(l.words[3]);
        if (!t) fail(l, "unknown tag '" + std::string(l.words[3]) + "'", id);
        tag = *t;
      }
      if (!where.emplace(id, recs.size()).second) fail(l, "cell '" + id + "' declared twice", id);
      recs.push_back({id, dim, {}, tag});
    } else if (l.words[0] == "bnd") {
      if (l.words.size() < 2) fail(l, "expected 'bnd <id> <face>...'");
      auto it = where.find(l.words[1]);
      if (it == where.end()) fail(l, "bnd for undeclared cell '" + std::string(l.words[1]) + "'");
      if (!bounded.emplace(l.words[1]).second)
        fail(l, "second bnd line for '" + std::string(l.words[1]) + "'", std::string(l.words[1]));
      for (std::size_t i = 2; i < l.words.size(); ++i) recs[it->second].boundary.emplace_back(l.words[i]);
    } else {
      fail(l, "unknown keyword '" + std::string(l.words[0]) + "'");
    }
  }
  return build_poset(std::move(recs));
}

std::string write_cwp(const Complex& k) {
  std::ostringstream os;
  for (CellIndex c = 0; c < k.size(); ++c) {
    os << "cell " << k.id(c) << ' ' << k.dim(c);
    if (k.tag(c) != CellTag::Original) os << ' ' << tag_name(k.tag(c));
    os << '\n';
  }
  for (CellIndex c = 0; c < k.size(); ++c) {
    if (k.faces(c).empty()) continue;
    os << "bnd " << k.id(c);
    for (CellIndex f : k.faces(c)) os << ' ' << k.id(f);
    os << '\n';
  }
  return os.str();
}

Complex read_complex(std::string_view text) {
  for (const Line& l : tokenize(text)) {
    if (l.words[0] == "tri") return read_tri(text);
    break;
  }
  return read_cwp(text);
}

namespace {

FieldParse parse_dvf(const Complex& k, std::string_view text, bool strict) {
  FieldParse out{VectorField(k.size()), {}};
  std::vector<CellIndex> crit;
  auto problem = [&](const Line& l, const std::string& msg, const std::string& cell) {
    if (strict) fail(l, msg, cell);
    out.problems.push_back("line " + std::to_string(l.number) + ": " + msg);
  };
  std::vector<const Line*> crit_lines;
  auto lines = tokenize(text);
  for (const Line& l : lines) {
    if (l.words[0] == "pair") {
      if (l.words.size() != 3) fail(l, "expected 'pair <low> <high>'");
      CellIndex a = known(k, l, l.words[1]), b = known(k, l, l.words[2]);
      if (k.dim(b) != k.dim(a) + 1)
        fail(l, "pair " + k.id(a) + " " + k.id(b) + " does not raise dimension by one", k.id(a));
      bool clash = false;
      for (CellIndex c : {a, b})
        if (!clash && !out.v.critical(c)) {
          problem(l, "cell '" + k.id(c) + "' is matched twice", k.id(c));
          clash = true;
        }
      if (!clash) out.v.add_pair(a, b);
    } else if (l.words[0] == "crit") {
      if (l.words.size() != 2) fail(l, "expected 'crit <id>'");
      crit.push_back(known(k, l, l.words[1]));
      crit_lines.push_back(&l);
    } else {
      fail(l, "unknown keyword '" + std::string(l.words[0]) + "'");
    }
  }
  for (std::size_t i = 0; i < crit.size(); ++i)
    if (!out.v.critical(crit[i]))
      problem(*crit_lines[i], "cell '" + k.id(crit[i]) + "' is listed critical but matched",
              k.id(crit[i]));
  return out;
}

}  // namespace

VectorField read_dvf(const Complex& k, std::string_view text) {
  return parse_dvf(k, text, true).v;
}

FieldParse read_dvf_lenient(const Complex& k, std::string_view text) {
  return parse_dvf(k, text, false);
}

std::string write_dvf(const Complex& k, const VectorField& v) {
  std::string out;
  for (auto [lo, hi] : v.pairs()) out += "pair " + k.id(lo) + " " + k.id(hi) + "\n";
  for (CellIndex c = 0; c < k.size(); ++c)
    if (v.critical(c)) out += "crit " + k.id(c) + "\n";
  return out;
}

MorseFunction read_dmf(const Complex& k, std::string_view text) {
  MorseFunction f;
  f.values.assign(k.size(), 0.0);
  std::vector<char> seen(k.size(), 0);
  for (const Line& l : tokenize(text)) {
    if (l.words[0] != "val" || l.words.size() != 3) fail(l, "expected 'val <id> <decimal>'");
    CellIndex c = known(k, l, l.words[1]);
    if (seen[c]) fail(l, "second value for '" + k.id(c) + "'", k.id(c));
    seen[c] = 1;
    const double x = number<double>(l, l.words[2]);
    if (!std::isfinite(x)) fail(l, "value is not finite", k.id(c));
    f[c] = x;
  }
  for (CellIndex c = 0; c < k.size(); ++c)
    if (!seen[c]) throw Error(Errc::MissingValue, "no value for '" + k.id(c) + "'", k.id(c));
  return f;
}

std::string write_dmf(const Complex& k, const MorseFunction& f) {
  std::string out;
  for (CellIndex c = 0; c < k.size(); ++c) out += "val " + k.id(c) + " " + format_double(f[c]) + "\n";
  return out;
}

std::string export_off(const Complex& k) {
  // Vertices spread on a Fibonacci sphere; only the combinatorics matter.
  const std::size_t nv = k.count(0);
  const std::size_t nf = k.top_dim() >= 2 ? k.count(2) : 0;
  const std::size_t ne = k.top_dim() >= 1 ? k.count(1) : 0;
  std::ostringstream os;
  os << "OFF\n" << nv << ' ' << nf << ' ' << ne << '\n';
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < nv; ++i) {
    const double y = nv == 1 ? 0.0 : 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(nv - 1);
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double th = golden * static_cast<double>(i);
    os << format_double(r * std::cos(th)) << ' ' << format_double(y) << ' '
       << format_double(r * std::sin(th)) << '\n';
  }
  const CellIndex v0 = nv ? k.begin(0) : 0;
  for (std::size_t i = 0; i < nf; ++i) {
    auto cyc = k.cycle(k.begin(2) + static_cast<CellIndex>(i));
    os << cyc.vertices.size();
    for (CellIndex x : cyc.vertices) os << ' ' << (x - v0);
    os << '\n';
  }
  return os.str();
}

std::string export_dot(const Complex& k, const VectorField* v) {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n";
  for (CellIndex c = 0; c < k.size(); ++c) {
    os << "  \"" << k.id(c) << "\" [label=\"" << k.id(c) << "\\n" << k.dim(c) << "\"";
    if (v && v->critical(c)) os << ", style=bold";
    os << "];\n";
  }
  for (CellIndex c = 0; c < k.size(); ++c)
    for (CellIndex f : k.faces(c)) {
      os << "  \"" << k.id(f) << "\" -> \"" << k.id(c) << "\"";
      if (v && v->partner(f) == c) os << " [color=red, penwidth=2]";
      os << ";\n";
    }
  os << "}\n";
  return os.str();
}

namespace {

using nlohmann::ordered_json;

ordered_json bisections_json(const std::vector<BisectionRecord>& log) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : log) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [a, b] : r.new_pairings) pairs.push_back({a, b});
    arr.push_back({{"oldCell", r.old_cell}, {"newCells", r.new_cells}, {"newPairings", pairs}});
  }
  return arr;
}

ordered_json piece_json(const PieceReport& p) {
  return {{"chi", p.chi},          {"genus", p.genus},         {"betti", p.betti},
          {"morseCounts", p.counts}, {"perfect", p.perfect},   {"fieldValid", p.field_ok},
          {"functionValid", p.function_ok}, {"resynthesized", p.resynthesized}};
}

}  // namespace

std::string compose_report_json(const ComposeResult& r) {
  const ComposeReport& rep = r.report;
  ordered_json j;
  j["chi"] = rep.chi;
  j["betti"] = betti_mod2(r.k);
  j["morseCounts"] = rep.counts;
  j["perfect"] = rep.perfect;
  j["bisections"] = bisections_json(rep.bisections);
  j["circleLength"] = nullptr;
  j["fieldValid"] = rep.field_ok;
  j["functionValid"] = rep.function_ok;
  j["inducedMatches"] = rep.induced_matches;
  j["alpha"] = rep.alpha;
  j["beta"] = rep.beta;
  j["v"] = rep.v;
  j["alphaIsolated"] = rep.alpha_isolated;
  j["betaBisected"] = rep.beta_bisected;
  j["orientationFlipped"] = rep.orientation_flipped;
  j["C"] = rep.c;
  j["shift"] = {rep.shift1, rep.shift2};
  return j.dump(2) + "\n";
}

std::string decompose_report_json(const DecomposeResult& r) {
  const DecomposeReport& rep = r.report;
  ordered_json j;
  j["chi"] = rep.chi;
  j["betti"] = rep.betti;
  j["morseCounts"] = rep.counts;
  j["perfect"] = rep.perfect;
  j["bisections"] = bisections_json(rep.bisections);
  j["circleLength"] = r.circle.size();
  j["circle"] = r.circle;
  j["g1"] = rep.g1;
  j["g2"] = rep.g2;
  j["minSideChi"] = rep.min_side_chi;
  j["maxSideChi"] = rep.max_side_chi;
  j["boundaryCriticalVertices"] = rep.boundary_critical_vertices;
  j["boundaryCriticalEdges"] = rep.boundary_critical_edges;
  j["noInwardArrows"] = rep.no_inward_arrows;
  j["stages"] = rep.stages;
  j["metrics"] = rep.metrics;
  j["m1"] = piece_json(rep.m1);
  j["m2"] = piece_json(rep.m2);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "cannot read '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot create '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
}

}  // namespace dms
