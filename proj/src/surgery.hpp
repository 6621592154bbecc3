#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "morse.hpp"

namespace dms {

struct BisectionRecord {
  CellId old_cell;
  std::vector<CellId> new_cells;  // edge: {w, e1, e2}; 2-cell: {d, c1, c2}
  std::vector<std::pair<CellId, CellId>> new_pairings;
  CellId heir;  // piece that took over the old cell's pairing or criticality
};

// Mutable id-keyed working copy of (K, V) used to chain many local edits
// before freezing the result back into an immutable Complex.
class Surgeon {
 public:
  Surgeon(const Complex& k, const VectorField& v);

  std::pair<Complex, VectorField> finish() const;

  bool has(const CellId& c) const { return cells_.count(c) != 0; }
  int dim(const CellId& c) const { return entry(c).dim; }
  const std::vector<CellId>& faces(const CellId& c) const { return entry(c).faces; }
  const std::vector<CellId>& cofaces(const CellId& c) const { return entry(c).cofaces; }
  std::array<CellId, 2> ends(const CellId& edge) const;
  Cycle<CellId> cycle(const CellId& c) const;
  std::optional<CellId> partner(const CellId& c) const;

  // heir_end picks which endpoint's half inherits the edge's role when the
  // repair rules leave a choice; by default the smaller endpoint.
  BisectionRecord bisect_edge(const CellId& e, const std::optional<CellId>& heir_end = {});
  BisectionRecord bisect_2cell(const CellId& c, const CellId& u, const CellId& w);
  // Chord between a and b; when the choice is free the piece not containing
  // `avoid` inherits the role of c.
  BisectionRecord cut(const CellId& c, const CellId& a, const CellId& b, const CellId& avoid);

  const std::vector<BisectionRecord>& log() const { return log_; }
  // Follows heirs from an id that may since have been bisected away.
  CellId current(const CellId& c) const;

 private:
  struct Entry {
    int dim = 0;
    CellTag tag = CellTag::Original;
    std::vector<CellId> faces;
    std::vector<CellId> cofaces;
    CellId partner;  // empty when critical
  };
  const Entry& entry(const CellId& c) const;
  Entry& entry(const CellId& c);
  CellId fresh(const CellId& base, int k) const;
  void pair(const CellId& lo, const CellId& hi);
  static void replace(std::vector<CellId>& list, const CellId& from,
                      std::initializer_list<CellId> to);

  std::unordered_map<CellId, Entry> cells_;
  std::unordered_map<CellId, CellId> heir_;
  std::vector<BisectionRecord> log_;
};

struct SurgeryResult {
  Complex k;
  VectorField v;
  BisectionRecord record;
};
SurgeryResult bisect_edge(const Complex& k, const VectorField& v, std::string_view e);
SurgeryResult bisect_2cell(const Complex& k, const VectorField& v, std::string_view c,
                           std::string_view u, std::string_view w);

struct Separation {
  Complex k;
  VectorField v;
  std::vector<BisectionRecord> log;
};
// True when no closed 2-cell holds two critical cells and critical cells of
// positive dimension share no vertex with another critical cell.
bool critical_cells_separated(const Complex& k, const VectorField& v);
Separation separate_critical_cells(const Complex& k, const VectorField& v);

// Subdivides a critical 2-cell so its critical heir is a triangle whose
// boundary cells are all paired away from it. Returns the heir id.
CellId isolate_critical_2cell(Surgeon& s, const CellId& t);

struct TubeRegion {
  CellId alpha;
  std::vector<CellId> base;  // cells of the boundary of alpha
  std::map<CellId, CellId, IdLess> top;
  std::map<CellId, CellId, IdLess> prism;
  std::vector<CellRecord> records;  // new cells only
};
TubeRegion build_prism_over_boundary(const Complex& k, std::string_view alpha);

struct InnerCopy {
  CellId beta, v;
  CellId beta_inner;                // beta' = inner:<beta>
  std::vector<CellId> j;            // closure of beta
  std::vector<CellId> j_inner;      // J': v and inner copies
  std::vector<CellId> j_collar;     // J'': outer link cells, their inner copies, prisms
  std::map<CellId, CellId, IdLess> correspondence;  // J - v onto J''
  Complex result;                   // K with J subdivided
};
InnerCopy shrink_closed_star(const Complex& k, std::string_view beta, std::string_view v);

struct ComposeReport {
  std::vector<int> counts;
  long chi = 0;
  bool field_ok = false;
  bool function_ok = false;
  bool induced_matches = false;
  bool perfect = false;
  CellId alpha, beta, v;
  bool alpha_isolated = false;
  bool beta_bisected = false;
  bool f1_resynthesized = false;
  bool f2_resynthesized = false;
  bool orientation_flipped = false;
  double shift1 = 0, shift2 = 0, c = 0;
  std::vector<BisectionRecord> bisections;
};

struct ComposeResult {
  Complex k;
  MorseFunction f;
  VectorField v;
  ComposeReport report;
};
ComposeResult compose(const Complex& m1, const MorseFunction& f1, const Complex& m2,
                      const MorseFunction& f2);

// Prefix every id, keeping the structure.
Complex rename_cells(const Complex& k, const std::string& prefix);

}  // namespace dms
