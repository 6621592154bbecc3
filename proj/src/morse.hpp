#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace dms {

inline constexpr CellIndex kNoCell = std::numeric_limits<CellIndex>::max();

// Partial matching on Hasse-diagram edges of one complex.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::size_t cells) : partner_(cells, kNoCell), head_(cells, 0) {}

  std::size_t size() const { return partner_.size(); }
  // Records (low, high). Returns false, leaving the field untouched, when
  // either cell is already matched.
  bool add_pair(CellIndex low, CellIndex high);
  void remove(CellIndex c);

  std::optional<CellIndex> partner(CellIndex c) const {
    if (partner_[c] == kNoCell) return std::nullopt;
    return partner_[c];
  }
  bool critical(CellIndex c) const { return partner_[c] == kNoCell; }
  // True when c is the higher-dimensional end of its pair.
  bool is_head(CellIndex c) const { return head_[c] != 0; }

  // (low, high) pairs ordered by the low cell.
  std::vector<std::pair<CellIndex, CellIndex>> pairs() const;

  bool operator==(const VectorField&) const = default;

 private:
  std::vector<CellIndex> partner_;
  std::vector<char> head_;
};

struct MorseFunction {
  std::vector<double> values;

  double operator[](CellIndex c) const { return values[c]; }
  double& operator[](CellIndex c) { return values[c]; }
  std::size_t size() const { return values.size(); }
  bool operator==(const MorseFunction&) const = default;
};

struct Violation {
  CellIndex cell = kNoCell;
  std::string kind;
  std::string detail;
};

struct FunctionReport {
  bool ok = true;
  std::vector<Violation> violations;
};

struct FieldReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::vector<CellIndex> cycle_witness;  // closed V-path sigma0, tau0, sigma1, ...
};

struct MorseCounts {
  std::vector<int> m;
  std::vector<std::vector<CellIndex>> cells;  // per dimension, index order
};

struct PathTree {
  CellIndex root = kNoCell;
  std::vector<CellIndex> parent;  // per vertex slot; kNoCell at the root and on non-vertices
  std::vector<CellIndex> via;     // matched edge used to reach the parent
};

struct GradientPath {
  int dim = 0;
  std::vector<CellIndex> steps;  // sigma0, tau0, sigma1, tau1, ...
  CellIndex origin = kNoCell;    // critical top cell the path leaves from
};

FunctionReport validate_function(const Complex& k, const MorseFunction& f);
VectorField induced_field(const Complex& k, const MorseFunction& f);
FieldReport validate_field(const Complex& k, const VectorField& v);
MorseCounts critical_cells(const Complex& k, const VectorField& v);
bool is_perfect(const Complex& k, const VectorField& v);
// m_p >= b_p for all p and the alternating sums agree.
bool morse_inequalities_hold(const Complex& k, const VectorField& v);

PathTree trace_1path_tree(const Complex& k, const VectorField& v);
// Reverse-traces from a non-critical top cell back to a critical one.
GradientPath trace_2path(const Complex& k, const VectorField& v, CellIndex start);

MorseFunction synthesize_function(const Complex& k, const VectorField& v);
MorseFunction make_injective(const Complex& k, const MorseFunction& f);

struct Extension {
  MorseFunction f;
  bool resynthesized = false;
};
// Fills in unset values so the result is a Morse function inducing v, keeping
// the given ones. Falls back to synthesize_function when they conflict.
Extension extend_function(const Complex& k, const VectorField& v,
                          const std::vector<std::optional<double>>& fixed);

}  // namespace dms
