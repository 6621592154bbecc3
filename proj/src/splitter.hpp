#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "complex.hpp"
#include "morse.hpp"
#include "surgery.hpp"

namespace dms {

struct SplitEdges {
  std::vector<CellIndex> low;   // the 2*g1 lowest critical edges
  std::vector<CellIndex> high;  // the 2*g2 highest
};
SplitEdges select_split_edges(const Complex& k, const MorseFunction& f, int g1, int g2);

struct CoreRegion {
  std::vector<CellIndex> cells;  // 2-cells, index order
  CellIndex critical = kNoCell;
  std::vector<CellIndex> high;
  std::vector<GradientPath> paths;  // two per high edge, in edge order
};
CoreRegion carve_core(const Complex& k, const VectorField& v, std::span<const CellIndex> high);

enum class BoundaryKind { Circle, SingleWedge, WedgesWithConnectingCircles, WedgesWithArcs, Scattered };
std::string_view boundary_kind_name(BoundaryKind kind);

// Maximal chain of slit edges (edges flanked by the region on both sides
// without being one of its interior edges).
struct Arc {
  std::vector<CellIndex> edges;
  std::vector<CellIndex> interior;  // chain vertices touching nothing else
};

struct BoundaryGraph {
  BoundaryKind kind = BoundaryKind::Circle;
  std::vector<CellIndex> curve;   // edges with exactly one region coface
  std::vector<CellIndex> slits;
  std::map<CellIndex, int> degree;  // strand ends at each vertex of the region closure
  std::vector<CellIndex> wedges;
  std::vector<Arc> arcs;
  std::vector<CellIndex> stray_criticals;  // critical cells other than the core's own on the curve
  int components = 0;
  long metric = 0;
};
BoundaryGraph classify_boundary(const Complex& k, const VectorField& v,
                                std::span<const CellIndex> region,
                                std::span<const CellIndex> high);

// Working copy of a surface with a region of 2-cells that is reshaped by
// bisections until its boundary is one embedded circle.
class RegionState {
 public:
  RegionState(const Complex& k, const VectorField& v, const std::vector<CellId>& region,
              const std::vector<CellId>& high);

  const Complex& complex() const { return k_; }
  const VectorField& field() const { return v_; }
  std::vector<CellIndex> region() const;
  std::vector<CellIndex> high() const;
  BoundaryGraph classify() const;

  // Subdivides each listed region cell so its heir no longer contains the
  // listed faces; the cut-off pieces leave the region.
  void push_away(const std::map<CellId, std::set<CellId>, IdLess>& pushes);
  void resolve_arc(const Arc& arc);
  void resolve_wedge(CellIndex vertex);
  void push_criticals(const BoundaryGraph& bg);

  const std::vector<BisectionRecord>& log() const { return s_.log(); }

 private:
  void refresh();
  std::set<CellId> expand(const std::set<CellId>& ids) const;
  CellId push_runs(CellId cell, const std::set<CellId>& pushed);

  Surgeon s_;
  Complex k_;
  VectorField v_;
  std::set<CellId, IdLess> region_;
  std::vector<CellId> high_;
};

struct CircleSearch {
  Complex k;
  VectorField v;
  std::vector<CellId> circle;  // ordered edge ids
  std::vector<CellId> region;
  std::vector<CellId> low, high;
  CellId critical2;
  std::vector<BisectionRecord> bisections;
  std::vector<long> metrics;
  std::vector<std::string> stages;
};
CircleSearch find_separating_circle(const Complex& k, const MorseFunction& f, int g1, int g2);

struct Piece {
  Complex k;
  VectorField v;
};
struct SplitPieces {
  Piece min_side;  // holds the critical vertex
  Piece max_side;  // holds the critical 2-cell
  std::vector<CellId> circle;
  int boundary_critical_vertices = 0;  // on the max side
  int boundary_critical_edges = 0;
};
SplitPieces split_along_circle(const Complex& k, const VectorField& v,
                               const std::vector<CellId>& circle);

// Cone over the boundary circle with a critical apex; boundary-critical cells
// pair into the cone.
Piece cap_with_min_cone(const Piece& piece, const std::vector<CellId>& circle);
// Cone with a fan pairing from the apex; one cone triangle stays critical.
Piece cap_with_max_cone(const Piece& piece, const std::vector<CellId>& circle);

struct PieceReport {
  std::vector<int> counts;
  std::vector<int> betti;
  long chi = 0;
  int genus = 0;
  bool field_ok = false;
  bool function_ok = false;
  bool perfect = false;
  bool resynthesized = false;
};

struct DecomposeReport {
  int g1 = 0, g2 = 0;
  long chi = 0;
  std::vector<int> counts;  // of the input
  std::vector<int> betti;
  bool perfect = false;
  PieceReport m1, m2;
  long min_side_chi = 0, max_side_chi = 0;
  int boundary_critical_vertices = 0;
  int boundary_critical_edges = 0;
  bool no_inward_arrows = false;
  std::vector<BisectionRecord> bisections;
  std::vector<long> metrics;
  std::vector<std::string> stages;
};

struct DecomposeResult {
  Complex m1, m2;
  VectorField v1, v2;
  MorseFunction f1, f2;
  std::vector<CellId> circle;
  SplitPieces pieces;
  DecomposeReport report;
};
DecomposeResult decompose(const Complex& k, const MorseFunction& f, int g1, int g2);

}  // namespace dms
