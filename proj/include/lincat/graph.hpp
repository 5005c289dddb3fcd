#pragma once

#include <string>
#include <vector>

#include "lincat/count.hpp"
#include "lincat/term.hpp"

namespace lincat {

// Two-sided proof-net IR. Wires run top-to-bottom; a wire's `top` end attaches
// to a bottom-side port of the part above it (or the outer top boundary), and
// its `bottom` end to a top-side port of the part below (or the outer bottom).
// Boards are parts-with-interiors; their gates are explicit parts so every
// wire endpoint is a port or the boundary.
using GId = int32_t;

struct GEnd {
  enum Kind { None, TopPort, BottomPort, OuterTop, OuterBottom } kind = None;
  GId part = -1;
  int port = -1;
  int index = -1;  // boundary position
};

struct GWire {
  TypeP type;
  GEnd top, bottom;
  GId region = -1;  // innermost board, or -1 for the root region
  bool alive = true;
};

struct GPart {
  enum Kind {
    TensorIntro,
    TensorElim,
    ParIntro,
    ParElim,
    UnitIntro,
    UnitElim,    // carries a dotted link
    CounitIntro, // carries a dotted link
    CounitElim,
    Cap,  // duality introduction: legs hang down as (A, A^)
    Cup,  // duality elimination: legs rise up as (A^, A)
    DeltaLens,
    EpsLens,
    Duplicator,  // n >= 2 bottom legs
    Eliminator,
    NegGate,  // top port outside the board (!X), bottom port inside (X)
    PosGate,  // top port inside (X), bottom port outside (!X)
  } kind;
  std::vector<GId> top_ports;     // wires whose bottom end lands here
  std::vector<GId> bottom_ports;  // wires whose top end lands here
  GId region = -1;
  GId board = -1;  // for gates
  bool alive = true;
};

struct GBoard {
  GId parent = -1;
  std::vector<GId> neg_gates;  // part ids, left to right (dimples implicit)
  GId pos_gate = -1;
  bool alive = true;
};

struct GDotted {
  GId terminal;  // UnitElim or CounitIntro part
  GId host;      // wire id
};

struct Graph {
  std::vector<GWire> wires;
  std::vector<GPart> parts;
  std::vector<GBoard> boards;
  std::vector<GDotted> dotted;
  std::vector<GId> outer_top, outer_bottom;

  const GWire& wire(GId i) const { return wires[i]; }
  const GPart& part(GId i) const { return parts[i]; }
  size_t wire_count() const;
  int region_depth(GId region) const;
};

struct GraphStats {
  size_t size = 0;       // number of wires
  BigInt dup_scale = 1;  // product of n! over multi-duplicators
  size_t board_count = 0;
  size_t bioriented_count = 0;  // wires of atomic type
};

// Compositional translation of a typechecked term.
Graph term_to_graph(const Judgement& j);

// Contract all beta redexes (intro/elim pairs, unit/counit pairs, facing
// board gates, diode zigzags). Terminates; order independent.
Graph beta_normalize(const Graph& g);

// Constrained eta expansion (outermost first); idempotent.
Graph eta_expand(const Graph& g);

// Merge chains of duplicators into multi-duplicators; drop dead entries and
// renumber. Used before comparison, stats, enumeration and flows.
Graph canonicalize_graph(const Graph& g);

struct WellformedReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
WellformedReport check_wellformed(const Graph& g);

// Equality up to ~: dotted attachments erased; duplicator legs and board
// gates unordered; outer boundary ordered.
bool almost_equal(const Graph& g1, const Graph& g2);
std::string canonical_certificate(const Graph& g);

GraphStats graph_stats(const Graph& g);

// Re-place every dotted attachment deterministically so the switching
// condition holds (any placement is equal up to ~). Throws when no placement
// works.
void place_dotted_links(Graph& g);

std::string to_dot(const Graph& g);
std::string to_json(const Graph& g);
Graph from_json(const std::string& text);

// normalized pipeline: term -> graph -> beta -> eta -> canonical
Graph normal_graph_of(const Judgement& j);

}  // namespace lincat
