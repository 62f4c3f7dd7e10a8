#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stealthgame/linalg.hpp"

namespace stealthgame {

// Bus indices are 1-based, as in the network file.
struct Branch {
  int from = 0;
  int to = 0;
  double susceptance = 0.0;  // per-unit, > 0

  bool operator==(const Branch&) const = default;
};

struct BusNetwork {
  int n_bus = 0;
  int slack = 1;
  std::vector<Branch> branches;

  bool operator==(const BusNetwork&) const = default;
};

enum class MeasurementKind { kFlow, kInjection, kOpaque };

struct MeasurementLabel {
  MeasurementKind kind = MeasurementKind::kOpaque;
  int a = 0;  // from bus (flow), bus (injection), row index (opaque)
  int b = 0;  // to bus (flow only)

  std::string str() const;
  bool operator==(const MeasurementLabel&) const = default;
};

struct JacobianMatrix {
  Matrix h;
  std::vector<MeasurementLabel> row_labels;

  Eigen::Index m() const { return h.rows(); }
  Eigen::Index n() const { return h.cols(); }
};

/// Parses the line-oriented network format:
///
///   # comment
///   bus <n_bus>
///   slack <idx>                  (optional, defaults to 1)
///   branch <from> <to> <b>       bare value: susceptance
///   branch <from> <to> x:<x>     reactance, converted to b = 1/x
///
/// Throws InputError with the offending line number on malformed input,
/// dangling bus indices, duplicate directives or a disconnected graph.
BusNetwork parse_network(std::string_view text);

/// Inverse of parse_network (susceptances written with 17 significant digits).
std::string serialize_network(const BusNetwork& net);

/// Checks the BusNetwork invariants; throws InputError on violation.
void validate_network(const BusNetwork& net);

/// DC measurement Jacobian: one from->to flow row per branch, then one
/// injection row per bus. The slack bus angle column is removed.
JacobianMatrix build_dc_jacobian(const BusNetwork& net);

/// Dense numeric grid, whitespace and/or comma separated, one row per line.
/// Blank lines and '#' comments are skipped.
JacobianMatrix load_matrix(std::string_view text);

}  // namespace stealthgame
