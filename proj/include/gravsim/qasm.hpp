#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gravsim/circuit.hpp"

namespace gravsim {

// OpenQASM 2.0, qelib1.inc names, one statement per line, floats at 17
// significant digits. Circuits containing Diag4 must be decomposed first.
std::string emit_qasm(const Circuit& c);

// Accepts the emitted subset plus whitespace, `//` comments, and rz angles of
// the forms pi/INT, INT*pi/INT, -pi (next to plain decimals). All failures
// are ParseError with a line number.
Circuit parse_qasm(const std::string& text);

// Rewrites CX gates whose (control, target) direction is absent from
// `allowed` using the H-conjugation identity when the reverse direction is
// available; ConfigError when neither direction is.
Circuit apply_coupling_map(const Circuit& c, const std::vector<std::pair<int, int>>& allowed);

}  // namespace gravsim
