#pragma once

#include <string>
#include <string_view>

#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"
#include "unialg/term.hpp"

namespace unialg {

/// Reads an algebra file:
///   {"name": str, "size": n >= 1,
///    "operations": [{"symbol": str, "arity": r >= 1, "table": [...]}, ...]}
/// Tables are flat, row-major, leftmost argument most significant. Unknown
/// keys are rejected. Throws ParseError carrying `source`, the byte offset of
/// a syntax error, or the JSON pointer of the offending value.
FiniteAlgebra parse_algebra(std::string_view text, const std::string& source = "<input>");
FiniteAlgebra parse_algebra_file(const std::string& path);

/// Canonical text: two-space indentation, each table on one line, trailing
/// newline. parse_algebra(serialize_algebra(a)) == a.
std::string serialize_algebra(const FiniteAlgebra& algebra);

/// Prefix form: ["x", i] for variables, [symbol, child, ...] otherwise.
std::string term_to_json(const Term& term, const Signature& signature);
Term term_from_json(std::string_view text, const Signature& signature);

/// Array of class labels; input must already be canonical.
std::string partition_to_json(const Partition& partition);
Partition partition_from_json(std::string_view text);

}  // namespace unialg
