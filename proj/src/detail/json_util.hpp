#pragma once

#include "json.hpp"
#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"
#include "unialg/term.hpp"

namespace unialg::detail {

using Json = nlohmann::ordered_json;

Json term_json(const Term& term, const Signature& signature);
Term term_from(const Json& j, const Signature& signature, const std::string& pointer);
Json partition_json(const Partition& partition);
/// Same fields as the algebra file format.
Json algebra_json(const FiniteAlgebra& algebra);

}  // namespace unialg::detail
