#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/congruence.hpp"
#include "unialg/homomorphism.hpp"
#include "unialg/partition.hpp"
#include "unialg/term.hpp"

namespace unialg {

/// The subuniverse generated by `generators`, listed in witness-term order.
/// `witnesses[i]` is a term over x1..xk (k = generators.size()) whose value
/// under x_j ↦ generators[j-1] is `elements[i]`.
struct GeneratedSubuniverse {
  std::vector<Element> generators;
  std::vector<Element> elements;
  std::vector<Term> witnesses;

  bool contains(Element x) const;
  std::vector<Element> sorted() const;
};

GeneratedSubuniverse subuniverse_generated(const FiniteAlgebra& algebra,
                                           std::span<const Element> generators);

/// Membership mask of the subuniverse generated by `generators` (no witnesses).
std::vector<bool> closure_of(const FiniteAlgebra& algebra,
                             std::span<const Element> generators);

/// Every nonempty subuniverse, each sorted ascending, in discovery order.
/// Requires algebra.size() <= 64.
std::vector<std::vector<Element>> all_subuniverses(const FiniteAlgebra& algebra);

/// The subalgebra on a closed subset, relabelled in ascending order.
/// Throws InvalidInputError if the subset is not closed.
FiniteAlgebra subalgebra(const FiniteAlgebra& algebra, std::span<const Element> subuniverse);

/// Componentwise product. Element (a_1,...,a_r) is encoded mixed-radix with
/// the first factor most significant.
FiniteAlgebra direct_product(std::span<const FiniteAlgebra> factors,
                             const Limits& limits = {});

std::size_t encode_product_element(std::span<const FiniteAlgebra> factors,
                                   std::span<const Element> components);
std::vector<Element> decode_product_element(std::span<const FiniteAlgebra> factors,
                                            std::size_t code);

/// The subalgebra of ∏ factors generated by `generators` (tuples with one
/// component per factor), built without materializing the product. Elements
/// are numbered in witness-term order.
struct Subproduct {
  FiniteAlgebra algebra;
  std::vector<std::vector<Element>> tuples;
  std::vector<Term> witnesses;
};

Subproduct subproduct_generated(std::span<const FiniteAlgebra> factors,
                                std::span<const std::vector<Element>> generators,
                                const Limits& limits = {});

/// Quotient with classes labelled by the canonical partition labels, and the
/// quotient map.
struct Quotient {
  FiniteAlgebra algebra;
  Homomorphism map;
};

Quotient quotient_algebra(const Congruence& theta);
/// Validates `theta`; throws NotACongruenceError with a witness.
Quotient quotient_algebra(const FiniteAlgebra& algebra, const Partition& theta);

}  // namespace unialg
