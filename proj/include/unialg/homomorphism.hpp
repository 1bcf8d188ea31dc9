#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"

namespace unialg {

/// A structure-preserving map between two algebras over one signature.
/// Construction verifies the homomorphism law exhaustively.
class Homomorphism {
 public:
  Homomorphism(FiniteAlgebra source, FiniteAlgebra target, std::vector<Element> map);

  const FiniteAlgebra& source() const { return source_; }
  const FiniteAlgebra& target() const { return target_; }
  const std::vector<Element>& map() const { return map_; }
  Element operator()(Element x) const { return map_[x]; }

  bool is_surjective() const;
  bool is_injective() const;
  Partition kernel() const;

 private:
  FiniteAlgebra source_;
  FiniteAlgebra target_;
  std::vector<Element> map_;
};

/// A symbol and argument tuple at which `map` fails to commute with the
/// operations.
struct HomomorphismViolation {
  std::size_t symbol = 0;
  std::vector<Element> args;
};

std::optional<HomomorphismViolation> find_homomorphism_violation(
    const FiniteAlgebra& source, const FiniteAlgebra& target,
    std::span<const Element> map);

/// Smallest generating set, by exhaustive search over subsets of increasing
/// size (lexicographically first among the smallest). Falls back to a greedy
/// set when the exhaustive search would exceed its budget.
std::vector<Element> minimal_generating_set(const FiniteAlgebra& algebra);

/// Calls `visit(map)` for every homomorphism source → target, stopping early
/// when `visit` returns false. Backtracks over images of a generating set of
/// the source and propagates through the generated subuniverse.
void for_each_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                           const std::function<bool(const std::vector<Element>&)>& visit);

std::optional<Homomorphism> find_surjective_homomorphism(const FiniteAlgebra& source,
                                                         const FiniteAlgebra& target);

/// A bijective homomorphism a → b, if the algebras are isomorphic.
std::optional<Homomorphism> are_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// Isomorphism-invariant summary used to bucket algebras before exact tests.
std::vector<std::size_t> isomorphism_invariant(const FiniteAlgebra& algebra);

/// A growing list of pairwise non-isomorphic algebras. Each class keeps the
/// least copy seen under canonical_less as its representative.
class IsomorphismClasses {
 public:
  /// Returns (class index, true if the class is new).
  std::pair<std::size_t, bool> add(const FiniteAlgebra& algebra);
  std::optional<std::size_t> find(const FiniteAlgebra& algebra) const;

  std::size_t size() const { return representatives_.size(); }
  const FiniteAlgebra& operator[](std::size_t i) const { return representatives_[i]; }
  const std::vector<FiniteAlgebra>& representatives() const { return representatives_; }

 private:
  std::vector<FiniteAlgebra> representatives_;
  std::vector<std::vector<std::size_t>> invariants_;
};

}  // namespace unialg
