#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"

namespace unialg {

/// An operation and two argument tuples, related componentwise by a
/// partition, whose images are not related.
struct CompatibilityViolation {
  std::size_t symbol = 0;
  std::vector<Element> lhs;
  std::vector<Element> rhs;
};

/// Exhaustive compatibility check. The tuples of a returned violation differ
/// in exactly one position.
std::optional<CompatibilityViolation> find_compatibility_violation(
    const FiniteAlgebra& algebra, const Partition& partition);

bool is_congruence(const FiniteAlgebra& algebra, const Partition& partition);

/// A partition of an algebra's carrier compatible with all operations.
class Congruence {
 public:
  /// Throws NotACongruenceError (with witness) if `partition` is incompatible.
  Congruence(FiniteAlgebra algebra, Partition partition);

  /// Skips validation; for partitions that are congruences by construction.
  static Congruence trusted(FiniteAlgebra algebra, Partition partition);

  const FiniteAlgebra& algebra() const { return algebra_; }
  const Partition& partition() const { return partition_; }

  friend bool operator==(const Congruence& a, const Congruence& b) {
    return a.partition_ == b.partition_ && a.algebra_ == b.algebra_;
  }

 private:
  struct TrustedTag {};
  Congruence(FiniteAlgebra algebra, Partition partition, TrustedTag)
      : algebra_(std::move(algebra)), partition_(std::move(partition)) {}

  FiniteAlgebra algebra_;
  Partition partition_;
};

/// Least congruence containing `pairs`: union-find merges propagated through
/// every one-position translation of every operation until stable.
Congruence congruence_generated(const FiniteAlgebra& algebra,
                                std::span<const std::pair<Element, Element>> pairs);

/// Partition-level variant of congruence_generated: least congruence above
/// `start` that also contains `pairs`.
Partition congruence_closure(const FiniteAlgebra& algebra, const Partition& start,
                             std::span<const std::pair<Element, Element>> pairs);

/// The whole congruence lattice: Δ, the principal congruences and all their
/// joins. Sorted by decreasing number of classes, then by labels, so Δ comes
/// first and ∇ last. Throws ResourceLimitError above `limits.enumeration_bound`.
std::vector<Congruence> all_congruences(const FiniteAlgebra& algebra,
                                        const Limits& limits = {});
std::vector<Partition> congruence_lattice(const FiniteAlgebra& algebra,
                                          const Limits& limits = {});

/// Throws MismatchedAlgebraError unless both live on the same algebra.
Congruence meet(const Congruence& a, const Congruence& b);
Congruence join(const Congruence& a, const Congruence& b);

}  // namespace unialg
