#include "unialg/congruence.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

namespace unialg {

namespace {

void require_carrier(const FiniteAlgebra& algebra, const Partition& partition) {
  if (partition.carrier_size() != algebra.size()) {
    throw MismatchedAlgebraError("partition on " + std::to_string(partition.carrier_size()) +
                                 " elements does not fit algebra '" + algebra.name() +
                                 "' of size " + std::to_string(algebra.size()));
  }
}

// Calls visit(args) for every tuple of length `arity` with position `pos`
// fixed to `value`. Stops when visit returns false.
template <class Visit>
bool for_each_translation(std::size_t n, std::size_t arity, std::size_t pos, Element value,
                          std::vector<Element>& args, Visit&& visit) {
  const std::size_t others = arity - 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < others; ++i) {
    total *= n;
  }
  std::vector<Element> rest(others);
  for (std::size_t code = 0; code < total; ++code) {
    decode_tuple(code, n, rest);
    for (std::size_t i = 0, j = 0; i < arity; ++i) {
      args[i] = i == pos ? value : rest[j++];
    }
    if (!visit(args)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<CompatibilityViolation> find_compatibility_violation(
    const FiniteAlgebra& algebra, const Partition& partition) {
  require_carrier(algebra, partition);
  const std::size_t n = algebra.size();
  const auto reps = partition.representatives();
  const auto& signature = algebra.signature();
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    std::vector<Element> lhs(arity);
    std::vector<Element> rhs(arity);
    for (std::size_t a = 0; a < n; ++a) {
      const Element rep = reps[partition.class_of(a)];
      if (rep == a) {
        continue;
      }
      for (std::size_t pos = 0; pos < arity; ++pos) {
        std::optional<CompatibilityViolation> found;
        for_each_translation(n, arity, pos, static_cast<Element>(a), lhs,
                             [&](const std::vector<Element>& args) {
                               rhs = args;
                               rhs[pos] = rep;
                               if (!partition.related(algebra.apply(s, args),
                                                      algebra.apply(s, rhs))) {
                                 found = CompatibilityViolation{s, args, rhs};
                                 return false;
                               }
                               return true;
                             });
        if (found) {
          return found;
        }
      }
    }
  }
  return std::nullopt;
}

bool is_congruence(const FiniteAlgebra& algebra, const Partition& partition) {
  return !find_compatibility_violation(algebra, partition).has_value();
}

Congruence::Congruence(FiniteAlgebra algebra, Partition partition)
    : algebra_(std::move(algebra)), partition_(std::move(partition)) {
  if (auto violation = find_compatibility_violation(algebra_, partition_)) {
    throw NotACongruenceError(
        "partition is not compatible with operation '" +
            algebra_.signature()[violation->symbol].name + "' of '" + algebra_.name() + "'",
        violation->symbol, violation->lhs, violation->rhs);
  }
}

Congruence Congruence::trusted(FiniteAlgebra algebra, Partition partition) {
  return Congruence(std::move(algebra), std::move(partition), TrustedTag{});
}

Partition congruence_closure(const FiniteAlgebra& algebra, const Partition& start,
                             std::span<const std::pair<Element, Element>> pairs) {
  require_carrier(algebra, start);
  const std::size_t n = algebra.size();
  detail::UnionFind uf(n);
  std::deque<std::pair<Element, Element>> pending;
  const auto reps = start.representatives();
  for (std::size_t x = 0; x < n; ++x) {
    const Element rep = reps[start.class_of(x)];
    if (rep != x && uf.unite(x, rep)) {
      pending.emplace_back(static_cast<Element>(x), rep);
    }
  }
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw InvalidInputError("pair element out of range");
    }
    if (uf.unite(a, b)) {
      pending.emplace_back(a, b);
    }
  }
  const auto& signature = algebra.signature();
  std::vector<Element> args;
  std::vector<Element> other;
  while (!pending.empty()) {
    const auto [a, b] = pending.front();
    pending.pop_front();
    for (std::size_t s = 0; s < signature.size(); ++s) {
      const std::size_t arity = signature[s].arity;
      args.assign(arity, 0);
      for (std::size_t pos = 0; pos < arity; ++pos) {
        for_each_translation(n, arity, pos, a, args, [&](const std::vector<Element>& t) {
          other = t;
          other[pos] = b;
          const Element u = algebra.apply(s, t);
          const Element v = algebra.apply(s, other);
          if (uf.unite(u, v)) {
            pending.emplace_back(u, v);
          }
          return true;
        });
      }
    }
  }
  return uf.to_partition();
}

Congruence congruence_generated(const FiniteAlgebra& algebra,
                                std::span<const std::pair<Element, Element>> pairs) {
  return Congruence::trusted(
      algebra, congruence_closure(algebra, Partition::identity(algebra.size()), pairs));
}

std::vector<Partition> congruence_lattice(const FiniteAlgebra& algebra, const Limits& limits) {
  const std::size_t n = algebra.size();
  if (n > limits.enumeration_bound) {
    throw ResourceLimitError("congruence enumeration of '" + algebra.name() + "' (size " +
                             std::to_string(n) + ") exceeds the enumeration bound " +
                             std::to_string(limits.enumeration_bound));
  }
  const Partition delta = Partition::identity(n);
  std::vector<Partition> principals;
  std::unordered_set<Partition, PartitionHash> seen_principal;
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      const std::pair<Element, Element> pair{a, b};
      Partition p = congruence_closure(algebra, delta, std::span(&pair, 1));
      if (seen_principal.insert(p).second) {
        principals.push_back(std::move(p));
      }
    }
  }
  std::vector<Partition> lattice{delta};
  std::unordered_set<Partition, PartitionHash> seen{delta};
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (const Partition& p : principals) {
      Partition j = join(lattice[i], p);
      if (seen.insert(j).second) {
        lattice.push_back(std::move(j));
      }
    }
  }
  std::sort(lattice.begin(), lattice.end(), [](const Partition& x, const Partition& y) {
    if (x.num_classes() != y.num_classes()) {
      return x.num_classes() > y.num_classes();
    }
    return x < y;
  });
  return lattice;
}

std::vector<Congruence> all_congruences(const FiniteAlgebra& algebra, const Limits& limits) {
  std::vector<Congruence> out;
  for (auto& p : congruence_lattice(algebra, limits)) {
    out.push_back(Congruence::trusted(algebra, std::move(p)));
  }
  return out;
}

static void require_same_algebra(const Congruence& a, const Congruence& b) {
  if (!(a.algebra() == b.algebra())) {
    throw MismatchedAlgebraError("congruences live on different algebras ('" +
                                 a.algebra().name() + "' vs '" + b.algebra().name() + "')");
  }
}

Congruence meet(const Congruence& a, const Congruence& b) {
  require_same_algebra(a, b);
  return Congruence::trusted(a.algebra(), meet(a.partition(), b.partition()));
}

Congruence join(const Congruence& a, const Congruence& b) {
  require_same_algebra(a, b);
  // The join of congruences in the partition lattice is again a congruence.
  return Congruence::trusted(a.algebra(), join(a.partition(), b.partition()));
}

}  // namespace unialg
