#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/detail/closure.hpp"
#include "unialg/partition.hpp"
#include "unialg/term.hpp"

namespace unialg {

/// A k-ary term operation of the variety generated by the base algebras:
/// one value vector per base algebra (argument tuples ordered mixed-radix,
/// x1 most significant) and a witness term.
struct TermOperation {
  std::size_t arity = 0;
  std::vector<std::vector<Element>> value_vectors;
  Term witness;
};

/// The k-generated free algebra of V(base), built as the subalgebra of
/// ∏ A_i^(A_i^k) generated by the projections. Elements are numbered in
/// discovery order, so the projections come first. If all base algebras are
/// trivial the projections coincide; use projection() rather than assuming
/// element i-1 is x_i.
///
/// Immutable and cheap to copy (shared state). The induced operation tables
/// are only materialized on the first call to algebra().
class FreeAlgebra {
 public:
  std::size_t arity() const;
  const std::vector<FiniteAlgebra>& base() const;
  const Signature& signature() const;
  const Limits& limits() const;
  std::size_t size() const;

  /// Length of the concatenated value vector (sum of |A_i|^k).
  std::size_t width() const;
  /// Element representing x_variable (1-based).
  Element projection(std::size_t variable) const;

  std::span<const Element> values(Element e) const;
  std::span<const Element> values(Element e, std::size_t base_index) const;
  const Term& witness(Element e) const;
  const std::vector<Term>& witnesses() const;
  const std::vector<detail::Derivation>& derivations() const;
  TermOperation element(Element e) const;

  std::optional<Element> find(std::span<const Element> values) const;
  Element apply(std::size_t symbol, std::span<const Element> args) const;

  /// The induced algebra on the elements. Throws ResourceLimitError if a
  /// table would exceed limits().max_table_entries.
  const FiniteAlgebra& algebra() const;

  /// Value of every element's witness in `target` under x_j ↦ assignment[j-1],
  /// computed in one pass over the derivations. This is the homomorphism
  /// F_k → target whenever target lies in the variety.
  std::vector<Element> evaluate(const FiniteAlgebra& target,
                                std::span<const Element> assignment) const;

  /// Same k and identical base list.
  bool same_as(const FreeAlgebra& other) const;
  /// Identical base list (any k).
  bool same_variety(const FreeAlgebra& other) const;

  struct Impl;
  explicit FreeAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

FreeAlgebra free_algebra(std::size_t k, std::vector<FiniteAlgebra> base,
                         const Limits& limits = {});

/// Memoizes free algebras per (base, k). Lookups are synchronized; results
/// do not depend on the order of requests.
class FreeAlgebraCache {
 public:
  explicit FreeAlgebraCache(Limits limits = {}) : limits_(limits) {}
  FreeAlgebra get(std::size_t k, const std::vector<FiniteAlgebra>& base);

 private:
  Limits limits_;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, std::vector<std::vector<std::vector<Element>>>>, FreeAlgebra>
      entries_;
};

/// s(t_1,...,t_m): `s` is an element of `outer` (arity m), `t_bar` are m
/// elements of `inner` (arity k). The result is an element of `inner`; the
/// witness is s's witness with x_j replaced by t_j's witness.
struct Composition {
  Element element = 0;
  Term witness;
};

Composition clone_compose(const FreeAlgebra& outer, Element s, const FreeAlgebra& inner,
                          std::span<const Element> t_bar);

/// θ/t̄ on F_m: s ~ s' iff s(t̄) θ s'(t̄). `theta` is a congruence of
/// `fk.algebra()`, `t_bar` has fm.arity() entries from F_k.
Partition inverse_substitution(const FreeAlgebra& fk, const Partition& theta,
                               const FreeAlgebra& fm, std::span<const Element> t_bar);

/// The same relation computed as the kernel of F_m → F_k/θ, x_i ↦ [t_i].
Partition inverse_substitution_kernel(const FreeAlgebra& fk, const Partition& theta,
                                      const FreeAlgebra& fm, std::span<const Element> t_bar);

/// Kernel of the natural map F_k → B, f ↦ f^B(b̄), with images[f] = f^B(b̄).
struct EvaluationKernel {
  Partition kernel;
  std::vector<Element> images;
};

/// Two terms with equal value vectors over the base that take different
/// values in the target at the generating tuple.
struct IllDefinedWitness {
  Term lhs;
  Term rhs;
};

using EvaluationResult = std::variant<EvaluationKernel, IllDefinedWitness>;

/// Closure of (free element, target value) pairs from (x_i, b_i). The first
/// conflict in witness-term order is returned as IllDefinedWitness.
EvaluationResult kernel_of_evaluation(const FreeAlgebra& free, const FiniteAlgebra& target,
                                      std::span<const Element> b_bar);

/// Streaming variant that does not need F_k up front: builds it alongside
/// and stops at the first conflict. On success `free` holds F_k.
struct StreamedEvaluation {
  EvaluationResult result;
  std::optional<FreeAlgebra> free;
};

StreamedEvaluation evaluate_streaming(std::size_t k, const std::vector<FiniteAlgebra>& base,
                                      const FiniteAlgebra& target,
                                      std::span<const Element> b_bar, const Limits& limits = {});

}  // namespace unialg
