#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/homomorphism.hpp"
#include "unialg/partition.hpp"

namespace unialg {

/// Pairwise non-isomorphic finite algebras over one signature.
///
/// `generated_in` optionally records algebras whose variety contains every
/// member (set by close_class); filter_from_class then validates those
/// instead of each member.
class ClassOfAlgebras {
 public:
  ClassOfAlgebras() = default;
  explicit ClassOfAlgebras(const std::vector<FiniteAlgebra>& members,
                           std::size_t universe_bound = SIZE_MAX);

  /// Returns (index, true if new).
  std::pair<std::size_t, bool> add(const FiniteAlgebra& algebra);
  std::optional<std::size_t> find(const FiniteAlgebra& algebra) const;
  bool contains(const FiniteAlgebra& algebra) const { return find(algebra).has_value(); }

  std::size_t size() const { return classes_.size(); }
  bool empty() const { return classes_.size() == 0; }
  const FiniteAlgebra& operator[](std::size_t i) const { return classes_[i]; }
  const std::vector<FiniteAlgebra>& representatives() const {
    return classes_.representatives();
  }

  std::size_t universe_bound() const { return universe_bound_; }
  void set_universe_bound(std::size_t bound) { universe_bound_ = bound; }
  /// True if some construction was skipped because it exceeded the bound.
  bool truncated() const { return truncated_; }
  void set_truncated(bool t) { truncated_ = t; }
  const std::vector<FiniteAlgebra>& generated_in() const { return generated_in_; }
  void set_generated_in(std::vector<FiniteAlgebra> seeds) { generated_in_ = std::move(seeds); }

 private:
  IsomorphismClasses classes_;
  std::size_t universe_bound_ = SIZE_MAX;
  bool truncated_ = false;
  std::vector<FiniteAlgebra> generated_in_;
};

struct ClosureOps {
  bool homomorphic_images = false;  // H
  bool subalgebras = false;         // S_f
  bool products = false;            // P_f, always followed by S_f
};

/// Closure of `k` under the selected operators among algebras with at most
/// `size_bound` elements. Products whose size exceeds the bound are skipped
/// and mark the result truncated. Representatives are sorted canonically.
ClassOfAlgebras close_class(const ClassOfAlgebras& k, ClosureOps ops, std::size_t size_bound,
                            const Limits& limits = {});

/// Quotient of a free algebra by a congruence given as a partition of its
/// elements, computed from class representatives (F's tables are never
/// materialized). Classes carry their canonical labels. The partition is
/// trusted to be a congruence.
FiniteAlgebra free_quotient(const FreeAlgebra& free, const Partition& theta);

/// A per-arity family of congruences of F_k (k = 1..arity_bound), given by
/// its minimal members. Membership of θ means some basis member refines θ,
/// so the family is read as an upset.
class CongruenceFilter {
 public:
  struct Flags {
    bool intersection_closed = false;
    bool substitution_closed = false;
    std::size_t tuple_bound = 0;
    bool fixpoint_reached = false;
  };

  CongruenceFilter(std::vector<FreeAlgebra> free, std::vector<std::vector<Partition>> basis)
      : CongruenceFilter(std::move(free), std::move(basis), Flags()) {}
  CongruenceFilter(std::vector<FreeAlgebra> free, std::vector<std::vector<Partition>> basis,
                   Flags flags);

  const std::vector<FiniteAlgebra>& base() const { return free_[0].base(); }
  std::size_t arity_bound() const { return free_.size(); }
  /// k is 1-based.
  const FreeAlgebra& free(std::size_t k) const;
  const std::vector<Partition>& basis(std::size_t k) const;
  const Flags& flags() const { return flags_; }

  /// Some basis member at arity k refines theta. Throws BoundExceededError
  /// for k beyond the arity bound.
  bool contains(std::size_t k, const Partition& theta) const;
  std::optional<Partition> refining_member(std::size_t k, const Partition& theta) const;

  friend bool operator==(const CongruenceFilter& a, const CongruenceFilter& b) {
    return a.basis_ == b.basis_;
  }

 private:
  std::vector<FreeAlgebra> free_;
  std::vector<std::vector<Partition>> basis_;
  Flags flags_;
};

/// Keeps the minimal members (under refinement) of a set of partitions,
/// deduplicated and sorted.
std::vector<Partition> minimal_members(std::vector<Partition> partitions);

/// The exact family {θ ∈ con(F_k) : F_k/θ ∈ I(K)} for k = 1..arity_bound,
/// each level sorted. Computed as the kernels of F_k → C at the generating
/// k-tuples of each member C.
struct CongruenceFamily {
  std::vector<FreeAlgebra> free;
  std::vector<std::vector<Partition>> members;
};

CongruenceFamily congruence_family(const ClassOfAlgebras& k, const std::vector<FiniteAlgebra>& base,
                                   std::size_t arity_bound, const Limits& limits = {});

/// The filter whose basis at arity k is the set of minimal members of the
/// exact family. Validates that every member of `k` lies in V(base) and
/// throws NotInVarietyError naming the first one that does not.
CongruenceFilter filter_from_class(const ClassOfAlgebras& k,
                                   const std::vector<FiniteAlgebra>& base,
                                   std::size_t arity_bound, const Limits& limits = {});

/// Quotients of F_k by basis members and by all coarser congruences, up to
/// isomorphism.
ClassOfAlgebras class_from_filter(const CongruenceFilter& filter, const Limits& limits = {});

struct FilterClosureOptions {
  bool intersections = true;
  bool substitutions = true;
  std::size_t tuple_bound = 3;
  std::size_t max_rounds = 64;
};

/// Fixpoint of pairwise meets within each arity and inverse substitution
/// θ ↦ θ/t̄ for t̄ ∈ F_k^m with m ≤ min(arity bound, tuple bound).
CongruenceFilter close_filter(const CongruenceFilter& filter,
                              const FilterClosureOptions& options = {},
                              const Limits& limits = {});

/// A reflexive-or-not binary relation on the k-ary term operations (elements
/// of some F_k), stored as sorted pairs.
struct Entourage {
  std::size_t arity = 0;
  std::size_t carrier_size = 0;
  std::vector<std::pair<Element, Element>> pairs;

  static Entourage from_partition(std::size_t arity, const Partition& p);
  bool contains(Element a, Element b) const;
};

/// U_ā on F_k over {B}: f ~ g iff f(ā) = g(ā). Returned as the kernel
/// partition together with the free algebra it lives on.
struct PointwiseEntourage {
  FreeAlgebra free;
  std::vector<Element> tuple;
  Partition relation;
  Entourage as_entourage() const { return Entourage::from_partition(free.arity(), relation); }
};

PointwiseEntourage pointwise_entourage(const FiniteAlgebra& b, std::size_t k,
                                       std::span<const Element> a_bar, const Limits& limits = {});

/// Certificates for membership verdicts.
struct PositiveCertificate {
  FreeAlgebra free;
  std::vector<Element> tuple;
  Partition kernel;             // θ on F_k
  FiniteAlgebra quotient;       // F_k/θ with canonical class labels
  Homomorphism hom;             // F_k/θ → B, surjective
};

struct NegativeCertificate {
  std::vector<Element> tuple;
  Term lhs;
  Term rhs;
};

/// No basis congruence of the filter refines the kernel of F_k → B at the
/// tuple, within the stated bounds.
struct NegativeUniformCertificate {
  FreeAlgebra free;
  std::vector<Element> tuple;
  Partition kernel;
  std::size_t arity_bound = 0;
  std::size_t tuple_bound = 0;
};

using MembershipCertificate =
    std::variant<PositiveCertificate, NegativeCertificate, NegativeUniformCertificate>;

struct MembershipResult {
  bool member = false;
  MembershipCertificate certificate;
};

struct MembershipOptions {
  /// Generating tuple for B. Defaults to a minimal generating set.
  std::optional<std::vector<Element>> tuple;
  Limits limits;
};

/// Generators mode: is B in the pseudovariety generated by `generators`?
MembershipResult member(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& generators,
                        const MembershipOptions& options = {});

/// Filter mode: the Generators-mode verdict over filter.base(), and in
/// addition a basis congruence below the kernel. Throws BoundExceededError
/// when the tuple is longer than the filter's arity bound.
MembershipResult member(const FiniteAlgebra& b, const CongruenceFilter& filter,
                        const MembershipOptions& options = {});

/// Re-checks a certificate from scratch. Returns an empty string when it
/// verifies, else the reason it does not.
std::string verify_certificate(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& base,
                               const MembershipCertificate& certificate,
                               const CongruenceFilter* filter = nullptr);

}  // namespace unialg
