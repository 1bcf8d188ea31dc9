#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"
#include "unialg/pseudovariety.hpp"

namespace unialg {

/// One named check: how many instances were examined, how many failed, and
/// a few failing instances in readable form.
struct CheckResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> examples;

  bool passed() const { return failures == 0; }
  void record(bool ok, const std::string& example = {});
};

struct VerificationReport {
  std::string operation;
  std::deque<CheckResult> checks;  // check() hands out stable references
  std::vector<std::string> notes;

  bool passed() const;
  CheckResult& check(const std::string& name);
  const CheckResult* find(const std::string& name) const;
};

/// θ together with tuples ā¹..āᵐ whose entourages intersect inside θ.
struct PointwiseCover {
  Partition theta;
  std::vector<std::vector<Element>> tuples;
  /// θ equals the intersection (its quotient embeds in A^m).
  bool exact = false;
};

struct PointwiseReport : VerificationReport {
  std::size_t arity = 0;
  std::size_t free_size = 0;
  std::vector<PointwiseCover> covers;
};

/// On F_k over {A}: every U_ā is a congruence whose quotient is isomorphic
/// to Sg(ā), and every congruence contains a finite intersection of U_ā's.
/// Covers are cross-checked against the subalgebra of A^m generated by the
/// component tuples.
PointwiseReport verify_pointwise_uniformity(const FiniteAlgebra& a, std::size_t k,
                                            const Limits& limits = {});

/// Diagonal, symmetry and U∘U ⊆ U for every basis member of the filter.
VerificationReport verify_uniformity_axioms(const CongruenceFilter& filter);
/// The same three axioms for explicitly given relations.
VerificationReport verify_uniformity_axioms(const std::vector<Entourage>& entourages);

struct CorrespondenceOptions {
  std::size_t size_bound = 7;
  std::size_t arity_bound = 3;
  std::size_t tuple_bound = 3;
  /// Cap on sampled subclasses and seed families.
  std::size_t max_samples = 2000;
  /// Subclasses additionally checked against congruence_family.
  std::size_t library_samples = 64;
  std::uint64_t seed = 1;
  Limits limits;
};

struct CorrespondenceReport : VerificationReport {
  std::size_t universe_size = 0;
  std::size_t generated_size = 0;
  std::size_t classes_sampled = 0;
  std::size_t families_sampled = 0;
  std::vector<std::size_t> free_sizes;
  bool universe_truncated = false;
};

/// Enumerates V(base) up to the size bound and checks, on sampled S_f-closed
/// subclasses K and inverse-substitution-closed families B:
///   roundtrip          K^{B^K} = K restricted to ≤arity_bound-generated members
///   substitution       B^K is closed under inverse substitution
///   family_roundtrip   B^{K^B} = B
///   family_class       K^B is S_f-closed among the generated members
///   product            B^K meet-closed ⇔ K contains every generated algebra
///                      that homomorphisms into K separate
///   library_family     congruence_family agrees with the enumeration
CorrespondenceReport verify_correspondence(const std::vector<FiniteAlgebra>& base,
                                           const CorrespondenceOptions& options = {});

}  // namespace unialg
