#include "unialg/pseudovariety.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "unialg/congruence.hpp"
#include "unialg/constructions.hpp"

namespace unialg {

ClassOfAlgebras::ClassOfAlgebras(const std::vector<FiniteAlgebra>& members,
                                 std::size_t universe_bound)
    : universe_bound_(universe_bound) {
  for (const auto& m : members) {
    add(m);
  }
}

std::pair<std::size_t, bool> ClassOfAlgebras::add(const FiniteAlgebra& algebra) {
  if (!classes_.representatives().empty()) {
    require_same_signature(classes_[0], algebra);
  }
  return classes_.add(algebra);
}

std::optional<std::size_t> ClassOfAlgebras::find(const FiniteAlgebra& algebra) const {
  if (classes_.size() == 0 || !(classes_[0].signature() == algebra.signature())) {
    return std::nullopt;
  }
  return classes_.find(algebra);
}

ClassOfAlgebras close_class(const ClassOfAlgebras& k, ClosureOps ops, std::size_t size_bound,
                            const Limits& limits) {
  ClassOfAlgebras work;
  bool truncated = k.truncated();
  for (const auto& a : k.representatives()) {
    work.add(a);
  }
  for (std::size_t i = 0; i < work.size(); ++i) {
    const FiniteAlgebra x = work[i];
    if (ops.homomorphic_images) {
      if (x.size() > limits.enumeration_bound) {
        truncated = true;
      } else {
        for (const auto& theta : congruence_lattice(x, limits)) {
          if (!theta.is_identity()) {
            work.add(quotient_algebra(Congruence::trusted(x, theta)).algebra);
          }
        }
      }
    }
    if (ops.subalgebras || ops.products) {
      if (x.size() > 64) {
        truncated = true;
      } else {
        for (const auto& sub : all_subuniverses(x)) {
          if (sub.size() < x.size()) {
            work.add(subalgebra(x, sub));
          }
        }
      }
    }
    if (ops.products && x.size() > 1) {
      for (std::size_t j = 0; j <= i; ++j) {
        const FiniteAlgebra y = work[j];
        if (y.size() == 1) {
          continue;
        }
        if (x.size() * y.size() > size_bound) {
          truncated = true;
          continue;
        }
        const FiniteAlgebra factors[] = {y, x};
        work.add(direct_product(factors, limits));
      }
    }
  }
  std::vector<FiniteAlgebra> reps = work.representatives();
  std::sort(reps.begin(), reps.end(), canonical_less);
  ClassOfAlgebras out(reps, size_bound);
  out.set_truncated(truncated);
  out.set_generated_in(k.generated_in().empty() ? k.representatives() : k.generated_in());
  return out;
}

FiniteAlgebra free_quotient(const FreeAlgebra& free, const Partition& theta) {
  if (theta.carrier_size() != free.size()) {
    throw MismatchedAlgebraError("partition does not live on the free algebra");
  }
  const auto reps = theta.representatives();
  const std::size_t m = reps.size();
  const auto& signature = free.signature();
  std::vector<std::vector<Element>> tables;
  std::vector<Element> local;
  std::vector<Element> args;
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    std::vector<Element> table(*checked_power(m, arity, SIZE_MAX));
    local.assign(arity, 0);
    args.assign(arity, 0);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, m, local);
      for (std::size_t i = 0; i < arity; ++i) {
        args[i] = reps[local[i]];
      }
      table[code] = theta.class_of(free.apply(s, args));
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra("F" + std::to_string(free.arity()) + "/" + short_description(theta.labels()),
                       signature, m,
                       std::move(tables));
}

std::vector<Partition> minimal_members(std::vector<Partition> partitions) {
  std::sort(partitions.begin(), partitions.end(), [](const Partition& a, const Partition& b) {
    if (a.num_classes() != b.num_classes()) {
      return a.num_classes() > b.num_classes();
    }
    return a < b;
  });
  partitions.erase(std::unique(partitions.begin(), partitions.end()), partitions.end());
  // Anything refining p has more classes and was seen earlier; checking the
  // minimal ones kept so far is enough.
  std::vector<Partition> out;
  for (auto& p : partitions) {
    const bool dominated = std::any_of(out.begin(), out.end(),
                                       [&](const Partition& q) { return refines(q, p); });
    if (!dominated) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

CongruenceFilter::CongruenceFilter(std::vector<FreeAlgebra> free,
                                   std::vector<std::vector<Partition>> basis, Flags flags)
    : free_(std::move(free)), basis_(std::move(basis)), flags_(flags) {
  if (free_.empty() || free_.size() != basis_.size()) {
    throw InvalidInputError("a filter needs one free algebra and one basis per arity");
  }
  for (std::size_t k = 0; k < free_.size(); ++k) {
    if (free_[k].arity() != k + 1 || !free_[k].same_variety(free_[0])) {
      throw InvalidInputError("filter free algebras must be F_1..F_K over one base");
    }
    for (const auto& p : basis_[k]) {
      if (p.carrier_size() != free_[k].size()) {
        throw MismatchedAlgebraError("basis partition does not live on F_" +
                                     std::to_string(k + 1));
      }
    }
  }
}

const FreeAlgebra& CongruenceFilter::free(std::size_t k) const {
  if (k == 0 || k > free_.size()) {
    throw BoundExceededError("arity " + std::to_string(k) + " exceeds the filter's arity bound " +
                             std::to_string(free_.size()));
  }
  return free_[k - 1];
}

const std::vector<Partition>& CongruenceFilter::basis(std::size_t k) const {
  free(k);
  return basis_[k - 1];
}

std::optional<Partition> CongruenceFilter::refining_member(std::size_t k,
                                                           const Partition& theta) const {
  for (const auto& b : basis(k)) {
    if (refines(b, theta)) {
      return b;
    }
  }
  return std::nullopt;
}

bool CongruenceFilter::contains(std::size_t k, const Partition& theta) const {
  return refining_member(k, theta).has_value();
}

namespace {

// Tuples c̄ ∈ C^k with Sg(c̄) = C.
std::vector<std::vector<Element>> generating_tuples(const FiniteAlgebra& c, std::size_t k,
                                                    const Limits& limits) {
  const auto total = checked_power(c.size(), k, limits.max_elements);
  if (!total) {
    throw ResourceLimitError("too many " + std::to_string(k) + "-tuples of '" + c.name() + "'");
  }
  std::vector<std::vector<Element>> out;
  std::vector<Element> tuple(k);
  for (std::size_t code = 0; code < *total; ++code) {
    decode_tuple(code, c.size(), tuple);
    const auto in = closure_of(c, tuple);
    if (std::all_of(in.begin(), in.end(), [](bool b) { return b; })) {
      out.push_back(tuple);
    }
  }
  return out;
}

void sort_family(std::vector<Partition>& level) {
  std::sort(level.begin(), level.end(), [](const Partition& a, const Partition& b) {
    if (a.num_classes() != b.num_classes()) {
      return a.num_classes() > b.num_classes();
    }
    return a < b;
  });
}

void require_in_variety(const ClassOfAlgebras& k, const std::vector<FiniteAlgebra>& base,
                        const Limits& limits) {
  const auto& to_check = k.generated_in().empty() ? k.representatives() : k.generated_in();
  for (const auto& a : to_check) {
    if (std::find(base.begin(), base.end(), a) != base.end()) {
      continue;
    }
    MembershipOptions options;
    options.limits = limits;
    if (!member(a, base, options).member) {
      throw NotInVarietyError(
          "'" + a.name() + "' is not in the variety generated by the base algebras", a.name());
    }
  }
}

}  // namespace

CongruenceFamily congruence_family(const ClassOfAlgebras& k, const std::vector<FiniteAlgebra>& base,
                                   std::size_t arity_bound, const Limits& limits) {
  if (arity_bound == 0) {
    throw InvalidInputError("arity bound must be at least 1");
  }
  CongruenceFamily out;
  for (std::size_t arity = 1; arity <= arity_bound; ++arity) {
    const FreeAlgebra f = free_algebra(arity, base, limits);
    std::unordered_set<Partition, PartitionHash> seen;
    std::vector<Partition> level;
    for (const auto& c : k.representatives()) {
      for (const auto& tuple : generating_tuples(c, arity, limits)) {
        const auto labels = f.evaluate(c, tuple);
        Partition p = Partition::from_labels(std::span<const Element>(labels));
        if (seen.insert(p).second) {
          level.push_back(std::move(p));
        }
      }
    }
    sort_family(level);
    out.free.push_back(f);
    out.members.push_back(std::move(level));
  }
  return out;
}

CongruenceFilter filter_from_class(const ClassOfAlgebras& k,
                                   const std::vector<FiniteAlgebra>& base,
                                   std::size_t arity_bound, const Limits& limits) {
  require_in_variety(k, base, limits);
  CongruenceFamily family = congruence_family(k, base, arity_bound, limits);
  std::vector<std::vector<Partition>> basis;
  for (auto& level : family.members) {
    basis.push_back(minimal_members(std::move(level)));
  }
  return CongruenceFilter(std::move(family.free), std::move(basis));
}

ClassOfAlgebras class_from_filter(const CongruenceFilter& filter, const Limits& limits) {
  ClassOfAlgebras out;
  for (std::size_t k = 1; k <= filter.arity_bound(); ++k) {
    for (const auto& theta : filter.basis(k)) {
      const FiniteAlgebra q = free_quotient(filter.free(k), theta);
      for (const auto& psi : congruence_lattice(q, limits)) {
        out.add(quotient_algebra(Congruence::trusted(q, psi)).algebra);
      }
    }
  }
  std::vector<FiniteAlgebra> reps = out.representatives();
  std::sort(reps.begin(), reps.end(), canonical_less);
  ClassOfAlgebras sorted(reps);
  sorted.set_generated_in(filter.base());
  return sorted;
}

CongruenceFilter close_filter(const CongruenceFilter& filter, const FilterClosureOptions& options,
                              const Limits& limits) {
  const std::size_t bound = filter.arity_bound();
  std::vector<FreeAlgebra> free;
  std::vector<std::vector<Partition>> basis;
  for (std::size_t k = 1; k <= bound; ++k) {
    free.push_back(filter.free(k));
    basis.push_back(filter.basis(k));
  }
  auto covered = [&](std::size_t k, const Partition& p) {
    return std::any_of(basis[k].begin(), basis[k].end(),
                       [&](const Partition& b) { return refines(b, p); });
  };
  const std::size_t max_m = std::min(bound, options.tuple_bound);
  bool changed = true;
  std::size_t rounds = 0;
  while (changed && rounds < options.max_rounds) {
    changed = false;
    ++rounds;
    std::vector<std::vector<Partition>> pending(bound);
    if (options.intersections) {
      for (std::size_t k = 0; k < bound; ++k) {
        for (std::size_t i = 0; i < basis[k].size(); ++i) {
          for (std::size_t j = i + 1; j < basis[k].size(); ++j) {
            Partition m = meet(basis[k][i], basis[k][j]);
            if (!covered(k, m)) {
              pending[k].push_back(std::move(m));
            }
          }
        }
      }
    }
    if (options.substitutions) {
      for (std::size_t k = 0; k < bound; ++k) {
        for (std::size_t m = 1; m <= max_m; ++m) {
          const auto count = checked_power(free[k].size(), m, limits.max_elements);
          if (!count) {
            throw ResourceLimitError("too many substitution tuples from F_" +
                                     std::to_string(k + 1) + " of length " + std::to_string(m));
          }
          std::vector<Element> t_bar(m);
          for (const auto& theta : basis[k]) {
            for (std::size_t code = 0; code < *count; ++code) {
              decode_tuple(code, free[k].size(), t_bar);
              Partition psi = inverse_substitution(free[k], theta, free[m - 1], t_bar);
              if (!covered(m - 1, psi)) {
                pending[m - 1].push_back(std::move(psi));
              }
            }
          }
        }
      }
    }
    for (std::size_t k = 0; k < bound; ++k) {
      if (!pending[k].empty()) {
        auto merged = basis[k];
        merged.insert(merged.end(), pending[k].begin(), pending[k].end());
        auto reduced = minimal_members(std::move(merged));
        if (reduced != basis[k]) {
          basis[k] = std::move(reduced);
          changed = true;
        }
      }
    }
  }
  CongruenceFilter::Flags flags = filter.flags();
  flags.intersection_closed = flags.intersection_closed || options.intersections;
  flags.substitution_closed = flags.substitution_closed || options.substitutions;
  if (options.substitutions) {
    flags.tuple_bound = std::max(flags.tuple_bound, max_m);
  }
  flags.fixpoint_reached = !changed;
  return CongruenceFilter(std::move(free), std::move(basis), flags);
}

Entourage Entourage::from_partition(std::size_t arity, const Partition& p) {
  Entourage e;
  e.arity = arity;
  e.carrier_size = p.carrier_size();
  for (const auto& cls : p.classes()) {
    for (Element a : cls) {
      for (Element b : cls) {
        e.pairs.emplace_back(a, b);
      }
    }
  }
  std::sort(e.pairs.begin(), e.pairs.end());
  return e;
}

bool Entourage::contains(Element a, Element b) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

PointwiseEntourage pointwise_entourage(const FiniteAlgebra& b, std::size_t k,
                                       std::span<const Element> a_bar, const Limits& limits) {
  if (a_bar.size() != k) {
    throw InvalidInputError("tuple has " + std::to_string(a_bar.size()) + " entries, expected " +
                            std::to_string(k));
  }
  FreeAlgebra f = free_algebra(k, {b}, limits);
  const auto labels = f.evaluate(b, a_bar);
  return PointwiseEntourage{f, std::vector<Element>(a_bar.begin(), a_bar.end()),
                            Partition::from_labels(std::span<const Element>(labels))};
}

namespace {

std::vector<Element> choose_tuple(const FiniteAlgebra& b, const MembershipOptions& options) {
  if (!options.tuple) {
    return minimal_generating_set(b);
  }
  const auto& tuple = *options.tuple;
  if (tuple.empty()) {
    throw InvalidInputError("generating tuple is empty");
  }
  for (Element x : tuple) {
    if (x >= b.size()) {
      throw InvalidInputError("generating tuple entry " + std::to_string(x) + " out of range");
    }
  }
  const auto in = closure_of(b, tuple);
  if (!std::all_of(in.begin(), in.end(), [](bool x) { return x; })) {
    throw InvalidInputError("tuple does not generate '" + b.name() + "'");
  }
  return tuple;
}

}  // namespace

MembershipResult member(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& generators,
                        const MembershipOptions& options) {
  if (generators.empty()) {
    throw InvalidInputError("membership needs at least one generating algebra");
  }
  require_same_signature(generators[0], b);
  const auto tuple = choose_tuple(b, options);
  auto streamed = evaluate_streaming(tuple.size(), generators, b, tuple, options.limits);
  if (auto* w = std::get_if<IllDefinedWitness>(&streamed.result)) {
    return {false, NegativeCertificate{tuple, w->lhs, w->rhs}};
  }
  auto& kernel = std::get<EvaluationKernel>(streamed.result);
  const FreeAlgebra& f = *streamed.free;
  FiniteAlgebra q = free_quotient(f, kernel.kernel);
  std::vector<Element> map(q.size());
  const auto reps = kernel.kernel.representatives();
  for (std::size_t c = 0; c < reps.size(); ++c) {
    map[c] = kernel.images[reps[c]];
  }
  Homomorphism hom(q, b, std::move(map));
  return {true, PositiveCertificate{f, tuple, kernel.kernel, q, std::move(hom)}};
}

MembershipResult member(const FiniteAlgebra& b, const CongruenceFilter& filter,
                        const MembershipOptions& options) {
  const auto tuple = choose_tuple(b, options);
  if (tuple.size() > filter.arity_bound()) {
    throw BoundExceededError("generating tuple of length " + std::to_string(tuple.size()) +
                             " exceeds the filter's arity bound " +
                             std::to_string(filter.arity_bound()));
  }
  MembershipOptions fixed = options;
  fixed.tuple = tuple;
  MembershipResult result = member(b, filter.base(), fixed);
  if (!result.member) {
    return result;
  }
  const auto& positive = std::get<PositiveCertificate>(result.certificate);
  if (filter.contains(tuple.size(), positive.kernel)) {
    return result;
  }
  return {false, NegativeUniformCertificate{positive.free, tuple, positive.kernel,
                                            filter.arity_bound(), filter.flags().tuple_bound}};
}

namespace {

// Value vector of a term over every base algebra.
std::vector<Element> term_vector(const std::vector<FiniteAlgebra>& base, std::size_t k,
                                 const Term& t) {
  std::vector<Element> out;
  std::vector<Element> args(k);
  for (const auto& a : base) {
    const std::size_t total = *checked_power(a.size(), k, SIZE_MAX);
    for (std::size_t code = 0; code < total; ++code) {
      decode_tuple(code, a.size(), args);
      out.push_back(eval_term(a, t, args));
    }
  }
  return out;
}

std::string verify_positive(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& base,
                            const PositiveCertificate& cert) {
  const FreeAlgebra& f = cert.free;
  if (!(f.base() == base)) {
    return "free algebra is over a different base";
  }
  if (cert.tuple.size() != f.arity()) {
    return "tuple length differs from the free algebra's arity";
  }
  const auto in = closure_of(b, cert.tuple);
  if (!std::all_of(in.begin(), in.end(), [](bool x) { return x; })) {
    return "tuple does not generate the algebra";
  }
  for (Element e = 0; e < f.size(); ++e) {
    const auto v = f.values(e);
    if (term_vector(base, f.arity(), f.witness(e)) != std::vector<Element>(v.begin(), v.end())) {
      return "witness of free element " + std::to_string(e) + " does not reproduce its values";
    }
  }
  const auto images = f.evaluate(b, cert.tuple);
  if (!(Partition::from_labels(std::span<const Element>(images)) == cert.kernel)) {
    return "kernel is not the kernel of the evaluation map";
  }
  // The evaluation map must be a homomorphism F_k -> B.
  const auto& signature = f.signature();
  std::vector<Element> args;
  std::vector<Element> mapped;
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    const auto total = checked_power(f.size(), arity, f.limits().max_table_entries);
    if (!total) {
      throw ResourceLimitError("free algebra too large to re-verify the certificate");
    }
    args.assign(arity, 0);
    mapped.assign(arity, 0);
    for (std::size_t code = 0; code < *total; ++code) {
      decode_tuple(code, f.size(), args);
      for (std::size_t i = 0; i < arity; ++i) {
        mapped[i] = images[args[i]];
      }
      if (images[f.apply(s, args)] != b.apply(s, mapped)) {
        return "evaluation map is not a homomorphism";
      }
    }
  }
  if (!(free_quotient(f, cert.kernel) == cert.quotient)) {
    return "quotient tables do not match";
  }
  if (find_homomorphism_violation(cert.quotient, b, cert.hom.map())) {
    return "factoring map is not a homomorphism";
  }
  if (!cert.hom.is_surjective()) {
    return "factoring map is not surjective";
  }
  for (Element e = 0; e < f.size(); ++e) {
    if (cert.hom(cert.kernel.class_of(e)) != images[e]) {
      return "factoring map does not commute with evaluation";
    }
  }
  return {};
}

std::string verify_negative(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& base,
                            const NegativeCertificate& cert) {
  const std::size_t k = cert.tuple.size();
  if (cert.lhs.max_variable() > k || cert.rhs.max_variable() > k) {
    return "terms use more variables than the tuple provides";
  }
  if (term_vector(base, k, cert.lhs) != term_vector(base, k, cert.rhs)) {
    return "terms differ on the base algebras";
  }
  if (eval_term(b, cert.lhs, cert.tuple) == eval_term(b, cert.rhs, cert.tuple)) {
    return "terms agree on the candidate at the tuple";
  }
  return {};
}

}  // namespace

std::string verify_certificate(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& base,
                               const MembershipCertificate& certificate,
                               const CongruenceFilter* filter) {
  if (const auto* p = std::get_if<PositiveCertificate>(&certificate)) {
    auto reason = verify_positive(b, base, *p);
    if (reason.empty() && filter != nullptr && !filter->contains(p->tuple.size(), p->kernel)) {
      reason = "no basis congruence of the filter refines the kernel";
    }
    return reason;
  }
  if (const auto* n = std::get_if<NegativeCertificate>(&certificate)) {
    return verify_negative(b, base, *n);
  }
  const auto& u = std::get<NegativeUniformCertificate>(certificate);
  if (filter == nullptr) {
    return "a uniform negative certificate needs the filter";
  }
  const auto images = u.free.evaluate(b, u.tuple);
  if (!(Partition::from_labels(std::span<const Element>(images)) == u.kernel)) {
    return "kernel is not the kernel of the evaluation map";
  }
  if (filter->contains(u.tuple.size(), u.kernel)) {
    return "a basis congruence refines the kernel";
  }
  return {};
}

}  // namespace unialg
