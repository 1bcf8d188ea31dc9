#include "unialg/free_algebra.hpp"

#include <algorithm>
#include <string>

#include "unialg/constructions.hpp"

namespace unialg {

struct FreeAlgebra::Impl {
  std::size_t k = 0;
  std::vector<FiniteAlgebra> base;
  Limits limits;
  std::vector<const FiniteAlgebra*> coords;
  std::vector<std::size_t> offsets;  // start of each base block, plus the total
  detail::TupleStore store{0};
  std::vector<detail::Derivation> derivations;
  std::vector<Term> witnesses;
  std::vector<Element> projections;

  mutable std::once_flag tables_once;
  mutable std::unique_ptr<FiniteAlgebra> tables;

  std::size_t width() const { return offsets.back(); }

  void apply(std::size_t symbol, std::span<const Element> args, std::span<Element> out) const {
    std::vector<std::span<const Element>> spans;
    spans.reserve(args.size());
    for (Element a : args) {
      spans.push_back(store.at(a));
    }
    detail::apply_coordinatewise(coords, symbol, spans, out);
  }
};

namespace {

using Impl = FreeAlgebra::Impl;

std::shared_ptr<Impl> prepare(std::size_t k, std::vector<FiniteAlgebra> base,
                              const Limits& limits) {
  if (k == 0) {
    throw InvalidInputError("free algebra needs k >= 1 generators");
  }
  if (base.empty()) {
    throw InvalidInputError("free algebra needs at least one base algebra");
  }
  for (const auto& a : base) {
    require_same_signature(base[0], a);
  }
  auto impl = std::make_shared<Impl>();
  impl->k = k;
  impl->base = std::move(base);
  impl->limits = limits;
  std::size_t width = 0;
  impl->offsets.push_back(0);
  for (const auto& a : impl->base) {
    const auto block = checked_power(a.size(), k, limits.max_table_entries);
    if (!block || width + *block > limits.max_table_entries) {
      throw ResourceLimitError("value vectors of the " + std::to_string(k) +
                               "-generated free algebra exceed " +
                               std::to_string(limits.max_table_entries) + " entries");
    }
    for (std::size_t t = 0; t < *block; ++t) {
      impl->coords.push_back(&a);
    }
    width += *block;
    impl->offsets.push_back(width);
  }
  impl->store = detail::TupleStore(width);
  return impl;
}

// Value vector of x_variable: entry t of block i is digit `variable` of t
// written in base |A_i| with x1 most significant.
std::vector<Element> projection_vector(const Impl& impl, std::size_t variable) {
  std::vector<Element> out(impl.width());
  for (std::size_t i = 0; i < impl.base.size(); ++i) {
    const std::size_t n = impl.base[i].size();
    std::size_t divisor = 1;
    for (std::size_t j = variable; j < impl.k; ++j) {
      divisor *= n;
    }
    for (std::size_t t = impl.offsets[i]; t < impl.offsets[i + 1]; ++t) {
      out[t] = static_cast<Element>((t - impl.offsets[i]) / divisor % n);
    }
  }
  return out;
}

struct BuildResult {
  std::shared_ptr<Impl> impl;
  std::optional<IllDefinedWitness> conflict;
  std::vector<Element> images;
};

// Closure of the projections, optionally paired with values in `target`.
BuildResult build(std::size_t k, std::vector<FiniteAlgebra> base, const Limits& limits,
                  const FiniteAlgebra* target, std::span<const Element> b_bar) {
  BuildResult result;
  result.impl = prepare(k, std::move(base), limits);
  Impl& impl = *result.impl;
  if (target != nullptr) {
    require_same_signature(impl.base[0], *target);
    if (b_bar.size() != k) {
      throw InvalidInputError("generating tuple has " + std::to_string(b_bar.size()) +
                              " entries, expected " + std::to_string(k));
    }
    for (Element b : b_bar) {
      if (b >= target->size()) {
        throw InvalidInputError("generating tuple entry out of range");
      }
    }
  }
  std::vector<std::vector<Element>> projections;
  for (std::size_t v = 1; v <= k; ++v) {
    projections.push_back(projection_vector(impl, v));
  }
  const Signature& signature = impl.base[0].signature();
  detail::TermOrderEnumerator enumerator(signature, k);
  std::vector<Element> buffer(impl.width());
  std::vector<std::span<const Element>> args;
  std::vector<Element> target_args;
  auto& images = result.images;
  enumerator.run([&](const detail::Candidate& c) {
    Element value = 0;
    if (c.symbol == detail::kNoSymbol) {
      buffer = projections[c.variable - 1];
      if (target != nullptr) {
        value = b_bar[c.variable - 1];
      }
    } else {
      args.clear();
      for (std::size_t child : c.children) {
        args.push_back(impl.store.at(child));
      }
      detail::apply_coordinatewise(impl.coords, c.symbol, args, buffer);
      if (target != nullptr) {
        target_args.clear();
        for (std::size_t child : c.children) {
          target_args.push_back(images[child]);
        }
        value = target->apply(c.symbol, target_args);
      }
    }
    if (auto existing = impl.store.find(buffer)) {
      if (target != nullptr && images[*existing] != value) {
        result.conflict =
            IllDefinedWitness{enumerator.witness(*existing), enumerator.candidate_term(c)};
        return detail::Visit::kStop;
      }
      return detail::Visit::kSkip;
    }
    if (impl.store.size() >= limits.max_elements) {
      throw ResourceLimitError("the " + std::to_string(k) +
                               "-generated free algebra exceeds " +
                               std::to_string(limits.max_elements) + " elements");
    }
    impl.store.insert(buffer);
    if (target != nullptr) {
      images.push_back(value);
    }
    return detail::Visit::kAdd;
  });
  if (result.conflict) {
    return result;
  }
  impl.witnesses = enumerator.take_witnesses();
  impl.derivations = enumerator.take_derivations();
  for (const auto& p : projections) {
    impl.projections.push_back(static_cast<Element>(*impl.store.find(p)));
  }
  return result;
}

}  // namespace

std::size_t FreeAlgebra::arity() const { return impl_->k; }
const std::vector<FiniteAlgebra>& FreeAlgebra::base() const { return impl_->base; }
const Signature& FreeAlgebra::signature() const { return impl_->base[0].signature(); }
const Limits& FreeAlgebra::limits() const { return impl_->limits; }
std::size_t FreeAlgebra::size() const { return impl_->store.size(); }
std::size_t FreeAlgebra::width() const { return impl_->width(); }

Element FreeAlgebra::projection(std::size_t variable) const {
  if (variable == 0 || variable > impl_->k) {
    throw InvalidInputError("projection index " + std::to_string(variable) +
                            " out of range 1.." + std::to_string(impl_->k));
  }
  return impl_->projections[variable - 1];
}

std::span<const Element> FreeAlgebra::values(Element e) const { return impl_->store.at(e); }

std::span<const Element> FreeAlgebra::values(Element e, std::size_t base_index) const {
  const auto all = impl_->store.at(e);
  return all.subspan(impl_->offsets[base_index],
                     impl_->offsets[base_index + 1] - impl_->offsets[base_index]);
}

const Term& FreeAlgebra::witness(Element e) const { return impl_->witnesses[e]; }
const std::vector<Term>& FreeAlgebra::witnesses() const { return impl_->witnesses; }
const std::vector<detail::Derivation>& FreeAlgebra::derivations() const {
  return impl_->derivations;
}

TermOperation FreeAlgebra::element(Element e) const {
  TermOperation op{impl_->k, {}, impl_->witnesses[e]};
  for (std::size_t i = 0; i < impl_->base.size(); ++i) {
    const auto v = values(e, i);
    op.value_vectors.emplace_back(v.begin(), v.end());
  }
  return op;
}

std::optional<Element> FreeAlgebra::find(std::span<const Element> values) const {
  if (values.size() != impl_->width()) {
    return std::nullopt;
  }
  if (auto i = impl_->store.find(values)) {
    return static_cast<Element>(*i);
  }
  return std::nullopt;
}

Element FreeAlgebra::apply(std::size_t symbol, std::span<const Element> args) const {
  std::vector<Element> out(impl_->width());
  impl_->apply(symbol, args, out);
  return static_cast<Element>(*impl_->store.find(out));
}

const FiniteAlgebra& FreeAlgebra::algebra() const {
  std::call_once(impl_->tables_once, [this] {
    const Impl& impl = *impl_;
    const std::size_t n = impl.store.size();
    const auto& signature = impl.base[0].signature();
    std::vector<std::vector<Element>> tables;
    std::vector<Element> args;
    std::vector<Element> out(impl.width());
    for (std::size_t s = 0; s < signature.size(); ++s) {
      const std::size_t arity = signature[s].arity;
      const auto entries = checked_power(n, arity, impl.limits.max_table_entries);
      if (!entries) {
        throw ResourceLimitError("operation table of the " + std::to_string(impl.k) +
                                 "-generated free algebra (" + std::to_string(n) +
                                 " elements) exceeds " +
                                 std::to_string(impl.limits.max_table_entries) + " entries");
      }
      std::vector<Element> table(*entries);
      args.assign(arity, 0);
      for (std::size_t code = 0; code < table.size(); ++code) {
        decode_tuple(code, n, args);
        impl.apply(s, args, out);
        table[code] = static_cast<Element>(*impl.store.find(out));
      }
      tables.push_back(std::move(table));
    }
    impl.tables = std::make_unique<FiniteAlgebra>("F" + std::to_string(impl.k), signature, n,
                                                  std::move(tables));
  });
  return *impl_->tables;
}

std::vector<Element> FreeAlgebra::evaluate(const FiniteAlgebra& target,
                                           std::span<const Element> assignment) const {
  require_same_signature(impl_->base[0], target);
  if (assignment.size() < impl_->k) {
    throw InvalidInputError("assignment has " + std::to_string(assignment.size()) +
                            " entries, expected " + std::to_string(impl_->k));
  }
  std::vector<Element> out(impl_->derivations.size());
  std::vector<Element> args;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& d = impl_->derivations[i];
    if (d.is_generator()) {
      if (assignment[d.variable - 1] >= target.size()) {
        throw InvalidInputError("assignment entry out of range");
      }
      out[i] = assignment[d.variable - 1];
    } else {
      args.clear();
      for (std::size_t child : d.children) {
        args.push_back(out[child]);
      }
      out[i] = target.apply(d.symbol, args);
    }
  }
  return out;
}

bool FreeAlgebra::same_as(const FreeAlgebra& other) const {
  return impl_->k == other.impl_->k && same_variety(other);
}

bool FreeAlgebra::same_variety(const FreeAlgebra& other) const {
  return impl_ == other.impl_ || impl_->base == other.impl_->base;
}

FreeAlgebra free_algebra(std::size_t k, std::vector<FiniteAlgebra> base, const Limits& limits) {
  return FreeAlgebra(build(k, std::move(base), limits, nullptr, {}).impl);
}

FreeAlgebra FreeAlgebraCache::get(std::size_t k, const std::vector<FiniteAlgebra>& base) {
  std::vector<std::vector<std::vector<Element>>> tables;
  for (const auto& a : base) {
    auto t = a.tables();
    t.push_back({static_cast<Element>(a.size())});
    tables.push_back(std::move(t));
  }
  auto key = std::make_pair(k, std::move(tables));
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) {
    return it->second;
  }
  FreeAlgebra f = free_algebra(k, base, limits_);
  entries_.emplace(std::move(key), f);
  return f;
}

namespace {

void require_same_variety(const FreeAlgebra& a, const FreeAlgebra& b) {
  if (!a.same_variety(b)) {
    throw MismatchedAlgebraError("free algebras are over different base algebras");
  }
}

}  // namespace

Composition clone_compose(const FreeAlgebra& outer, Element s, const FreeAlgebra& inner,
                          std::span<const Element> t_bar) {
  require_same_variety(outer, inner);
  const std::size_t m = outer.arity();
  if (t_bar.size() != m) {
    throw InvalidInputError("composition of an " + std::to_string(m) + "-ary operation with " +
                            std::to_string(t_bar.size()) + " arguments");
  }
  if (s >= outer.size()) {
    throw InvalidInputError("outer element out of range");
  }
  for (Element t : t_bar) {
    if (t >= inner.size()) {
      throw InvalidInputError("inner element out of range");
    }
  }
  std::vector<Element> out(inner.width());
  std::size_t pos = 0;
  std::vector<Element> point(m);
  for (std::size_t i = 0; i < inner.base().size(); ++i) {
    const std::size_t n = inner.base()[i].size();
    const auto outer_values = outer.values(s, i);
    std::vector<std::span<const Element>> args;
    for (Element t : t_bar) {
      args.push_back(inner.values(t, i));
    }
    const std::size_t block = args.empty() ? 0 : args[0].size();
    for (std::size_t a = 0; a < block; ++a) {
      for (std::size_t j = 0; j < m; ++j) {
        point[j] = args[j][a];
      }
      out[pos++] = outer_values[tuple_index(point, n)];
    }
  }
  const auto found = inner.find(out);
  if (!found) {
    throw Error("composition left the free algebra; value vectors are inconsistent");
  }
  std::vector<Term> replacements;
  for (Element t : t_bar) {
    replacements.push_back(inner.witness(t));
  }
  return Composition{*found, outer.witness(s).substitute(replacements)};
}

Partition inverse_substitution(const FreeAlgebra& fk, const Partition& theta,
                               const FreeAlgebra& fm, std::span<const Element> t_bar) {
  require_same_variety(fk, fm);
  if (theta.carrier_size() != fk.size()) {
    throw MismatchedAlgebraError("congruence does not live on the given free algebra");
  }
  std::vector<Element> labels(fm.size());
  for (Element s = 0; s < fm.size(); ++s) {
    labels[s] = theta.class_of(clone_compose(fm, s, fk, t_bar).element);
  }
  return Partition::from_labels(std::span<const Element>(labels));
}

Partition inverse_substitution_kernel(const FreeAlgebra& fk, const Partition& theta,
                                      const FreeAlgebra& fm, std::span<const Element> t_bar) {
  require_same_variety(fk, fm);
  if (theta.carrier_size() != fk.size()) {
    throw MismatchedAlgebraError("congruence does not live on the given free algebra");
  }
  if (t_bar.size() != fm.arity()) {
    throw InvalidInputError("substitution tuple has the wrong length");
  }
  const Quotient q = quotient_algebra(fk.algebra(), theta);
  std::vector<Element> images;
  for (Element t : t_bar) {
    images.push_back(q.map(t));
  }
  const auto values = fm.evaluate(q.algebra, images);
  return Partition::from_labels(std::span<const Element>(values));
}

namespace {

EvaluationResult to_result(BuildResult&& built) {
  if (built.conflict) {
    return std::move(*built.conflict);
  }
  Partition kernel = Partition::from_labels(std::span<const Element>(built.images));
  return EvaluationKernel{std::move(kernel), std::move(built.images)};
}

}  // namespace

EvaluationResult kernel_of_evaluation(const FreeAlgebra& free, const FiniteAlgebra& target,
                                      std::span<const Element> b_bar) {
  // The joint closure accepts vectors in the same order as the construction
  // of `free`, so the images line up with its element numbering.
  return to_result(build(free.arity(), free.base(), free.limits(), &target, b_bar));
}

StreamedEvaluation evaluate_streaming(std::size_t k, const std::vector<FiniteAlgebra>& base,
                                      const FiniteAlgebra& target,
                                      std::span<const Element> b_bar, const Limits& limits) {
  BuildResult built = build(k, base, limits, &target, b_bar);
  StreamedEvaluation out{EvaluationKernel{Partition::identity(0), {}}, std::nullopt};
  if (!built.conflict) {
    out.free = FreeAlgebra(built.impl);
  }
  out.result = to_result(std::move(built));
  return out;
}

}  // namespace unialg
