#include "unialg/constructions.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "unialg/detail/closure.hpp"

namespace unialg {

namespace detail {

void apply_coordinatewise(std::span<const FiniteAlgebra* const> coordinate_algebra,
                          std::size_t symbol,
                          std::span<const std::span<const Element>> args,
                          std::span<Element> out) {
  const std::size_t arity = args.size();
  if (arity == 2) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const FiniteAlgebra& a = *coordinate_algebra[j];
      out[j] = a.table(symbol)[args[0][j] * a.size() + args[1][j]];
    }
    return;
  }
  if (arity == 1) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = coordinate_algebra[j]->table(symbol)[args[0][j]];
    }
    return;
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    const FiniteAlgebra& a = *coordinate_algebra[j];
    std::size_t index = 0;
    for (std::size_t i = 0; i < arity; ++i) {
      index = index * a.size() + args[i][j];
    }
    out[j] = a.table(symbol)[index];
  }
}

}  // namespace detail

bool GeneratedSubuniverse::contains(Element x) const {
  return std::find(elements.begin(), elements.end(), x) != elements.end();
}

std::vector<Element> GeneratedSubuniverse::sorted() const {
  std::vector<Element> out = elements;
  std::sort(out.begin(), out.end());
  return out;
}

GeneratedSubuniverse subuniverse_generated(const FiniteAlgebra& algebra,
                                           std::span<const Element> generators) {
  if (generators.empty()) {
    throw InvalidInputError("subuniverse_generated needs at least one generator");
  }
  std::vector<std::vector<Element>> tuples;
  for (Element g : generators) {
    if (g >= algebra.size()) {
      throw InvalidInputError("generator out of range");
    }
    tuples.push_back({g});
  }
  Subproduct sub = subproduct_generated(std::span(&algebra, 1), tuples);
  GeneratedSubuniverse out;
  out.generators.assign(generators.begin(), generators.end());
  for (const auto& t : sub.tuples) {
    out.elements.push_back(t[0]);
  }
  out.witnesses = std::move(sub.witnesses);
  return out;
}

std::vector<bool> closure_of(const FiniteAlgebra& algebra, std::span<const Element> generators) {
  const std::size_t n = algebra.size();
  std::vector<bool> in(n, false);
  std::vector<Element> members;
  for (Element g : generators) {
    if (!in[g]) {
      in[g] = true;
      members.push_back(g);
    }
  }
  if (members.empty()) {
    return in;
  }
  const auto& signature = algebra.signature();
  std::vector<Element> args;
  std::vector<std::size_t> idx;
  // Re-scan all tuples over the current members until nothing new appears.
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t m = members.size();
    for (std::size_t s = 0; s < signature.size(); ++s) {
      const std::size_t arity = signature[s].arity;
      args.assign(arity, 0);
      idx.assign(arity, 0);
      while (true) {
        for (std::size_t i = 0; i < arity; ++i) {
          args[i] = members[idx[i]];
        }
        const Element v = algebra.apply(s, args);
        if (!in[v]) {
          in[v] = true;
          members.push_back(v);
          changed = true;
        }
        std::size_t pos = arity;
        while (pos > 0 && ++idx[pos - 1] == m) {
          idx[--pos] = 0;
        }
        if (pos == 0) {
          break;
        }
      }
    }
  }
  return in;
}

std::vector<std::vector<Element>> all_subuniverses(const FiniteAlgebra& algebra) {
  const std::size_t n = algebra.size();
  if (n > 64) {
    throw ResourceLimitError("subuniverse enumeration supports at most 64 elements");
  }
  auto to_mask = [](const std::vector<bool>& in) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (in[i]) {
        mask |= std::uint64_t{1} << i;
      }
    }
    return mask;
  };
  auto to_set = [n](std::uint64_t mask) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        out.push_back(static_cast<Element>(i));
      }
    }
    return out;
  };
  std::vector<std::uint64_t> found;
  std::unordered_set<std::uint64_t> seen;
  for (Element x = 0; x < n; ++x) {
    const auto mask = to_mask(closure_of(algebra, std::span(&x, 1)));
    if (seen.insert(mask).second) {
      found.push_back(mask);
    }
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    const auto base = to_set(found[i]);
    for (Element x = 0; x < n; ++x) {
      if (found[i] >> x & 1) {
        continue;
      }
      auto gens = base;
      gens.push_back(x);
      const auto mask = to_mask(closure_of(algebra, gens));
      if (seen.insert(mask).second) {
        found.push_back(mask);
      }
    }
  }
  std::vector<std::vector<Element>> out;
  out.reserve(found.size());
  for (auto mask : found) {
    out.push_back(to_set(mask));
  }
  return out;
}

FiniteAlgebra subalgebra(const FiniteAlgebra& algebra, std::span<const Element> subuniverse) {
  std::vector<Element> elems(subuniverse.begin(), subuniverse.end());
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty()) {
    throw InvalidInputError("subalgebra of an empty subset");
  }
  std::vector<std::int64_t> position(algebra.size(), -1);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] >= algebra.size()) {
      throw InvalidInputError("subset element out of range");
    }
    position[elems[i]] = static_cast<std::int64_t>(i);
  }
  const std::size_t m = elems.size();
  std::vector<std::vector<Element>> tables;
  std::vector<Element> local;
  std::vector<Element> args;
  for (std::size_t s = 0; s < algebra.signature().size(); ++s) {
    const std::size_t arity = algebra.signature()[s].arity;
    const auto entries = checked_power(m, arity, SIZE_MAX);
    std::vector<Element> table(*entries);
    local.assign(arity, 0);
    args.assign(arity, 0);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, m, local);
      for (std::size_t i = 0; i < arity; ++i) {
        args[i] = elems[local[i]];
      }
      const auto p = position[algebra.apply(s, args)];
      if (p < 0) {
        throw InvalidInputError("subset of '" + algebra.name() + "' is not closed under '" +
                                algebra.signature()[s].name + "'");
      }
      table[code] = static_cast<Element>(p);
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(algebra.name() + short_description(subuniverse, '{', '}'),
                       algebra.signature(), m, std::move(tables));
}

std::size_t encode_product_element(std::span<const FiniteAlgebra> factors,
                                   std::span<const Element> components) {
  std::size_t code = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    code = code * factors[i].size() + components[i];
  }
  return code;
}

std::vector<Element> decode_product_element(std::span<const FiniteAlgebra> factors,
                                            std::size_t code) {
  std::vector<Element> out(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    out[i] = static_cast<Element>(code % factors[i].size());
    code /= factors[i].size();
  }
  return out;
}

FiniteAlgebra direct_product(std::span<const FiniteAlgebra> factors, const Limits& limits) {
  if (factors.empty()) {
    throw InvalidInputError("direct_product needs at least one factor");
  }
  std::size_t size = 1;
  std::string name;
  for (const auto& f : factors) {
    require_same_signature(factors[0], f);
    if (size > limits.max_elements / f.size()) {
      throw ResourceLimitError("direct product exceeds " + std::to_string(limits.max_elements) +
                               " elements");
    }
    size *= f.size();
    name += (name.empty() ? "" : " x ") + f.name();
  }
  if (size > limits.max_elements) {
    throw ResourceLimitError("direct product exceeds " + std::to_string(limits.max_elements) +
                             " elements");
  }
  const auto& signature = factors[0].signature();
  std::vector<std::vector<Element>> tables;
  std::vector<std::vector<Element>> decoded(size);
  for (std::size_t code = 0; code < size; ++code) {
    decoded[code] = decode_product_element(factors, code);
  }
  std::vector<Element> local;
  std::vector<Element> args;
  std::vector<Element> result(factors.size());
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    const auto entries = checked_power(size, arity, limits.max_table_entries);
    if (!entries) {
      throw ResourceLimitError("operation table of the product exceeds " +
                               std::to_string(limits.max_table_entries) + " entries");
    }
    std::vector<Element> table(*entries);
    local.assign(arity, 0);
    args.assign(arity, 0);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, size, local);
      for (std::size_t j = 0; j < factors.size(); ++j) {
        for (std::size_t i = 0; i < arity; ++i) {
          args[i] = decoded[local[i]][j];
        }
        result[j] = factors[j].apply(s, args);
      }
      table[code] = static_cast<Element>(encode_product_element(factors, result));
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(name, signature, size, std::move(tables));
}

Subproduct subproduct_generated(std::span<const FiniteAlgebra> factors,
                                std::span<const std::vector<Element>> generators,
                                const Limits& limits) {
  if (factors.empty()) {
    throw InvalidInputError("subproduct_generated needs at least one factor");
  }
  for (const auto& f : factors) {
    require_same_signature(factors[0], f);
  }
  const std::size_t width = factors.size();
  for (const auto& g : generators) {
    if (g.size() != width) {
      throw InvalidInputError("generator tuple has the wrong width");
    }
    for (std::size_t j = 0; j < width; ++j) {
      if (g[j] >= factors[j].size()) {
        throw InvalidInputError("generator component out of range");
      }
    }
  }
  const auto& signature = factors[0].signature();
  std::vector<const FiniteAlgebra*> coords;
  for (const auto& f : factors) {
    coords.push_back(&f);
  }
  detail::TupleStore store(width);
  detail::TermOrderEnumerator enumerator(signature, generators.size());
  std::vector<Element> buffer(width);
  std::vector<std::span<const Element>> args;
  enumerator.run([&](const detail::Candidate& c) {
    if (c.symbol == detail::kNoSymbol) {
      const auto& g = generators[c.variable - 1];
      std::copy(g.begin(), g.end(), buffer.begin());
    } else {
      args.clear();
      for (std::size_t child : c.children) {
        args.push_back(store.at(child));
      }
      detail::apply_coordinatewise(coords, c.symbol, args, buffer);
    }
    if (!store.insert(buffer).second) {
      return detail::Visit::kSkip;
    }
    if (store.size() > limits.max_elements) {
      throw ResourceLimitError("generated subalgebra exceeds " +
                               std::to_string(limits.max_elements) + " elements");
    }
    return detail::Visit::kAdd;
  });

  const std::size_t n = store.size();
  std::vector<std::vector<Element>> tables;
  std::vector<Element> local;
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    const auto entries = checked_power(n, arity, limits.max_table_entries);
    if (!entries) {
      throw ResourceLimitError("operation table of the generated subalgebra exceeds " +
                               std::to_string(limits.max_table_entries) + " entries");
    }
    std::vector<Element> table(*entries);
    local.assign(arity, 0);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, n, local);
      args.clear();
      for (Element e : local) {
        args.push_back(store.at(e));
      }
      detail::apply_coordinatewise(coords, s, args, buffer);
      table[code] = static_cast<Element>(*store.find(buffer));
    }
    tables.push_back(std::move(table));
  }
  Subproduct out{FiniteAlgebra("Sg", signature, n, std::move(tables)), {},
                 enumerator.take_witnesses()};
  out.tuples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto t = store.at(i);
    out.tuples.emplace_back(t.begin(), t.end());
  }
  return out;
}

Quotient quotient_algebra(const Congruence& theta) {
  const FiniteAlgebra& algebra = theta.algebra();
  const Partition& p = theta.partition();
  const auto reps = p.representatives();
  const std::size_t m = p.num_classes();
  std::vector<std::vector<Element>> tables;
  std::vector<Element> local;
  std::vector<Element> args;
  for (std::size_t s = 0; s < algebra.signature().size(); ++s) {
    const std::size_t arity = algebra.signature()[s].arity;
    std::vector<Element> table(*checked_power(m, arity, SIZE_MAX));
    local.assign(arity, 0);
    args.assign(arity, 0);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, m, local);
      for (std::size_t i = 0; i < arity; ++i) {
        args[i] = reps[local[i]];
      }
      table[code] = p.class_of(algebra.apply(s, args));
    }
    tables.push_back(std::move(table));
  }
  FiniteAlgebra q(algebra.name() + "/" + short_description(p.labels()), algebra.signature(), m,
                  std::move(tables));
  std::vector<Element> map(p.labels().begin(), p.labels().end());
  return Quotient{q, Homomorphism(algebra, q, std::move(map))};
}

Quotient quotient_algebra(const FiniteAlgebra& algebra, const Partition& theta) {
  return quotient_algebra(Congruence(algebra, theta));
}

}  // namespace unialg
