#include "unialg/algebra.hpp"

#include <algorithm>
#include <unordered_set>

namespace unialg {

Signature::Signature(std::vector<OperationSymbol> symbols) : symbols_(std::move(symbols)) {
  std::unordered_set<std::string> seen;
  for (const auto& symbol : symbols_) {
    if (symbol.name.empty()) {
      throw InvalidInputError("operation symbol names must be nonempty");
    }
    if (symbol.arity == 0) {
      throw InvalidInputError("operation '" + symbol.name +
                              "' has arity 0; constants are not supported");
    }
    if (!seen.insert(symbol.name).second) {
      throw InvalidInputError("duplicate operation symbol '" + symbol.name + "'");
    }
  }
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::size_t Signature::max_arity() const {
  std::size_t arity = 0;
  for (const auto& symbol : symbols_) {
    arity = std::max(arity, symbol.arity);
  }
  return arity;
}

std::optional<std::size_t> checked_power(std::size_t base, std::size_t exponent,
                                         std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) {
      return std::nullopt;
    }
    result *= base;
  }
  if (result > cap) {
    return std::nullopt;
  }
  return result;
}

void decode_tuple(std::size_t index, std::size_t n, std::span<Element> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Element>(index % n);
    index /= n;
  }
}

FiniteAlgebra::FiniteAlgebra(std::string name, Signature signature, std::size_t size,
                             std::vector<std::vector<Element>> tables) {
  if (size == 0) {
    throw InvalidInputError("algebra '" + name + "' must have at least one element");
  }
  if (tables.size() != signature.size()) {
    throw InvalidInputError("algebra '" + name + "' has " +
                            std::to_string(tables.size()) + " tables for " +
                            std::to_string(signature.size()) + " symbols");
  }
  for (std::size_t s = 0; s < signature.size(); ++s) {
    auto expected = checked_power(size, signature[s].arity, tables[s].size());
    if (!expected || *expected != tables[s].size()) {
      throw InvalidInputError("table of '" + signature[s].name + "' in '" + name +
                              "' has length " + std::to_string(tables[s].size()) +
                              ", expected size^arity");
    }
    for (std::size_t i = 0; i < tables[s].size(); ++i) {
      if (tables[s][i] >= size) {
        throw InvalidInputError("table of '" + signature[s].name + "' in '" + name +
                                "' has out-of-range entry at index " +
                                std::to_string(i));
      }
    }
  }
  data_ = std::make_shared<const Data>(
      Data{std::move(name), std::move(signature), size, std::move(tables)});
}

FiniteAlgebra FiniteAlgebra::renamed(std::string name) const {
  FiniteAlgebra copy = *this;
  copy.data_ = std::make_shared<const Data>(
      Data{std::move(name), data_->signature, data_->size, data_->tables});
  return copy;
}

std::string short_description(std::span<const Element> values, char open, char close) {
  if (values.size() > 12) {
    return open + std::to_string(values.size()) + " entries" + close;
  }
  std::string out(1, open);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? "," : "") + std::to_string(values[i]);
  }
  return out + close;
}

bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.data_ == b.data_) {
    return true;
  }
  return a.size() == b.size() && a.signature() == b.signature() &&
         a.tables() == b.tables();
}

bool canonical_less(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.size() != b.size()) {
    return a.size() < b.size();
  }
  return a.tables() < b.tables();
}

void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (!(a.signature() == b.signature())) {
    throw SignatureMismatchError("algebras '" + a.name() + "' and '" + b.name() +
                                 "' have different signatures");
  }
}

Element eval_term(const FiniteAlgebra& algebra, const Term& term,
                  std::span<const Element> assignment) {
  if (term.is_variable()) {
    if (term.variable_index() > assignment.size()) {
      throw MalformedTermError("variable x" + std::to_string(term.variable_index()) +
                               " exceeds assignment of length " +
                               std::to_string(assignment.size()));
    }
    Element value = assignment[term.variable_index() - 1];
    if (value >= algebra.size()) {
      throw InvalidInputError("assignment entry out of range");
    }
    return value;
  }
  const auto& signature = algebra.signature();
  if (term.symbol() >= signature.size() ||
      signature[term.symbol()].arity != term.children().size()) {
    throw MalformedTermError("term does not match the signature of '" +
                             algebra.name() + "'");
  }
  std::vector<Element> args;
  args.reserve(term.children().size());
  for (const Term& child : term.children()) {
    args.push_back(eval_term(algebra, child, assignment));
  }
  return algebra.apply(term.symbol(), args);
}

}  // namespace unialg
