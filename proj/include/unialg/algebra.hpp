#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unialg/error.hpp"
#include "unialg/term.hpp"

namespace unialg {

struct OperationSymbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const OperationSymbol&, const OperationSymbol&) = default;
};

/// An ordered list of operation symbols with positive arities. The order is
/// significant: it fixes symbol indices and the term order.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OperationSymbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const OperationSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t max_arity() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<OperationSymbol> symbols_;
};

/// `base^exponent`, or nullopt when it exceeds `cap`.
std::optional<std::size_t> checked_power(std::size_t base, std::size_t exponent,
                                         std::size_t cap);

/// Index of an argument tuple in a row-major table over a carrier of size
/// `n`, leftmost argument most significant.
inline std::size_t tuple_index(std::span<const Element> args, std::size_t n) {
  std::size_t index = 0;
  for (Element a : args) {
    index = index * n + a;
  }
  return index;
}

/// Inverse of tuple_index.
void decode_tuple(std::size_t index, std::size_t n, std::span<Element> out);

/// A finite algebra on {0,...,n-1} with one total table per symbol.
/// Immutable; copies share the underlying tables.
class FiniteAlgebra {
 public:
  /// Validates table lengths (n^arity) and entry ranges.
  FiniteAlgebra(std::string name, Signature signature, std::size_t size,
                std::vector<std::vector<Element>> tables);

  const std::string& name() const { return data_->name; }
  const Signature& signature() const { return data_->signature; }
  std::size_t size() const { return data_->size; }
  std::span<const Element> table(std::size_t symbol) const {
    return data_->tables[symbol];
  }
  const std::vector<std::vector<Element>>& tables() const { return data_->tables; }

  Element apply(std::size_t symbol, std::span<const Element> args) const {
    return data_->tables[symbol][tuple_index(args, data_->size)];
  }
  Element apply(std::size_t symbol, std::initializer_list<Element> args) const {
    return apply(symbol, std::span<const Element>(args.begin(), args.size()));
  }

  /// Same algebra under another name.
  FiniteAlgebra renamed(std::string name) const;

  /// Structural equality: signature, size and tables; names are ignored.
  friend bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b);

 private:
  struct Data {
    std::string name;
    Signature signature;
    std::size_t size = 0;
    std::vector<std::vector<Element>> tables;
  };
  std::shared_ptr<const Data> data_;
};

/// Orders algebras by (size, tables lexicographically); used to pick
/// canonical representatives of isomorphism classes.
/// "[a,b,...]" for short sequences, "[n entries]" beyond 12; used to name
/// derived algebras.
std::string short_description(std::span<const Element> values, char open = '[',
                              char close = ']');

bool canonical_less(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// Throws SignatureMismatchError unless both algebras share a signature.
void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// Value of the term operation t^A at `assignment` (x_i ↦ assignment[i-1]).
Element eval_term(const FiniteAlgebra& algebra, const Term& term,
                  std::span<const Element> assignment);

}  // namespace unialg
