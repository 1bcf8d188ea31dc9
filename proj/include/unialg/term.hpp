#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace unialg {

class Signature;

/// An abstract term over the variables x1, x2, ...: either a variable or an
/// operation symbol (an index into a Signature) applied to child terms.
///
/// Terms are immutable and share subterms, so copies are cheap.
class Term {
 public:
  /// `index` is 1-based; x1 is `variable(1)`.
  static Term variable(std::size_t index);
  static Term apply(std::size_t symbol, std::vector<Term> children);

  bool is_variable() const { return node_->is_variable; }
  /// Valid only for variables.
  std::size_t variable_index() const { return node_->index; }
  /// Valid only for applications.
  std::size_t symbol() const { return node_->index; }
  const std::vector<Term>& children() const { return node_->children; }

  /// Number of symbol and variable occurrences.
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }
  /// Largest variable index occurring in the term.
  std::size_t max_variable() const { return node_->max_variable; }

  /// Replaces x_j by `replacements[j-1]`. Throws MalformedTermError when a
  /// variable has no replacement.
  Term substitute(std::span<const Term> replacements) const;

  /// Infix-free prefix rendering, e.g. `f(x1,g(x2))`.
  std::string to_string(const Signature& signature) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_variable = false;
    std::size_t index = 0;
    std::vector<Term> children;
    std::size_t size = 1;
    std::size_t depth = 0;
    std::size_t max_variable = 0;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Total order used for witness terms: by size, then variables before
/// applications (x1 < x2 < ...), then symbol index, then children
/// lexicographically. Returns <0, 0 or >0.
int compare_terms(const Term& a, const Term& b);

}  // namespace unialg
