#include "unialg/term.hpp"

#include <algorithm>

#include "unialg/algebra.hpp"
#include "unialg/error.hpp"

namespace unialg {

Term Term::variable(std::size_t index) {
  if (index == 0) {
    throw MalformedTermError("variable indices are 1-based");
  }
  auto node = std::make_shared<Node>();
  node->is_variable = true;
  node->index = index;
  node->max_variable = index;
  return Term(std::move(node));
}

Term Term::apply(std::size_t symbol, std::vector<Term> children) {
  auto node = std::make_shared<Node>();
  node->index = symbol;
  for (const Term& child : children) {
    node->size += child.size();
    node->depth = std::max(node->depth, child.depth() + 1);
    node->max_variable = std::max(node->max_variable, child.max_variable());
  }
  node->children = std::move(children);
  return Term(std::move(node));
}

Term Term::substitute(std::span<const Term> replacements) const {
  if (is_variable()) {
    if (variable_index() > replacements.size()) {
      throw MalformedTermError("no replacement for x" +
                               std::to_string(variable_index()));
    }
    return replacements[variable_index() - 1];
  }
  std::vector<Term> children;
  children.reserve(node_->children.size());
  for (const Term& child : node_->children) {
    children.push_back(child.substitute(replacements));
  }
  return apply(symbol(), std::move(children));
}

std::string Term::to_string(const Signature& signature) const {
  if (is_variable()) {
    return "x" + std::to_string(variable_index());
  }
  std::string out = symbol() < signature.size()
                        ? signature[symbol()].name
                        : "#" + std::to_string(symbol());
  out += '(';
  for (std::size_t i = 0; i < children().size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += children()[i].to_string(signature);
  }
  out += ')';
  return out;
}

bool operator==(const Term& a, const Term& b) {
  return a.node_ == b.node_ || compare_terms(a, b) == 0;
}

int compare_terms(const Term& a, const Term& b) {
  if (a.size() != b.size()) {
    return a.size() < b.size() ? -1 : 1;
  }
  if (a.is_variable() != b.is_variable()) {
    return a.is_variable() ? -1 : 1;
  }
  if (a.is_variable()) {
    if (a.variable_index() == b.variable_index()) {
      return 0;
    }
    return a.variable_index() < b.variable_index() ? -1 : 1;
  }
  if (a.symbol() != b.symbol()) {
    return a.symbol() < b.symbol() ? -1 : 1;
  }
  const auto& ac = a.children();
  const auto& bc = b.children();
  for (std::size_t i = 0; i < std::min(ac.size(), bc.size()); ++i) {
    if (int c = compare_terms(ac[i], bc[i]); c != 0) {
      return c;
    }
  }
  if (ac.size() != bc.size()) {
    return ac.size() < bc.size() ? -1 : 1;
  }
  return 0;
}

}  // namespace unialg
