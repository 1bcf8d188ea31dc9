#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <optional>
#include <utility>
#include <algorithm>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/term.hpp"

namespace unialg::detail {

inline constexpr std::size_t kNoSymbol = std::numeric_limits<std::size_t>::max();

/// How an element of a generated subalgebra was first reached: a generator
/// (variable) or a symbol applied to earlier elements.
struct Derivation {
  std::size_t symbol = kNoSymbol;  // kNoSymbol for generators
  std::size_t variable = 0;        // 1-based, generators only
  std::vector<std::size_t> children;

  bool is_generator() const { return symbol == kNoSymbol; }
};

enum class Visit { kSkip, kAdd, kStop };

/// A candidate term presented to the visitor: either variable x_{variable}
/// or `symbol` applied to already accepted elements `children`.
struct Candidate {
  std::size_t symbol = kNoSymbol;
  std::size_t variable = 0;
  std::span<const std::size_t> children;
};

/// Enumerates candidate terms in witness-term order (size, then symbol, then
/// children) over the elements accepted so far. Every tuple of accepted
/// elements is offered exactly once per symbol, so the accepted set ends up
/// closed under all operations and each accepted element carries the least
/// term (in that order) that reaches it.
class TermOrderEnumerator {
 public:
  TermOrderEnumerator(const Signature& signature, std::size_t num_variables)
      : signature_(signature), num_variables_(num_variables) {}

  /// `visit(const Candidate&) -> Visit`. kAdd accepts the candidate as the
  /// next element, kStop ends the enumeration immediately.
  template <class Visitor>
  bool run(Visitor&& visit) {
    by_size_.assign(2, {});
    for (std::size_t v = 1; v <= num_variables_; ++v) {
      Candidate c;
      c.variable = v;
      Visit r = visit(static_cast<const Candidate&>(c));
      if (r == Visit::kStop) {
        return false;
      }
      if (r == Visit::kAdd) {
        accept(Derivation{kNoSymbol, v, {}}, 1);
      }
    }
    level_end_.assign(2, derivations_.size());
    const std::size_t max_arity = signature_.max_arity();
    std::vector<std::size_t> buffer;
    for (std::size_t size = 2; max_arity > 0 && size <= max_arity * max_size_ + 1; ++size) {
      by_size_.emplace_back();
      for (std::size_t s = 0; s < signature_.size(); ++s) {
        const std::size_t arity = signature_[s].arity;
        if (size - 1 < arity) {
          continue;
        }
        buffer.assign(arity, 0);
        if (!enumerate(s, 0, size - 1, size, buffer, visit)) {
          return false;
        }
      }
      level_end_.push_back(derivations_.size());
    }
    return true;
  }

  std::size_t count() const { return derivations_.size(); }
  const Derivation& derivation(std::size_t i) const { return derivations_[i]; }
  const std::vector<Derivation>& derivations() const { return derivations_; }
  std::vector<Derivation> take_derivations() { return std::move(derivations_); }
  const Term& witness(std::size_t i) const { return witnesses_[i]; }
  std::vector<Term> take_witnesses() { return std::move(witnesses_); }

  Term candidate_term(const Candidate& c) const {
    if (c.symbol == kNoSymbol) {
      return Term::variable(c.variable);
    }
    std::vector<Term> children;
    children.reserve(c.children.size());
    for (std::size_t child : c.children) {
      children.push_back(witnesses_[child]);
    }
    return Term::apply(c.symbol, std::move(children));
  }

 private:
  void accept(Derivation d, std::size_t size) {
    Candidate c;
    c.symbol = d.symbol;
    c.variable = d.variable;
    c.children = d.children;
    witnesses_.push_back(candidate_term(c));
    derivations_.push_back(std::move(d));
    sizes_.push_back(size);
    by_size_[size].push_back(derivations_.size() - 1);
    max_size_ = std::max(max_size_, size);
  }

  // Number of accepted elements whose witness size is at most `size`
  // (elements are accepted in nondecreasing size order).
  std::size_t count_upto(std::size_t size) const {
    return size < level_end_.size() ? level_end_[size] : level_end_.back();
  }

  template <class Visitor>
  bool enumerate(std::size_t symbol, std::size_t position, std::size_t remaining,
                 std::size_t size, std::vector<std::size_t>& buffer, Visitor& visit) {
    const std::size_t arity = buffer.size();
    const std::size_t left = arity - position;
    auto offer = [&]() -> bool {
      Candidate c;
      c.symbol = symbol;
      c.children = buffer;
      Visit r = visit(static_cast<const Candidate&>(c));
      if (r == Visit::kStop) {
        return false;
      }
      if (r == Visit::kAdd) {
        accept(Derivation{symbol, 0, buffer}, size);
      }
      return true;
    };
    if (left == 1) {
      if (remaining >= by_size_.size() || remaining >= size) {
        return true;
      }
      // Copy: accepting may grow by_size_[size] but never by_size_[remaining].
      const std::size_t n = by_size_[remaining].size();
      for (std::size_t i = 0; i < n; ++i) {
        buffer[position] = by_size_[remaining][i];
        if (!offer()) {
          return false;
        }
      }
      return true;
    }
    const std::size_t limit = count_upto(remaining - (left - 1));
    for (std::size_t e = 0; e < limit; ++e) {
      buffer[position] = e;
      if (!enumerate(symbol, position + 1, remaining - sizes_[e], size, buffer, visit)) {
        return false;
      }
    }
    return true;
  }

  const Signature& signature_;
  std::size_t num_variables_;
  std::vector<Derivation> derivations_;
  std::vector<Term> witnesses_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::size_t>> by_size_;
  std::vector<std::size_t> level_end_;
  std::size_t max_size_ = 1;
};

/// Arena of fixed-width element tuples with open-addressing hash lookup.
/// Lookups are const and safe to run concurrently with other lookups.
class TupleStore {
 public:
  explicit TupleStore(std::size_t width) : width_(width), slots_(16, kEmpty) {}

  std::size_t width() const { return width_; }
  std::size_t size() const { return count_; }
  std::span<const Element> at(std::size_t i) const {
    return {data_.data() + i * width_, width_};
  }

  std::optional<std::size_t> find(std::span<const Element> tuple) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t pos = hash(tuple) & mask;; pos = (pos + 1) & mask) {
      const std::size_t slot = slots_[pos];
      if (slot == kEmpty) {
        return std::nullopt;
      }
      if (std::equal(tuple.begin(), tuple.end(), data_.begin() + slot * width_)) {
        return slot;
      }
    }
  }

  /// Returns (index, inserted).
  std::pair<std::size_t, bool> insert(std::span<const Element> tuple) {
    if (auto existing = find(tuple)) {
      return {*existing, false};
    }
    if (2 * (count_ + 1) > slots_.size()) {
      rehash(slots_.size() * 2);
    }
    data_.insert(data_.end(), tuple.begin(), tuple.end());
    place(count_);
    return {count_++, true};
  }

 private:
  static constexpr std::size_t kEmpty = std::numeric_limits<std::size_t>::max();

  static std::size_t hash(std::span<const Element> tuple) {
    std::size_t h = 1469598103934665603ull;
    for (Element e : tuple) {
      h = (h ^ e) * 1099511628211ull;
    }
    return h ^ (h >> 29);
  }

  void place(std::size_t index) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t pos = hash(at(index)) & mask;
    while (slots_[pos] != kEmpty) {
      pos = (pos + 1) & mask;
    }
    slots_[pos] = index;
  }

  void rehash(std::size_t capacity) {
    slots_.assign(capacity, kEmpty);
    for (std::size_t i = 0; i < count_; ++i) {
      place(i);
    }
  }

  std::size_t width_;
  std::size_t count_ = 0;
  std::vector<Element> data_;
  std::vector<std::size_t> slots_;
};

/// Applies `symbol` coordinatewise: coordinate j is computed in
/// `coordinate_algebra[j]`. `args[i]` is the i-th argument tuple.
void apply_coordinatewise(std::span<const FiniteAlgebra* const> coordinate_algebra,
                          std::size_t symbol,
                          std::span<const std::span<const Element>> args,
                          std::span<Element> out);

}  // namespace unialg::detail
