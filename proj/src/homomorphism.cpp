#include "unialg/homomorphism.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "unialg/constructions.hpp"

namespace unialg {

namespace {

constexpr std::int64_t kUnmapped = -1;

// Per-element isomorphism invariants: for each symbol, whether the element
// is idempotent, how often it occurs in the table, and how often its
// diagonal image occurs.
std::vector<std::vector<std::size_t>> element_invariants(const FiniteAlgebra& algebra) {
  const std::size_t n = algebra.size();
  std::vector<std::vector<std::size_t>> inv(n);
  for (std::size_t s = 0; s < algebra.signature().size(); ++s) {
    const std::size_t arity = algebra.signature()[s].arity;
    std::vector<std::size_t> occurrences(n, 0);
    for (Element v : algebra.table(s)) {
      ++occurrences[v];
    }
    std::vector<Element> diag(arity);
    for (std::size_t x = 0; x < n; ++x) {
      std::fill(diag.begin(), diag.end(), static_cast<Element>(x));
      const Element d = algebra.apply(s, diag);
      inv[x].push_back(d == x ? 1 : 0);
      inv[x].push_back(occurrences[x]);
      inv[x].push_back(occurrences[d]);
    }
  }
  return inv;
}

struct SearchOptions {
  bool injective = false;
  bool surjective = false;
};

class HomomorphismSearch {
 public:
  HomomorphismSearch(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     SearchOptions options,
                     const std::function<bool(const std::vector<Element>&)>& visit)
      : source_(source), target_(target), options_(options), visit_(visit) {
    generators_ = minimal_generating_set(source);
    if (options_.injective) {
      source_inv_ = element_invariants(source);
      target_inv_ = element_invariants(target);
    }
  }

  void run() {
    std::vector<std::int64_t> map(source_.size(), kUnmapped);
    std::vector<bool> used(target_.size(), false);
    std::vector<Element> known;
    search(0, map, used, known);
  }

 private:
  // Returns false once the visitor asked to stop.
  bool search(std::size_t i, std::vector<std::int64_t>& map, std::vector<bool>& used,
              std::vector<Element>& known) {
    if (i == generators_.size()) {
      std::vector<Element> total(map.size());
      for (std::size_t x = 0; x < map.size(); ++x) {
        total[x] = static_cast<Element>(map[x]);
      }
      if (options_.surjective) {
        std::vector<bool> hit(target_.size(), false);
        std::size_t count = 0;
        for (Element y : total) {
          if (!hit[y]) {
            hit[y] = true;
            ++count;
          }
        }
        if (count != target_.size()) {
          return true;
        }
      }
      return visit_(total);
    }
    const Element g = generators_[i];
    if (map[g] != kUnmapped) {
      return search(i + 1, map, used, known);
    }
    for (Element y = 0; y < target_.size(); ++y) {
      if (options_.injective && (used[y] || source_inv_[g] != target_inv_[y])) {
        continue;
      }
      auto next_map = map;
      auto next_used = used;
      auto next_known = known;
      if (!assign(g, y, next_map, next_used, next_known)) {
        continue;
      }
      if (!propagate(next_map, next_used, next_known)) {
        continue;
      }
      if (!search(i + 1, next_map, next_used, next_known)) {
        return false;
      }
    }
    return true;
  }

  bool assign(Element x, Element y, std::vector<std::int64_t>& map, std::vector<bool>& used,
              std::vector<Element>& known) const {
    if (map[x] != kUnmapped) {
      return map[x] == y;
    }
    if (options_.injective) {
      if (used[y] || source_inv_[x] != target_inv_[y]) {
        return false;
      }
      used[y] = true;
    }
    map[x] = y;
    known.push_back(x);
    return true;
  }

  // Extends the map over the subuniverse generated by the mapped elements,
  // checking the homomorphism law on every tuple of mapped elements.
  bool propagate(std::vector<std::int64_t>& map, std::vector<bool>& used,
                 std::vector<Element>& known) const {
    const auto& signature = source_.signature();
    std::vector<Element> args;
    std::vector<Element> images;
    std::vector<std::size_t> idx;
    bool changed = true;
    while (changed) {
      changed = false;
      const std::size_t m = known.size();
      for (std::size_t s = 0; s < signature.size(); ++s) {
        const std::size_t arity = signature[s].arity;
        args.assign(arity, 0);
        images.assign(arity, 0);
        idx.assign(arity, 0);
        while (true) {
          for (std::size_t j = 0; j < arity; ++j) {
            args[j] = known[idx[j]];
            images[j] = static_cast<Element>(map[args[j]]);
          }
          const Element x = source_.apply(s, args);
          const Element y = target_.apply(s, images);
          if (map[x] == kUnmapped) {
            if (!assign(x, y, map, used, known)) {
              return false;
            }
            changed = true;
          } else if (map[x] != y) {
            return false;
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
    return true;
  }

  const FiniteAlgebra& source_;
  const FiniteAlgebra& target_;
  SearchOptions options_;
  const std::function<bool(const std::vector<Element>&)>& visit_;
  std::vector<Element> generators_;
  std::vector<std::vector<std::size_t>> source_inv_;
  std::vector<std::vector<std::size_t>> target_inv_;
};

}  // namespace

Homomorphism::Homomorphism(FiniteAlgebra source, FiniteAlgebra target, std::vector<Element> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  require_same_signature(source_, target_);
  if (map_.size() != source_.size()) {
    throw InvalidInputError("homomorphism map has the wrong length");
  }
  for (Element y : map_) {
    if (y >= target_.size()) {
      throw InvalidInputError("homomorphism map entry out of range");
    }
  }
  if (auto violation = find_homomorphism_violation(source_, target_, map_)) {
    throw InvalidInputError("map is not a homomorphism: fails on operation '" +
                            source_.signature()[violation->symbol].name + "'");
  }
}

bool Homomorphism::is_surjective() const {
  std::vector<bool> hit(target_.size(), false);
  for (Element y : map_) {
    hit[y] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool Homomorphism::is_injective() const {
  std::vector<bool> hit(target_.size(), false);
  for (Element y : map_) {
    if (hit[y]) {
      return false;
    }
    hit[y] = true;
  }
  return true;
}

Partition Homomorphism::kernel() const { return Partition::from_labels(std::span(map_)); }

std::optional<HomomorphismViolation> find_homomorphism_violation(
    const FiniteAlgebra& source, const FiniteAlgebra& target, std::span<const Element> map) {
  const auto& signature = source.signature();
  const std::size_t n = source.size();
  std::vector<Element> args;
  std::vector<Element> images;
  for (std::size_t s = 0; s < signature.size(); ++s) {
    const std::size_t arity = signature[s].arity;
    args.assign(arity, 0);
    images.assign(arity, 0);
    const auto table = source.table(s);
    for (std::size_t code = 0; code < table.size(); ++code) {
      decode_tuple(code, n, args);
      for (std::size_t i = 0; i < arity; ++i) {
        images[i] = map[args[i]];
      }
      if (map[table[code]] != target.apply(s, images)) {
        return HomomorphismViolation{s, args};
      }
    }
  }
  return std::nullopt;
}

std::vector<Element> minimal_generating_set(const FiniteAlgebra& algebra) {
  const std::size_t n = algebra.size();
  auto generates = [&](std::span<const Element> gens) {
    const auto in = closure_of(algebra, gens);
    return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
  };
  // Exhaustive search by increasing size while the number of closures stays
  // within budget.
  constexpr std::size_t kBudget = 20000;
  std::size_t spent = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<Element> combo(r);
    for (std::size_t i = 0; i < r; ++i) {
      combo[i] = static_cast<Element>(i);
    }
    while (true) {
      if (++spent > kBudget) {
        goto greedy;
      }
      if (generates(combo)) {
        return combo;
      }
      std::size_t i = r;
      while (i > 0 && combo[i - 1] == n - r + i - 1) {
        --i;
      }
      if (i == 0) {
        break;
      }
      ++combo[i - 1];
      for (std::size_t j = i; j < r; ++j) {
        combo[j] = combo[j - 1] + 1;
      }
    }
  }
greedy:
  std::vector<Element> gens;
  std::vector<bool> in(n, false);
  for (Element x = 0; x < n; ++x) {
    if (!in[x]) {
      gens.push_back(x);
      in = closure_of(algebra, gens);
    }
  }
  for (std::size_t i = gens.size(); i-- > 0;) {
    auto without = gens;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (!without.empty() && generates(without)) {
      gens = std::move(without);
    }
  }
  return gens;
}

void for_each_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                           const std::function<bool(const std::vector<Element>&)>& visit) {
  require_same_signature(source, target);
  HomomorphismSearch(source, target, SearchOptions{}, visit).run();
}

std::optional<Homomorphism> find_surjective_homomorphism(const FiniteAlgebra& source,
                                                         const FiniteAlgebra& target) {
  require_same_signature(source, target);
  if (target.size() > source.size()) {
    return std::nullopt;
  }
  std::optional<std::vector<Element>> found;
  std::function<bool(const std::vector<Element>&)> visit = [&](const std::vector<Element>& m) {
    found = m;
    return false;
  };
  HomomorphismSearch(source, target, SearchOptions{false, true}, visit).run();
  if (!found) {
    return std::nullopt;
  }
  return Homomorphism(source, target, std::move(*found));
}

std::optional<Homomorphism> are_isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  require_same_signature(a, b);
  if (a.size() != b.size()) {
    return std::nullopt;
  }
  if (isomorphism_invariant(a) != isomorphism_invariant(b)) {
    return std::nullopt;
  }
  std::optional<std::vector<Element>> found;
  std::function<bool(const std::vector<Element>&)> visit = [&](const std::vector<Element>& m) {
    found = m;
    return false;
  };
  HomomorphismSearch(a, b, SearchOptions{true, true}, visit).run();
  if (!found) {
    return std::nullopt;
  }
  return Homomorphism(a, b, std::move(*found));
}

std::vector<std::size_t> isomorphism_invariant(const FiniteAlgebra& algebra) {
  std::vector<std::size_t> out{algebra.size()};
  for (const auto& symbol : algebra.signature()) {
    out.push_back(symbol.arity);
  }
  auto inv = element_invariants(algebra);
  std::sort(inv.begin(), inv.end());
  for (const auto& v : inv) {
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::pair<std::size_t, bool> IsomorphismClasses::add(const FiniteAlgebra& algebra) {
  auto inv = isomorphism_invariant(algebra);
  for (std::size_t i = 0; i < representatives_.size(); ++i) {
    if (invariants_[i] != inv) {
      continue;
    }
    if (are_isomorphic(algebra, representatives_[i])) {
      if (canonical_less(algebra, representatives_[i])) {
        representatives_[i] = algebra;
      }
      return {i, false};
    }
  }
  representatives_.push_back(algebra);
  invariants_.push_back(std::move(inv));
  return {representatives_.size() - 1, true};
}

std::optional<std::size_t> IsomorphismClasses::find(const FiniteAlgebra& algebra) const {
  auto inv = isomorphism_invariant(algebra);
  for (std::size_t i = 0; i < representatives_.size(); ++i) {
    if (invariants_[i] == inv && are_isomorphic(algebra, representatives_[i])) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace unialg
