#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "unialg/algebra.hpp"
#include "unialg/partition.hpp"

namespace unialg::testing {

inline Signature binary_signature(const std::string& name = "f") {
  return Signature({{name, 2}});
}

inline FiniteAlgebra binary_algebra(std::string name, std::size_t n, std::vector<Element> table,
                                    const std::string& symbol = "f") {
  return FiniteAlgebra(std::move(name), binary_signature(symbol), n, {std::move(table)});
}

inline FiniteAlgebra semilattice2() {
  return binary_algebra("semilattice2", 2, {0, 0, 0, 1});
}

inline FiniteAlgebra cyclic(std::size_t n) {
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      table[a * n + b] = static_cast<Element>((a + b) % n);
    }
  }
  return binary_algebra("z" + std::to_string(n), n, std::move(table));
}

inline FiniteAlgebra trivial(const std::string& symbol = "f") {
  return binary_algebra("trivial", 1, {0}, symbol);
}

/// The two-element algebra with one binary operation whose table, read as
/// bits f(0,0) f(0,1) f(1,0) f(1,1), is `code` least significant bit first.
inline FiniteAlgebra two_element(unsigned code) {
  std::vector<Element> table(4);
  for (unsigned i = 0; i < 4; ++i) {
    table[i] = (code >> i) & 1u;
  }
  return binary_algebra("b" + std::to_string(code), 2, std::move(table));
}

/// All 2^(n^2) tables on n elements would be too many beyond n = 2, so
/// random algebras are drawn from a seed.
template <class Rng>
FiniteAlgebra random_binary(std::size_t n, Rng& rng, const std::string& name) {
  std::vector<Element> table(n * n);
  for (auto& v : table) {
    v = static_cast<Element>(rng() % n);
  }
  return binary_algebra(name, n, std::move(table));
}

/// Independent free-algebra oracle: the set of value vectors of all k-ary
/// term operations, grown level by level (all operations on all pairs of
/// known vectors) until no new vector appears. Evaluates straight from the
/// tables with explicit loops.
inline std::set<std::vector<Element>> term_operation_vectors(const std::vector<FiniteAlgebra>& base,
                                                            std::size_t k) {
  std::vector<std::size_t> block;
  for (const auto& a : base) {
    std::size_t len = 1;
    for (std::size_t i = 0; i < k; ++i) {
      len *= a.size();
    }
    block.push_back(len);
  }
  std::set<std::vector<Element>> known;
  for (std::size_t v = 0; v < k; ++v) {
    std::vector<Element> vec;
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t t = 0; t < block[i]; ++t) {
        std::vector<std::size_t> digits(k);
        std::size_t rest = t;
        for (std::size_t d = k; d-- > 0;) {
          digits[d] = rest % base[i].size();
          rest /= base[i].size();
        }
        vec.push_back(static_cast<Element>(digits[v]));
      }
    }
    known.insert(vec);
  }
  const auto& sig = base[0].signature();
  while (true) {
    std::vector<std::vector<Element>> list(known.begin(), known.end());
    std::set<std::vector<Element>> next = known;
    for (std::size_t s = 0; s < sig.size(); ++s) {
      const std::size_t arity = sig[s].arity;
      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        std::vector<Element> out;
        std::size_t offset = 0;
        for (std::size_t i = 0; i < base.size(); ++i) {
          for (std::size_t t = 0; t < block[i]; ++t) {
            std::size_t code = 0;
            for (std::size_t j = 0; j < arity; ++j) {
              code = code * base[i].size() + list[idx[j]][offset + t];
            }
            out.push_back(base[i].tables()[s][code]);
          }
          offset += block[i];
        }
        next.insert(out);
        std::size_t pos = arity;
        while (pos > 0 && ++idx[pos - 1] == list.size()) {
          idx[--pos] = 0;
        }
        if (pos == 0) {
          break;
        }
      }
    }
    if (next.size() == known.size()) {
      return known;
    }
    known = std::move(next);
  }
}

/// Every partition of {0..n-1} (restricted growth strings).
inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::uint32_t> labels(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
    if (i == n) {
      out.push_back(Partition::from_canonical(labels));
      return;
    }
    for (std::uint32_t l = 0; l <= used && l <= i; ++l) {
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (n == 0) {
    return out;
  }
  labels[0] = 0;
  rec(1, 1);
  return out;
}

/// Brute-force compatibility test straight from the definition: all pairs
/// of componentwise related argument tuples.
inline bool compatible_by_definition(const FiniteAlgebra& a, const Partition& p) {
  const std::size_t n = a.size();
  for (std::size_t s = 0; s < a.signature().size(); ++s) {
    const std::size_t arity = a.signature()[s].arity;
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      total *= n;
    }
    std::vector<Element> x(arity), y(arity);
    for (std::size_t c1 = 0; c1 < total; ++c1) {
      decode_tuple(c1, n, x);
      for (std::size_t c2 = 0; c2 < total; ++c2) {
        decode_tuple(c2, n, y);
        bool related = true;
        for (std::size_t i = 0; i < arity; ++i) {
          related = related && p.related(x[i], y[i]);
        }
        if (related && !p.related(a.apply(s, x), a.apply(s, y))) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace unialg::testing
