#include "unialg/verify.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "unialg/congruence.hpp"
#include "unialg/constructions.hpp"
#include "unialg/homomorphism.hpp"

namespace unialg {

namespace {

constexpr std::size_t kMaxExamples = 5;
// Above this many pairs the axioms are read off the class structure.
constexpr std::size_t kMaxExplicitPairs = 5'000'000;

std::string describe(std::span<const std::uint32_t> labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += (i ? "," : "") + std::to_string(labels[i]);
  }
  return out + "]";
}

std::string describe(const Partition& p) { return describe(p.labels()); }

}  // namespace

void CheckResult::record(bool ok, const std::string& example) {
  ++checked;
  if (!ok) {
    ++failures;
    if (examples.size() < kMaxExamples) {
      examples.push_back(example);
    }
  }
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

CheckResult& VerificationReport::check(const std::string& name) {
  for (auto& c : checks) {
    if (c.name == name) {
      return c;
    }
  }
  checks.push_back(CheckResult{name, 0, 0, {}});
  return checks.back();
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

PointwiseReport verify_pointwise_uniformity(const FiniteAlgebra& a, std::size_t k,
                                            const Limits& limits) {
  PointwiseReport report;
  report.operation = "verify-pointwise";
  report.arity = k;
  const FreeAlgebra free = free_algebra(k, {a}, limits);
  report.free_size = free.size();
  const FiniteAlgebra& fa = free.algebra();

  const auto total = checked_power(a.size(), k, limits.max_elements);
  if (!total) {
    throw ResourceLimitError("too many " + std::to_string(k) + "-tuples");
  }
  std::vector<std::vector<Element>> tuples(*total, std::vector<Element>(k));
  std::vector<Partition> entourages;
  auto& is_congruence_check = report.check("entourage_is_congruence");
  auto& quotient_check = report.check("entourage_quotient_is_generated_subalgebra");
  for (std::size_t code = 0; code < *total; ++code) {
    decode_tuple(code, a.size(), tuples[code]);
    const auto labels = free.evaluate(a, tuples[code]);
    Partition u = Partition::from_labels(std::span<const Element>(labels));
    const std::string name = "a=" + describe(tuples[code]);
    is_congruence_check.record(is_congruence(fa, u), name);
    const auto sub = subuniverse_generated(a, tuples[code]).sorted();
    quotient_check.record(are_isomorphic(free_quotient(free, u), subalgebra(a, sub)).has_value(),
                          name);
    entourages.push_back(std::move(u));
  }

  auto meet_of = [&](const std::vector<std::size_t>& picked) {
    Partition m = Partition::full(free.size());
    for (std::size_t i : picked) {
      m = meet(m, entourages[i]);
    }
    return m;
  };
  auto& cover_check = report.check("congruence_contains_intersection");
  auto& subproduct_check = report.check("cover_matches_subproduct");
  for (const auto& theta : congruence_lattice(fa, limits)) {
    // Tuples whose evaluation factors through F/θ; their meet is θ exactly
    // when F/θ embeds in a power of A.
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < entourages.size(); ++i) {
      if (refines(theta, entourages[i])) {
        picked.push_back(i);
      }
    }
    Partition m = meet_of(picked);
    const bool exact = m == theta;
    if (!refines(m, theta)) {
      picked.resize(entourages.size());
      for (std::size_t i = 0; i < picked.size(); ++i) {
        picked[i] = i;
      }
      m = meet_of(picked);
    }
    const bool covered = refines(m, theta);
    cover_check.record(covered, "theta=" + describe(theta));
    if (!covered) {
      continue;
    }
    for (std::size_t i = picked.size(); i-- > 0;) {
      auto without = picked;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
      if (refines(meet_of(without), theta)) {
        picked = std::move(without);
      }
    }
    m = meet_of(picked);
    // Component construction: the columns of the chosen tuples generate a
    // subalgebra of A^m isomorphic to F/(∩U).
    const FiniteAlgebra lhs = free_quotient(free, m);
    if (picked.empty()) {
      subproduct_check.record(lhs.size() == 1, "theta=" + describe(theta));
    } else {
      std::vector<FiniteAlgebra> factors(picked.size(), a);
      std::vector<std::vector<Element>> columns(k, std::vector<Element>(picked.size()));
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < picked.size(); ++i) {
          columns[j][i] = tuples[picked[i]][j];
        }
      }
      const auto sub = subproduct_generated(factors, columns, limits);
      subproduct_check.record(are_isomorphic(lhs, sub.algebra).has_value(),
                              "theta=" + describe(theta));
    }
    PointwiseCover cover{theta, {}, exact};
    for (std::size_t i : picked) {
      cover.tuples.push_back(tuples[i]);
    }
    report.covers.push_back(std::move(cover));
  }
  return report;
}

namespace {

void check_axioms(const Entourage& e, const std::string& name, VerificationReport& report) {
  auto& diagonal = report.check("diagonal");
  auto& symmetry = report.check("symmetry");
  auto& triangle = report.check("triangle");
  bool ok = true;
  for (Element x = 0; x < e.carrier_size; ++x) {
    ok = ok && e.contains(x, x);
  }
  diagonal.record(ok, name);
  ok = std::all_of(e.pairs.begin(), e.pairs.end(),
                   [&](const auto& p) { return e.contains(p.second, p.first); });
  symmetry.record(ok, name);
  ok = true;
  for (const auto& [x, y] : e.pairs) {
    auto it = std::lower_bound(e.pairs.begin(), e.pairs.end(), std::make_pair(y, Element{0}));
    for (; ok && it != e.pairs.end() && it->first == y; ++it) {
      ok = e.contains(x, it->second);
    }
    if (!ok) {
      break;
    }
  }
  triangle.record(ok, name);
}

}  // namespace

VerificationReport verify_uniformity_axioms(const CongruenceFilter& filter) {
  VerificationReport report;
  report.operation = "verify-uniformity-axioms";
  bool structural = false;
  for (std::size_t k = 1; k <= filter.arity_bound(); ++k) {
    for (const auto& theta : filter.basis(k)) {
      const std::string name = "k=" + std::to_string(k) + " theta=" + describe(theta);
      std::size_t pairs = 0;
      for (const auto& cls : theta.classes()) {
        pairs += cls.size() * cls.size();
      }
      if (pairs <= kMaxExplicitPairs) {
        check_axioms(Entourage::from_partition(k, theta), name, report);
        continue;
      }
      // Relation given by labels: x ~ y iff label(x) = label(y).
      structural = true;
      const auto& labels = theta.labels();
      bool ok = std::all_of(labels.begin(), labels.end(),
                            [&](std::uint32_t l) { return l < theta.num_classes(); });
      report.check("diagonal").record(ok, name);
      report.check("symmetry").record(ok, name);
      report.check("triangle").record(ok, name);
    }
  }
  if (structural) {
    report.notes.push_back("large basis members checked through their class labels");
  }
  report.check("diagonal");
  report.check("symmetry");
  report.check("triangle");
  return report;
}

VerificationReport verify_uniformity_axioms(const std::vector<Entourage>& entourages) {
  VerificationReport report;
  report.operation = "verify-uniformity-axioms";
  for (std::size_t i = 0; i < entourages.size(); ++i) {
    check_axioms(entourages[i], "entourage " + std::to_string(i), report);
  }
  report.check("diagonal");
  report.check("symmetry");
  report.check("triangle");
  return report;
}

namespace {

using Bits = std::vector<bool>;

class Correspondence {
 public:
  Correspondence(const std::vector<FiniteAlgebra>& base, const CorrespondenceOptions& options,
                 CorrespondenceReport& report)
      : base_(base), options_(options), report_(report), rng_(options.seed) {}

  void run() {
    build_free();
    if (arity_ == 0) {
      report_.notes.push_back("F_1 exceeds the size bound; nothing to check");
      return;
    }
    build_universe();
    build_congruences();
    build_embeddings();
    build_substitutions();
    build_separation();
    sample_classes();
    sample_families();
  }

 private:
  void build_free() {
    for (std::size_t k = 1; k <= options_.arity_bound; ++k) {
      FreeAlgebra f = free_algebra(k, base_, options_.limits);
      report_.free_sizes.push_back(f.size());
      if (f.size() > options_.size_bound) {
        report_.notes.push_back("arities from " + std::to_string(k) +
                                " skipped: F_k exceeds the size bound");
        break;
      }
      free_.push_back(std::move(f));
    }
    arity_ = free_.size();
    tuple_bound_ = std::min(arity_, options_.tuple_bound);
  }

  void build_universe() {
    std::vector<FiniteAlgebra> seeds = base_;
    for (const auto& f : free_) {
      seeds.push_back(f.algebra().renamed("F" + std::to_string(f.arity())));
    }
    universe_ = close_class(ClassOfAlgebras(seeds), ClosureOps{true, true, true},
                            options_.size_bound, options_.limits);
    report_.universe_size = universe_.size();
    report_.universe_truncated = universe_.truncated();
  }

  void build_congruences() {
    auto& contains = report_.check("universe_contains_quotients");
    in_g_.assign(universe_.size(), false);
    for (const auto& f : free_) {
      auto lattice = congruence_lattice(f.algebra(), options_.limits);
      std::unordered_map<Partition, std::size_t, PartitionHash> index;
      std::vector<std::size_t> q;
      for (std::size_t i = 0; i < lattice.size(); ++i) {
        index.emplace(lattice[i], i);
        const auto at = universe_.find(free_quotient(f, lattice[i]));
        contains.record(at.has_value(),
                        "k=" + std::to_string(f.arity()) + " theta=" + describe(lattice[i]));
        q.push_back(at.value_or(0));
        if (at) {
          in_g_[*at] = true;
        }
      }
      con_.push_back(std::move(lattice));
      con_index_.push_back(std::move(index));
      q_.push_back(std::move(q));
    }
    auto& generated = report_.check("generated_members");
    for (std::size_t j = 0; j < universe_.size(); ++j) {
      const bool small = minimal_generating_set(universe_[j]).size() <= arity_;
      generated.record(small == in_g_[j], universe_[j].name());
      report_.generated_size += in_g_[j] ? 1 : 0;
    }
  }

  void build_embeddings() {
    sub_of_.resize(universe_.size());
    for (std::size_t j = 0; j < universe_.size(); ++j) {
      std::set<std::size_t> subs;
      for (const auto& s : all_subuniverses(universe_[j])) {
        if (auto at = universe_.find(subalgebra(universe_[j], s))) {
          subs.insert(*at);
        }
      }
      sub_of_[j].assign(subs.begin(), subs.end());
    }
  }

  // inv_[k][θ][m] lists the index of θ/t̄ in con(F_m) for every t̄ ∈ F_k^m.
  void build_substitutions() {
    inv_.resize(arity_);
    for (std::size_t k = 0; k < arity_; ++k) {
      inv_[k].resize(con_[k].size());
      for (std::size_t m = 1; m <= tuple_bound_; ++m) {
        const auto count = checked_power(free_[k].size(), m, options_.limits.max_elements);
        if (!count) {
          throw ResourceLimitError("too many substitution tuples");
        }
        std::vector<Element> t_bar(m);
        for (std::size_t i = 0; i < con_[k].size(); ++i) {
          std::vector<std::size_t> row;
          for (std::size_t code = 0; code < *count; ++code) {
            decode_tuple(code, free_[k].size(), t_bar);
            const Partition psi = inverse_substitution(free_[k], con_[k][i], free_[m - 1], t_bar);
            row.push_back(con_index_[m - 1].at(psi));
          }
          inv_[k][i].push_back(std::move(row));
        }
      }
    }
  }

  // sep_[d][c]: intersection of the kernels of all homomorphisms U_d → U_c,
  // for generated d.
  void build_separation() {
    sep_.resize(universe_.size());
    for (std::size_t d = 0; d < universe_.size(); ++d) {
      if (!in_g_[d]) {
        continue;
      }
      for (std::size_t c = 0; c < universe_.size(); ++c) {
        Partition acc = Partition::full(universe_[d].size());
        for_each_homomorphism(universe_[d], universe_[c], [&](const std::vector<Element>& map) {
          acc = meet(acc, Partition::from_labels(std::span<const Element>(map)));
          return !acc.is_identity();
        });
        sep_[d].push_back(std::move(acc));
      }
    }
  }

  Bits downset(const Bits& seeds) const {
    Bits out(universe_.size(), false);
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      if (seeds[j]) {
        for (std::size_t s : sub_of_[j]) {
          out[s] = true;
        }
      }
    }
    return out;
  }

  Bits separated_by(const Bits& k) const {
    Bits out(universe_.size(), false);
    for (std::size_t d = 0; d < universe_.size(); ++d) {
      if (!in_g_[d]) {
        continue;
      }
      Partition acc = Partition::full(universe_[d].size());
      for (std::size_t c = 0; c < universe_.size() && !acc.is_identity(); ++c) {
        if (k[c]) {
          acc = meet(acc, sep_[d][c]);
        }
      }
      out[d] = acc.is_identity();
    }
    return out;
  }

  std::string class_name(const Bits& k) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j]) {
        out += (first ? "" : ",") + universe_[j].name();
        first = false;
      }
    }
    return out + "}";
  }

  void sample_classes() {
    std::set<Bits> classes;
    const std::size_t n = universe_.size();
    auto add = [&](const Bits& k) {
      if (classes.size() < options_.max_samples) {
        classes.insert(k);
      }
    };
    add(Bits(n, true));
    std::vector<Bits> principal;
    for (std::size_t j = 0; j < n; ++j) {
      Bits seed(n, false);
      seed[j] = true;
      principal.push_back(downset(seed));
      add(principal.back());
    }
    for (const auto& p : principal) {
      Bits with_products = separated_by(p);
      for (std::size_t j = 0; j < n; ++j) {
        with_products[j] = with_products[j] || p[j];
      }
      add(downset(with_products));
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t tries = 0; tries < 4 * options_.max_samples; ++tries) {
      if (classes.size() >= options_.max_samples) {
        break;
      }
      Bits seed(n, false);
      const std::size_t count = 2 + tries % 3;
      for (std::size_t c = 0; c < count; ++c) {
        seed[pick(rng_)] = true;
      }
      add(downset(seed));
    }
    report_.classes_sampled = classes.size();
    std::size_t library_left = options_.library_samples;
    for (const auto& k : classes) {
      check_class(k, library_left > 0);
      if (library_left > 0) {
        --library_left;
      }
    }
  }

  std::vector<std::vector<std::size_t>> family_of(const Bits& k) const {
    std::vector<std::vector<std::size_t>> fam(arity_);
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t i = 0; i < con_[a].size(); ++i) {
        if (k[q_[a][i]]) {
          fam[a].push_back(i);
        }
      }
    }
    return fam;
  }

  Bits class_of(const std::vector<std::vector<std::size_t>>& fam) const {
    Bits out(universe_.size(), false);
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t i : fam[a]) {
        out[q_[a][i]] = true;
      }
    }
    return out;
  }

  bool substitution_closed(const std::vector<std::vector<std::size_t>>& fam) const {
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t i : fam[a]) {
        for (std::size_t m = 0; m < tuple_bound_; ++m) {
          for (std::size_t psi : inv_[a][i][m]) {
            if (!std::binary_search(fam[m].begin(), fam[m].end(), psi)) {
              return false;
            }
          }
        }
      }
    }
    return true;
  }

  bool meet_closed(const std::vector<std::vector<std::size_t>>& fam) const {
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t x = 0; x < fam[a].size(); ++x) {
        for (std::size_t y = x + 1; y < fam[a].size(); ++y) {
          const Partition m = meet(con_[a][fam[a][x]], con_[a][fam[a][y]]);
          const std::size_t at = con_index_[a].at(m);
          if (!std::binary_search(fam[a].begin(), fam[a].end(), at)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  void check_class(const Bits& k, bool with_library) {
    const std::string name = class_name(k);
    const auto fam = family_of(k);
    Bits expected = k;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      expected[j] = expected[j] && in_g_[j];
    }
    report_.check("roundtrip").record(class_of(fam) == expected, name);
    report_.check("substitution").record(substitution_closed(fam), name);

    const bool closed = meet_closed(fam);
    const Bits separated = separated_by(k);
    bool contains_separated = true;
    for (std::size_t d = 0; d < k.size(); ++d) {
      contains_separated = contains_separated && (!separated[d] || k[d]);
    }
    report_.check("product").record(closed == contains_separated, name);
    meet_closed_classes_ += closed ? 1 : 0;

    if (with_library) {
      std::vector<FiniteAlgebra> members;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) {
          members.push_back(universe_[j]);
        }
      }
      const auto lib = congruence_family(ClassOfAlgebras(members), base_, arity_, options_.limits);
      bool same = true;
      for (std::size_t a = 0; a < arity_; ++a) {
        std::vector<std::size_t> got;
        for (const auto& p : lib.members[a]) {
          got.push_back(con_index_[a].at(p));
        }
        std::sort(got.begin(), got.end());
        same = same && got == fam[a];
      }
      report_.check("library_family").record(same, name);
    }
  }

  void close_family(std::vector<std::vector<std::size_t>>& fam) const {
    std::vector<std::set<std::size_t>> sets(arity_);
    std::vector<std::pair<std::size_t, std::size_t>> work;
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t i : fam[a]) {
        if (sets[a].insert(i).second) {
          work.emplace_back(a, i);
        }
      }
    }
    while (!work.empty()) {
      const auto [a, i] = work.back();
      work.pop_back();
      for (std::size_t m = 0; m < tuple_bound_; ++m) {
        for (std::size_t psi : inv_[a][i][m]) {
          if (sets[m].insert(psi).second) {
            work.emplace_back(m, psi);
          }
        }
      }
    }
    for (std::size_t a = 0; a < arity_; ++a) {
      fam[a].assign(sets[a].begin(), sets[a].end());
    }
  }

  void sample_families() {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t a = 0; a < arity_; ++a) {
      for (std::size_t i = 0; i < con_[a].size(); ++i) {
        all.emplace_back(a, i);
      }
    }
    std::set<std::vector<std::vector<std::size_t>>> families;
    auto add = [&](const std::vector<std::pair<std::size_t, std::size_t>>& seeds) {
      std::vector<std::vector<std::size_t>> fam(arity_);
      for (const auto& [a, i] : seeds) {
        fam[a].push_back(i);
      }
      close_family(fam);
      families.insert(std::move(fam));
    };
    for (const auto& s : all) {
      if (families.size() >= options_.max_samples) {
        break;
      }
      add({s});
    }
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (std::size_t tries = 0; tries < 4 * options_.max_samples; ++tries) {
      if (families.size() >= options_.max_samples) {
        break;
      }
      add({all[pick(rng_)], all[pick(rng_)]});
    }
    report_.families_sampled = families.size();
    for (const auto& fam : families) {
      const Bits k = class_of(fam);
      const std::string name = class_name(k);
      report_.check("family_roundtrip").record(family_of(k) == fam, name);
      bool sf_closed = true;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) {
          for (std::size_t s : sub_of_[j]) {
            sf_closed = sf_closed && (!in_g_[s] || k[s]);
          }
        }
      }
      report_.check("family_class").record(sf_closed, name);
    }
    report_.notes.push_back(std::to_string(meet_closed_classes_) +
                            " sampled classes have meet-closed families");
  }

  const std::vector<FiniteAlgebra>& base_;
  const CorrespondenceOptions& options_;
  CorrespondenceReport& report_;
  std::mt19937_64 rng_;

  std::vector<FreeAlgebra> free_;
  std::size_t arity_ = 0;
  std::size_t tuple_bound_ = 0;
  ClassOfAlgebras universe_;
  Bits in_g_;
  std::vector<std::vector<Partition>> con_;
  std::vector<std::unordered_map<Partition, std::size_t, PartitionHash>> con_index_;
  std::vector<std::vector<std::size_t>> q_;
  std::vector<std::vector<std::size_t>> sub_of_;
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> inv_;
  std::vector<std::vector<Partition>> sep_;
  std::size_t meet_closed_classes_ = 0;
};

}  // namespace

CorrespondenceReport verify_correspondence(const std::vector<FiniteAlgebra>& base,
                                           const CorrespondenceOptions& options) {
  if (base.empty()) {
    throw InvalidInputError("correspondence needs at least one base algebra");
  }
  CorrespondenceReport report;
  report.operation = "verify-correspondence";
  Correspondence(base, options, report).run();
  return report;
}

}  // namespace unialg
