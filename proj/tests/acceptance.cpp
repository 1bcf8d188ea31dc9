// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_cases.hpp"
#include "support.hpp"
#include "unialg/cli.hpp"
#include "unialg/congruence.hpp"
#include "unialg/constructions.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/homomorphism.hpp"
#include "unialg/io.hpp"
#include "unialg/pseudovariety.hpp"
#include "unialg/verify.hpp"

namespace {

using namespace unialg;
using namespace unialg::testing;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;  // 0: no runtime requirement
  std::function<Outcome()> run;
};

// Independent term evaluator, straight from the tables.
Element eval(const FiniteAlgebra& a, const Term& t, const std::vector<Element>& env) {
  if (t.is_variable()) {
    return env[t.variable_index() - 1];
  }
  std::size_t code = 0;
  for (const auto& c : t.children()) {
    code = code * a.size() + eval(a, c, env);
  }
  return a.tables()[t.symbol()][code];
}

// Every assignment of k variables into a.
void for_each_assignment(std::size_t n, std::size_t k,
                         const std::function<void(const std::vector<Element>&)>& visit) {
  std::vector<Element> env(k, 0);
  while (true) {
    visit(env);
    std::size_t pos = k;
    while (pos > 0 && ++env[pos - 1] == n) {
      env[--pos] = 0;
    }
    if (pos == 0) {
      return;
    }
  }
}

// ---------------------------------------------------------------------------

Outcome free_sizes() {
  struct Row {
    FiniteAlgebra base;
    std::size_t k;
    std::size_t expected;
  };
  const std::vector<Row> rows = {{semilattice2(), 1, 1}, {semilattice2(), 2, 3},
                                 {semilattice2(), 3, 7}, {cyclic(2), 1, 2},
                                 {cyclic(2), 2, 4}};
  Outcome o;
  std::ostringstream d;
  for (const auto& r : rows) {
    const auto lib = free_algebra(r.k, {r.base}).size();
    const auto oracle = term_operation_vectors({r.base}, r.k).size();
    d << r.base.name() << " k=" << r.k << ": " << lib << " ";
    if (lib != r.expected || oracle != r.expected) {
      o.pass = false;
      d << "(oracle " << oracle << ", expected " << r.expected << ") ";
    }
  }
  o.detail = d.str();
  return o;
}

Outcome kernel_identities() {
  std::size_t substitutions = 0;
  std::size_t products = 0;
  std::size_t mismatches = 0;
  for (const auto& base : {semilattice2(), cyclic(2)}) {
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto fk = free_algebra(k, {base});
      const auto& fka = fk.algebra();
      const auto thetas = congruence_lattice(fka);
      for (const auto& theta : thetas) {
        const auto q = quotient_algebra(fka, theta);
        for (std::size_t m = 1; m <= 2; ++m) {
          const auto fm = free_algebra(m, {base});
          for_each_assignment(fk.size(), m, [&](const std::vector<Element>& t_bar) {
            // The composition F_m → F_k → F_k/θ, written out element by element.
            std::vector<Element> h(fm.size());
            for (Element s = 0; s < fm.size(); ++s) {
              h[s] = q.map(clone_compose(fm, s, fk, t_bar).element);
            }
            const bool hom = !find_homomorphism_violation(fm.algebra(), q.algebra, h);
            const auto expected = Partition::from_labels(std::span<const Element>(h));
            ++substitutions;
            if (!hom || inverse_substitution(fk, theta, fm, t_bar) != expected ||
                inverse_substitution_kernel(fk, theta, fm, t_bar) != expected) {
              ++mismatches;
            }
          });
        }
        for (const auto& psi : thetas) {
          const auto r = quotient_algebra(fka, psi);
          const std::vector<FiniteAlgebra> factors{q.algebra, r.algebra};
          const auto product = direct_product(factors);
          std::vector<Element> h(fk.size());
          for (Element f = 0; f < fk.size(); ++f) {
            const std::vector<Element> pair{q.map(f), r.map(f)};
            h[f] = static_cast<Element>(encode_product_element(factors, pair));
          }
          ++products;
          if (find_homomorphism_violation(fka, product, h) ||
              meet(theta, psi) != Partition::from_labels(std::span<const Element>(h))) {
            ++mismatches;
          }
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(substitutions) + " substitutions, " +
                               std::to_string(products) + " products, " +
                               std::to_string(mismatches) + " mismatches"};
}

// Depth-bounded identity search over two variables on pairs of value
// vectors (A part, B part). A conflict (equal on A, different on B) refutes
// membership; stabilization without conflict means every 2-variable
// identity of A holds in B, which decides membership for 2-element B.
enum class Oracle { Member, NonMember, Inconclusive };

Oracle identity_search(const FiniteAlgebra& a, const FiniteAlgebra& b, std::size_t depth) {
  using Vec = std::pair<std::vector<Element>, std::vector<Element>>;
  auto projection = [](const FiniteAlgebra& x, std::size_t v) {
    std::vector<Element> out;
    for_each_assignment(x.size(), 2, [&](const std::vector<Element>& env) { out.push_back(env[v]); });
    return out;
  };
  std::set<Vec> level{{projection(a, 0), projection(b, 0)}, {projection(a, 1), projection(b, 1)}};
  auto apply = [](const FiniteAlgebra& x, const std::vector<Element>& l,
                  const std::vector<Element>& r) {
    std::vector<Element> out(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
      out[i] = x.tables()[0][l[i] * x.size() + r[i]];
    }
    return out;
  };
  bool stable = false;
  for (std::size_t d = 0; d < depth && !stable; ++d) {
    std::set<Vec> next = level;
    for (const auto& l : level) {
      for (const auto& r : level) {
        next.insert({apply(a, l.first, r.first), apply(b, l.second, r.second)});
      }
    }
    stable = next.size() == level.size();
    level = std::move(next);
  }
  std::map<std::vector<Element>, std::vector<Element>> seen;
  for (const auto& [va, vb] : level) {
    auto [it, fresh] = seen.emplace(va, vb);
    if (!fresh && it->second != vb) {
      return Oracle::NonMember;
    }
  }
  return stable ? Oracle::Member : Oracle::Inconclusive;
}

std::string recheck_negative(const FiniteAlgebra& b, const FiniteAlgebra& a,
                             const NegativeCertificate& cert) {
  const std::size_t k = cert.tuple.size();
  bool equal_on_a = true;
  for_each_assignment(a.size(), k, [&](const std::vector<Element>& env) {
    equal_on_a = equal_on_a && eval(a, cert.lhs, env) == eval(a, cert.rhs, env);
  });
  if (!equal_on_a) {
    return "identity fails in the generator";
  }
  if (eval(b, cert.lhs, cert.tuple) == eval(b, cert.rhs, cert.tuple)) {
    return "identity holds in the candidate at the tuple";
  }
  return {};
}

std::string recheck_positive(const FiniteAlgebra& b, const PositiveCertificate& cert) {
  const auto& q = cert.quotient;
  const auto& h = cert.hom.map();
  if (h.size() != q.size()) {
    return "map has the wrong domain";
  }
  std::vector<bool> hit(b.size(), false);
  for (auto v : h) {
    hit[v] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
    return "map is not onto";
  }
  for (Element x = 0; x < q.size(); ++x) {
    for (Element y = 0; y < q.size(); ++y) {
      if (h[q.tables()[0][x * q.size() + y]] != b.tables()[0][h[x] * b.size() + h[y]]) {
        return "map is not a homomorphism";
      }
    }
  }
  return {};
}

Outcome membership_matrix() {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t bad = 0;
  std::size_t conclusive = 0;
  std::size_t disagreements = 0;
  std::ostringstream d;
  for (unsigned i = 0; i < 16; ++i) {
    for (unsigned j = 0; j < 16; ++j) {
      const auto a = two_element(i);
      const auto b = two_element(j);
      const auto r = member(b, {a});
      std::string problem = verify_certificate(b, {a}, r.certificate);
      if (const auto* p = std::get_if<PositiveCertificate>(&r.certificate)) {
        ++positives;
        if (problem.empty()) {
          problem = recheck_positive(b, *p);
        }
      } else if (const auto* n = std::get_if<NegativeCertificate>(&r.certificate)) {
        ++negatives;
        if (problem.empty()) {
          problem = recheck_negative(b, a, *n);
        }
      } else {
        problem = "unexpected certificate kind";
      }
      if (!problem.empty()) {
        ++bad;
        d << a.name() << "/" << b.name() << ": " << problem << "; ";
      }
      const auto oracle = identity_search(a, b, 4);
      if (oracle != Oracle::Inconclusive) {
        ++conclusive;
        if ((oracle == Oracle::Member) != r.member) {
          ++disagreements;
          d << a.name() << "/" << b.name() << " disagrees with the oracle; ";
        }
      }
    }
  }
  d << positives << " positive, " << negatives << " negative, " << bad
    << " failed re-verification, oracle conclusive on " << conclusive << "/256 with "
    << disagreements << " disagreements";
  return {bad == 0 && disagreements == 0, d.str()};
}

// Filters collected for the axiom check.
std::vector<CongruenceFilter> filters_seen;
std::vector<std::vector<Entourage>> entourage_sets_seen;

Outcome uniform_birkhoff() {
  std::mt19937 rng(20240601);
  std::size_t agree = 0;
  std::size_t members = 0;
  std::ostringstream d;
  constexpr std::size_t kPairs = 20;
  for (std::size_t i = 0; i < kPairs; ++i) {
    const auto a = random_binary(1 + rng() % 3, rng, "A" + std::to_string(i));
    const auto closure =
        close_class(ClassOfAlgebras({a}), ClosureOps{true, true, true}, 9);
    // Every other pair draws B from the closure of A, so both verdicts occur.
    FiniteAlgebra b = random_binary(1 + rng() % 3, rng, "B" + std::to_string(i));
    if (i % 2 == 1) {
      std::vector<FiniteAlgebra> small;
      for (const auto& m : closure.representatives()) {
        if (m.size() <= 3) {
          small.push_back(m);
        }
      }
      b = small[rng() % small.size()];
    }
    const std::size_t k = std::max<std::size_t>(1, minimal_generating_set(b).size());
    const auto by_generators = member(b, {a});
    const auto filter = filter_from_class(closure, {a}, k);
    const auto by_filter = member(b, filter);
    const bool certified = verify_certificate(b, {a}, by_filter.certificate, &filter).empty();
    filters_seen.push_back(filter);
    members += by_generators.member;
    if (by_generators.member == by_filter.member && certified) {
      ++agree;
    } else {
      d << "pair " << i << " disagrees; ";
    }
  }
  d << agree << "/" << kPairs << " agree (" << members << " members)";
  return {agree == kPairs, d.str()};
}

Outcome pointwise() {
  std::ostringstream d;
  bool pass = true;
  for (const auto& a : {semilattice2(), cyclic(2), cyclic(3)}) {
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto report = verify_pointwise_uniformity(a, k);
      pass = pass && report.passed();
      d << a.name() << " k=" << k << ": " << report.covers.size() << " covers"
        << (report.passed() ? "" : " FAILED") << "; ";
      std::vector<Entourage> ents;
      for_each_assignment(a.size(), k, [&](const std::vector<Element>& t) {
        ents.push_back(pointwise_entourage(a, k, t).as_entourage());
      });
      entourage_sets_seen.push_back(std::move(ents));
    }
    const auto closure = close_class(ClassOfAlgebras({a}), ClosureOps{true, true, true}, 9);
    filters_seen.push_back(filter_from_class(closure, {a}, 2));
  }
  return {pass, d.str()};
}

Outcome correspondence() {
  CorrespondenceOptions options;
  options.size_bound = 7;
  options.arity_bound = 3;
  options.tuple_bound = 3;
  const auto report = verify_correspondence({semilattice2()}, options);
  std::ostringstream d;
  std::size_t failures = 0;
  for (const auto& c : report.checks) {
    failures += c.failures;
  }
  const auto* roundtrip = report.find("roundtrip");
  const auto* product = report.find("product");
  const bool ran = roundtrip && product && roundtrip->checked > 0 && product->checked > 0;
  d << "universe " << report.universe_size << ", generated " << report.generated_size << ", "
    << report.classes_sampled << " classes, " << report.families_sampled << " families, "
    << failures << " failures";
  const auto closure =
      close_class(ClassOfAlgebras({semilattice2()}), ClosureOps{true, true, true}, 7);
  filters_seen.push_back(filter_from_class(closure, {semilattice2()}, 3));
  return {report.passed() && ran, d.str()};
}

Outcome axioms() {
  std::size_t passed = 0;
  for (const auto& f : filters_seen) {
    passed += verify_uniformity_axioms(f).passed();
  }
  for (const auto& e : entourage_sets_seen) {
    passed += verify_uniformity_axioms(e).passed();
  }
  const std::size_t total = filters_seen.size() + entourage_sets_seen.size();
  Entourage broken{1, 2, {{0, 0}}};
  const auto flagged = verify_uniformity_axioms({broken});
  const bool caught = !flagged.find("diagonal")->passed();
  std::ostringstream d;
  d << passed << "/" << total << " filters pass, synthetic diagonal violation "
    << (caught ? "flagged" : "missed");
  return {total > 0 && passed == total && caught, d.str()};
}

Outcome cli_contract() {
  std::ostringstream d;
  std::size_t golden_ok = 0;
  for (const auto& c : kCliCases) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(c.args, out, err);
    if (code == c.exit_code && normalize_cli_output(out.str()) == slurp(golden_path(c))) {
      ++golden_ok;
    } else {
      d << c.name << " differs; ";
    }
  }
  std::size_t roundtrip_ok = 0;
  const std::vector<std::string> files = {"semilattice2", "z2", "z4", "trivial"};
  for (const auto& name : files) {
    const std::string path = "data/algebras/" + name + ".json";
    const std::string text = slurp(path);
    if (serialize_algebra(parse_algebra(text, path)) == text) {
      ++roundtrip_ok;
    }
  }
  const std::string command = std::string(UNIALG_PYTHON) +
                              " tests/scripts/check_reports.py " + UNIALG_BINARY +
                              " > /dev/null 2>&1";
  const bool schema_ok = std::system(command.c_str()) == 0;
  d << golden_ok << "/" << kCliCases.size() << " golden cases, " << roundtrip_ok << "/"
    << files.size() << " byte-identical round trips, schema validation "
    << (schema_ok ? "ok" : "failed");
  return {golden_ok == kCliCases.size() && roundtrip_ok == files.size() && schema_ok, d.str()};
}

}  // namespace

int main() {
  std::filesystem::current_path(UNIALG_SOURCE_DIR);
  const std::vector<Criterion> criteria = {
      {1, "free-algebra sizes", 5, free_sizes},
      {2, "kernel identities", 60, kernel_identities},
      {3, "certified membership matrix", 120, membership_matrix},
      {4, "uniform Birkhoff equivalence", 0, uniform_birkhoff},
      {5, "pointwise uniformity", 60, pointwise},
      {6, "correspondence roundtrip", 0, correspondence},
      {7, "uniformity axioms", 0, axioms},
      {8, "CLI contract", 0, cli_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the time budget";
    }
    failed += !o.pass;
    std::printf("criterion %d %s %s: %s (%.2f s%s)\n", c.number, o.pass ? "PASS" : "FAIL",
                c.title, o.detail.c_str(), seconds,
                c.budget_seconds > 0
                    ? (" of " + std::to_string(static_cast<int>(c.budget_seconds)) + " s").c_str()
                    : "");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
