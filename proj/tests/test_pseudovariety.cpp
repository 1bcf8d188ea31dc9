#include <random>

#include "doctest.h"
#include "support.hpp"
#include "unialg/congruence.hpp"
#include "unialg/constructions.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/homomorphism.hpp"
#include "unialg/pseudovariety.hpp"

using namespace unialg;
using namespace unialg::testing;

namespace {

// Exact family by definition: every congruence of F_k whose quotient is
// isomorphic to a member of K.
std::vector<Partition> family_by_definition(const FreeAlgebra& f, const ClassOfAlgebras& k) {
  std::vector<Partition> out;
  for (const auto& p : congruence_lattice(f.algebra())) {
    if (k.contains(quotient_algebra(f.algebra(), p).algebra)) {
      out.push_back(p);
    }
  }
  return out;
}

bool same_set(std::vector<Partition> a, std::vector<Partition> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::vector<std::size_t> sizes(const ClassOfAlgebras& k) {
  std::vector<std::size_t> out;
  for (const auto& a : k.representatives()) {
    out.push_back(a.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("close_class examples") {
  const ClosureOps all{true, true, true};
  auto t = close_class(ClassOfAlgebras({trivial()}), all, 6);
  CHECK(t.size() == 1);

  auto z4 = close_class(ClassOfAlgebras({cyclic(4)}), ClosureOps{true, false, false}, 6);
  CHECK(sizes(z4) == std::vector<std::size_t>{1, 2, 4});
  CHECK(z4.contains(cyclic(2)));

  auto sl = close_class(ClassOfAlgebras({semilattice2()}), ClosureOps{false, true, true}, 4);
  // The square holds a 3-element chain and a 3-element V.
  CHECK(sizes(sl) == std::vector<std::size_t>{1, 2, 3, 3, 4});
  CHECK(sl.truncated());
  for (std::size_t i = 1; i < sl.size(); ++i) {
    CHECK(canonical_less(sl[i - 1], sl[i]));
  }
}

TEST_CASE("class representatives are pairwise non-isomorphic") {
  auto k = close_class(ClassOfAlgebras({cyclic(3)}), ClosureOps{true, true, true}, 9);
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      CHECK_FALSE(are_isomorphic(k[i], k[j]).has_value());
    }
  }
}

TEST_CASE("free_quotient matches the quotient of the materialized algebra") {
  const auto f = free_algebra(3, {semilattice2()});
  for (const auto& p : congruence_lattice(f.algebra())) {
    CHECK(free_quotient(f, p).tables() == quotient_algebra(f.algebra(), p).algebra.tables());
  }
}

TEST_CASE("minimal_members keeps an antichain") {
  auto all = congruence_lattice(free_algebra(2, {cyclic(2)}).algebra());
  CHECK(minimal_members(all) == std::vector<Partition>{Partition::identity(4)});
  auto without_identity = std::vector<Partition>(all.begin() + 1, all.end());
  auto min = minimal_members(without_identity);
  for (const auto& a : min) {
    for (const auto& b : min) {
      CHECK((a == b || !refines(a, b)));
    }
  }
  for (const auto& p : without_identity) {
    CHECK(std::any_of(min.begin(), min.end(), [&](const Partition& m) { return refines(m, p); }));
  }
}

TEST_CASE("filter_from_class examples") {
  const std::vector<FiniteAlgebra> base{semilattice2()};
  auto top = filter_from_class(ClassOfAlgebras({trivial()}), base, 3);
  for (std::size_t k = 1; k <= 3; ++k) {
    REQUIRE(top.basis(k).size() == 1);
    CHECK(top.basis(k)[0].is_full());
  }

  // Every quotient of F_1 and F_2 lies in the closure at size 4.
  auto whole = close_class(ClassOfAlgebras(base), ClosureOps{true, true, true}, 4);
  auto bottom = filter_from_class(whole, base, 2);
  for (std::size_t k = 1; k <= 2; ++k) {
    REQUIRE(bottom.basis(k).size() == 1);
    CHECK(bottom.basis(k)[0].is_identity());
  }

  ClassOfAlgebras just(base);
  auto fam = congruence_family(just, base, 2);
  const auto& f2 = fam.free[1];
  CHECK(same_set(fam.members[1], family_by_definition(f2, just)));
  std::vector<Partition> at_points;
  for (Element a = 0; a < 2; ++a) {
    for (Element b = 0; b < 2; ++b) {
      if (a != b) {
        const Element t[] = {a, b};
        const auto labels = f2.evaluate(semilattice2(), t);
        at_points.push_back(Partition::from_labels(std::span<const Element>(labels)));
      }
    }
  }
  CHECK(same_set(fam.members[1], at_points));
}

TEST_CASE("congruence_family agrees with the definition on random classes") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_binary(2 + trial % 2, rng, "a");
    const std::vector<FiniteAlgebra> base{a};
    auto k = close_class(ClassOfAlgebras(base), ClosureOps{true, true, false}, 9);
    auto fam = congruence_family(k, base, 2);
    for (std::size_t arity = 1; arity <= 2; ++arity) {
      if (fam.free[arity - 1].size() > 9) {
        continue;
      }
      CHECK(same_set(fam.members[arity - 1], family_by_definition(fam.free[arity - 1], k)));
    }
  }
}

TEST_CASE("filter_from_class rejects algebras outside the variety") {
  try {
    filter_from_class(ClassOfAlgebras({semilattice2()}), {cyclic(2)}, 2);
    FAIL("expected NotInVarietyError");
  } catch (const NotInVarietyError& e) {
    CHECK(e.algebra() == "semilattice2");
  }
}

TEST_CASE("class_from_filter examples") {
  auto f1 = free_algebra(1, {cyclic(2)});
  CongruenceFilter filter({f1}, {{Partition::identity(f1.size())}});
  auto k = class_from_filter(filter);
  CHECK(sizes(k) == std::vector<std::size_t>{1, 2});
  CHECK(k.contains(cyclic(2)));

  auto top = class_from_filter(
      CongruenceFilter({f1, free_algebra(2, {cyclic(2)})}, {{Partition::full(2)}, {Partition::full(4)}}));
  CHECK(top.size() == 1);
}

TEST_CASE("class and filter round trip on closed classes") {
  for (const auto& a : {semilattice2(), cyclic(2)}) {
    const std::vector<FiniteAlgebra> base{a};
    auto k = close_class(ClassOfAlgebras(base), ClosureOps{true, true, true}, 4);
    auto filter = filter_from_class(k, base, 2);
    auto back = class_from_filter(filter);
    // A filter truncated at arity 2 only sees 2-generated members.
    for (const auto& m : k.representatives()) {
      CHECK(back.contains(m) == (minimal_generating_set(m).size() <= 2));
    }
    CHECK(filter_from_class(back, base, 2) == filter);
  }
}

TEST_CASE("upset coherence") {
  auto k = close_class(ClassOfAlgebras({semilattice2()}), ClosureOps{true, true, false}, 4);
  auto filter = filter_from_class(k, {semilattice2()}, 2);
  const auto lattice = congruence_lattice(filter.free(2).algebra());
  for (const auto& theta : lattice) {
    if (!filter.contains(2, theta)) {
      continue;
    }
    for (const auto& psi : lattice) {
      if (refines(theta, psi)) {
        CHECK(filter.contains(2, psi));
      }
    }
  }
}

TEST_CASE("close_filter examples") {
  const std::vector<FiniteAlgebra> base{semilattice2()};
  auto closed = close_class(ClassOfAlgebras(base), ClosureOps{true, true, true}, 4);
  auto filter = filter_from_class(closed, base, 2);
  auto again = close_filter(filter);
  CHECK(again == filter);
  CHECK(again.flags().fixpoint_reached);

  auto top = filter_from_class(ClassOfAlgebras({trivial()}), base, 2);
  CHECK(close_filter(top) == top);

  auto f1 = free_algebra(1, base);
  auto f2 = free_algebra(2, base);
  const Element at[] = {0, 1};
  const auto labels = f2.evaluate(semilattice2(), at);
  CongruenceFilter seed({f1, f2},
                        {{}, {Partition::from_labels(std::span<const Element>(labels))}});
  auto grown = close_filter(seed);
  auto sub = close_class(ClassOfAlgebras(base), ClosureOps{false, true, false}, 4);
  CHECK(grown.basis(1) == filter_from_class(sub, base, 2).basis(1));
  auto sp = close_class(ClassOfAlgebras(base), ClosureOps{false, true, true}, 4);
  CHECK(grown == filter_from_class(sp, base, 2));
}

TEST_CASE("pointwise entourages") {
  const Element zero[] = {0};
  const Element one[] = {1};
  CHECK(pointwise_entourage(trivial(), 1, zero).relation.is_full());
  auto at0 = pointwise_entourage(cyclic(2), 1, zero);
  CHECK(at0.free.size() == 2);
  CHECK(at0.relation.is_full());
  CHECK(pointwise_entourage(cyclic(2), 1, one).relation.is_identity());
  auto e = at0.as_entourage();
  CHECK(e.pairs.size() == 4);
  CHECK(e.contains(0, 1));
  CHECK_THROWS_AS(pointwise_entourage(cyclic(2), 2, one), InvalidInputError);
}

TEST_CASE("membership examples") {
  auto self = member(cyclic(3), {cyclic(3)});
  CHECK(self.member);
  CHECK(std::holds_alternative<PositiveCertificate>(self.certificate));
  CHECK(verify_certificate(cyclic(3), {cyclic(3)}, self.certificate).empty());

  auto neg = member(semilattice2(), {cyclic(2)});
  CHECK_FALSE(neg.member);
  REQUIRE(std::holds_alternative<NegativeCertificate>(neg.certificate));
  CHECK(verify_certificate(semilattice2(), {cyclic(2)}, neg.certificate).empty());

  auto mod2 = member(cyclic(2), {cyclic(4)});
  CHECK(mod2.member);
  CHECK(verify_certificate(cyclic(2), {cyclic(4)}, mod2.certificate).empty());

  MembershipOptions full;
  full.tuple = std::vector<Element>{0, 1, 2};
  CHECK(member(cyclic(3), {cyclic(3)}, full).member);
  full.tuple = std::vector<Element>{0};
  CHECK_THROWS_AS(member(cyclic(3), {cyclic(3)}, full), InvalidInputError);
}

TEST_CASE("tampered certificates are rejected") {
  auto pos = member(cyclic(2), {cyclic(4)});
  auto cert = std::get<PositiveCertificate>(pos.certificate);
  cert.kernel = Partition::identity(cert.kernel.carrier_size());
  CHECK_FALSE(verify_certificate(cyclic(2), {cyclic(4)}, cert).empty());

  auto neg = std::get<NegativeCertificate>(member(semilattice2(), {cyclic(2)}).certificate);
  std::swap(neg.lhs, neg.rhs);
  neg.rhs = neg.lhs;
  CHECK_FALSE(verify_certificate(semilattice2(), {cyclic(2)}, neg).empty());
}

TEST_CASE("membership over all two-element algebras re-verifies") {
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      const auto A = two_element(a);
      const auto B = two_element(b);
      auto r = member(B, {A});
      CHECK(verify_certificate(B, {A}, r.certificate).empty());
      CHECK(r.member == std::holds_alternative<PositiveCertificate>(r.certificate));
      if (a == b) {
        CHECK(r.member);
      }
    }
  }
}

TEST_CASE("filter mode") {
  const std::vector<FiniteAlgebra> base{semilattice2()};
  auto top = filter_from_class(ClassOfAlgebras({trivial()}), base, 2);
  auto r = member(semilattice2(), top);
  CHECK_FALSE(r.member);
  REQUIRE(std::holds_alternative<NegativeUniformCertificate>(r.certificate));
  CHECK(verify_certificate(semilattice2(), base, r.certificate, &top).empty());
  CHECK(member(trivial(), top).member);

  auto k = close_class(ClassOfAlgebras(base), ClosureOps{true, true, true}, 4);
  auto filter = filter_from_class(k, base, 2);
  auto ok = member(semilattice2(), filter);
  CHECK(ok.member);
  CHECK(verify_certificate(semilattice2(), base, ok.certificate, &filter).empty());

  auto small = filter_from_class(k, base, 1);
  MembershipOptions two;
  two.tuple = std::vector<Element>{0, 1};
  CHECK_THROWS_AS(member(semilattice2(), small, two), BoundExceededError);
}
