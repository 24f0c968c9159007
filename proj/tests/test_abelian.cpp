#include "capkit/abelian.hpp"
#include "capkit/error.hpp"
#include "capkit/group_spec.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace capkit;
using Status = CapabilityVerdict::Status;

namespace {

std::vector<Int> ints(std::initializer_list<long> v) {
  std::vector<Int> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Λ²(A) -> Λ²(A/<g>) is always onto, so g lies in the epicenter exactly
// when both exterior squares have the same order. Quotient types are read
// off by brute force.
std::vector<std::size_t> brute_epicenter(const std::vector<std::size_t>& moduli) {
  const oracle::Residues a{moduli};
  const std::size_t n = a.order();
  const std::size_t full = oracle::product_of(oracle::exterior_square_closed_form(moduli));
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < n; ++g) {
    std::set<std::size_t> cyc{0};
    for (std::size_t x = g; x != 0; x = a.add(x, g)) cyc.insert(x);
    // Coset labels by least representative.
    std::map<std::size_t, std::size_t> label;
    std::vector<std::size_t> reps;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t least = x;
      for (std::size_t c : cyc) least = std::min(least, a.add(x, c));
      if (!label.count(least)) {
        label[least] = reps.size();
        reps.push_back(least);
      }
    }
    auto coset_of = [&](std::size_t x) {
      std::size_t least = x;
      for (std::size_t c : cyc) least = std::min(least, a.add(x, c));
      return label.at(least);
    };
    const auto type = oracle::abelian_type(reps.size(), [&](std::size_t u, std::size_t v) {
      return coset_of(a.add(reps[u], reps[v]));
    });
    if (oracle::product_of(oracle::exterior_square_closed_form(type)) == full) out.push_back(g);
  }
  return out;
}

std::vector<std::size_t> all_members(const CyclicSum& a) {
  std::vector<std::size_t> v(a.order());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(CyclicSum, IndexingAndArithmetic) {
  const CyclicSum a({4, 6});
  EXPECT_EQ(a.order(), 24u);
  const oracle::Residues r{{4, 6}};
  for (std::size_t x = 0; x < 24; ++x) {
    const auto d = a.residues(x);
    EXPECT_EQ(d, r.digits(x));
    const std::vector<long long> signed_d{static_cast<long long>(d[0]) - 4, static_cast<long long>(d[1]) + 6};
    EXPECT_EQ(a.index(signed_d), x);
    for (std::size_t y = 0; y < 24; ++y) EXPECT_EQ(a.add(x, y), r.add(x, y));
    std::size_t ord = 1;
    for (std::size_t s = x; s != 0; s = r.add(s, x)) ++ord;
    EXPECT_EQ(a.element_order(x), ord);
    EXPECT_EQ(a.multiple(x, ord), 0u);
  }
}

TEST(CyclicSum, InvariantFactorsMatchBruteForceType) {
  for (const auto& m : std::vector<std::vector<std::size_t>>{{6, 4}, {2, 3, 5}, {12, 18}, {4, 2, 8}, {1, 9}}) {
    const CyclicSum a(m);
    const oracle::Residues r{m};
    const auto type = oracle::abelian_type(r.order(), [&](std::size_t x, std::size_t y) { return r.add(x, y); });
    EXPECT_EQ(oracle::prime_powers(a.invariant_factors()), type);
    EXPECT_EQ(oracle::prime_powers(oracle::to_sizes(a.presentation().torsion())), type);
  }
}

TEST(CyclicSum, ClosureAndGenerators) {
  const CyclicSum a({4, 2, 2});
  for (std::size_t x = 0; x < a.order(); ++x)
    for (std::size_t y = 0; y < a.order(); y += 3) {
      const std::vector<std::size_t> gens{x, y};
      const auto members = a.closure(gens);
      std::set<std::size_t> brute{0};
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t m : std::vector<std::size_t>(brute.begin(), brute.end()))
          for (std::size_t g : gens)
            if (brute.insert(a.add(m, g)).second) grew = true;
      }
      EXPECT_EQ(members, std::vector<std::size_t>(brute.begin(), brute.end()));
      const auto regen = a.generators(members);
      EXPECT_EQ(a.closure(regen), members);
      EXPECT_EQ(oracle::product_of(a.subgroup_invariants(gens)), members.size());
    }
}

TEST(CyclicSum, RejectsHugeOrders) { EXPECT_ANY_THROW(CyclicSum({1u << 21, 1u << 21})); }

TEST(AbelianGroupIF, Validation) {
  EXPECT_NO_THROW(AbelianGroupIF({4, 2}));
  EXPECT_THROW(AbelianGroupIF({2, 4}), InvalidInput);
  EXPECT_THROW(AbelianGroupIF({6, 4}), InvalidInput);
  EXPECT_THROW(AbelianGroupIF({1}), InvalidInput);
  EXPECT_EQ(AbelianGroupIF::from_moduli(std::vector<std::size_t>{2, 3}), AbelianGroupIF({6}));
  EXPECT_EQ(AbelianGroupIF::from_moduli(std::vector<std::size_t>{6, 4, 1}), AbelianGroupIF({12, 2}));
  EXPECT_EQ(AbelianGroupIF({4, 2}).to_string(), "[4,2]");
  EXPECT_EQ(AbelianGroupIF({12, 2}).order(), 24u);
  EXPECT_TRUE(AbelianGroupIF().is_trivial());
  EXPECT_EQ(AbelianGroupIF().order(), 1u);
}

TEST(Variety, ParseAndPrint) {
  EXPECT_TRUE(parse_variety("abelian").is_abelian_variety());
  EXPECT_EQ(parse_variety("N:3"), VarietyDescriptor::nilpotent(3));
  EXPECT_EQ(parse_variety("N:3").to_string(), "N:3");
  const auto pn = parse_variety("PN:1,2");
  EXPECT_EQ(pn.kind(), VarietyDescriptor::Kind::Polynilpotent);
  EXPECT_EQ(pn.classes(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(pn.to_string(), "PN:1,2");
  EXPECT_TRUE(parse_variety("N:1").is_abelian_variety());
  EXPECT_EQ(VarietyDescriptor::abelian().to_string(), "abelian");
}

TEST(Variety, ParseErrors) {
  auto position = [](std::string_view text) -> std::size_t {
    try {
      parse_variety(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::string::npos;
  };
  EXPECT_EQ(position("nilpotent"), 0u);
  EXPECT_EQ(position("N:"), 2u);
  EXPECT_EQ(position("N:0"), 2u);
  EXPECT_EQ(position("N:2,3"), 2u);
  EXPECT_EQ(position("PN:1,"), 5u);
  EXPECT_EQ(position("PN:1;2"), 4u);
  EXPECT_EQ(position("N:x"), 2u);
}

TEST(AbelianMultiplier, Examples) {
  for (std::size_t n = 1; n <= 20; ++n) EXPECT_TRUE(abelian_multiplier(CyclicSum({n})).is_trivial());
  EXPECT_EQ(abelian_multiplier(AbelianGroupIF({6, 6})).torsion(), ints({6}));
  EXPECT_EQ(abelian_multiplier(AbelianGroupIF({4, 2, 2})).torsion(), ints({2, 2, 2}));
}

TEST(AbelianEpicenter, Examples) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto z = abelian_epicenter(AbelianGroupIF({n}));
    EXPECT_EQ(z.members.size(), n);
  }
  EXPECT_TRUE(abelian_epicenter(AbelianGroupIF({6, 6})).is_trivial());
  EXPECT_TRUE(abelian_epicenter(AbelianGroupIF()).is_trivial());
  const auto z42 = abelian_epicenter(AbelianGroupIF({4, 2}));
  EXPECT_EQ(z42.members.size(), 2u);
  EXPECT_EQ(z42.invariant_factors, (std::vector<std::size_t>{2}));
}

TEST(AbelianEpicenter, MatchesQuotientOracleUpToOrder64) {
  for (std::size_t n = 1; n <= 64; ++n)
    for (const auto& a : abelian_groups_of_order(n)) {
      const auto z = abelian_epicenter(a);
      EXPECT_EQ(z.members, brute_epicenter(a.factors())) << a.to_string();
      EXPECT_EQ(oracle::product_of(z.invariant_factors), z.members.size());
      EXPECT_EQ(a.as_cyclic_sum().closure(z.generators), z.members);
    }
}

TEST(AbelianEpicenter, NonCanonicalModuli) {
  // Z/2 + Z/3 + Z/2 is [6,2]; the epicenter is the Z/3 part.
  const CyclicSum a({2, 3, 2});
  const auto z = abelian_epicenter(a);
  EXPECT_EQ(z.members, brute_epicenter({2, 3, 2}));
  EXPECT_EQ(z.members.size(), 3u);
}

TEST(AbelianEpicenter, CapExceeded) {
  EXPECT_THROW(abelian_epicenter(CyclicSum({1000, 1000}), 1000), CapExceeded);
}

TEST(ExteriorSquareMono, Basics) {
  const CyclicSum c4({4});
  for (std::size_t g = 0; g < 4; ++g) EXPECT_TRUE(exterior_square_mono(c4, g));
  const CyclicSum v4({2, 2});
  EXPECT_TRUE(exterior_square_mono(v4, 0));
  for (std::size_t g = 1; g < 4; ++g) EXPECT_FALSE(exterior_square_mono(v4, g));
}

TEST(Baer, Examples) {
  EXPECT_EQ(baer_capable(AbelianGroupIF({6, 6})).status, Status::Capable);
  EXPECT_EQ(baer_capable(AbelianGroupIF({4, 2})).status, Status::NotCapable);
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_EQ(baer_capable(AbelianGroupIF({n})).status, Status::NotCapable);
  EXPECT_EQ(baer_capable(AbelianGroupIF()).status, Status::Capable);
  EXPECT_FALSE(baer_capable(AbelianGroupIF({4, 2})).criterion.empty());
}

TEST(Baer, AgreesWithEpicenterUpToOrder64) {
  for (std::size_t n = 1; n <= 64; ++n)
    for (const auto& a : abelian_groups_of_order(n))
      EXPECT_EQ(baer_capable(a).capable(), abelian_epicenter(a).is_trivial()) << a.to_string();
}

TEST(Polynilpotent, Examples) {
  EXPECT_EQ(polynilpotent_capable(AbelianGroupIF({4, 4, 4}), VarietyDescriptor::polynilpotent({1, 2})).status,
            Status::Capable);
  EXPECT_EQ(polynilpotent_capable(AbelianGroupIF({4, 4}), VarietyDescriptor::nilpotent(3)).status, Status::Capable);
  EXPECT_EQ(polynilpotent_capable(AbelianGroupIF({4}), VarietyDescriptor::nilpotent(2)).status, Status::NotCapable);
  EXPECT_EQ(polynilpotent_capable(AbelianGroupIF({4, 2}), VarietyDescriptor::polynilpotent({1, 1})).status,
            Status::Undetermined);
}

TEST(Polynilpotent, RuleTable) {
  using V = VarietyDescriptor;
  struct Case {
    std::vector<std::size_t> factors;
    V variety;
    Status status;
    std::string rule;
  };
  const std::vector<Case> cases = {
      {{}, V::polynilpotent({2, 1}), Status::Capable, "rule (a)"},
      {{7}, V::nilpotent(5), Status::NotCapable, "rule (b)"},
      {{6, 6}, V::abelian(), Status::Capable, "rule (c)"},
      {{6, 6, 2}, V::nilpotent(2), Status::Capable, "rule (c)"},
      {{4, 4}, V::polynilpotent({2, 1}), Status::Capable, "rule (c)"},
      {{4, 4, 4}, V::polynilpotent({1, 1}), Status::Capable, "rule (d)"},
      {{4, 4}, V::polynilpotent({1, 1}), Status::Undetermined, "rule (f)"},
      {{4, 2}, V::abelian(), Status::NotCapable, "rule (e)"},
      {{4, 2}, V::nilpotent(2), Status::Undetermined, "rule (f)"},
  };
  for (const auto& c : cases) {
    const auto v = polynilpotent_capable(AbelianGroupIF(c.factors), c.variety);
    EXPECT_EQ(v.status, c.status) << AbelianGroupIF(c.factors).to_string() << " " << c.variety.to_string();
    EXPECT_EQ(v.criterion.rfind(c.rule, 0), 0u) << v.criterion;
  }
}

TEST(Polynilpotent, AbelianVarietyAgreesWithBaer) {
  for (const auto& a : enumerate_invariant_factor_lists(4, 12))
    EXPECT_EQ(polynilpotent_capable(a, VarietyDescriptor::abelian()).status, baer_capable(a).status) << a.to_string();
}

TEST(Polynilpotent, NilpotentMonotonicity) {
  for (const auto& a : enumerate_invariant_factor_lists(4, 12))
    for (std::size_t c = 2; c <= 6; ++c) {
      const auto hi = polynilpotent_capable(a, VarietyDescriptor::nilpotent(c)).status;
      const auto lo = polynilpotent_capable(a, VarietyDescriptor::nilpotent(c - 1)).status;
      EXPECT_FALSE(hi == Status::Capable && lo == Status::NotCapable) << a.to_string() << " c=" << c;
    }
}

TEST(Polynilpotent, CapableSummandsWithoutCoprimality) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const AbelianGroupIF summand({n, n}), sum({n, n, n, n});
    EXPECT_TRUE(polynilpotent_capable(summand, VarietyDescriptor::abelian()).capable());
    EXPECT_TRUE(polynilpotent_capable(sum, VarietyDescriptor::abelian()).capable());
    if (n <= 6) {
      EXPECT_TRUE(abelian_epicenter(sum).is_trivial());
    }
  }
}

TEST(ZeroMap, CyclicFourTwiceIsNonzero) {
  const CyclicSum c4({4});
  const auto f = zero_map_factor(c4, abelian_epicenter(c4));
  EXPECT_EQ(f.epicenter.torsion(), ints({4}));
  const std::vector<ZeroMapFactor> factors{f, f};
  EXPECT_FALSE(zero_map_condition(factors));
  // The explicit matrix of v ⊗ 1 on Z/4 ⊗ Z/4.
  const auto m = tensor_map(f.natural_map, AbHom::identity(f.abelianization));
  EXPECT_FALSE(m.is_zero());
  EXPECT_TRUE(hom_is_injective(m));
}

TEST(ZeroMap, CoprimeFactorsAndTrivialEpicenters) {
  const CyclicSum c4({4}), c9({9}), v4({2, 2}), c3({3});
  auto factor = [](const CyclicSum& a) { return zero_map_factor(a, abelian_epicenter(a)); };
  EXPECT_TRUE(zero_map_condition(std::vector<ZeroMapFactor>{factor(c4), factor(c9)}));
  EXPECT_TRUE(zero_map_condition(std::vector<ZeroMapFactor>{factor(v4), factor(v4)}));
  EXPECT_TRUE(zero_map_condition(std::vector<ZeroMapFactor>{factor(v4), factor(c3)}));
  EXPECT_FALSE(zero_map_condition(std::vector<ZeroMapFactor>{factor(v4), factor(c4)}));
  EXPECT_TRUE(zero_map_condition(std::vector<ZeroMapFactor>{factor(c4)}));
}

TEST(Coprime, Examples) {
  const auto s3 = construct_group("perm:(1 2 3);(1 2)");
  EXPECT_TRUE(coprime_abelianizations(std::vector<FiniteGroup>{s3, cyclic_group(3)}));
  EXPECT_FALSE(coprime_abelianizations(std::vector<FiniteGroup>{cyclic_group(6), cyclic_group(6)}));
  const auto a5 = construct_group("perm:(1 2 3 4 5);(1 2 3)", 60);
  EXPECT_TRUE(coprime_abelianizations(std::vector<FiniteGroup>{a5, cyclic_group(6)}));
  EXPECT_TRUE(coprime_abelianizations(std::vector<FiniteGroup>{a5, a5}));
  EXPECT_TRUE(coprime_abelianizations(std::vector<CyclicSum>{CyclicSum({4}), CyclicSum({3, 3}), CyclicSum({5})}));
  EXPECT_FALSE(coprime_abelianizations(std::vector<CyclicSum>{CyclicSum({4}), CyclicSum({3}), CyclicSum({6})}));
  EXPECT_TRUE(pairwise_coprime(std::vector<std::size_t>{1, 1, 7}));
  EXPECT_FALSE(pairwise_coprime(std::vector<std::size_t>{4, 6}));
}

TEST(Enumerate, SubgroupsMatchBruteForce) {
  for (const auto& m : std::vector<std::vector<std::size_t>>{{4}, {2, 2}, {2, 2, 2}, {4, 2}, {6}, {6, 6}, {4, 4}, {3, 3, 3}}) {
    const CyclicSum a(m);
    std::set<std::vector<std::size_t>> brute;
    const auto n = a.order();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (std::size_t z = y; z < n; ++z) brute.insert(a.closure(std::vector<std::size_t>{x, y, z}));
    const auto subs = enumerate_subgroups(a);
    EXPECT_EQ(std::set<std::vector<std::size_t>>(subs.begin(), subs.end()), brute);
    EXPECT_EQ(subs.size(), brute.size());
    EXPECT_EQ(subs.front(), std::vector<std::size_t>{0});
  }
  EXPECT_EQ(enumerate_subgroups(CyclicSum({2, 2, 2})).size(), 16u);
  EXPECT_EQ(enumerate_subgroups(CyclicSum({12})).size(), 6u);
  const auto c6 = enumerate_subgroups(CyclicSum({6}));
  EXPECT_NE(std::find(c6.begin(), c6.end(), all_members(CyclicSum({6}))), c6.end());
}

TEST(Enumerate, InvariantFactorLists) {
  const auto lists = enumerate_invariant_factor_lists(2, 4);
  std::set<std::vector<std::size_t>> got;
  for (const auto& a : lists) got.insert(a.factors());
  const std::set<std::vector<std::size_t>> expected = {{}, {2}, {3}, {4}, {2, 2}, {4, 2}, {3, 3}, {4, 4}};
  EXPECT_EQ(got, expected);
  EXPECT_EQ(lists.size(), expected.size());
}

TEST(Enumerate, AbelianGroupsOfOrder) {
  // Product of partition numbers of the prime exponents.
  EXPECT_EQ(abelian_groups_of_order(1).size(), 1u);
  EXPECT_EQ(abelian_groups_of_order(16).size(), 5u);
  EXPECT_EQ(abelian_groups_of_order(64).size(), 11u);
  EXPECT_EQ(abelian_groups_of_order(72).size(), 6u);
  EXPECT_EQ(abelian_groups_of_order(30).size(), 1u);
  for (const auto& a : abelian_groups_of_order(48)) EXPECT_EQ(a.order(), 48u);
}
