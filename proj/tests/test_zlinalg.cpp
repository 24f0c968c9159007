#include "capkit/error.hpp"
#include "capkit/zlinalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

using namespace capkit;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> entry(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(rng);
  return m;
}

std::vector<Int> ints(std::initializer_list<long> v) {
  std::vector<Int> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Cofactor expansion; only for the tiny minors of the determinantal-divisor oracle.
long long cofactor_det(const std::vector<std::vector<long long>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  long long det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    det += (c % 2 ? -1 : 1) * m[0][c] * cofactor_det(minor);
  }
  return det;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// d_k = Δ_k / Δ_{k-1}, Δ_k the gcd of all k x k minors.
std::vector<long long> determinantal_diagonal(const std::vector<std::vector<long long>>& a) {
  const std::size_t rows = a.size(), cols = a[0].size();
  std::vector<long long> out;
  long long prev = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(rows, k, 0, cur, rs);
    subsets(cols, k, 0, cur, cs);
    long long g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<long long>> minor(k, std::vector<long long>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[r[i]][c[j]];
        g = std::gcd(g, std::llabs(cofactor_det(minor)));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

void expect_valid_snf(const IntMatrix& a) {
  const SNFResult s = smith_normal_form(a);
  ASSERT_EQ(s.U.rows(), a.rows());
  ASSERT_EQ(s.V.rows(), a.cols());
  EXPECT_EQ(s.U * a * s.V, s.D);
  EXPECT_TRUE(s.D.is_diagonal());
  EXPECT_EQ(cmpabs(determinant(s.U), 1UL), 0);
  EXPECT_EQ(cmpabs(determinant(s.V), 1UL), 0);
  ASSERT_EQ(s.diagonal.size(), s.rank);
  for (std::size_t i = 0; i < s.rank; ++i) {
    EXPECT_GT(s.diagonal[i], 0);
    EXPECT_EQ(s.D(i, i), s.diagonal[i]);
    if (i + 1 < s.rank) {
      EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    }
  }
  for (std::size_t i = s.rank; i < std::min(a.rows(), a.cols()); ++i) EXPECT_EQ(s.D(i, i), 0);
}

}  // namespace

TEST(SmithNormalForm, IdentityHasFullRank) {
  const auto s = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(s.D, IntMatrix::identity(3));
  EXPECT_EQ(s.rank, 3u);
}

TEST(SmithNormalForm, TwoByTwoExample) {
  const auto a = IntMatrix::from_rows({{2, 4}, {6, 8}});
  EXPECT_EQ(smith_normal_form(a).diagonal, ints({2, 4}));
  EXPECT_EQ(smith_diagonal(a), ints({2, 4}));
  expect_valid_snf(a);
}

TEST(SmithNormalForm, ZeroMatrix) {
  const auto s = smith_normal_form(IntMatrix(3, 2));
  EXPECT_EQ(s.rank, 0u);
  EXPECT_TRUE(s.D.is_zero());
}

TEST(SmithNormalForm, EmptyMatrices) {
  EXPECT_EQ(smith_normal_form(IntMatrix(0, 3)).rank, 0u);
  EXPECT_EQ(smith_normal_form(IntMatrix(2, 0)).rank, 0u);
}

TEST(SmithNormalForm, RandomizedTransformsAndDivisibility) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_matrix(rng, dim(rng), dim(rng), 50);
    expect_valid_snf(a);
  }
}

TEST(SmithNormalForm, LowRankProducts) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_matrix(rng, 12, 3, 9) * random_matrix(rng, 3, 15, 9);
    expect_valid_snf(a);
    EXPECT_LE(smith_normal_form(a).rank, 3u);
  }
}

TEST(SmithNormalForm, MatchesDeterminantalDivisors) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<long> entry(-12, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    std::vector<std::vector<long long>> raw(r, std::vector<long long>(c));
    std::vector<std::vector<long>> rows(r, std::vector<long>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) raw[i][j] = rows[i][j] = entry(rng);
    const auto expected = determinantal_diagonal(raw);
    const auto got = smith_diagonal(IntMatrix::from_rows(rows));
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], Int(static_cast<long>(expected[i])));
  }
}

TEST(InvariantFactors, DiagonalSixFour) {
  const FPAbelianGroup g(2, IntMatrix::from_rows({{6, 0}, {0, 4}}));
  const auto [torsion, free_rank] = invariant_factors(g);
  EXPECT_EQ(torsion, ints({12, 2}));
  EXPECT_EQ(free_rank, 0u);
  EXPECT_EQ(*g.order(), 24);
}

TEST(InvariantFactors, EmptyRelationsAreFree) {
  const FPAbelianGroup g(2, IntMatrix(2, 0));
  EXPECT_TRUE(g.torsion().empty());
  EXPECT_EQ(g.free_rank(), 2u);
  EXPECT_FALSE(g.order().has_value());
  EXPECT_FALSE(g.is_finite());
}

TEST(InvariantFactors, IdentityRelationsGiveTrivialGroup) {
  const FPAbelianGroup g(3, IntMatrix::identity(3));
  EXPECT_TRUE(g.is_trivial());
  EXPECT_EQ(*g.order(), 1);
}

TEST(InvariantFactors, InvariantUnderShufflesAndUnimodularTransforms) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + trial % 5;
    const auto rel = random_matrix(rng, k, k + 2, 20);
    const FPAbelianGroup base(k, rel);

    std::vector<std::size_t> order(rel.cols());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    IntMatrix shuffled(k, rel.cols());
    for (std::size_t c = 0; c < rel.cols(); ++c) shuffled.set_column(c, rel.column(order[c]));
    EXPECT_EQ(invariant_factors(FPAbelianGroup(k, shuffled)), invariant_factors(base));

    IntMatrix transformed = rel;
    std::uniform_int_distribution<std::size_t> row(0, k - 1), col(0, rel.cols() - 1);
    std::uniform_int_distribution<long> factor(-3, 3);
    for (int step = 0; step < 10; ++step) {
      const std::size_t a = row(rng), b = row(rng);
      if (a != b) transformed.add_row_multiple(a, b, factor(rng));
      const std::size_t c = col(rng), d = col(rng);
      if (c != d) transformed.add_col_multiple(c, d, factor(rng));
    }
    EXPECT_EQ(invariant_factors(FPAbelianGroup(k, transformed)), invariant_factors(base));
  }
}

TEST(Hermite, BasisSpansSameLattice) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 4, 6, 15);
    const auto h = hermite_basis(a);
    const Lattice la(4, a), lh(4, h);
    for (std::size_t c = 0; c < a.cols(); ++c) EXPECT_TRUE(lh.contains(a.column(c)));
    for (std::size_t c = 0; c < h.cols(); ++c) EXPECT_TRUE(la.contains(h.column(c)));
    EXPECT_EQ(h.cols(), smith_normal_form(a).rank);
    std::size_t last_pivot = 0;
    for (std::size_t c = 0; c < h.cols(); ++c) {
      std::size_t p = 0;
      while (h(p, c) == 0) ++p;
      EXPECT_GT(h(p, c), 0);
      if (c > 0) {
        EXPECT_GT(p, last_pivot);
      }
      last_pivot = p;
    }
  }
}

TEST(Lattice, MembershipAndCoordinates) {
  const Lattice l(2, IntMatrix::from_rows({{2, 0}, {0, 3}}));
  EXPECT_TRUE(l.contains(ints({4, -3})));
  EXPECT_FALSE(l.contains(ints({1, 0})));
  const auto coords = l.coordinates(ints({4, 9}));
  ASSERT_TRUE(coords.has_value());
  EXPECT_EQ(l.basis() * std::span<const Int>(*coords), ints({4, 9}));
}

TEST(Kernel, BasisIsAnnihilatedAndHasCorrectRank) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 3, 7, 10);
    const auto k = kernel_basis(a);
    EXPECT_TRUE((a * k).is_zero());
    EXPECT_EQ(k.cols(), 7 - smith_normal_form(a).rank);
    // Saturation: the kernel is a direct summand, so its Smith diagonal is all ones.
    for (const auto& d : smith_diagonal(k)) EXPECT_EQ(d, 1);
  }
}

TEST(SolveInteger, SolvableAndUnsolvable) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 4, 5, 10);
    const auto x0 = random_matrix(rng, 5, 1, 10).column(0);
    const auto b = a * std::span<const Int>(x0);
    const auto x = solve_integer(a, b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(a * std::span<const Int>(*x), b);
  }
  EXPECT_FALSE(solve_integer(IntMatrix::from_rows({{2, 0}, {0, 2}}), ints({1, 0})).has_value());
}

TEST(AbHom, IdentityIsBijective) {
  const auto g = FPAbelianGroup::cyclic_sum(ints({4, 6}));
  const auto id = AbHom::identity(g);
  EXPECT_TRUE(hom_is_injective(id));
  EXPECT_TRUE(hom_is_surjective(id));
}

TEST(AbHom, ZeroFromNontrivialIsNotInjective) {
  const auto g = FPAbelianGroup::cyclic_sum(ints({3}));
  const auto z = AbHom::zero(g, g);
  EXPECT_FALSE(hom_is_injective(z));
  EXPECT_TRUE(z.is_zero());
  EXPECT_TRUE(hom_is_injective(AbHom::zero(FPAbelianGroup::cyclic_sum(ints({1})), g)));
}

TEST(AbHom, DoublingZ2IntoZ4) {
  const AbHom f(FPAbelianGroup::cyclic_sum(ints({2})), FPAbelianGroup::cyclic_sum(ints({4})),
                IntMatrix::from_rows({{2}}));
  EXPECT_TRUE(hom_is_injective(f));
  EXPECT_FALSE(hom_is_surjective(f));
}

TEST(AbHom, RejectsIllDefinedMatrix) {
  EXPECT_THROW(AbHom(FPAbelianGroup::cyclic_sum(ints({2})), FPAbelianGroup::cyclic_sum(ints({4})),
                     IntMatrix::from_rows({{1}})),
               InvalidInput);
}

TEST(AbHom, EqualityIsModuloTargetRelations) {
  const auto z4 = FPAbelianGroup::cyclic_sum(ints({4}));
  const AbHom a(z4, z4, IntMatrix::from_rows({{1}}));
  const AbHom b(z4, z4, IntMatrix::from_rows({{5}}));
  const AbHom c(z4, z4, IntMatrix::from_rows({{3}}));
  EXPECT_TRUE(a.equals(b));
  EXPECT_FALSE(a.equals(c));
  EXPECT_TRUE(compose(c, c).equals(a));
}

TEST(AbHom, InjectivityMatchesElementwiseBruteForce) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<std::size_t> rank(1, 3), modulus(1, 12);
  int tested = 0;
  while (tested < 400) {
    std::vector<std::size_t> s, t;
    for (std::size_t i = rank(rng); i > 0; --i) s.push_back(modulus(rng));
    for (std::size_t i = rank(rng); i > 0; --i) t.push_back(modulus(rng));
    const oracle::Residues src{s}, dst{t};
    if (src.order() > 200 || dst.order() > 200) continue;
    ++tested;

    // Entry (i, j) must be a multiple of t_i / gcd(t_i, s_j) to be well defined.
    IntMatrix m(t.size(), s.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) {
        const std::size_t step = t[i] / std::gcd(t[i], s[j]);
        std::uniform_int_distribution<std::size_t> mult(0, t[i]);
        m(i, j) = static_cast<long>(step * mult(rng) % t[i]);
      }
    std::vector<Int> sm(s.begin(), s.end()), tm(t.begin(), t.end());
    const AbHom f(FPAbelianGroup::cyclic_sum(sm), FPAbelianGroup::cyclic_sum(tm), m);

    std::set<std::size_t> image;
    std::size_t kernel_size = 0;
    for (std::size_t x = 0; x < src.order(); ++x) {
      const auto d = src.digits(x);
      std::vector<std::size_t> y(t.size(), 0);
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::size_t acc = 0;
        for (std::size_t j = 0; j < s.size(); ++j) acc += m(i, j).get_ui() * d[j];
        y[i] = acc % t[i];
      }
      const std::size_t yi = dst.index(y);
      image.insert(yi);
      if (yi == 0) ++kernel_size;
    }
    EXPECT_EQ(hom_is_injective(f), image.size() == src.order());
    EXPECT_EQ(hom_is_surjective(f), image.size() == dst.order());

    // Kernel generators map to zero and generate a subgroup of the right order.
    const auto kg = hom_kernel_generators(f);
    std::vector<std::size_t> gens;
    for (std::size_t c = 0; c < kg.cols(); ++c) {
      EXPECT_TRUE(f.target().is_identity(f.apply(kg.column(c))));
      std::vector<std::size_t> d(s.size());
      for (std::size_t j = 0; j < s.size(); ++j) {
        Int r = kg(j, c) % Int(static_cast<unsigned long>(s[j]));
        if (r < 0) r += static_cast<unsigned long>(s[j]);
        d[j] = r.get_ui();
      }
      gens.push_back(src.index(d));
    }
    std::set<std::size_t> span{0};
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t a : std::vector<std::size_t>(span.begin(), span.end()))
        for (std::size_t g : gens)
          if (span.insert(src.add(a, g)).second) grew = true;
    }
    EXPECT_EQ(span.size(), kernel_size);
  }
}

TEST(Simplify, CoordinateChangesAreInverse) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const FPAbelianGroup g(3, random_matrix(rng, 3, 4, 8));
    const auto s = simplify(g);
    EXPECT_EQ(s.compact.torsion(), g.torsion());
    EXPECT_EQ(s.compact.free_rank(), g.free_rank());
    EXPECT_TRUE(compose(s.from_compact, s.to_compact).equals(AbHom::identity(g)));
    EXPECT_TRUE(compose(s.to_compact, s.from_compact).equals(AbHom::identity(s.compact)));
  }
}

TEST(SubgroupPresentation, InclusionIsInjective) {
  const auto g = FPAbelianGroup::cyclic_sum(ints({4, 6}));
  const auto sub = subgroup_presentation(g, IntMatrix::from_rows({{2}, {3}}));
  EXPECT_EQ(sub.group.torsion(), ints({2}));
  EXPECT_TRUE(hom_is_injective(sub.inclusion));
}

TEST(DirectSum, BlockDiagonal) {
  const auto s = direct_sum(FPAbelianGroup::cyclic_sum(ints({2})), FPAbelianGroup::cyclic_sum(ints({3})));
  EXPECT_EQ(s.torsion(), ints({6}));
}

TEST(Tensor, Examples) {
  EXPECT_TRUE(tensor_product(FPAbelianGroup::cyclic_sum(ints({2})), FPAbelianGroup::cyclic_sum(ints({3}))).is_trivial());
  EXPECT_EQ(tensor_product(FPAbelianGroup::cyclic_sum(ints({6})), FPAbelianGroup::cyclic_sum(ints({4}))).torsion(),
            ints({2}));
  EXPECT_EQ(tensor_product(FPAbelianGroup::free(2), FPAbelianGroup::cyclic_sum(ints({5}))).torsion(), ints({5, 5}));
}

TEST(Tensor, GcdRule) {
  for (long a = 1; a <= 30; ++a)
    for (long b = 1; b <= 30; ++b) {
      const auto t = tensor_product(FPAbelianGroup::cyclic_sum(ints({a})), FPAbelianGroup::cyclic_sum(ints({b})));
      const long g = std::gcd(a, b);
      if (g == 1)
        EXPECT_TRUE(t.is_trivial()) << a << "," << b;
      else
        EXPECT_EQ(t.torsion(), ints({g})) << a << "," << b;
    }
}

TEST(Tensor, MapOfIdentitiesIsIdentity) {
  const auto a = FPAbelianGroup::cyclic_sum(ints({4, 2}));
  const auto b = FPAbelianGroup::cyclic_sum(ints({6}));
  const auto t = tensor_map(AbHom::identity(a), AbHom::identity(b));
  EXPECT_TRUE(t.equals(AbHom::identity(tensor_product(a, b))));
}

TEST(ExteriorSquare, Examples) {
  for (long n = 1; n <= 12; ++n) EXPECT_TRUE(exterior_square(FPAbelianGroup::cyclic_sum(ints({n}))).is_trivial());
  EXPECT_EQ(exterior_square(FPAbelianGroup::cyclic_sum(ints({6, 6}))).torsion(), ints({6}));
  const auto free = exterior_square(FPAbelianGroup::free(2));
  EXPECT_TRUE(free.torsion().empty());
  EXPECT_EQ(free.free_rank(), 1u);
}

TEST(ExteriorSquare, MatchesGcdClosedForm) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> rank(0, 4), modulus(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> m;
    for (std::size_t i = rank(rng); i > 0; --i) m.push_back(modulus(rng));
    std::vector<Int> mi(m.begin(), m.end());
    const auto ext = exterior_square(FPAbelianGroup::cyclic_sum(mi));
    EXPECT_EQ(oracle::prime_powers(oracle::to_sizes(ext.torsion())), oracle::exterior_square_closed_form(m));
  }
}

TEST(ExteriorSquare, SumIdentityOnSmallSweep) {
  const std::vector<std::vector<long>> lists = {{}, {2}, {3}, {4}, {6}, {2, 2}, {4, 2}, {6, 6}, {12, 4, 2}, {3, 3, 3}};
  for (const auto& a : lists)
    for (const auto& b : lists) {
      std::vector<long> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      std::vector<Int> ai(a.begin(), a.end()), bi(b.begin(), b.end()), abi(ab.begin(), ab.end());
      const auto ga = FPAbelianGroup::cyclic_sum(ai), gb = FPAbelianGroup::cyclic_sum(bi);
      const auto lhs = exterior_square(FPAbelianGroup::cyclic_sum(abi));
      const auto rhs = direct_sum(direct_sum(exterior_square(ga), exterior_square(gb)), tensor_product(ga, gb));
      EXPECT_EQ(lhs.torsion(), rhs.torsion());
    }
}

TEST(ExteriorSquare, MapOfIdentityIsIdentity) {
  const auto a = FPAbelianGroup::cyclic_sum(ints({4, 4, 2}));
  EXPECT_TRUE(exterior_square_map(AbHom::identity(a)).equals(AbHom::identity(exterior_square(a))));
}

TEST(ExteriorSquare, WedgeIndexEnumeratesPairs) {
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) seen.insert(wedge_index(i, j, 5));
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(*seen.rbegin(), 9u);
}

TEST(Formatting, Invariants) {
  EXPECT_EQ(format_invariants(ints({6, 2})), "Z/6 + Z/2");
  EXPECT_EQ(format_invariants({}, 0), "1");
  EXPECT_EQ(format_invariants(ints({2}), 2), "Z/2 + Z^2");
}
