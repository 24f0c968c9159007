#pragma once

// Exact integer linear algebra: dense matrices over Z, Smith and Hermite
// normal forms, lattice membership, and finitely presented abelian groups
// with their homomorphisms.
//
// Convention used throughout: a relation matrix R with k rows presents the
// group Z^k / (column span of R).

#include "capkit/bigint.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace capkit {

using IntVector = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> data);
  /// Row-major literal, e.g. IntMatrix::from_rows({{2, 4}, {6, 8}}).
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols);
  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const Int> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;
  void set_column(std::size_t c, std::span<const Int> v);

  IntMatrix transpose() const;
  /// Columns [begin, end).
  IntMatrix column_range(std::size_t begin, std::size_t end) const;
  /// Rows [begin, end).
  IntMatrix row_range(std::size_t begin, std::size_t end) const;
  IntMatrix hconcat(const IntMatrix& rhs) const;
  IntMatrix vconcat(const IntMatrix& rhs) const;

  bool is_zero() const;
  bool is_diagonal() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& factor);
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& factor);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Int> v);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
/// Kronecker product a ⊗ b, row index (i, j) -> i * b.rows() + j.
IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b);

/// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& a);

struct SNFResult {
  IntMatrix D;
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix V;  // cols x cols, unimodular
  /// Nonzero diagonal entries d1 | d2 | ... | d_rank, all positive.
  std::vector<Int> diagonal;
  std::size_t rank = 0;
};

/// U * A * V = D with D diagonal, nonnegative, d_i | d_{i+1}.
SNFResult smith_normal_form(const IntMatrix& a);
/// Diagonal of the Smith form only (no transforms), ascending divisibility.
std::vector<Int> smith_diagonal(const IntMatrix& a);

/// Column-style Hermite basis of the column span of A: the returned matrix
/// has full column rank, column j has its leading nonzero (positive) in a
/// strictly increasing row, and entries left of each pivot are reduced
/// modulo it.
IntMatrix hermite_basis(const IntMatrix& a);

/// Basis of { x : A x = 0 } as columns.
IntMatrix kernel_basis(const IntMatrix& a);

/// Integer solution x of A x = b, if one exists.
std::optional<IntVector> solve_integer(const IntMatrix& a, std::span<const Int> b);

/// Sublattice of Z^n given by a Hermite basis; supports exact membership.
class Lattice {
 public:
  Lattice() = default;
  Lattice(std::size_t ambient, const IntMatrix& generators);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  const IntMatrix& basis() const noexcept { return basis_; }
  bool contains(std::span<const Int> v) const;
  /// Coefficients of v in the Hermite basis, if v belongs to the lattice.
  std::optional<IntVector> coordinates(std::span<const Int> v) const;

 private:
  std::size_t ambient_ = 0;
  IntMatrix basis_;
  std::vector<std::size_t> pivot_rows_;
};

/// A finitely presented abelian group Z^k / span(relations). Canonical
/// invariants are computed when the object is built.
class FPAbelianGroup {
 public:
  FPAbelianGroup() : FPAbelianGroup(0, IntMatrix(0, 0)) {}
  FPAbelianGroup(std::size_t ambient_rank, IntMatrix relations);
  /// Z/m1 ⊕ Z/m2 ⊕ ... (any order, entries 0 give free summands).
  static FPAbelianGroup cyclic_sum(std::span<const Int> moduli);
  static FPAbelianGroup free(std::size_t rank);

  std::size_t ambient_rank() const noexcept { return rank_; }
  const IntMatrix& relations() const noexcept { return relations_; }
  /// Torsion coefficients n1, n2, ... with n_{i+1} | n_i, ones dropped.
  const std::vector<Int>& torsion() const noexcept { return torsion_; }
  std::size_t free_rank() const noexcept { return free_rank_; }
  bool is_trivial() const noexcept { return torsion_.empty() && free_rank_ == 0; }
  bool is_finite() const noexcept { return free_rank_ == 0; }
  /// Order of a finite group; std::nullopt when infinite.
  std::optional<Int> order() const;

  /// True when the ambient vector v represents the identity.
  bool is_identity(std::span<const Int> v) const { return lattice_.contains(v); }
  const Lattice& relation_lattice() const noexcept { return lattice_; }

 private:
  std::size_t rank_;
  IntMatrix relations_;
  std::vector<Int> torsion_;
  std::size_t free_rank_ = 0;
  Lattice lattice_;
};

/// (torsion in descending divisibility order, free rank)
std::pair<std::vector<Int>, std::size_t> invariant_factors(const FPAbelianGroup& g);

/// Homomorphism induced by a matrix between ambient free groups.
class AbHom {
 public:
  /// Throws InvalidInput unless the matrix maps source relations into the
  /// target relation lattice.
  AbHom(FPAbelianGroup source, FPAbelianGroup target, IntMatrix matrix);
  static AbHom identity(const FPAbelianGroup& g);
  static AbHom zero(const FPAbelianGroup& source, const FPAbelianGroup& target);

  const FPAbelianGroup& source() const noexcept { return source_; }
  const FPAbelianGroup& target() const noexcept { return target_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  /// Image of an ambient source vector, as an ambient target vector.
  IntVector apply(std::span<const Int> v) const { return matrix_ * v; }
  bool is_zero() const;
  /// Equality as homomorphisms (matrices agree modulo target relations).
  bool equals(const AbHom& other) const;

 private:
  FPAbelianGroup source_;
  FPAbelianGroup target_;
  IntMatrix matrix_;
};

/// g ∘ f
AbHom compose(const AbHom& g, const AbHom& f);

/// Injective iff the preimage of the target relation lattice equals the
/// source relation lattice.
bool hom_is_injective(const AbHom& f);
bool hom_is_surjective(const AbHom& f);
/// Kernel of f as a subgroup presentation: generators (ambient source
/// vectors) as columns.
IntMatrix hom_kernel_generators(const AbHom& f);

/// An isomorphic presentation Z^k' / diag(n1, ..., nk') ⊕ Z^free with
/// n_{i+1} | n_i, plus mutually inverse coordinate changes.
struct SimplifiedPresentation {
  FPAbelianGroup compact;
  AbHom to_compact;
  AbHom from_compact;
};
SimplifiedPresentation simplify(const FPAbelianGroup& g);

/// Presentation of the subgroup of g generated by the given ambient vectors
/// (columns), with its inclusion into g.
struct SubgroupPresentation {
  FPAbelianGroup group;
  AbHom inclusion;
};
SubgroupPresentation subgroup_presentation(const FPAbelianGroup& g, const IntMatrix& generators);

/// Direct sum with block-diagonal relations.
FPAbelianGroup direct_sum(const FPAbelianGroup& a, const FPAbelianGroup& b);

/// A ⊗ B on the basis e_i ⊗ f_j (index i * rank(B) + j).
FPAbelianGroup tensor_product(const FPAbelianGroup& a, const FPAbelianGroup& b);
AbHom tensor_map(const AbHom& f, const AbHom& g);

/// Λ²A on the basis e_i ∧ e_j (i < j) modulo r ∧ e_y for every relation
/// column r and every basis vector e_y.
FPAbelianGroup exterior_square(const FPAbelianGroup& a);
AbHom exterior_square_map(const AbHom& f);
/// Index of e_i ∧ e_j (i < j) in a rank-k exterior square basis.
std::size_t wedge_index(std::size_t i, std::size_t j, std::size_t k);

std::string format_invariants(const std::vector<Int>& torsion, std::size_t free_rank = 0);

}  // namespace capkit
