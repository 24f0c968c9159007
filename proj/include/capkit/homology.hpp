#pragma once

// Integral homology of Cayley-table groups through the bar resolution.
// H_2(G; Z) is the Schur multiplier M(G).

#include "capkit/group.hpp"
#include "capkit/zlinalg.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace capkit {

/// Normalized: n-tuples of non-identity elements, degenerate tuples are 0.
/// Full: all n-tuples.
enum class BarBasis { Normalized, Full };

inline constexpr std::size_t kDefaultHomologyCap = 24;

struct HomologyOptions {
  BarBasis basis = BarBasis::Normalized;
  std::size_t cap = kDefaultHomologyCap;
};

/// Sparse chain over a bar basis: sorted (basis index, coefficient) pairs.
using Chain = std::vector<std::pair<std::uint32_t, Int>>;

class SparseIntMatrix {
 public:
  using Column = std::vector<std::pair<std::uint32_t, long long>>;

  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::vector<Column> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  const Column& column(std::size_t c) const { return columns_[c]; }
  std::size_t nonzeros() const;
  IntMatrix to_dense() const;
  /// Applies row and column permutations: entry (r, c) moves to
  /// (row_perm[r], col_perm[c]).
  SparseIntMatrix permuted(std::span<const std::uint32_t> row_perm, std::span<const std::uint32_t> col_perm) const;

 private:
  std::size_t rows_ = 0;
  std::vector<Column> columns_;
};

/// this * other == 0, computed sparsely.
bool product_is_zero(const SparseIntMatrix& a, const SparseIntMatrix& b);

std::size_t bar_dimension(std::size_t order, int degree, BarBasis basis);
/// Tuple of a bar basis index (most significant coordinate first).
std::vector<Element> bar_tuple(std::size_t order, int degree, BarBasis basis, std::size_t index);
/// Basis index of a tuple, or -1 when it is degenerate in the normalized basis.
long long bar_index(std::size_t order, std::span<const Element> tuple, BarBasis basis);

/// ∂_n(g1..gn) = (g2..gn) + Σ (-1)^i (g1..g_i g_{i+1}..gn) + (-1)^n (g1..g_{n-1}),
/// for degree n in 1..3. Throws CapExceeded when |G| exceeds options.cap.
SparseIntMatrix boundary_matrix(const FiniteGroup& g, int degree, const HomologyOptions& options = {});

/// ker(d_out) / im(d_in) at a middle chain group, with a coordinate system
/// on cycles. Shared by H_1, H_2 and the tests.
class HomologyComputation {
 public:
  /// d_in : C_{n+1} -> C_n, d_out : C_n -> C_{n-1}; requires d_out * d_in = 0.
  HomologyComputation(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out);

  /// Homology in kernel coordinates (one ambient generator per basis cycle).
  const FPAbelianGroup& homology() const noexcept { return homology_; }
  std::size_t chain_dimension() const noexcept { return dim_; }
  std::size_t kernel_rank() const noexcept { return kernel_.cols(); }
  /// Kernel coordinates of a cycle. Throws InvalidInput if x is not a cycle.
  IntVector coordinates(const Chain& cycle) const;
  /// Basis cycle j as a chain.
  Chain cycle(std::size_t j) const;
  /// Number of unit pivots eliminated from d_in (diagnostics).
  std::size_t unit_pivots() const noexcept { return pivot_rows_.size(); }

 private:
  IntVector reduce(const Chain& x) const;

  std::size_t dim_ = 0;
  // Row r of C_n is either a unit pivot of im(d_in) (pivot_slot_[r] >= 0)
  // or one of the surviving coordinates (position_[r] >= 0).
  std::vector<std::int32_t> position_;
  std::vector<std::int32_t> pivot_slot_;
  std::vector<std::uint32_t> survivors_;
  std::vector<std::uint32_t> pivot_rows_;
  std::vector<int> pivot_sign_;
  std::vector<std::vector<std::pair<std::uint32_t, Int>>> pivot_tail_;  // over survivor positions
  IntMatrix kernel_;                                                 // survivors x rank, Hermite basis
  Lattice kernel_lattice_;
  FPAbelianGroup homology_;
};

class MultiplierPresentation {
 public:
  MultiplierPresentation(FiniteGroup group, BarBasis basis, HomologyComputation computation);

  const FiniteGroup& group() const noexcept { return group_; }
  BarBasis basis() const noexcept { return basis_; }
  /// M(G) on kernel coordinates.
  const FPAbelianGroup& h2() const noexcept { return computation_.homology(); }
  const HomologyComputation& computation() const noexcept { return computation_; }
  /// Columns are the basis cycles of ker ∂2 used as coordinates (dense, C2 basis).
  IntMatrix kernel_basis() const;

 private:
  FiniteGroup group_;
  BarBasis basis_;
  HomologyComputation computation_;
};

FPAbelianGroup first_homology(const FiniteGroup& g, const HomologyOptions& options = {});
MultiplierPresentation schur_multiplier(const FiniteGroup& g, const HomologyOptions& options = {});

/// f_* : M(source) -> M(target), induced by (g, h) -> (f g, f h).
AbHom induced_multiplier_map(const GroupHom& f, const MultiplierPresentation& src, const MultiplierPresentation& dst);

/// True iff M(G) -> M(G/N) is injective. N must be central (InvalidInput).
bool is_multiplier_mono(const FiniteGroup& g, const Subgroup& n, const HomologyOptions& options = {});
/// Same, reusing an already computed M(G).
bool is_multiplier_mono(const MultiplierPresentation& mg, const Subgroup& n, const HomologyOptions& options = {});

}  // namespace capkit
