#include "capkit/zlinalg.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace capkit {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw InvalidInput("IntMatrix: entry count does not match dimensions");
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw InvalidInput("IntMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw InvalidInput("IntMatrix::from_columns: column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::size_t rows, std::size_t cols, std::span<const Int> diag) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m(i, i) = diag[i];
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void IntMatrix::set_column(std::size_t c, std::span<const Int> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::column_range(std::size_t begin, std::size_t end) const {
  IntMatrix m(rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
  return m;
}

IntMatrix IntMatrix::row_range(std::size_t begin, std::size_t end) const {
  IntMatrix m(end - begin, cols_);
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
  return m;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_) throw InvalidInput("hconcat: row count mismatch");
  IntMatrix m(rows_, cols_ + rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, cols_ + j) = rhs(i, j);
  }
  return m;
}

IntMatrix IntMatrix::vconcat(const IntMatrix& rhs) const {
  if (cols_ != rhs.cols_) throw InvalidInput("vconcat: column count mismatch");
  IntMatrix m(rows_ + rhs.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < rhs.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = rhs(i, j);
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return sgn(x) == 0; });
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && sgn((*this)(i, j)) != 0) return false;
  return true;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Int& factor) {
  if (sgn(factor) == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) {
    const Int& s = (*this)(src, j);
    if (sgn(s) != 0) mpz_addmul((*this)(dst, j).get_mpz_t(), factor.get_mpz_t(), s.get_mpz_t());
  }
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Int& factor) {
  if (sgn(factor) == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) {
    const Int& s = (*this)(i, src);
    if (sgn(s) != 0) mpz_addmul((*this)(i, dst).get_mpz_t(), factor.get_mpz_t(), s.get_mpz_t());
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) mpz_neg((*this)(r, j).get_mpz_t(), (*this)(r, j).get_mpz_t());
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t i = 0; i < rows_; ++i) mpz_neg((*this)(i, c).get_mpz_t(), (*this)(i, c).get_mpz_t());
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product: dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Int& bkj = b(k, j);
        if (sgn(bkj) != 0) mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
      }
    }
  return c;
}

IntVector operator*(const IntMatrix& a, std::span<const Int> v) {
  if (a.cols() != v.size()) throw InvalidInput("matrix-vector product: dimension mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(v[j]) != 0 && sgn(a(i, j)) != 0)
        mpz_addmul(out[i].get_mpz_t(), a(i, j).get_mpz_t(), v[j].get_mpz_t());
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix difference: dimension mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ---------------------------------------------------------- Smith form core

namespace {

struct SnfWork {
  IntMatrix* U = nullptr;
  IntMatrix* Uinv = nullptr;
  IntMatrix* V = nullptr;
};

// row[dst] += f * row[src] on D, mirrored on U and (inversely) on Uinv.
void row_op(IntMatrix& d, SnfWork& w, std::size_t dst, std::size_t src, const Int& f) {
  d.add_row_multiple(dst, src, f);
  if (w.U) w.U->add_row_multiple(dst, src, f);
  if (w.Uinv) w.Uinv->add_col_multiple(src, dst, -f);
}

void row_swap(IntMatrix& d, SnfWork& w, std::size_t a, std::size_t b) {
  d.swap_rows(a, b);
  if (w.U) w.U->swap_rows(a, b);
  if (w.Uinv) w.Uinv->swap_cols(a, b);
}

void row_negate(IntMatrix& d, SnfWork& w, std::size_t r) {
  d.negate_row(r);
  if (w.U) w.U->negate_row(r);
  if (w.Uinv) w.Uinv->negate_col(r);
}

void col_op(IntMatrix& d, SnfWork& w, std::size_t dst, std::size_t src, const Int& f) {
  d.add_col_multiple(dst, src, f);
  if (w.V) w.V->add_col_multiple(dst, src, f);
}

void col_swap(IntMatrix& d, SnfWork& w, std::size_t a, std::size_t b) {
  d.swap_cols(a, b);
  if (w.V) w.V->swap_cols(a, b);
}

// Diagonalizes d in place; returns the rank. Pivot is always the entry of
// least magnitude in the trailing block, which keeps coefficients small.
std::size_t smith_in_place(IntMatrix& d, SnfWork& w) {
  const std::size_t m = d.rows();
  const std::size_t n = d.cols();
  const std::size_t lim = std::min(m, n);
  Int q;
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m && !(bi < m && cmpabs(d(bi, bj), 1) == 0); ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Int& x = d(i, j);
          if (sgn(x) == 0) continue;
          if (bi == m || cmpabs(x, d(bi, bj)) < 0) {
            bi = i;
            bj = j;
            if (cmpabs(x, 1) == 0) break;
          }
        }
      if (bi == m) return t;
      row_swap(d, w, t, bi);
      col_swap(d, w, t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(d(i, t)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        row_op(d, w, i, t, -q);
        if (sgn(d(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(d(t, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        col_op(d, w, j, t, -q);
        if (sgn(d(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      if (cmpabs(d(t, t), 1) != 0) {
        for (std::size_t i = t + 1; i < m && divides; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
              row_op(d, w, t, i, Int(1));
              divides = false;
              break;
            }
      }
      if (divides) break;
    }
    if (sgn(d(t, t)) < 0) row_negate(d, w, t);
  }
  return lim;
}

std::size_t count_nonzero_diag(const IntMatrix& d) {
  std::size_t r = 0;
  while (r < std::min(d.rows(), d.cols()) && sgn(d(r, r)) != 0) ++r;
  return r;
}

}  // namespace

SNFResult smith_normal_form(const IntMatrix& a) {
  SNFResult res;
  res.D = a;
  res.U = IntMatrix::identity(a.rows());
  res.V = IntMatrix::identity(a.cols());
  SnfWork w{&res.U, nullptr, &res.V};
  smith_in_place(res.D, w);
  res.rank = count_nonzero_diag(res.D);
  for (std::size_t i = 0; i < res.rank; ++i) res.diagonal.push_back(res.D(i, i));
  return res;
}

std::vector<Int> smith_diagonal(const IntMatrix& a) {
  if (a.empty()) return {};
  // Reduce to a square-ish Hermite basis first; the Smith form of the
  // column span does not depend on the generating set.
  IntMatrix d = a.rows() < a.cols() ? hermite_basis(a) : a;
  SnfWork w;
  smith_in_place(d, w);
  std::vector<Int> diag;
  for (std::size_t i = 0; i < count_nonzero_diag(d); ++i) diag.push_back(d(i, i));
  return diag;
}

// ------------------------------------------------------ Hermite / echelon

namespace {

// (col_a, col_b) <- (s col_a + t col_b, u col_a + v col_b)
void combine_cols(IntMatrix& h, std::size_t a, std::size_t b, const Int& s, const Int& t, const Int& u,
                  const Int& v) {
  Int na, nb;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    const Int& xa = h(i, a);
    const Int& xb = h(i, b);
    if (sgn(xa) == 0 && sgn(xb) == 0) continue;
    na = s * xa + t * xb;
    nb = u * xa + v * xb;
    h(i, a) = na;
    h(i, b) = nb;
  }
}

// Unimodular column operations bringing the first `pivot_rows` rows into
// column echelon form. Columns [0, rank) carry the pivots; columns beyond
// are zero on those rows.
std::size_t column_echelon(IntMatrix& h, std::size_t pivot_rows, std::vector<std::size_t>& pivots) {
  const std::size_t n = h.cols();
  std::size_t r = 0;
  Int g, s, t, q;
  for (std::size_t i = 0; i < pivot_rows && r < n; ++i) {
    for (std::size_t j = r + 1; j < n; ++j) {
      if (sgn(h(i, j)) == 0) continue;
      if (sgn(h(i, r)) == 0) {
        h.swap_cols(r, j);
        continue;
      }
      if (mpz_divisible_p(h(i, j).get_mpz_t(), h(i, r).get_mpz_t())) {
        mpz_divexact(q.get_mpz_t(), h(i, j).get_mpz_t(), h(i, r).get_mpz_t());
        h.add_col_multiple(j, r, -q);
        continue;
      }
      Int a = h(i, r), b = h(i, j);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Int ag = a / g, bg = b / g;
      // det [[s, -bg], [t, ag]] = s*ag + t*bg = 1
      combine_cols(h, r, j, s, t, -bg, ag);
    }
    if (sgn(h(i, r)) == 0) continue;
    if (sgn(h(i, r)) < 0) h.negate_col(r);
    for (std::size_t k = 0; k < r; ++k) {
      mpz_fdiv_q(q.get_mpz_t(), h(i, k).get_mpz_t(), h(i, r).get_mpz_t());
      h.add_col_multiple(k, r, -q);
    }
    pivots.push_back(i);
    ++r;
  }
  return r;
}

}  // namespace

IntMatrix hermite_basis(const IntMatrix& a) {
  IntMatrix h = a;
  std::vector<std::size_t> pivots;
  std::size_t r = column_echelon(h, h.rows(), pivots);
  return h.column_range(0, r);
}

IntMatrix kernel_basis(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntMatrix h = a.vconcat(IntMatrix::identity(n));
  std::vector<std::size_t> pivots;
  std::size_t r = column_echelon(h, m, pivots);
  IntMatrix k(n, n - r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = r; j < n; ++j) k(i, j - r) = h(m + i, j);
  return k;
}

namespace {

// Forward substitution against an echelon basis; on success `v` is consumed
// and the coefficients are returned.
std::optional<IntVector> echelon_solve(const IntMatrix& basis, const std::vector<std::size_t>& pivots, IntVector v) {
  IntVector coeff(basis.cols());
  std::size_t next_row = 0;
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    const std::size_t p = pivots[k];
    for (; next_row < p; ++next_row)
      if (sgn(v[next_row]) != 0) return std::nullopt;
    if (!mpz_divisible_p(v[p].get_mpz_t(), basis(p, k).get_mpz_t())) return std::nullopt;
    mpz_divexact(coeff[k].get_mpz_t(), v[p].get_mpz_t(), basis(p, k).get_mpz_t());
    if (sgn(coeff[k]) != 0)
      for (std::size_t i = p; i < basis.rows(); ++i)
        if (sgn(basis(i, k)) != 0) mpz_submul(v[i].get_mpz_t(), coeff[k].get_mpz_t(), basis(i, k).get_mpz_t());
    next_row = p + 1;
  }
  for (; next_row < v.size(); ++next_row)
    if (sgn(v[next_row]) != 0) return std::nullopt;
  return coeff;
}

}  // namespace

std::optional<IntVector> solve_integer(const IntMatrix& a, std::span<const Int> b) {
  if (b.size() != a.rows()) throw InvalidInput("solve_integer: right-hand side has wrong length");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntMatrix h = a.vconcat(IntMatrix::identity(n));
  std::vector<std::size_t> pivots;
  std::size_t r = column_echelon(h, m, pivots);
  IntMatrix top = h.row_range(0, m).column_range(0, r);
  auto z = echelon_solve(top, pivots, IntVector(b.begin(), b.end()));
  if (!z) return std::nullopt;
  IntVector x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < r; ++k)
      if (sgn((*z)[k]) != 0) mpz_addmul(x[i].get_mpz_t(), h(m + i, k).get_mpz_t(), (*z)[k].get_mpz_t());
  return x;
}

Lattice::Lattice(std::size_t ambient, const IntMatrix& generators) : ambient_(ambient) {
  if (generators.cols() > 0 && generators.rows() != ambient)
    throw InvalidInput("Lattice: generator length does not match ambient rank");
  IntMatrix h = generators.cols() == 0 ? IntMatrix(ambient, 0) : generators;
  std::size_t r = column_echelon(h, h.rows(), pivot_rows_);
  basis_ = h.column_range(0, r);
}

bool Lattice::contains(std::span<const Int> v) const { return coordinates(v).has_value(); }

std::optional<IntVector> Lattice::coordinates(std::span<const Int> v) const {
  if (v.size() != ambient_) throw InvalidInput("Lattice: vector length does not match ambient rank");
  return echelon_solve(basis_, pivot_rows_, IntVector(v.begin(), v.end()));
}

// ---------------------------------------------------- FPAbelianGroup / AbHom

FPAbelianGroup::FPAbelianGroup(std::size_t ambient_rank, IntMatrix relations)
    : rank_(ambient_rank), relations_(std::move(relations)) {
  if (relations_.cols() == 0) relations_ = IntMatrix(rank_, 0);
  if (relations_.rows() != rank_) throw InvalidInput("FPAbelianGroup: relation rows must equal ambient rank");
  lattice_ = Lattice(rank_, relations_);
  std::vector<Int> diag = smith_diagonal(lattice_.basis());
  free_rank_ = rank_ - diag.size();
  for (auto it = diag.rbegin(); it != diag.rend(); ++it)
    if (cmp(*it, 1) != 0) torsion_.push_back(*it);
}

FPAbelianGroup FPAbelianGroup::cyclic_sum(std::span<const Int> moduli) {
  return FPAbelianGroup(moduli.size(), IntMatrix::diagonal(moduli.size(), moduli.size(), moduli));
}

FPAbelianGroup FPAbelianGroup::free(std::size_t rank) { return FPAbelianGroup(rank, IntMatrix(rank, 0)); }

std::optional<Int> FPAbelianGroup::order() const {
  if (free_rank_ != 0) return std::nullopt;
  Int o = 1;
  for (const Int& t : torsion_) o *= t;
  return o;
}

std::pair<std::vector<Int>, std::size_t> invariant_factors(const FPAbelianGroup& g) {
  return {g.torsion(), g.free_rank()};
}

AbHom::AbHom(FPAbelianGroup source, FPAbelianGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 && matrix_.cols() == 0) matrix_ = IntMatrix(target_.ambient_rank(), source_.ambient_rank());
  if (matrix_.rows() != target_.ambient_rank() || matrix_.cols() != source_.ambient_rank())
    throw InvalidInput("AbHom: matrix dimensions do not match the ambient ranks");
  const IntMatrix& rel = source_.relation_lattice().basis();
  for (std::size_t c = 0; c < rel.cols(); ++c)
    if (!target_.is_identity(matrix_ * std::span<const Int>(rel.column(c))))
      throw InvalidInput("AbHom: matrix does not respect the relations");
}

AbHom AbHom::identity(const FPAbelianGroup& g) { return AbHom(g, g, IntMatrix::identity(g.ambient_rank())); }

AbHom AbHom::zero(const FPAbelianGroup& source, const FPAbelianGroup& target) {
  return AbHom(source, target, IntMatrix(target.ambient_rank(), source.ambient_rank()));
}

bool AbHom::is_zero() const {
  for (std::size_t c = 0; c < matrix_.cols(); ++c)
    if (!target_.is_identity(matrix_.column(c))) return false;
  return true;
}

bool AbHom::equals(const AbHom& other) const {
  if (matrix_.rows() != other.matrix_.rows() || matrix_.cols() != other.matrix_.cols()) return false;
  IntMatrix diff = matrix_ - other.matrix_;
  for (std::size_t c = 0; c < diff.cols(); ++c)
    if (!target_.is_identity(diff.column(c))) return false;
  return true;
}

AbHom compose(const AbHom& g, const AbHom& f) {
  if (g.source().ambient_rank() != f.target().ambient_rank())
    throw InvalidInput("compose: intermediate groups do not match");
  return AbHom(f.source(), g.target(), g.matrix() * f.matrix());
}

IntMatrix hom_kernel_generators(const AbHom& f) {
  const std::size_t a = f.source().ambient_rank();
  const IntMatrix& tb = f.target().relation_lattice().basis();
  IntMatrix neg(tb.rows(), tb.cols());
  for (std::size_t i = 0; i < tb.rows(); ++i)
    for (std::size_t j = 0; j < tb.cols(); ++j) neg(i, j) = -tb(i, j);
  IntMatrix k = kernel_basis(f.matrix().hconcat(neg));
  return k.row_range(0, a);
}

bool hom_is_injective(const AbHom& f) {
  if (f.source().ambient_rank() == 0) return true;
  IntMatrix pre = hom_kernel_generators(f);
  for (std::size_t c = 0; c < pre.cols(); ++c)
    if (!f.source().is_identity(pre.column(c))) return false;
  return true;
}

bool hom_is_surjective(const AbHom& f) {
  const std::size_t b = f.target().ambient_rank();
  if (b == 0) return true;
  IntMatrix h = hermite_basis(f.matrix().hconcat(f.target().relation_lattice().basis()));
  if (h.cols() != b) return false;
  for (std::size_t i = 0; i < b; ++i)
    if (cmp(h(i, i), 1) != 0) return false;
  return true;
}

SimplifiedPresentation simplify(const FPAbelianGroup& g) {
  const std::size_t k = g.ambient_rank();
  IntMatrix d = g.relation_lattice().basis();
  IntMatrix u = IntMatrix::identity(k);
  IntMatrix uinv = IntMatrix::identity(k);
  SnfWork w{&u, &uinv, nullptr};
  smith_in_place(d, w);
  const std::size_t r = count_nonzero_diag(d);

  std::vector<std::size_t> keep;
  std::vector<Int> moduli;
  for (std::size_t i = r; i-- > 0;)
    if (cmp(d(i, i), 1) != 0) {
      keep.push_back(i);
      moduli.push_back(d(i, i));
    }
  for (std::size_t i = r; i < k; ++i) {
    keep.push_back(i);
    moduli.push_back(0);
  }
  IntMatrix to(keep.size(), k), from(k, keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t j = 0; j < k; ++j) {
      to(a, j) = u(keep[a], j);
      from(j, a) = uinv(j, keep[a]);
    }
  FPAbelianGroup compact = FPAbelianGroup::cyclic_sum(moduli);
  return {compact, AbHom(g, compact, std::move(to)), AbHom(compact, g, std::move(from))};
}

SubgroupPresentation subgroup_presentation(const FPAbelianGroup& g, const IntMatrix& generators) {
  const std::size_t s = generators.cols();
  if (s > 0 && generators.rows() != g.ambient_rank())
    throw InvalidInput("subgroup_presentation: generator length does not match ambient rank");
  FPAbelianGroup free = FPAbelianGroup::free(s);
  IntMatrix gens = s == 0 ? IntMatrix(g.ambient_rank(), 0) : generators;
  AbHom map(free, g, gens);
  FPAbelianGroup h(s, hom_kernel_generators(map));
  return {h, AbHom(h, g, gens)};
}

FPAbelianGroup direct_sum(const FPAbelianGroup& a, const FPAbelianGroup& b) {
  const IntMatrix& ra = a.relation_lattice().basis();
  const IntMatrix& rb = b.relation_lattice().basis();
  IntMatrix rel(a.ambient_rank() + b.ambient_rank(), ra.cols() + rb.cols());
  for (std::size_t i = 0; i < ra.rows(); ++i)
    for (std::size_t j = 0; j < ra.cols(); ++j) rel(i, j) = ra(i, j);
  for (std::size_t i = 0; i < rb.rows(); ++i)
    for (std::size_t j = 0; j < rb.cols(); ++j) rel(a.ambient_rank() + i, ra.cols() + j) = rb(i, j);
  return FPAbelianGroup(a.ambient_rank() + b.ambient_rank(), std::move(rel));
}

FPAbelianGroup tensor_product(const FPAbelianGroup& a, const FPAbelianGroup& b) {
  const std::size_t ka = a.ambient_rank();
  const std::size_t kb = b.ambient_rank();
  IntMatrix left = kronecker(a.relation_lattice().basis(), IntMatrix::identity(kb));
  IntMatrix right = kronecker(IntMatrix::identity(ka), b.relation_lattice().basis());
  IntMatrix rel = left.cols() == 0 ? right : (right.cols() == 0 ? left : left.hconcat(right));
  if (rel.rows() != ka * kb) rel = IntMatrix(ka * kb, 0);
  return FPAbelianGroup(ka * kb, std::move(rel));
}

AbHom tensor_map(const AbHom& f, const AbHom& g) {
  return AbHom(tensor_product(f.source(), g.source()), tensor_product(f.target(), g.target()),
               kronecker(f.matrix(), g.matrix()));
}

std::size_t wedge_index(std::size_t i, std::size_t j, std::size_t k) {
  assert(i < j && j < k);
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

FPAbelianGroup exterior_square(const FPAbelianGroup& a) {
  const std::size_t k = a.ambient_rank();
  const std::size_t dim = k < 2 ? 0 : k * (k - 1) / 2;
  const IntMatrix& rel = a.relation_lattice().basis();
  std::vector<IntVector> cols;
  for (std::size_t c = 0; c < rel.cols(); ++c)
    for (std::size_t y = 0; y < k; ++y) {
      IntVector v(dim);
      bool nonzero = false;
      for (std::size_t i = 0; i < k; ++i) {
        if (i == y || sgn(rel(i, c)) == 0) continue;
        nonzero = true;
        if (i < y)
          v[wedge_index(i, y, k)] += rel(i, c);
        else
          v[wedge_index(y, i, k)] -= rel(i, c);
      }
      if (nonzero) cols.push_back(std::move(v));
    }
  return FPAbelianGroup(dim, IntMatrix::from_columns(dim, cols));
}

AbHom exterior_square_map(const AbHom& f) {
  const IntMatrix& m = f.matrix();
  const std::size_t ka = m.cols();
  const std::size_t kb = m.rows();
  FPAbelianGroup src = exterior_square(f.source());
  FPAbelianGroup dst = exterior_square(f.target());
  IntMatrix w(dst.ambient_rank(), src.ambient_rank());
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = i + 1; j < ka; ++j) {
      const std::size_t col = wedge_index(i, j, ka);
      for (std::size_t p = 0; p < kb; ++p)
        for (std::size_t q = p + 1; q < kb; ++q) w(wedge_index(p, q, kb), col) = m(p, i) * m(q, j) - m(q, i) * m(p, j);
    }
  return AbHom(std::move(src), std::move(dst), std::move(w));
}

std::string format_invariants(const std::vector<Int>& torsion, std::size_t free_rank) {
  std::ostringstream os;
  bool first = true;
  for (const Int& t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t;
    first = false;
  }
  if (free_rank > 0) {
    os << (first ? "" : " + ") << "Z";
    if (free_rank > 1) os << '^' << free_rank;
    first = false;
  }
  if (first) os << '1';
  return os.str();
}

}  // namespace capkit
