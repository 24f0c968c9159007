#include "capkit/homology.hpp"

#include "capkit/error.hpp"

#include <algorithm>
#include <map>

namespace capkit {

// ---------------------------------------------------------- sparse matrices

SparseIntMatrix::SparseIntMatrix(std::size_t rows, std::vector<Column> columns)
    : rows_(rows), columns_(std::move(columns)) {
  for (auto& col : columns_) {
    std::sort(col.begin(), col.end());
    Column merged;
    for (const auto& [r, v] : col) {
      if (r >= rows_) throw InvalidInput("SparseIntMatrix: row index out of range");
      if (!merged.empty() && merged.back().first == r)
        merged.back().second += v;
      else
        merged.emplace_back(r, v);
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    col = std::move(merged);
  }
}

std::size_t SparseIntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

IntMatrix SparseIntMatrix::to_dense() const {
  IntMatrix m(rows_, columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c)
    for (const auto& [r, v] : columns_[c]) m(r, c) = static_cast<long>(v);
  return m;
}

SparseIntMatrix SparseIntMatrix::permuted(std::span<const std::uint32_t> row_perm,
                                          std::span<const std::uint32_t> col_perm) const {
  std::vector<Column> cols(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    Column& out = cols[col_perm[c]];
    for (const auto& [r, v] : columns_[c]) out.emplace_back(row_perm[r], v);
  }
  return SparseIntMatrix(rows_, std::move(cols));
}

bool product_is_zero(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("product_is_zero: dimension mismatch");
  std::vector<Int> acc(a.rows());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<std::uint32_t> touched;
    for (const auto& [k, v] : b.column(c))
      for (const auto& [r, w] : a.column(k)) {
        acc[r] += Int(static_cast<long>(v)) * static_cast<long>(w);
        touched.push_back(r);
      }
    bool zero = true;
    for (auto r : touched) {
      if (sgn(acc[r]) != 0) zero = false;
      acc[r] = 0;
    }
    if (!zero) return false;
  }
  return true;
}

// ------------------------------------------------------------- bar complex

std::size_t bar_dimension(std::size_t order, int degree, BarBasis basis) {
  const std::size_t base = basis == BarBasis::Normalized ? order - 1 : order;
  std::size_t d = 1;
  for (int i = 0; i < degree; ++i) d *= base;
  return d;
}

std::vector<Element> bar_tuple(std::size_t order, int degree, BarBasis basis, std::size_t index) {
  const std::size_t base = basis == BarBasis::Normalized ? order - 1 : order;
  const Element offset = basis == BarBasis::Normalized ? 1 : 0;
  std::vector<Element> t(static_cast<std::size_t>(degree));
  for (int i = degree - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Element>(index % base) + offset;
    index /= base;
  }
  return t;
}

long long bar_index(std::size_t order, std::span<const Element> tuple, BarBasis basis) {
  const bool normalized = basis == BarBasis::Normalized;
  const std::size_t base = normalized ? order - 1 : order;
  long long idx = 0;
  for (Element e : tuple) {
    if (normalized && e == FiniteGroup::identity()) return -1;
    idx = idx * static_cast<long long>(base) + static_cast<long long>(normalized ? e - 1 : e);
  }
  return idx;
}

SparseIntMatrix boundary_matrix(const FiniteGroup& g, int degree, const HomologyOptions& options) {
  if (degree < 1 || degree > 3) throw InvalidInput("boundary_matrix: degree must be 1, 2 or 3");
  const std::size_t n = g.order();
  if (n > options.cap)
    throw CapExceeded("group of order " + std::to_string(n) + " exceeds the homology cap " +
                      std::to_string(options.cap) + "; use the abelian engine or raise the cap");
  const std::size_t src_dim = bar_dimension(n, degree, options.basis);
  const std::size_t dst_dim = bar_dimension(n, degree - 1, options.basis);
  std::vector<SparseIntMatrix::Column> cols(src_dim);
  std::vector<Element> face(static_cast<std::size_t>(degree - 1));
  for (std::size_t c = 0; c < src_dim; ++c) {
    const auto t = bar_tuple(n, degree, options.basis, c);
    auto& col = cols[c];
    auto emit = [&](long long sign) {
      const long long idx = bar_index(n, face, options.basis);
      if (idx >= 0) col.emplace_back(static_cast<std::uint32_t>(idx), sign);
    };
    // trivial coefficients: the leading face acts as (g2..gn)
    std::copy(t.begin() + 1, t.end(), face.begin());
    emit(1);
    for (int i = 0; i + 1 < degree; ++i) {
      std::size_t k = 0;
      for (int j = 0; j < degree; ++j) {
        if (j == i + 1) continue;
        face[k++] = j == i ? g.mul(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i) + 1])
                           : t[static_cast<std::size_t>(j)];
      }
      emit(i % 2 == 0 ? -1 : 1);
    }
    std::copy(t.begin(), t.end() - 1, face.begin());
    emit(degree % 2 == 0 ? 1 : -1);
  }
  return SparseIntMatrix(dst_dim, std::move(cols));
}

// ---------------------------------------------------- homology computation

namespace {

using SparseVec = std::vector<std::pair<std::uint32_t, Int>>;

// a -= factor * b, both sorted by row.
void sub_multiple(SparseVec& a, const SparseVec& b, const Int& factor) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -factor * b[j].second);
      ++j;
    } else {
      Int v = std::move(a[i].second);
      mpz_submul(v.get_mpz_t(), factor.get_mpz_t(), b[j].second.get_mpz_t());
      if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

const Int* find_entry(const SparseVec& v, std::uint32_t row) {
  auto it = std::lower_bound(v.begin(), v.end(), row, [](const auto& e, std::uint32_t r) { return e.first < r; });
  return it != v.end() && it->first == row ? &it->second : nullptr;
}

void erase_entry(SparseVec& v, std::uint32_t row) {
  auto it = std::lower_bound(v.begin(), v.end(), row, [](const auto& e, std::uint32_t r) { return e.first < r; });
  if (it != v.end() && it->first == row) v.erase(it);
}

// Unit-pivot elimination of the column span of d_in. Each pivot vector has
// ±1 at its pivot row and zero at every other pivot row, so C_n / span(pivots)
// is free on the surviving rows; what is left of the span lives in
// `residuals`, supported on surviving rows only.
struct UnitPivotReducer {
  explicit UnitPivotReducer(std::size_t rows) : rows(rows), slot(rows, -1), acc(rows) {}

  std::size_t rows;
  std::vector<std::int32_t> slot;
  std::vector<std::uint32_t> pivot_row;
  std::vector<int> pivot_sign;
  std::vector<SparseVec> pivot_tail;  // pivot column without its pivot entry
  std::vector<SparseVec> residuals;
  std::vector<Int> acc;
  std::vector<char> touched_flag;

  SparseVec reduce(const SparseVec& col) {
    if (touched_flag.size() != rows) touched_flag.assign(rows, 0);
    std::vector<std::uint32_t> touched;
    auto touch = [&](std::uint32_t r) {
      if (!touched_flag[r]) {
        touched_flag[r] = 1;
        touched.push_back(r);
      }
    };
    for (const auto& [r, v] : col) {
      acc[r] += v;
      touch(r);
    }
    Int lambda;
    for (const auto& [r, v] : col) {
      const std::int32_t s = slot[r];
      if (s < 0 || sgn(acc[r]) == 0) continue;
      lambda = acc[r] * pivot_sign[static_cast<std::size_t>(s)];
      acc[r] = 0;
      for (const auto& [row, val] : pivot_tail[static_cast<std::size_t>(s)]) {
        mpz_submul(acc[row].get_mpz_t(), lambda.get_mpz_t(), val.get_mpz_t());
        touch(row);
      }
    }
    std::sort(touched.begin(), touched.end());
    SparseVec out;
    for (auto r : touched) {
      touched_flag[r] = 0;
      if (sgn(acc[r]) != 0) out.emplace_back(r, std::move(acc[r]));
      acc[r] = 0;
    }
    return out;
  }

  // Promotes a unit entry of `v` (already reduced) to a pivot.
  bool try_promote(SparseVec& v) {
    const std::pair<std::uint32_t, Int>* unit = nullptr;
    for (const auto& e : v)
      if (cmpabs(e.second, 1) == 0) {
        unit = &e;
        break;
      }
    if (!unit) return false;
    const std::uint32_t b = unit->first;
    const int sign = sgn(unit->second);
    SparseVec tail;
    tail.reserve(v.size() - 1);
    for (auto& e : v)
      if (e.first != b) tail.push_back(std::move(e));
    v.clear();

    auto eliminate = [&](SparseVec& w) {
      const Int* mu = find_entry(w, b);
      if (!mu) return;
      const Int factor = *mu * sign;
      erase_entry(w, b);
      sub_multiple(w, tail, factor);
    };
    for (auto& t : pivot_tail) eliminate(t);
    for (auto& r : residuals) eliminate(r);
    std::erase_if(residuals, [](const SparseVec& r) { return r.empty(); });

    slot[b] = static_cast<std::int32_t>(pivot_row.size());
    pivot_row.push_back(b);
    pivot_sign.push_back(sign);
    pivot_tail.push_back(std::move(tail));
    return true;
  }

  void add_column(const SparseVec& col) {
    SparseVec v = reduce(col);
    if (v.empty()) return;
    if (!try_promote(v)) residuals.push_back(std::move(v));
  }

  void finish() {
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i < residuals.size(); ++i) {
        SparseVec v = residuals[i];
        if (std::any_of(v.begin(), v.end(), [](const auto& e) { return cmpabs(e.second, 1) == 0; })) {
          residuals.erase(residuals.begin() + static_cast<std::ptrdiff_t>(i));
          try_promote(v);
          again = true;
          break;
        }
      }
    }
  }
};

}  // namespace

HomologyComputation::HomologyComputation(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out)
    : dim_(d_out.cols()) {
  if (d_in.rows() != dim_) throw InvalidInput("HomologyComputation: boundary dimensions do not chain");

  UnitPivotReducer red(dim_);
  for (std::size_t c = 0; c < d_in.cols(); ++c) {
    SparseVec col;
    for (const auto& [r, v] : d_in.column(c)) col.emplace_back(r, Int(static_cast<long>(v)));
    red.add_column(col);
  }
  red.finish();

  position_.assign(dim_, -1);
  pivot_slot_ = red.slot;
  pivot_rows_ = red.pivot_row;
  pivot_sign_ = red.pivot_sign;
  for (std::uint32_t r = 0; r < dim_; ++r)
    if (pivot_slot_[r] < 0) {
      position_[r] = static_cast<std::int32_t>(survivors_.size());
      survivors_.push_back(r);
    }
  const std::size_t t = survivors_.size();
  pivot_tail_.resize(pivot_rows_.size());
  for (std::size_t s = 0; s < pivot_rows_.size(); ++s)
    for (auto& [r, v] : red.pivot_tail[s]) pivot_tail_[s].emplace_back(static_cast<std::uint32_t>(position_[r]), v);

  // d_out restricted to the surviving coordinates.
  IntMatrix d_surv(d_out.rows(), t);
  for (std::size_t k = 0; k < t; ++k)
    for (const auto& [r, v] : d_out.column(survivors_[k])) d_surv(r, k) = static_cast<long>(v);
  kernel_lattice_ = Lattice(t, kernel_basis(d_surv));
  kernel_ = kernel_lattice_.basis();

  std::vector<IntVector> rels;
  if (!red.residuals.empty()) {
    IntMatrix res(t, red.residuals.size());
    for (std::size_t j = 0; j < red.residuals.size(); ++j)
      for (const auto& [r, v] : red.residuals[j]) res(static_cast<std::size_t>(position_[r]), j) = v;
    IntMatrix basis = hermite_basis(res);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      auto c = kernel_lattice_.coordinates(basis.column(j));
      if (!c) throw InvalidInput("HomologyComputation: boundaries are not cycles (d_out * d_in != 0)");
      rels.push_back(std::move(*c));
    }
  }
  homology_ = FPAbelianGroup(kernel_.cols(), IntMatrix::from_columns(kernel_.cols(), rels));
}

IntVector HomologyComputation::reduce(const Chain& x) const {
  IntVector y(survivors_.size());
  Int lambda;
  for (const auto& [r, v] : x) {
    if (r >= dim_) throw InvalidInput("HomologyComputation: chain index out of range");
    if (position_[r] >= 0) {
      y[static_cast<std::size_t>(position_[r])] += v;
      continue;
    }
    const auto s = static_cast<std::size_t>(pivot_slot_[r]);
    lambda = v * pivot_sign_[s];
    for (const auto& [p, w] : pivot_tail_[s]) mpz_submul(y[p].get_mpz_t(), lambda.get_mpz_t(), w.get_mpz_t());
  }
  return y;
}

IntVector HomologyComputation::coordinates(const Chain& cycle) const {
  auto c = kernel_lattice_.coordinates(reduce(cycle));
  if (!c) throw InvalidInput("HomologyComputation: chain is not a cycle");
  return *c;
}

Chain HomologyComputation::cycle(std::size_t j) const {
  Chain out;
  for (std::size_t k = 0; k < survivors_.size(); ++k)
    if (sgn(kernel_(k, j)) != 0) out.emplace_back(survivors_[k], kernel_(k, j));
  return out;
}

// ------------------------------------------------------- Schur multiplier

MultiplierPresentation::MultiplierPresentation(FiniteGroup group, BarBasis basis, HomologyComputation computation)
    : group_(std::move(group)), basis_(basis), computation_(std::move(computation)) {}

IntMatrix MultiplierPresentation::kernel_basis() const {
  IntMatrix k(computation_.chain_dimension(), computation_.kernel_rank());
  for (std::size_t j = 0; j < k.cols(); ++j)
    for (const auto& [r, v] : computation_.cycle(j)) k(r, j) = v;
  return k;
}

FPAbelianGroup first_homology(const FiniteGroup& g, const HomologyOptions& options) {
  return HomologyComputation(boundary_matrix(g, 2, options), boundary_matrix(g, 1, options)).homology();
}

MultiplierPresentation schur_multiplier(const FiniteGroup& g, const HomologyOptions& options) {
  SparseIntMatrix d3 = boundary_matrix(g, 3, options);
  SparseIntMatrix d2 = boundary_matrix(g, 2, options);
  return MultiplierPresentation(g, options.basis, HomologyComputation(d3, d2));
}

AbHom induced_multiplier_map(const GroupHom& f, const MultiplierPresentation& src, const MultiplierPresentation& dst) {
  if (!(f.source() == src.group()) || !(f.target() == dst.group()))
    throw InvalidInput("induced_multiplier_map: presentations do not match the homomorphism's endpoints");
  if (src.basis() != dst.basis()) throw InvalidInput("induced_multiplier_map: presentations use different bar bases");
  const std::size_t ns = src.group().order();
  const std::size_t nt = dst.group().order();
  const HomologyComputation& hs = src.computation();
  const HomologyComputation& ht = dst.computation();
  IntMatrix m(ht.kernel_rank(), hs.kernel_rank());
  for (std::size_t j = 0; j < hs.kernel_rank(); ++j) {
    std::map<std::uint32_t, Int> image;
    for (const auto& [idx, v] : hs.cycle(j)) {
      auto t = bar_tuple(ns, 2, src.basis(), idx);
      for (auto& e : t) e = f(e);
      const long long k = bar_index(nt, t, dst.basis());
      if (k >= 0) image[static_cast<std::uint32_t>(k)] += v;
    }
    Chain chain;
    for (auto& [k, v] : image)
      if (sgn(v) != 0) chain.emplace_back(k, std::move(v));
    IntVector c = ht.coordinates(chain);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return AbHom(src.h2(), dst.h2(), std::move(m));
}

bool is_multiplier_mono(const MultiplierPresentation& mg, const Subgroup& n, const HomologyOptions& options) {
  if (!n.is_central()) throw InvalidInput("is_multiplier_mono: subgroup is not central");
  if (n.is_trivial() || mg.h2().is_trivial()) return true;
  Quotient q = quotient(mg.group(), n);
  MultiplierPresentation mq = schur_multiplier(q.group, options);
  return hom_is_injective(induced_multiplier_map(q.projection, mg, mq));
}

bool is_multiplier_mono(const FiniteGroup& g, const Subgroup& n, const HomologyOptions& options) {
  if (!n.is_central()) throw InvalidInput("is_multiplier_mono: subgroup is not central");
  return is_multiplier_mono(schur_multiplier(g, options), n, options);
}

}  // namespace capkit
