#include "dgc/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace dgc {

bool is_prime_number(long p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

Field Field::prime(long p) {
  if (!is_prime_number(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  Field F;
  F.kind_ = Kind::Prime;
  F.p_ = p;
  return F;
}

Scalar Field::norm(Scalar x) const {
  if (kind_ == Kind::Rationals) {
    x.canonicalize();
    return x;
  }
  mpz_class num = x.get_num();
  mpz_class den = x.get_den();
  mpz_class P(p_);
  if (den != 1) {
    mpz_class d = den % P;
    if (d < 0) d += P;
    if (d == 0) throw std::domain_error("denominator divisible by the modulus");
    mpz_class di;
    mpz_invert(di.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t());
    num *= di;
  }
  mpz_class r = num % P;
  if (r < 0) r += P;
  return Scalar(r);
}

Scalar Field::inv(const Scalar& a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (kind_ == Kind::Rationals) return Scalar(1) / a;
  mpz_class r;
  mpz_class v = a.get_num();
  mpz_class P(p_);
  mpz_invert(r.get_mpz_t(), v.get_mpz_t(), P.get_mpz_t());
  return Scalar(r);
}

Scalar Field::parse(const std::string& s) const {
  Scalar x;
  if (x.set_str(s, 10) != 0) throw std::invalid_argument("bad scalar '" + s + "'");
  if (x.get_den() == 0) throw std::invalid_argument("bad scalar '" + s + "'");
  x.canonicalize();
  return norm(x);
}

std::string Field::str(const Scalar& x) const { return x.get_str(); }

std::string Field::describe() const {
  return kind_ == Kind::Rationals ? std::string("Q") : "F_" + std::to_string(p_);
}

void svec_axpy(const Field& F, SVec& y, const Scalar& a, const SVec& x) {
  if (a == 0 || x.empty()) return;
  SVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      Scalar v = F.mul(a, x[j].second);
      if (v != 0) out.emplace_back(x[j].first, std::move(v));
      ++j;
    } else {
      Scalar v = F.add(y[i].second, F.mul(a, x[j].second));
      if (v != 0) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  y.swap(out);
}

SVec svec_scaled(const Field& F, const SVec& x, const Scalar& a) {
  SVec out;
  if (a == 0) return out;
  out.reserve(x.size());
  for (auto& [i, v] : x) {
    Scalar w = F.mul(a, v);
    if (w != 0) out.emplace_back(i, std::move(w));
  }
  return out;
}

Scalar svec_get(const SVec& v, uint32_t i) {
  auto it = std::lower_bound(v.begin(), v.end(), i, [](const auto& e, uint32_t k) { return e.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return Scalar(0);
}

SVec svec_from_map(const std::map<uint32_t, Scalar>& m) {
  SVec out;
  for (auto& [i, v] : m)
    if (v != 0) out.emplace_back(i, v);
  return out;
}

Matrix Matrix::identity(Field F, size_t n) {
  Matrix m(F, n, n);
  for (size_t i = 0; i < n; ++i) m.data_[i].emplace_back(uint32_t(i), Scalar(1));
  return m;
}

Matrix Matrix::from_triples(Field F, size_t r, size_t c, const std::vector<Triple>& t) {
  std::vector<std::map<uint32_t, Scalar>> acc(c);
  for (auto& e : t) {
    if (e.row >= r || e.col >= c) throw std::out_of_range("matrix entry out of bounds");
    auto& slot = acc[e.col][e.row];
    slot = F.add(slot, e.value);
  }
  Matrix m(F, r, c);
  for (size_t j = 0; j < c; ++j) m.data_[j] = svec_from_map(acc[j]);
  return m;
}

Matrix Matrix::from_dense(Field F, const std::vector<std::vector<long>>& rows) {
  size_t r = rows.size();
  size_t c = r ? rows[0].size() : 0;
  std::vector<Triple> t;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      if (rows[i][j] != 0) t.push_back({uint32_t(i), uint32_t(j), F.from_int(rows[i][j])});
  return from_triples(F, r, c, t);
}

Matrix Matrix::from_columns(Field F, size_t rows, const std::vector<SVec>& cols) {
  Matrix m(F, rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

void Matrix::set_col(size_t j, SVec v) {
  for (auto& e : v)
    if (e.first >= rows_) throw std::out_of_range("column entry out of bounds");
  data_[j] = std::move(v);
}

Scalar Matrix::at(size_t i, size_t j) const { return svec_get(data_[j], uint32_t(i)); }

void Matrix::add_to(size_t i, size_t j, const Scalar& v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix entry out of bounds");
  SVec e{{uint32_t(i), Scalar(1)}};
  svec_axpy(F_, data_[j], v, e);
}

size_t Matrix::nnz() const {
  size_t n = 0;
  for (auto& c : data_) n += c.size();
  return n;
}

bool Matrix::is_zero() const {
  for (auto& c : data_)
    if (!c.empty()) return false;
  return true;
}

std::vector<Triple> Matrix::triples() const {
  std::vector<Triple> t;
  for (size_t j = 0; j < cols_; ++j)
    for (auto& [i, v] : data_[j]) t.push_back({i, uint32_t(j), v});
  std::sort(t.begin(), t.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  return t;
}

SVec Matrix::apply(const SVec& v) const {
  SVec out;
  for (auto& [j, a] : v) {
    if (j >= cols_) throw std::out_of_range("vector longer than matrix width");
    svec_axpy(F_, out, a, data_[j]);
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  Matrix m(F_, rows_, o.cols_);
  for (size_t j = 0; j < o.cols_; ++j) m.data_[j] = apply(o.data_[j]);
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum dimension mismatch");
  Matrix m = *this;
  for (size_t j = 0; j < cols_; ++j) svec_axpy(F_, m.data_[j], Scalar(1), o.data_[j]);
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference dimension mismatch");
  Matrix m = *this;
  for (size_t j = 0; j < cols_; ++j) svec_axpy(F_, m.data_[j], F_.neg(Scalar(1)), o.data_[j]);
  return m;
}

Matrix Matrix::scaled(const Scalar& a) const {
  Matrix m(F_, rows_, cols_);
  for (size_t j = 0; j < cols_; ++j) m.data_[j] = svec_scaled(F_, data_[j], a);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(F_, cols_, rows_);
  for (size_t j = 0; j < cols_; ++j)
    for (auto& [i, v] : data_[j]) m.data_[i].emplace_back(uint32_t(j), v);
  return m;
}

Matrix Matrix::select_cols(const std::vector<uint32_t>& idx) const {
  Matrix m(F_, rows_, idx.size());
  for (size_t k = 0; k < idx.size(); ++k) m.data_[k] = data_.at(idx[k]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<uint32_t>& idx) const {
  std::vector<int64_t> where(rows_, -1);
  for (size_t k = 0; k < idx.size(); ++k) where.at(idx[k]) = int64_t(k);
  Matrix m(F_, idx.size(), cols_);
  for (size_t j = 0; j < cols_; ++j) {
    std::map<uint32_t, Scalar> acc;
    for (auto& [i, v] : data_[j])
      if (where[i] >= 0) acc[uint32_t(where[i])] = v;
    m.data_[j] = svec_from_map(acc);
  }
  return m;
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (rows_ != o.rows_) throw std::invalid_argument("hstack row mismatch");
  Matrix m(F_, rows_, cols_ + o.cols_);
  for (size_t j = 0; j < cols_; ++j) m.data_[j] = data_[j];
  for (size_t j = 0; j < o.cols_; ++j) m.data_[cols_ + j] = o.data_[j];
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::vector<std::vector<Scalar>> Matrix::dense() const {
  std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_));
  for (size_t j = 0; j < cols_; ++j)
    for (auto& [i, v] : data_[j]) d[i][j] = v;
  return d;
}

std::optional<uint32_t> Echelon::pivot_of(const SVec& v) const {
  if (v.empty()) return std::nullopt;
  if (reverse_) {
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (it->first < limit_) return it->first;
    return std::nullopt;
  }
  if (v.front().first < limit_) return v.front().first;
  return std::nullopt;
}

SVec Echelon::reduce(SVec v) const {
  // Rows are fully reduced, so one sweep over the original support suffices.
  std::vector<std::pair<uint32_t, Scalar>> hits;
  for (auto& [i, a] : v)
    if (rows_.count(i)) hits.emplace_back(i, a);
  for (auto& [p, a] : hits) svec_axpy(F_, v, F_.neg(a), rows_.at(p));
  return v;
}

bool Echelon::contains(const SVec& v) const {
  SVec r = reduce(v);
  return !pivot_of(r).has_value();
}

bool Echelon::insert(SVec v) {
  v = reduce(std::move(v));
  auto p = pivot_of(v);
  if (!p) return false;
  Scalar lead = svec_get(v, *p);
  v = svec_scaled(F_, v, F_.inv(lead));
  for (auto& [q, row] : rows_) {
    Scalar c = svec_get(row, *p);
    if (c != 0) svec_axpy(F_, row, F_.neg(c), v);
  }
  rows_.emplace(*p, std::move(v));
  return true;
}

SpanSolver::SpanSolver(const Matrix& g) : F_(g.field()), n_(uint32_t(g.rows())), ech_(g.field(), false, uint32_t(g.rows())) {
  for (size_t j = 0; j < g.cols(); ++j) {
    SVec v = g.col(j);
    v.emplace_back(n_ + uint32_t(j), Scalar(1));
    SVec r = ech_.reduce(v);
    bool head = !r.empty() && r.front().first < n_;
    if (head) {
      ech_.insert(std::move(v));
      independent_.push_back(uint32_t(j));
    } else {
      SVec rel;
      for (auto& [i, a] : r) rel.emplace_back(i - n_, a);
      relations_.push_back(std::move(rel));
    }
  }
}

std::optional<SVec> SpanSolver::coords(const SVec& w) const {
  SVec r = ech_.reduce(w);
  if (!r.empty() && r.front().first < n_) return std::nullopt;
  SVec out;
  for (auto& [i, a] : r) out.emplace_back(i - n_, F_.neg(a));
  return out;
}

Matrix canonical_span(Field F, size_t dim, const std::vector<SVec>& vectors) {
  Echelon e(F);
  for (auto& v : vectors) e.insert(v);
  Matrix m(F, dim, e.rank());
  size_t j = 0;
  for (auto& [p, row] : e.rows()) m.set_col(j++, row);
  return m;
}

KernelImage kernel_image(const Matrix& m) {
  const Field& F = m.field();
  SpanSolver s(m);
  KernelImage out;
  out.rank = s.rank();
  out.kernel = canonical_span(F, m.cols(), s.relations());
  std::vector<SVec> cols;
  for (size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
  out.image = canonical_span(F, m.rows(), cols);
  return out;
}

Matrix kernel(const Matrix& m) {
  SpanSolver s(m);
  return canonical_span(m.field(), m.cols(), s.relations());
}

size_t rank(const Matrix& m) {
  Echelon e(m.field());
  for (size_t j = 0; j < m.cols(); ++j) e.insert(m.col(j));
  return e.rank();
}

std::optional<SVec> solve(const Matrix& m, const SVec& b, size_t b_len) {
  if (b_len != m.rows()) throw std::invalid_argument("solve: right-hand side length differs from row count");
  SpanSolver s(m);
  return s.coords(b);
}

std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& B) {
  if (B.rows() != m.rows()) throw std::invalid_argument("solve: right-hand side length differs from row count");
  SpanSolver s(m);
  Matrix X(m.field(), m.cols(), B.cols());
  for (size_t j = 0; j < B.cols(); ++j) {
    auto x = s.coords(B.col(j));
    if (!x) return std::nullopt;
    X.set_col(j, *x);
  }
  return X;
}

QuotientBasis quotient_basis(size_t n, const Matrix& relations) {
  if (relations.rows() != n) throw std::invalid_argument("quotient_basis: relation length mismatch");
  const Field& F = relations.field();
  // Reverse-order echelon: pivots are the highest coordinates, so the
  // surviving coordinates are the lexicographically first independent ones.
  Echelon e(F, true);
  for (size_t j = 0; j < relations.cols(); ++j) e.insert(relations.col(j));
  std::vector<int64_t> where(n, -1);
  QuotientBasis q;
  for (uint32_t i = 0; i < n; ++i)
    if (!e.rows().count(i)) {
      where[i] = int64_t(q.representatives.size());
      q.representatives.push_back(i);
    }
  size_t k = q.representatives.size();
  q.projection = Matrix(F, k, n);
  q.section = Matrix(F, n, k);
  for (size_t j = 0; j < k; ++j) {
    q.projection.set_col(q.representatives[j], SVec{{uint32_t(j), Scalar(1)}});
    q.section.set_col(j, SVec{{q.representatives[j], Scalar(1)}});
  }
  for (auto& [p, row] : e.rows()) {
    std::map<uint32_t, Scalar> acc;
    for (auto& [i, a] : row)
      if (i != p) acc[uint32_t(where[i])] = F.neg(a);
    q.projection.set_col(p, svec_from_map(acc));
  }
  return q;
}

std::vector<uint32_t> echelon_pivot_rows(const Matrix& basis) {
  std::vector<uint32_t> piv;
  for (size_t j = 0; j < basis.cols(); ++j) {
    if (basis.col(j).empty()) throw std::invalid_argument("zero column in echelon basis");
    piv.push_back(basis.col(j).front().first);
  }
  return piv;
}

std::optional<Matrix> echelon_coords(const Matrix& basis, const Matrix& v) {
  auto piv = echelon_pivot_rows(basis);
  Matrix c = v.select_rows(piv);
  if (basis * c != v) return std::nullopt;
  return c;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  SpanSolver s(m);
  if (s.rank() != m.rows()) return std::nullopt;
  return solve_matrix(m, Matrix::identity(m.field(), m.rows()));
}

bool is_invertible(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

}  // namespace dgc
