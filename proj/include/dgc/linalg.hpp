#pragma once

// Exact linear algebra over Q and F_p.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace dgc {

using Scalar = mpq_class;

class Field {
 public:
  enum class Kind { Rationals, Prime };

  Field() = default;
  static Field rationals() { return Field(); }
  // Throws std::invalid_argument when p is not prime.
  static Field prime(long p);

  Kind kind() const { return kind_; }
  long p() const { return p_; }
  bool is_prime() const { return kind_ == Kind::Prime; }

  Scalar norm(Scalar x) const;
  Scalar add(const Scalar& a, const Scalar& b) const { return norm(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return norm(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return norm(a * b); }
  Scalar neg(const Scalar& a) const { return norm(-a); }
  Scalar inv(const Scalar& a) const;
  Scalar from_int(long v) const { return norm(Scalar(v)); }

  Scalar parse(const std::string& s) const;
  std::string str(const Scalar& x) const;
  std::string describe() const;

  bool operator==(const Field& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const Field& o) const { return !(*this == o); }

 private:
  Kind kind_ = Kind::Rationals;
  long p_ = 0;
};

bool is_prime_number(long p);

// Sparse vector: sorted by index, no zero entries.
using SVec = std::vector<std::pair<uint32_t, Scalar>>;

void svec_axpy(const Field& F, SVec& y, const Scalar& a, const SVec& x);
SVec svec_scaled(const Field& F, const SVec& x, const Scalar& a);
Scalar svec_get(const SVec& v, uint32_t i);
SVec svec_from_map(const std::map<uint32_t, Scalar>& m);

struct Triple {
  uint32_t row;
  uint32_t col;
  Scalar value;
};

// Column-compressed sparse matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field F, size_t rows, size_t cols) : F_(F), rows_(rows), cols_(cols), data_(cols) {}

  static Matrix identity(Field F, size_t n);
  static Matrix zero(Field F, size_t r, size_t c) { return Matrix(F, r, c); }
  static Matrix from_triples(Field F, size_t r, size_t c, const std::vector<Triple>& t);
  static Matrix from_dense(Field F, const std::vector<std::vector<long>>& rows);
  static Matrix from_columns(Field F, size_t rows, const std::vector<SVec>& cols);

  const Field& field() const { return F_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const SVec& col(size_t j) const { return data_[j]; }
  void set_col(size_t j, SVec v);
  Scalar at(size_t i, size_t j) const;
  void add_to(size_t i, size_t j, const Scalar& v);
  size_t nnz() const;
  bool is_zero() const;
  std::vector<Triple> triples() const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& a) const;
  Matrix transpose() const;
  SVec apply(const SVec& v) const;
  Matrix select_cols(const std::vector<uint32_t>& idx) const;
  Matrix select_rows(const std::vector<uint32_t>& idx) const;
  Matrix hstack(const Matrix& o) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  std::vector<std::vector<Scalar>> dense() const;

 private:
  Field F_;
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<SVec> data_;
};

// Incremental reduced echelon form of a set of row vectors. With reverse set,
// the pivot of a row is its last nonzero index. Only indices below `limit`
// may become pivots.
class Echelon {
 public:
  Echelon(Field F, bool reverse = false, uint32_t limit = UINT32_MAX)
      : F_(F), reverse_(reverse), limit_(limit) {}

  SVec reduce(SVec v) const;
  // Returns true if v was independent of the current rows.
  bool insert(SVec v);
  size_t rank() const { return rows_.size(); }
  const std::map<uint32_t, SVec>& rows() const { return rows_; }
  bool contains(const SVec& v) const;

 private:
  std::optional<uint32_t> pivot_of(const SVec& v) const;
  Field F_;
  bool reverse_;
  uint32_t limit_;
  std::map<uint32_t, SVec> rows_;
};

// Expresses vectors as combinations of fixed generators; dependent
// generators always receive coefficient zero.
class SpanSolver {
 public:
  SpanSolver(const Matrix& generators);
  std::optional<SVec> coords(const SVec& w) const;
  const std::vector<uint32_t>& independent() const { return independent_; }
  const std::vector<SVec>& relations() const { return relations_; }
  size_t rank() const { return independent_.size(); }

 private:
  Field F_;
  uint32_t n_;
  Echelon ech_;
  std::vector<uint32_t> independent_;
  std::vector<SVec> relations_;
};

// Canonical basis of the span of the given vectors, as matrix columns in
// reduced column-echelon form.
Matrix canonical_span(Field F, size_t dim, const std::vector<SVec>& vectors);

struct KernelImage {
  Matrix kernel;
  Matrix image;
  size_t rank = 0;
};

KernelImage kernel_image(const Matrix& m);
Matrix kernel(const Matrix& m);
size_t rank(const Matrix& m);

// Echelon-canonical particular solution of m x = b; nullopt when inconsistent.
// Throws std::invalid_argument on a dimension mismatch.
std::optional<SVec> solve(const Matrix& m, const SVec& b, size_t b_len);

// Solves m X = B column by column. Returns nullopt if any column is inconsistent.
std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& B);

struct QuotientBasis {
  Matrix projection;
  Matrix section;
  std::vector<uint32_t> representatives;
};

QuotientBasis quotient_basis(size_t total_dim, const Matrix& relations);

// Pivot rows of a basis in reduced column-echelon form; coordinates of any
// vector in the span are read off at these rows.
std::vector<uint32_t> echelon_pivot_rows(const Matrix& basis);
// Coordinates of the columns of v in the span of an echelon basis; nullopt if
// some column is not in the span.
std::optional<Matrix> echelon_coords(const Matrix& basis, const Matrix& v);

bool is_invertible(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace dgc
