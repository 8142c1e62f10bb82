#pragma once

// Finite chain complexes with homological grading (d lowers degree by one).

#include "dgc/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dgc {

struct Verdict {
  bool ok = true;
  std::string detail;
  static Verdict pass(std::string d = {}) { return {true, std::move(d)}; }
  static Verdict fail(std::string d) { return {false, std::move(d)}; }
};

struct Complex {
  Field field;
  std::vector<int> deg;
  std::vector<std::string> names;
  Matrix d;  // dim x dim, total differential

  Complex() = default;
  Complex(Field F, std::vector<int> degrees, std::vector<std::string> basis_names);

  size_t dim() const { return deg.size(); }
  std::vector<uint32_t> in_degree(int n) const;
  std::vector<int> degrees() const;  // sorted, distinct
  std::map<int, size_t> degree_dims() const;
  int min_degree() const;
  int max_degree() const;
  Matrix diff(int n) const;  // X_n -> X_{n-1}, local coordinates
  std::optional<uint32_t> index_of(const std::string& name) const;
};

Complex ground_complex(Field F);  // k in degree 0
Complex zero_complex(Field F);

Verdict validate_complex(const Complex& x);

struct ChainMap {
  Complex source;
  Complex target;
  int shift = 0;
  Matrix m;  // target.dim x source.dim
};

ChainMap identity_map(const Complex& x);
ChainMap compose(const ChainMap& g, const ChainMap& f);
// d f = (-1)^k f d, plus degree bookkeeping.
Verdict check_chain_map(const ChainMap& f);
// Entries of m only connect degree n to degree n + shift.
bool is_homogeneous(const Matrix& m, const std::vector<int>& src_deg, const std::vector<int>& tgt_deg, int shift);

struct HomologyDegree {
  int degree = 0;
  std::vector<uint32_t> idx;  // basis indices of X_n
  Matrix cycles;              // local coordinates, reduced column-echelon
  QuotientBasis quotient;     // cycle coordinates -> homology coordinates
  size_t dim = 0;
  Matrix representatives;     // ambient coordinates, one column per class
};

struct Homology {
  std::map<int, HomologyDegree> degrees;
  size_t dim(int n) const;
  size_t total() const;
};

Homology homology(const Complex& x);
// Matrix of H_n(f): H_n(X) -> H_{n+k}(Y) in representative coordinates.
Matrix homology_map(const ChainMap& f, const Homology& hx, const Homology& hy, int n);

struct WeakEquivalence {
  bool ok = false;
  std::optional<int> first_failure;
};

WeakEquivalence is_weak_equivalence(const ChainMap& f);
// Restricts the comparison to degrees lo..hi.
WeakEquivalence is_weak_equivalence_on(const ChainMap& f, int lo, int hi);
bool is_acyclic(const Complex& x);

Complex mapping_cone(const ChainMap& f);
Complex desuspend(const Complex& x);
Complex direct_sum(const Complex& x, const Complex& y);

struct PathObject {
  Complex path;
  ChainMap projection;
};
PathObject path_object(const Complex& m);

struct TensorComplex {
  Complex complex;
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // index -> (x index, y index)
};
TensorComplex tensor_complexes(const Complex& x, const Complex& y);

// Degree-k part spanned by elementary maps x_i -> y_j with |y_j| - |x_i| = k;
// index i * dim(Y) + j.
Complex hom_complex(const Complex& x, const Complex& y);

// Degreewise canonical kernel of a homogeneous map whose source carries the
// given degrees. Columns are homogeneous.
Matrix graded_kernel(const Matrix& m, const std::vector<int>& src_deg);

// Subcomplex spanned by the columns of an echelon basis; throws if d does not
// preserve the span.
Complex subcomplex(const Complex& x, const Matrix& basis, const std::string& what);

}  // namespace dgc
