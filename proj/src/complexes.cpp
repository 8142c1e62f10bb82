#include "dgc/complexes.hpp"

#include <algorithm>
#include <set>

namespace dgc {

Complex::Complex(Field F, std::vector<int> degrees, std::vector<std::string> basis_names)
    : field(F), deg(std::move(degrees)), names(std::move(basis_names)), d(F, deg.size(), deg.size()) {
  if (names.empty() && !deg.empty())
    for (size_t i = 0; i < deg.size(); ++i) names.push_back("e" + std::to_string(i));
  if (names.size() != deg.size()) throw std::invalid_argument("basis names and degrees differ in length");
}

std::vector<uint32_t> Complex::in_degree(int n) const {
  std::vector<uint32_t> out;
  for (size_t i = 0; i < deg.size(); ++i)
    if (deg[i] == n) out.push_back(uint32_t(i));
  return out;
}

std::vector<int> Complex::degrees() const {
  std::set<int> s(deg.begin(), deg.end());
  return {s.begin(), s.end()};
}

std::map<int, size_t> Complex::degree_dims() const {
  std::map<int, size_t> out;
  for (int n : deg) ++out[n];
  return out;
}

int Complex::min_degree() const { return deg.empty() ? 0 : *std::min_element(deg.begin(), deg.end()); }
int Complex::max_degree() const { return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end()); }

Matrix Complex::diff(int n) const {
  return d.select_cols(in_degree(n)).select_rows(in_degree(n - 1));
}

std::optional<uint32_t> Complex::index_of(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return uint32_t(i);
  return std::nullopt;
}

Complex ground_complex(Field F) { return Complex(F, {0}, {"1"}); }
Complex zero_complex(Field F) { return Complex(F, {}, {}); }

bool is_homogeneous(const Matrix& m, const std::vector<int>& sd, const std::vector<int>& td, int shift) {
  for (size_t j = 0; j < m.cols(); ++j)
    for (auto& [i, v] : m.col(j))
      if (td[i] != sd[j] + shift) return false;
  return true;
}

Verdict validate_complex(const Complex& x) {
  if (x.d.rows() != x.dim() || x.d.cols() != x.dim()) return Verdict::fail("differential has wrong shape");
  for (size_t j = 0; j < x.dim(); ++j)
    for (auto& [i, v] : x.d.col(j))
      if (x.deg[i] != x.deg[j] - 1)
        return Verdict::fail("differential entry " + x.names[j] + " -> " + x.names[i] + " does not lower degree by one");
  Matrix dd = x.d * x.d;
  for (int n : x.degrees()) {
    for (uint32_t j : x.in_degree(n))
      if (!dd.col(j).empty()) return Verdict::fail("d∘d != 0 in degree " + std::to_string(n));
  }
  return Verdict::pass();
}

ChainMap identity_map(const Complex& x) { return {x, x, 0, Matrix::identity(x.field, x.dim())}; }

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  return {f.source, g.target, f.shift + g.shift, g.m * f.m};
}

Verdict check_chain_map(const ChainMap& f) {
  if (f.m.rows() != f.target.dim() || f.m.cols() != f.source.dim()) return Verdict::fail("map has wrong shape");
  if (!is_homogeneous(f.m, f.source.deg, f.target.deg, f.shift)) return Verdict::fail("map is not homogeneous of its degree");
  Matrix lhs = f.target.d * f.m;
  Matrix rhs = f.m * f.source.d;
  if (f.shift % 2 != 0) rhs = rhs.scaled(f.source.field.neg(Scalar(1)));
  if (lhs != rhs) {
    Matrix diff = lhs - rhs;
    for (size_t j = 0; j < diff.cols(); ++j)
      if (!diff.col(j).empty()) return Verdict::fail("d f != ±f d on " + f.source.names[j]);
  }
  return Verdict::pass();
}

Matrix graded_kernel(const Matrix& m, const std::vector<int>& src_deg) {
  std::set<int> ds(src_deg.begin(), src_deg.end());
  std::vector<SVec> cols;
  for (int n : ds) {
    std::vector<uint32_t> idx;
    for (size_t i = 0; i < src_deg.size(); ++i)
      if (src_deg[i] == n) idx.push_back(uint32_t(i));
    Matrix k = kernel(m.select_cols(idx));
    for (size_t j = 0; j < k.cols(); ++j) {
      SVec v;
      for (auto& [i, a] : k.col(j)) v.emplace_back(idx[i], a);
      cols.push_back(std::move(v));
    }
  }
  // Degree blocks occupy disjoint coordinates, so the joint echelon form keeps
  // every column homogeneous.
  return canonical_span(m.field(), m.cols(), cols);
}

Complex subcomplex(const Complex& x, const Matrix& basis, const std::string& what) {
  std::vector<int> deg;
  std::vector<std::string> names;
  for (size_t j = 0; j < basis.cols(); ++j) {
    const SVec& c = basis.col(j);
    int dg = x.deg[c.front().first];
    for (auto& [i, v] : c)
      if (x.deg[i] != dg) throw std::logic_error(what + ": basis vector is not homogeneous");
    deg.push_back(dg);
    std::string nm;
    if (c.size() == 1 && c.front().second == 1) {
      nm = x.names[c.front().first];
    } else {
      for (auto& [i, v] : c) {
        if (!nm.empty()) nm += "+";
        nm += (v == 1 ? std::string() : x.field.str(v) + "·") + x.names[i];
      }
      nm = "(" + nm + ")";
    }
    names.push_back(nm);
  }
  Complex s(x.field, deg, names);
  auto c = echelon_coords(basis, x.d * basis);
  if (!c) throw std::logic_error(what + ": differential does not preserve the subspace");
  s.d = *c;
  return s;
}

size_t Homology::dim(int n) const {
  auto it = degrees.find(n);
  return it == degrees.end() ? 0 : it->second.dim;
}

size_t Homology::total() const {
  size_t t = 0;
  for (auto& [n, h] : degrees) t += h.dim;
  return t;
}

Homology homology(const Complex& x) {
  Homology H;
  for (int n : x.degrees()) {
    HomologyDegree h;
    h.degree = n;
    h.idx = x.in_degree(n);
    Matrix dn = x.diff(n);
    h.cycles = kernel(dn);
    Matrix dn1 = x.diff(n + 1);  // local rows = idx
    auto bc = echelon_coords(h.cycles, dn1);
    if (!bc) throw std::logic_error("homology: boundaries are not cycles");
    h.quotient = quotient_basis(h.cycles.cols(), *bc);
    h.dim = h.quotient.representatives.size();
    h.representatives = Matrix(x.field, x.dim(), h.dim);
    for (size_t r = 0; r < h.dim; ++r) {
      SVec v;
      for (auto& [i, a] : h.cycles.col(h.quotient.representatives[r])) v.emplace_back(h.idx[i], a);
      h.representatives.set_col(r, v);
    }
    H.degrees.emplace(n, std::move(h));
  }
  return H;
}

Matrix homology_map(const ChainMap& f, const Homology& hx, const Homology& hy, int n) {
  const Field& F = f.source.field;
  auto itx = hx.degrees.find(n);
  auto ity = hy.degrees.find(n + f.shift);
  size_t rx = itx == hx.degrees.end() ? 0 : itx->second.dim;
  size_t ry = ity == hy.degrees.end() ? 0 : ity->second.dim;
  Matrix out(F, ry, rx);
  if (rx == 0 || ry == 0) return out;
  const HomologyDegree& X = itx->second;
  const HomologyDegree& Y = ity->second;
  Matrix img = f.m * X.representatives;  // ambient target coordinates
  Matrix local = img.select_rows(Y.idx);
  auto zc = echelon_coords(Y.cycles, local);
  if (!zc) throw std::logic_error("homology_map: image of a cycle is not a cycle");
  return Y.quotient.projection * *zc;
}

static WeakEquivalence weq_range(const ChainMap& f, std::optional<std::pair<int, int>> range) {
  if (f.shift != 0) throw std::invalid_argument("weak equivalence test needs a degree-0 map");
  Homology hx = homology(f.source), hy = homology(f.target);
  std::set<int> ds;
  for (auto& [n, h] : hx.degrees) ds.insert(n);
  for (auto& [n, h] : hy.degrees) ds.insert(n);
  for (int n : ds) {
    if (range && (n < range->first || n > range->second)) continue;
    size_t a = hx.dim(n), b = hy.dim(n);
    if (a != b) return {false, n};
    if (a == 0) continue;
    if (!is_invertible(homology_map(f, hx, hy, n))) return {false, n};
  }
  return {true, std::nullopt};
}

WeakEquivalence is_weak_equivalence(const ChainMap& f) { return weq_range(f, std::nullopt); }
WeakEquivalence is_weak_equivalence_on(const ChainMap& f, int lo, int hi) { return weq_range(f, std::make_pair(lo, hi)); }

bool is_acyclic(const Complex& x) { return homology(x).total() == 0; }

Complex mapping_cone(const ChainMap& f) {
  if (f.shift != 0) throw std::invalid_argument("mapping_cone needs a degree-0 map");
  if (!check_chain_map(f).ok) throw std::invalid_argument("mapping_cone needs a chain map");
  const Complex &X = f.source, &Y = f.target;
  const Field& F = X.field;
  std::vector<int> deg = Y.deg;
  std::vector<std::string> names = Y.names;
  for (size_t i = 0; i < X.dim(); ++i) {
    deg.push_back(X.deg[i] + 1);
    names.push_back("c(" + X.names[i] + ")");
  }
  Complex c(F, deg, names);
  size_t ny = Y.dim();
  std::vector<Triple> t;
  for (auto& e : Y.d.triples()) t.push_back(e);
  for (auto& e : f.m.triples()) t.push_back({e.row, uint32_t(ny + e.col), e.value});
  for (auto& e : X.d.triples()) t.push_back({uint32_t(ny + e.row), uint32_t(ny + e.col), F.neg(e.value)});
  c.d = Matrix::from_triples(F, c.dim(), c.dim(), t);
  return c;
}

Complex desuspend(const Complex& x) {
  std::vector<int> deg;
  std::vector<std::string> names;
  for (size_t i = 0; i < x.dim(); ++i) {
    deg.push_back(x.deg[i] - 1);
    names.push_back("s⁻¹" + x.names[i]);
  }
  Complex s(x.field, deg, names);
  s.d = x.d.scaled(x.field.neg(Scalar(1)));
  return s;
}

Complex direct_sum(const Complex& x, const Complex& y) {
  if (x.field != y.field) throw std::invalid_argument("direct_sum: field mismatch");
  std::vector<int> deg = x.deg;
  std::vector<std::string> names = x.names;
  deg.insert(deg.end(), y.deg.begin(), y.deg.end());
  names.insert(names.end(), y.names.begin(), y.names.end());
  Complex s(x.field, deg, names);
  std::vector<Triple> t = x.d.triples();
  for (auto& e : y.d.triples()) t.push_back({uint32_t(x.dim() + e.row), uint32_t(x.dim() + e.col), e.value});
  s.d = Matrix::from_triples(x.field, s.dim(), s.dim(), t);
  return s;
}

PathObject path_object(const Complex& m) {
  const Field& F = m.field;
  Complex sm = desuspend(m);
  Complex p = direct_sum(m, sm);
  size_t n = m.dim();
  // Dx = dx - s⁻¹x; the s⁻¹ block already carries -d.
  for (size_t i = 0; i < n; ++i) p.d.add_to(n + i, i, F.neg(Scalar(1)));
  Matrix proj(F, n, 2 * n);
  for (size_t i = 0; i < n; ++i) proj.set_col(i, SVec{{uint32_t(i), Scalar(1)}});
  return {p, ChainMap{p, m, 0, proj}};
}

TensorComplex tensor_complexes(const Complex& x, const Complex& y) {
  if (x.field != y.field) throw std::invalid_argument("tensor_complexes: field mismatch");
  const Field& F = x.field;
  TensorComplex out;
  std::vector<int> deg;
  std::vector<std::string> names;
  size_t ny = y.dim();
  for (size_t i = 0; i < x.dim(); ++i)
    for (size_t j = 0; j < ny; ++j) {
      deg.push_back(x.deg[i] + y.deg[j]);
      names.push_back(x.names[i] + "⊗" + y.names[j]);
      out.pairs.emplace_back(uint32_t(i), uint32_t(j));
    }
  Complex t(F, deg, names);
  std::vector<Triple> tr;
  for (size_t i = 0; i < x.dim(); ++i)
    for (size_t j = 0; j < ny; ++j) {
      uint32_t c = uint32_t(i * ny + j);
      for (auto& [i2, v] : x.d.col(i)) tr.push_back({uint32_t(i2 * ny + j), c, v});
      Scalar sgn = (x.deg[i] % 2 != 0) ? Scalar(-1) : Scalar(1);
      for (auto& [j2, v] : y.d.col(j)) tr.push_back({uint32_t(i * ny + j2), c, F.mul(sgn, v)});
    }
  t.d = Matrix::from_triples(F, t.dim(), t.dim(), tr);
  out.complex = std::move(t);
  return out;
}

Complex hom_complex(const Complex& x, const Complex& y) {
  if (x.field != y.field) throw std::invalid_argument("hom_complex: field mismatch");
  const Field& F = x.field;
  size_t nx = x.dim(), ny = y.dim();
  std::vector<int> deg;
  std::vector<std::string> names;
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j) {
      deg.push_back(y.deg[j] - x.deg[i]);
      names.push_back("[" + x.names[i] + "↦" + y.names[j] + "]");
    }
  Complex h(F, deg, names);
  Matrix dxT = x.d.transpose();  // column i lists d x_{i'} coefficients on x_i
  std::vector<Triple> tr;
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j) {
      uint32_t c = uint32_t(i * ny + j);
      int k = y.deg[j] - x.deg[i];
      for (auto& [j2, v] : y.d.col(j)) tr.push_back({uint32_t(i * ny + j2), c, v});
      Scalar sgn = (k % 2 != 0) ? Scalar(1) : Scalar(-1);
      for (auto& [i2, v] : dxT.col(i)) tr.push_back({uint32_t(i2 * ny + j), c, F.mul(sgn, v)});
    }
  h.d = Matrix::from_triples(F, h.dim(), h.dim(), tr);
  return h;
}

}  // namespace dgc
