#include "dgc/dgalgebra.hpp"

#include <algorithm>

namespace dgc {

CPtr carrier_of(const ModPtr& m) { return CPtr(m, &m->carrier); }
CPtr carrier_of(const AlgPtr& a) { return CPtr(a, &a->carrier); }

size_t plain_dim(const std::vector<CPtr>& f) {
  size_t n = 1;
  for (auto& c : f) n *= c->dim();
  return n;
}

static size_t encode(const std::vector<CPtr>& f, const Tuple& t) {
  size_t code = 0;
  for (size_t k = 0; k < f.size(); ++k) code = code * f[k]->dim() + t[k];
  return code;
}

static Tuple decode(const std::vector<CPtr>& f, size_t code) {
  Tuple t(f.size());
  for (size_t k = f.size(); k-- > 0;) {
    t[k] = uint32_t(code % f[k]->dim());
    code /= f[k]->dim();
  }
  return t;
}

std::string plain_tuple_name(const std::vector<CPtr>& f, size_t col) {
  Tuple t = decode(f, col);
  std::string s;
  for (size_t k = 0; k < f.size(); ++k) {
    if (k) s += "⊗";
    s += f[k]->names[t[k]];
  }
  return s;
}

void apply_op(const Field& F, TElem& e, size_t slot, const LocalOp& op) {
  if (slot + op.in > e.factors.size()) throw std::out_of_range("operator slot beyond tensor length");
  std::map<Tuple, Scalar> out;
  bool odd = (op.degree % 2) != 0;
  for (auto& [t, c] : e.terms) {
    int pre = 0;
    if (odd)
      for (size_t k = 0; k < slot; ++k) pre += e.factors[k]->deg[t[k]];
    bool neg = odd && (pre % 2 != 0);
    Tuple sub(t.begin() + long(slot), t.begin() + long(slot + op.in));
    for (auto& [nt, v] : op.image(sub)) {
      Tuple r;
      r.reserve(t.size() - op.in + nt.size());
      r.insert(r.end(), t.begin(), t.begin() + long(slot));
      r.insert(r.end(), nt.begin(), nt.end());
      r.insert(r.end(), t.begin() + long(slot + op.in), t.end());
      Scalar val = F.mul(c, v);
      if (neg) val = F.neg(val);
      auto& s = out[r];
      s = F.add(s, val);
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  e.terms = std::move(out);
  std::vector<CPtr> nf(e.factors.begin(), e.factors.begin() + long(slot));
  nf.insert(nf.end(), op.out.begin(), op.out.end());
  nf.insert(nf.end(), e.factors.begin() + long(slot + op.in), e.factors.end());
  e.factors = std::move(nf);
}

void add_elem(const Field& F, TElem& acc, const TElem& x, const Scalar& c) {
  if (acc.factors.empty()) acc.factors = x.factors;
  for (auto& [t, v] : x.terms) {
    auto& s = acc.terms[t];
    s = F.add(s, F.mul(c, v));
    if (s == 0) acc.terms.erase(t);
  }
}

LocalOp op_matrix(const Matrix& m, std::vector<CPtr> in, std::vector<CPtr> out, int degree) {
  LocalOp op;
  op.in = in.size();
  op.out = out;
  op.degree = degree;
  auto pm = std::make_shared<const Matrix>(m);
  op.image = [pm, in = std::move(in), out = std::move(out)](const Tuple& sub) {
    std::vector<std::pair<Tuple, Scalar>> res;
    size_t code = encode(in, sub);
    for (auto& [r, v] : pm->col(code)) res.emplace_back(decode(out, r), v);
    return res;
  };
  return op;
}

LocalOp op_insert(std::vector<CPtr> out, std::vector<std::pair<Tuple, Scalar>> elem) {
  LocalOp op;
  op.in = 0;
  op.out = std::move(out);
  op.image = [elem = std::move(elem)](const Tuple&) { return elem; };
  return op;
}

LocalOp op_differential(const CPtr& c) {
  LocalOp op;
  op.in = 1;
  op.out = {c};
  op.degree = -1;
  op.image = [c](const Tuple& sub) {
    std::vector<std::pair<Tuple, Scalar>> res;
    for (auto& [r, v] : c->d.col(sub[0])) res.emplace_back(Tuple{r}, v);
    return res;
  };
  return op;
}

LocalOp op_left_action(const ModPtr& m) {
  return op_matrix(m->lact, {carrier_of(m->left), carrier_of(m)}, {carrier_of(m)});
}

LocalOp op_right_action(const ModPtr& m) {
  return op_matrix(m->ract, {carrier_of(m), carrier_of(m->right)}, {carrier_of(m)});
}

LocalOp op_mult(const AlgPtr& a) {
  return op_matrix(a->mult, {carrier_of(a), carrier_of(a)}, {carrier_of(a)});
}

LocalOp op_unit(const AlgPtr& a) {
  std::vector<std::pair<Tuple, Scalar>> e;
  for (auto& [i, v] : a->unit) e.push_back({Tuple{i}, v});
  return op_insert({carrier_of(a)}, e);
}

std::vector<Tuple> enumerate_tuples(const std::vector<CPtr>& f, std::optional<std::pair<int, int>> window) {
  size_t r = f.size();
  std::vector<int> lo_rest(r + 1, 0), hi_rest(r + 1, 0);
  for (size_t k = r; k-- > 0;) {
    if (f[k]->dim() == 0) return {};
    lo_rest[k] = lo_rest[k + 1] + f[k]->min_degree();
    hi_rest[k] = hi_rest[k + 1] + f[k]->max_degree();
  }
  std::vector<Tuple> out;
  Tuple cur(r);
  std::function<void(size_t, int)> rec = [&](size_t k, int sum) {
    if (window && (sum + lo_rest[k] > window->second || sum + hi_rest[k] < window->first)) return;
    if (k == r) {
      out.push_back(cur);
      return;
    }
    for (uint32_t i = 0; i < f[k]->dim(); ++i) {
      cur[k] = i;
      rec(k + 1, sum + f[k]->deg[i]);
    }
  };
  rec(0, 0);
  return out;
}

TElem Tensor::lift(uint32_t q) const {
  TElem e;
  e.factors = fcx;
  for (auto& [i, v] : S.col(q)) e.terms[tuples[i]] = v;
  return e;
}

TElem Tensor::lift_vec(const SVec& v) const {
  const Field& F = module->field();
  TElem e;
  e.factors = fcx;
  for (auto& [q, c] : v)
    for (auto& [i, w] : S.col(q)) {
      auto& s = e.terms[tuples[i]];
      s = F.add(s, F.mul(c, w));
    }
  for (auto it = e.terms.begin(); it != e.terms.end();)
    it = (it->second == 0) ? e.terms.erase(it) : std::next(it);
  return e;
}

SVec Tensor::project(const TElem& e) const {
  const Field& F = module->field();
  if (e.factors.size() != fcx.size()) throw std::logic_error("project: tensor length mismatch");
  std::map<uint32_t, Scalar> acc;
  for (auto& [t, c] : e.terms) {
    auto it = index.find(t);
    if (it == index.end()) continue;  // outside the degree window
    for (auto& [q, v] : P.col(it->second)) {
      auto& s = acc[q];
      s = F.add(s, F.mul(c, v));
    }
  }
  return svec_from_map(acc);
}

static std::optional<uint32_t> unit_basis_index(const Algebra& a) {
  if (a.unit.size() == 1 && a.unit.front().second == 1) return a.unit.front().first;
  return std::nullopt;
}

TensorPtr as_tensor(const ModPtr& m) {
  auto t = std::make_shared<Tensor>();
  const Field& F = m->field();
  t->factors = {m};
  t->fcx = {carrier_of(m)};
  for (uint32_t i = 0; i < m->dim(); ++i) {
    t->tuples.push_back(Tuple{i});
    t->index[Tuple{i}] = i;
  }
  t->relations = Matrix(F, m->dim(), 0);
  t->P = Matrix::identity(F, m->dim());
  t->S = Matrix::identity(F, m->dim());
  t->module = m;
  return t;
}

TensorPtr make_tensor(const std::vector<ModPtr>& factors, std::optional<std::pair<int, int>> window,
                      const std::string& name) {
  if (factors.empty()) throw std::invalid_argument("tensor of no factors");
  if (factors.size() == 1 && !window) return as_tensor(factors[0]);
  const Field& F = factors[0]->field();
  for (size_t j = 0; j + 1 < factors.size(); ++j) {
    if (!same_algebra(*factors[j]->right, *factors[j + 1]->left))
      throw std::invalid_argument("tensor: action mismatch between " + factors[j]->name + " and " +
                                  factors[j + 1]->name);
  }
  auto t = std::make_shared<Tensor>();
  t->factors = factors;
  for (auto& f : factors) t->fcx.push_back(carrier_of(f));
  t->window = window;
  t->tuples = enumerate_tuples(t->fcx, window);
  for (size_t i = 0; i < t->tuples.size(); ++i) t->index[t->tuples[i]] = uint32_t(i);
  size_t N = t->tuples.size();

  auto to_svec = [&](const TElem& e) {
    std::map<uint32_t, Scalar> acc;
    for (auto& [tu, c] : e.terms) {
      auto it = t->index.find(tu);
      if (it != t->index.end()) acc[it->second] = c;
    }
    return svec_from_map(acc);
  };

  // Balancing relations ρ(m, a) ⊗ n − m ⊗ λ(a, n) at each junction.
  std::vector<SVec> rels;
  for (size_t j = 0; j + 1 < factors.size(); ++j) {
    AlgPtr A = factors[j]->right;
    auto skip = unit_basis_index(*A);
    std::vector<CPtr> ex = t->fcx;
    ex.insert(ex.begin() + long(j + 1), carrier_of(A));
    LocalOp rho = op_right_action(factors[j]);
    LocalOp lam = op_left_action(factors[j + 1]);
    for (auto& tu : enumerate_tuples(ex, window)) {
      if (skip && tu[j + 1] == *skip) continue;
      TElem a{ex, {{tu, Scalar(1)}}};
      TElem b = a;
      apply_op(F, a, j, rho);
      apply_op(F, b, j + 1, lam);
      add_elem(F, a, b, Scalar(-1));
      SVec v = to_svec(a);
      if (!v.empty()) rels.push_back(std::move(v));
    }
  }
  t->relations = Matrix::from_columns(F, N, rels);
  auto qb = quotient_basis(N, t->relations);
  t->P = qb.projection;
  t->S = qb.section;

  std::vector<int> deg;
  std::vector<std::string> names;
  for (uint32_t r : qb.representatives) {
    const Tuple& tu = t->tuples[r];
    int d = 0;
    std::string nm;
    for (size_t k = 0; k < tu.size(); ++k) {
      d += t->fcx[k]->deg[tu[k]];
      if (k) nm += "⊗";
      nm += t->fcx[k]->names[tu[k]];
    }
    deg.push_back(d);
    names.push_back(nm);
  }
  Complex q(F, deg, names);
  size_t Q = deg.size();

  std::vector<LocalOp> dops;
  for (auto& f : t->fcx) dops.push_back(op_differential(f));
  auto diff_of = [&](const TElem& e) {
    TElem acc{e.factors, {}};
    for (size_t k = 0; k < e.factors.size(); ++k) {
      TElem x = e;
      apply_op(F, x, k, dops[k]);
      add_elem(F, acc, x, Scalar(1));
    }
    return acc;
  };

  auto project = [&](const TElem& e) {
    std::map<uint32_t, Scalar> acc;
    for (auto& [tu, c] : e.terms) {
      auto it = t->index.find(tu);
      if (it == t->index.end()) continue;
      for (auto& [qq, v] : t->P.col(it->second)) {
        auto& s = acc[qq];
        s = F.add(s, F.mul(c, v));
      }
    }
    return svec_from_map(acc);
  };

  q.d = Matrix(F, Q, Q);
  for (uint32_t k = 0; k < Q; ++k) {
    TElem e{t->fcx, {{t->tuples[qb.representatives[k]], Scalar(1)}}};
    q.d.set_col(k, project(diff_of(e)));
  }
  for (auto& r : rels) {
    TElem e{t->fcx, {}};
    for (auto& [i, v] : r) e.terms[t->tuples[i]] = v;
    if (!project(diff_of(e)).empty())
      throw std::invalid_argument("tensor: differential does not descend to the quotient");
  }

  AlgPtr L = factors.front()->left, R = factors.back()->right;
  Matrix lact(F, Q, L->dim() * Q), ract(F, Q, Q * R->dim());
  LocalOp lam0 = op_left_action(factors.front());
  LocalOp rhoN = op_right_action(factors.back());
  size_t last = factors.size() - 1;
  for (uint32_t a = 0; a < L->dim(); ++a)
    for (uint32_t k = 0; k < Q; ++k) {
      Tuple tu = t->tuples[qb.representatives[k]];
      tu.insert(tu.begin(), a);
      std::vector<CPtr> ex = t->fcx;
      ex.insert(ex.begin(), carrier_of(L));
      TElem e{ex, {{tu, Scalar(1)}}};
      apply_op(F, e, 0, lam0);
      lact.set_col(a * Q + k, project(e));
    }
  for (uint32_t k = 0; k < Q; ++k)
    for (uint32_t b = 0; b < R->dim(); ++b) {
      Tuple tu = t->tuples[qb.representatives[k]];
      tu.push_back(b);
      std::vector<CPtr> ex = t->fcx;
      ex.push_back(carrier_of(R));
      TElem e{ex, {{tu, Scalar(1)}}};
      apply_op(F, e, last, rhoN);
      ract.set_col(k * R->dim() + b, project(e));
    }
  std::string nm = name;
  if (nm.empty()) {
    for (size_t k = 0; k < factors.size(); ++k) {
      if (k) nm += "⊗";
      nm += factors[k]->name;
    }
  }
  t->module = make_module(nm, std::move(q), L, std::move(lact), R, std::move(ract));
  return t;
}

LocalOp op_section(const TensorPtr& t) {
  LocalOp op;
  op.in = 1;
  op.out = t->fcx;
  op.image = [t](const Tuple& sub) {
    std::vector<std::pair<Tuple, Scalar>> res;
    for (auto& [i, v] : t->S.col(sub[0])) res.emplace_back(t->tuples[i], v);
    return res;
  };
  return op;
}

LocalOp op_projection(const TensorPtr& t) {
  LocalOp op;
  op.in = t->fcx.size();
  op.out = {t->carrier()};
  op.image = [t](const Tuple& sub) {
    std::vector<std::pair<Tuple, Scalar>> res;
    auto it = t->index.find(sub);
    if (it == t->index.end()) return res;
    for (auto& [q, v] : t->P.col(it->second)) res.emplace_back(Tuple{q}, v);
    return res;
  };
  return op;
}

LocalOp op_lift(const Matrix& f, const TensorPtr& src, const TensorPtr& tgt, int degree) {
  LocalOp op;
  op.in = src->fcx.size();
  op.out = tgt->fcx;
  op.degree = degree;
  op.image = [f, src, tgt](const Tuple& sub) {
    std::vector<std::pair<Tuple, Scalar>> res;
    auto it = src->index.find(sub);
    if (it == src->index.end()) return res;
    SVec img = f.apply(src->P.col(it->second));
    TElem e = tgt->lift_vec(img);
    for (auto& [tu, v] : e.terms) res.emplace_back(tu, v);
    return res;
  };
  return op;
}

Matrix tensor_map(const TensorPtr& src, const TensorPtr& tgt, const OpSeq& ops) {
  const Field& F = src->module->field();
  Matrix out(F, tgt->dim(), src->dim());
  for (uint32_t q = 0; q < src->dim(); ++q) {
    TElem e = src->lift(q);
    for (auto& [slot, op] : ops) apply_op(F, e, slot, op);
    out.set_col(q, tgt->project(e));
  }
  return out;
}

Matrix plain_map(const Field& F, const std::vector<CPtr>& src, const std::vector<CPtr>& tgt, const OpSeq& ops) {
  size_t ns = plain_dim(src), nt = plain_dim(tgt);
  Matrix out(F, nt, ns);
  for (size_t c = 0; c < ns; ++c) {
    TElem e{src, {{decode(src, c), Scalar(1)}}};
    for (auto& [slot, op] : ops) apply_op(F, e, slot, op);
    if (e.factors.size() != tgt.size()) throw std::logic_error("plain_map: result length mismatch");
    std::map<uint32_t, Scalar> acc;
    for (auto& [tu, v] : e.terms) acc[uint32_t(encode(tgt, tu))] = v;
    out.set_col(c, svec_from_map(acc));
  }
  return out;
}

std::string first_nonzero_column(const Matrix& diff, const std::vector<CPtr>& src) {
  for (size_t j = 0; j < diff.cols(); ++j)
    if (!diff.col(j).empty()) return plain_tuple_name(src, j);
  return {};
}

}  // namespace dgc
