#include "dgc/dgalgebra.hpp"

#include <stdexcept>

namespace dgc {

AlgPtr make_algebra(std::string name, Complex carrier, SVec unit, Matrix mult) {
  auto a = std::make_shared<Algebra>();
  a->name = std::move(name);
  a->carrier = std::move(carrier);
  a->unit = std::move(unit);
  a->mult = std::move(mult);
  return a;
}

AlgPtr ground_algebra(Field F) {
  auto a = std::make_shared<Algebra>();
  a->name = "k";
  a->carrier = ground_complex(F);
  a->unit = {{0, Scalar(1)}};
  a->mult = Matrix::identity(F, 1);
  return a;
}

bool same_algebra(const Algebra& a, const Algebra& b) {
  if (&a == &b) return true;
  return a.field() == b.field() && a.carrier.deg == b.carrier.deg && a.carrier.d == b.carrier.d &&
         a.mult == b.mult && a.unit == b.unit;
}

bool is_ground(const Algebra& a) { return same_algebra(a, *ground_algebra(a.field())); }

std::string Module::sidedness() const {
  bool l = !is_ground(*left), r = !is_ground(*right);
  if (l && r) return "bimodule";
  if (l) return "left";
  if (r) return "right";
  return "ground";
}

Matrix trivial_left_action(const Complex& c) { return Matrix::identity(c.field, c.dim()); }
Matrix trivial_right_action(const Complex& c) { return Matrix::identity(c.field, c.dim()); }

ModPtr make_module(std::string name, Complex carrier, AlgPtr left, Matrix lact, AlgPtr right, Matrix ract) {
  auto m = std::make_shared<Module>();
  m->name = std::move(name);
  m->carrier = std::move(carrier);
  m->left = left ? left : ground_algebra(m->carrier.field);
  m->right = right ? right : ground_algebra(m->carrier.field);
  size_t n = m->dim();
  m->lact = (lact.rows() == 0 && lact.cols() == 0 && is_ground(*m->left)) ? trivial_left_action(m->carrier)
                                                                           : std::move(lact);
  m->ract = (ract.rows() == 0 && ract.cols() == 0 && is_ground(*m->right)) ? trivial_right_action(m->carrier)
                                                                             : std::move(ract);
  if (m->lact.rows() != n || m->lact.cols() != m->left->dim() * n)
    throw std::invalid_argument("module " + m->name + ": left action has the wrong shape");
  if (m->ract.rows() != n || m->ract.cols() != n * m->right->dim())
    throw std::invalid_argument("module " + m->name + ": right action has the wrong shape");
  return m;
}

ModPtr right_module(std::string name, Complex carrier, AlgPtr right, Matrix ract) {
  return make_module(std::move(name), std::move(carrier), nullptr, Matrix(), std::move(right), std::move(ract));
}

ModPtr left_module(std::string name, AlgPtr left, Complex carrier, Matrix lact) {
  return make_module(std::move(name), std::move(carrier), std::move(left), std::move(lact), nullptr, Matrix());
}

ModPtr ground_module(std::string name, Complex carrier) {
  return make_module(std::move(name), std::move(carrier), nullptr, Matrix(), nullptr, Matrix());
}

ModPtr regular_bimodule(const AlgPtr& a) { return make_module(a->name, a->carrier, a, a->mult, a, a->mult); }

AlgebraMorphism identity_morphism(const AlgPtr& a) { return {a, a, Matrix::identity(a->field(), a->dim())}; }

std::vector<int> plain_degrees(const std::vector<CPtr>& f) {
  std::vector<int> out{0};
  for (auto& c : f) {
    std::vector<int> next;
    next.reserve(out.size() * c->dim());
    for (int d : out)
      for (int e : c->deg) next.push_back(d + e);
    out = std::move(next);
  }
  return out;
}

namespace {

// Sum of d applied at every slot, as a plain map of the given factors.
Matrix plain_differential(const Field& F, const std::vector<CPtr>& f) {
  Matrix acc(F, plain_dim(f), plain_dim(f));
  for (size_t k = 0; k < f.size(); ++k) acc = acc + plain_map(F, f, f, {{k, op_differential(f[k])}});
  return acc;
}

Verdict compare(const Field& F, const Matrix& a, const Matrix& b, const std::vector<CPtr>& src,
                const std::string& what) {
  (void)F;
  Matrix diff = a - b;
  if (diff.is_zero()) return Verdict::pass();
  return Verdict::fail(what + " fails on " + first_nonzero_column(diff, src));
}

}  // namespace

Verdict validate_algebra(const Algebra& a) {
  const Field& F = a.field();
  if (auto v = validate_complex(a.carrier); !v.ok) return Verdict::fail("algebra " + a.name + ": " + v.detail);
  size_t n = a.dim();
  if (a.mult.rows() != n || a.mult.cols() != n * n)
    return Verdict::fail("algebra " + a.name + ": multiplication has the wrong shape");
  for (auto& [i, v] : a.unit)
    if (i >= n || a.carrier.deg[i] != 0) return Verdict::fail("algebra " + a.name + ": unit is not in degree 0");
  auto A = std::make_shared<Complex>(a.carrier);
  std::vector<CPtr> AA{A, A}, AAA{A, A, A}, A1{A};
  if (!is_homogeneous(a.mult, plain_degrees(AA), a.carrier.deg, 0))
    return Verdict::fail("algebra " + a.name + ": multiplication does not preserve degree");
  if (!a.carrier.d.apply(a.unit).empty()) return Verdict::fail("algebra " + a.name + ": d(1) is not zero");
  LocalOp mu = op_matrix(a.mult, AA, A1);
  std::vector<std::pair<Tuple, Scalar>> u;
  for (auto& [i, v] : a.unit) u.push_back({Tuple{i}, v});
  LocalOp unit = op_insert(A1, u);
  Matrix I = Matrix::identity(F, n);
  auto v = compare(F, plain_map(F, AAA, A1, {{0, mu}, {0, mu}}), plain_map(F, AAA, A1, {{1, mu}, {0, mu}}), AAA,
                   "associativity");
  if (!v.ok) return Verdict::fail("algebra " + a.name + ": " + v.detail);
  v = compare(F, plain_map(F, A1, A1, {{0, unit}, {0, mu}}), I, A1, "left unit law");
  if (!v.ok) return Verdict::fail("algebra " + a.name + ": " + v.detail);
  v = compare(F, plain_map(F, A1, A1, {{1, unit}, {0, mu}}), I, A1, "right unit law");
  if (!v.ok) return Verdict::fail("algebra " + a.name + ": " + v.detail);
  v = compare(F, a.carrier.d * a.mult, a.mult * plain_differential(F, AA), AA, "Leibniz rule");
  if (!v.ok) return Verdict::fail("algebra " + a.name + ": " + v.detail);
  return Verdict::pass();
}

Verdict validate_module(const Module& m) {
  const Field& F = m.field();
  auto fail = [&](const std::string& s) { return Verdict::fail("module " + m.name + ": " + s); };
  if (auto v = validate_complex(m.carrier); !v.ok) return fail(v.detail);
  auto M = std::make_shared<Complex>(m.carrier);
  auto L = std::make_shared<Complex>(m.left->carrier);
  auto R = std::make_shared<Complex>(m.right->carrier);
  std::vector<CPtr> M1{M}, LM{L, M}, MR{M, R}, LLM{L, L, M}, MRR{M, R, R}, LMR{L, M, R};
  if (!is_homogeneous(m.lact, plain_degrees(LM), m.carrier.deg, 0)) return fail("left action does not preserve degree");
  if (!is_homogeneous(m.ract, plain_degrees(MR), m.carrier.deg, 0))
    return fail("right action does not preserve degree");
  LocalOp lam = op_matrix(m.lact, LM, M1), rho = op_matrix(m.ract, MR, M1);
  LocalOp muL = op_matrix(m.left->mult, {L, L}, {L}), muR = op_matrix(m.right->mult, {R, R}, {R});
  auto unit_of = [](const Algebra& a, const CPtr& c) {
    std::vector<std::pair<Tuple, Scalar>> u;
    for (auto& [i, v] : a.unit) u.push_back({Tuple{i}, v});
    return op_insert({c}, u);
  };
  Matrix I = Matrix::identity(F, m.dim());
  Verdict v = compare(F, plain_map(F, LLM, M1, {{0, muL}, {0, lam}}), plain_map(F, LLM, M1, {{1, lam}, {0, lam}}),
                      LLM, "left associativity");
  if (!v.ok) return fail(v.detail);
  v = compare(F, plain_map(F, MRR, M1, {{1, muR}, {0, rho}}), plain_map(F, MRR, M1, {{0, rho}, {0, rho}}), MRR,
              "right associativity");
  if (!v.ok) return fail(v.detail);
  v = compare(F, plain_map(F, M1, M1, {{0, unit_of(*m.left, L)}, {0, lam}}), I, M1, "left unit law");
  if (!v.ok) return fail(v.detail);
  v = compare(F, plain_map(F, M1, M1, {{1, unit_of(*m.right, R)}, {0, rho}}), I, M1, "right unit law");
  if (!v.ok) return fail(v.detail);
  v = compare(F, m.carrier.d * m.lact, m.lact * plain_differential(F, LM), LM, "left Leibniz rule");
  if (!v.ok) return fail(v.detail);
  v = compare(F, m.carrier.d * m.ract, m.ract * plain_differential(F, MR), MR, "right Leibniz rule");
  if (!v.ok) return fail(v.detail);
  v = compare(F, plain_map(F, LMR, M1, {{0, lam}, {0, rho}}), plain_map(F, LMR, M1, {{1, rho}, {0, lam}}), LMR,
              "compatibility of the two actions");
  if (!v.ok) return fail(v.detail);
  return Verdict::pass();
}

Verdict validate_algebra_morphism(const AlgebraMorphism& f) {
  const Field& F = f.source->field();
  const Matrix& m = f.map;
  if (m.rows() != f.target->dim() || m.cols() != f.source->dim())
    return Verdict::fail("algebra morphism has the wrong shape");
  if (!is_homogeneous(m, f.source->carrier.deg, f.target->carrier.deg, 0))
    return Verdict::fail("algebra morphism does not preserve degree");
  if (f.target->carrier.d * m != m * f.source->carrier.d)
    return Verdict::fail("algebra morphism does not commute with d");
  if (m.apply(f.source->unit) != f.target->unit) return Verdict::fail("algebra morphism does not preserve the unit");
  auto A = carrier_of(f.source), B = carrier_of(f.target);
  LocalOp phi = op_matrix(m, {A}, {B});
  Matrix lhs = plain_map(F, {A, A}, {B}, {{0, op_mult(f.source)}, {0, phi}});
  Matrix rhs = plain_map(F, {A, A}, {B}, {{0, phi}, {1, phi}, {0, op_mult(f.target)}});
  return compare(F, lhs, rhs, {A, A}, "multiplicativity");
}

// ---------------------------------------------------------------------------

TensorPtr tensor_over_A(const ModPtr& m, const ModPtr& n) { return make_tensor({m, n}); }

namespace {

Matrix left_image(const ModPtr& m, const Matrix& basis) {
  const Field& F = m->field();
  size_t L = m->left->dim(), k = basis.cols(), n = m->dim();
  Matrix out(F, n, L * k);
  for (uint32_t a = 0; a < L; ++a)
    for (uint32_t q = 0; q < k; ++q) {
      SVec v;
      for (auto& [i, c] : basis.col(q)) svec_axpy(F, v, c, m->lact.col(a * n + i));
      out.set_col(a * k + q, v);
    }
  return out;
}

Matrix right_image(const ModPtr& m, const Matrix& basis) {
  const Field& F = m->field();
  size_t R = m->right->dim(), k = basis.cols();
  Matrix out(F, m->dim(), k * R);
  for (uint32_t q = 0; q < k; ++q)
    for (uint32_t b = 0; b < R; ++b) {
      SVec v;
      for (auto& [i, c] : basis.col(q)) svec_axpy(F, v, c, m->ract.col(i * R + b));
      out.set_col(q * R + b, v);
    }
  return out;
}

}  // namespace

ModPtr submodule(const ModPtr& m, const Matrix& basis, const std::string& name) {
  Complex c = subcomplex(m->carrier, basis, name);
  auto l = echelon_coords(basis, left_image(m, basis));
  auto r = echelon_coords(basis, right_image(m, basis));
  if (!l || !r) throw std::logic_error(name + ": subspace is not closed under the actions");
  return make_module(name, std::move(c), m->left, std::move(*l), m->right, std::move(*r));
}

QuotientModule quotient_module(const ModPtr& m, const Matrix& relations, const std::string& name) {
  const Field& F = m->field();
  auto qb = quotient_basis(m->dim(), relations);
  const Matrix &P = qb.projection, &S = qb.section;
  if (!(P * m->carrier.d * relations).is_zero() || !(P * left_image(m, relations)).is_zero() ||
      !(P * right_image(m, relations)).is_zero())
    throw std::logic_error(name + ": relations do not span a submodule");
  std::vector<int> deg;
  std::vector<std::string> names;
  for (uint32_t r : qb.representatives) {
    deg.push_back(m->carrier.deg[r]);
    names.push_back(m->carrier.names[r]);
  }
  Complex c(F, deg, names);
  c.d = P * m->carrier.d * S;
  Matrix lact = P * left_image(m, S), ract = P * right_image(m, S);
  return {make_module(name, std::move(c), m->left, std::move(lact), m->right, std::move(ract)), P, S};
}

MapModule map_module(const ModPtr& x, const ModPtr& n) {
  if (!same_algebra(*x->right, *n->right)) throw std::invalid_argument("Map: right algebras differ");
  const Field& F = x->field();
  MapModule mm;
  mm.x = x;
  mm.n = n;
  mm.hom = hom_complex(x->carrier, n->carrier);
  size_t dX = x->dim(), dN = n->dim(), dB = x->right->dim();
  size_t H = dX * dN;
  // Rows: (a, l, j') for f(x_a b_l) − f(x_a) b_l.
  Matrix rhoT = x->ract.transpose();
  std::vector<SVec> cols(H);
  for (uint32_t i = 0; i < dX; ++i)
    for (uint32_t j = 0; j < dN; ++j) {
      std::map<uint32_t, Scalar> acc;
      for (auto& [al, c] : rhoT.col(i)) {
        auto& s = acc[uint32_t(al * dN + j)];
        s = F.add(s, c);
      }
      for (uint32_t l = 0; l < dB; ++l)
        for (auto& [jp, v] : n->ract.col(j * dB + l)) {
          auto& s = acc[uint32_t((i * dB + l) * dN + jp)];
          s = F.sub(s, v);
        }
      for (auto it = acc.begin(); it != acc.end();) it = (it->second == 0) ? acc.erase(it) : std::next(it);
      cols[i * dN + j] = svec_from_map(acc);
    }
  Matrix constraints = Matrix::from_columns(F, dX * dB * dN, cols);
  mm.basis = graded_kernel(constraints, mm.hom.deg);
  std::string name = "Map(" + x->name + "," + n->name + ")";
  Complex c = subcomplex(mm.hom, mm.basis, name);
  size_t k = mm.basis.cols();

  AlgPtr Lc = n->left, Ra = x->left;
  Matrix lv(F, H, Lc->dim() * k), rv(F, H, k * Ra->dim());
  for (uint32_t a = 0; a < Lc->dim(); ++a)
    for (uint32_t q = 0; q < k; ++q) {
      std::map<uint32_t, Scalar> acc;
      for (auto& [h, v] : mm.basis.col(q)) {
        uint32_t i = h / uint32_t(dN), j = h % uint32_t(dN);
        for (auto& [jp, w] : n->lact.col(a * dN + j)) {
          auto& s = acc[uint32_t(i * dN + jp)];
          s = F.add(s, F.mul(v, w));
        }
      }
      lv.set_col(a * k + q, svec_from_map(acc));
    }
  for (uint32_t q = 0; q < k; ++q) {
    std::map<uint32_t, Scalar> fq;
    for (auto& [h, v] : mm.basis.col(q)) fq[h] = v;
    for (uint32_t a = 0; a < Ra->dim(); ++a) {
      std::map<uint32_t, Scalar> acc;
      for (uint32_t i = 0; i < dX; ++i)
        for (auto& [ip, w] : x->lact.col(a * dX + i))
          for (uint32_t j = 0; j < dN; ++j) {
            auto it = fq.find(uint32_t(ip * dN + j));
            if (it == fq.end()) continue;
            auto& s = acc[uint32_t(i * dN + j)];
            s = F.add(s, F.mul(w, it->second));
          }
      for (auto it = acc.begin(); it != acc.end();) it = (it->second == 0) ? acc.erase(it) : std::next(it);
      rv.set_col(q * Ra->dim() + a, svec_from_map(acc));
    }
  }
  auto lc = echelon_coords(mm.basis, lv), rc = echelon_coords(mm.basis, rv);
  if (!lc || !rc) throw std::logic_error(name + ": residual actions leave the mapping module");
  mm.module = make_module(name, std::move(c), Lc, std::move(*lc), Ra, std::move(*rc));
  return mm;
}

LocalOp op_evaluation(const MapModule& mm) {
  LocalOp op;
  op.in = 2;
  op.out = {carrier_of(mm.n)};
  size_t dN = mm.n->dim();
  Matrix basis = mm.basis;
  op.image = [basis, dN](const Tuple& t) {
    std::vector<std::pair<Tuple, Scalar>> res;
    uint32_t lo = uint32_t(t[1] * dN), hi = uint32_t((t[1] + 1) * dN);
    for (auto& [h, v] : basis.col(t[0]))
      if (h >= lo && h < hi) res.push_back({Tuple{h - lo}, v});
    return res;
  };
  return op;
}

Matrix evaluation(const MapModule& mm, const TensorPtr& src) {
  return tensor_map(src, as_tensor(mm.n), {{0, op_evaluation(mm)}});
}

SVec map_coords(const MapModule& mm, const SVec& hom_vec) {
  auto c = echelon_coords(mm.basis, Matrix::from_columns(mm.hom.field, mm.hom.dim(), {hom_vec}));
  if (!c) throw std::invalid_argument("vector is not in the mapping module");
  return c->col(0);
}

ModPtr restrict_right(const ModPtr& m, const AlgebraMorphism& phi) {
  if (!same_algebra(*m->right, *phi.target)) throw std::invalid_argument("restrict: algebra mismatch");
  const Field& F = m->field();
  auto M = carrier_of(m);
  Matrix ract = plain_map(F, {M, carrier_of(phi.source)}, {M},
                          {{1, op_matrix(phi.map, {carrier_of(phi.source)}, {carrier_of(phi.target)})},
                           {0, op_right_action(m)}});
  return make_module(m->name, m->carrier, m->left, m->lact, phi.source, std::move(ract));
}

ModPtr restrict_left(const ModPtr& m, const AlgebraMorphism& phi) {
  if (!same_algebra(*m->left, *phi.target)) throw std::invalid_argument("restrict: algebra mismatch");
  const Field& F = m->field();
  auto M = carrier_of(m);
  Matrix lact = plain_map(F, {carrier_of(phi.source), M}, {M},
                          {{0, op_matrix(phi.map, {carrier_of(phi.source)}, {carrier_of(phi.target)})},
                           {0, op_left_action(m)}});
  return make_module(m->name, m->carrier, phi.source, std::move(lact), m->right, m->ract);
}

ModPtr scalars_along(const AlgebraMorphism& phi, const ModPtr& m, ScalarsDirection dir) {
  if (dir == ScalarsDirection::Restrict) return restrict_right(m, phi);
  ModPtr b = restrict_left(regular_bimodule(phi.target), phi);
  return make_tensor({m, b}, std::nullopt, m->name + "⊗" + phi.target->name)->module;
}

Verdict check_module_map(const ModuleMap& f) {
  const Field& F = f.source->field();
  if (!same_algebra(*f.source->left, *f.target->left) || !same_algebra(*f.source->right, *f.target->right))
    return Verdict::fail("module map between modules over different algebras");
  if (auto v = check_chain_map(as_chain_map(f)); !v.ok) return v;
  auto X = carrier_of(f.source), Y = carrier_of(f.target);
  auto L = carrier_of(f.source->left), R = carrier_of(f.source->right);
  LocalOp fo = op_matrix(f.m, {X}, {Y}, f.degree);
  // Left linearity carries the Koszul sign of f moving past a.
  Verdict v = compare(F, plain_map(F, {L, X}, {Y}, {{0, op_left_action(f.source)}, {0, fo}}),
                      plain_map(F, {L, X}, {Y}, {{1, fo}, {0, op_left_action(f.target)}}), {L, X}, "left linearity");
  if (!v.ok) return v;
  return compare(F, plain_map(F, {X, R}, {Y}, {{0, op_right_action(f.source)}, {0, fo}}),
                 plain_map(F, {X, R}, {Y}, {{0, fo}, {0, op_right_action(f.target)}}), {X, R}, "right linearity");
}

ChainMap as_chain_map(const ModuleMap& f) { return {f.source->carrier, f.target->carrier, f.degree, f.m}; }

bool PureVerdict::pure() const {
  if (!weak_equivalence) return false;
  for (bool b : witness_results)
    if (!b) return false;
  return true;
}

Matrix tensor_left_with(const ModPtr& w, const ModuleMap& f, TensorPtr* src_out, TensorPtr* tgt_out) {
  TensorPtr src = make_tensor({w, f.source}), tgt = make_tensor({w, f.target});
  Matrix m = tensor_map(src, tgt, {{1, op_matrix(f.m, {carrier_of(f.source)}, {carrier_of(f.target)}, f.degree)}});
  if (src_out) *src_out = src;
  if (tgt_out) *tgt_out = tgt;
  return m;
}

PureVerdict is_pure_weak_equivalence(const ModuleMap& f, const std::vector<ModPtr>& witnesses) {
  PureVerdict r;
  r.weak_equivalence = is_weak_equivalence(as_chain_map(f)).ok;
  for (auto& w : witnesses) {
    TensorPtr s, t;
    Matrix m = tensor_left_with(w, f, &s, &t);
    r.witness_results.push_back(is_weak_equivalence({s->module->carrier, t->module->carrier, f.degree, m}).ok);
  }
  return r;
}

CellularReport verify_cellular_filtration(const ModPtr& n, Side side, const std::vector<std::vector<SVec>>& cells) {
  const Field& F = n->field();
  CellularReport rep;
  AlgPtr A = side == Side::Left ? n->left : n->right;
  size_t dA = A->dim();
  auto generated = [&](const std::vector<SVec>& gens) {
    Matrix g = Matrix::from_columns(F, n->dim(), gens);
    Matrix im = side == Side::Left ? left_image(n, g) : right_image(n, g);
    std::vector<SVec> cols;
    for (size_t j = 0; j < im.cols(); ++j) cols.push_back(im.col(j));
    return cols;
  };
  std::vector<SVec> so_far;
  Echelon prev(F);
  for (size_t k = 0; k < cells.size(); ++k) {
    for (auto& g : cells[k]) {
      if (g.empty()) {
        rep.detail = "stage " + std::to_string(k) + ": zero generator";
        return rep;
      }
      int dg = n->carrier.deg[g.front().first];
      for (auto& [i, v] : g)
        if (n->carrier.deg[i] != dg) {
          rep.detail = "stage " + std::to_string(k) + ": generator is not homogeneous";
          return rep;
        }
      if (!prev.contains(n->carrier.d.apply(g))) {
        rep.detail = "stage " + std::to_string(k) + ": d of a generator leaves the previous stage";
        return rep;
      }
    }
    size_t before = prev.rank();
    for (auto& v : generated(cells[k])) prev.insert(v);
    if (prev.rank() - before != cells[k].size() * dA) {
      rep.detail = "stage " + std::to_string(k) + ": generators are not free";
      return rep;
    }
  }
  if (prev.rank() != n->dim()) {
    rep.detail = "filtration is not exhaustive";
    return rep;
  }
  rep.ok = true;
  rep.flat_cofibrant = true;
  rep.detail = "cellular filtration with " + std::to_string(cells.size()) + " stages";
  return rep;
}

std::optional<RetractWitness> find_retract(const ModPtr& x, Side side) {
  const Field& F = x->field();
  AlgPtr A = side == Side::Left ? x->left : x->right;
  size_t dX = x->dim(), dA = A->dim();
  // Degree-0 cycles of X.
  auto idx0 = x->carrier.in_degree(0);
  if (idx0.empty()) return std::nullopt;
  Matrix d0 = x->carrier.d.select_cols(idx0);
  Matrix z = kernel(d0);
  std::vector<SVec> candidates;
  for (size_t j = 0; j < z.cols(); ++j) {
    SVec v;
    for (auto& [i, c] : z.col(j)) v.emplace_back(idx0[i], c);
    candidates.push_back(v);
  }
  if (candidates.size() > 1) {
    SVec sum;
    for (auto& c : candidates) svec_axpy(F, sum, Scalar(1), c);
    candidates.push_back(sum);
  }
  // Unknowns: degree-0 entries r(x_i) = Σ r_ij a_j.
  std::vector<std::pair<uint32_t, uint32_t>> unknowns;
  for (uint32_t i = 0; i < dX; ++i)
    for (uint32_t j = 0; j < dA; ++j)
      if (x->carrier.deg[i] == A->carrier.deg[j]) unknowns.push_back({i, j});
  size_t U = unknowns.size();
  const Matrix& act = side == Side::Left ? x->lact : x->ract;
  // Rows: [chain: dA*dX] [linearity: dA*dX*dA] [r(x0) = 1: dA].
  size_t rows_chain = dX * dA, rows_lin = dA * dX * dA;
  for (auto& x0 : candidates) {
    std::vector<SVec> cols(U);
    for (size_t u = 0; u < U; ++u) {
      auto [i, j] = unknowns[u];
      std::map<uint32_t, Scalar> acc;
      auto add = [&](uint32_t r, const Scalar& v) {
        auto& s = acc[r];
        s = F.add(s, v);
      };
      // (d r − r d)(x_p) entries: d_A(a_j) at x_i, minus r(d x_p) for p with d x_p ∋ x_i.
      for (auto& [jp, v] : A->carrier.d.col(j)) add(uint32_t(i * dA + jp), v);
      for (uint32_t p = 0; p < dX; ++p) {
        Scalar c = x->carrier.d.at(i, p);
        if (c != 0) add(uint32_t(p * dA + j), F.neg(c));
      }
      // Linearity: r(act(a, x_p)) − a·r(x_p) (or with sides swapped).
      for (uint32_t a = 0; a < dA; ++a)
        for (uint32_t p = 0; p < dX; ++p) {
          uint32_t col = side == Side::Left ? uint32_t(a * dX + p) : uint32_t(p * dA + a);
          Scalar c = act.at(i, col);
          uint32_t base = uint32_t(rows_chain + (a * dX + p) * dA);
          if (c != 0) add(base + j, c);
          if (p == i) {
            uint32_t mc = side == Side::Left ? uint32_t(a * dA + j) : uint32_t(j * dA + a);
            for (auto& [jp, v] : A->mult.col(mc)) add(base + jp, F.neg(v));
          }
        }
      Scalar c0 = svec_get(x0, i);
      if (c0 != 0) add(uint32_t(rows_chain + rows_lin + j), c0);
      for (auto it = acc.begin(); it != acc.end();) it = (it->second == 0) ? acc.erase(it) : std::next(it);
      cols[u] = svec_from_map(acc);
    }
    size_t R = rows_chain + rows_lin + dA;
    Matrix sys = Matrix::from_columns(F, R, cols);
    SVec rhs;
    for (auto& [j, v] : A->unit) rhs.emplace_back(uint32_t(rows_chain + rows_lin + j), v);
    auto sol = solve(sys, rhs, R);
    if (!sol) continue;
    RetractWitness w;
    w.x0 = x0;
    w.r = Matrix(F, dA, dX);
    for (auto& [u, v] : *sol) w.r.add_to(unknowns[u].second, unknowns[u].first, v);
    return w;
  }
  return std::nullopt;
}

}  // namespace dgc
