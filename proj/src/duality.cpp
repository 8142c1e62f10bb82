#include "dgc/duality.hpp"

#include <stdexcept>

namespace dgc {

namespace {

Verdict diff_verdict(const Matrix& a, const Matrix& b, const TensorPtr& src, const std::string& what) {
  Matrix d = a - b;
  if (d.is_zero()) return Verdict::pass();
  return Verdict::fail(what + " fails on " + first_nonzero_column(d, src->fcx));
}

std::vector<std::pair<Tuple, Scalar>> elem_terms(const TElem& e) { return {e.terms.begin(), e.terms.end()}; }

std::vector<std::pair<Tuple, Scalar>> unit_terms(const Algebra& a) {
  std::vector<std::pair<Tuple, Scalar>> u;
  for (auto& [i, v] : a.unit) u.push_back({Tuple{i}, v});
  return u;
}

SVec act_left(const Module& m, uint32_t a, const SVec& v) {
  SVec out;
  for (auto& [q, c] : v) svec_axpy(m.field(), out, c, m.lact.col(a * m.dim() + q));
  return out;
}

SVec act_right(const Module& m, const SVec& v, uint32_t a) {
  SVec out;
  size_t dr = m.right->dim();
  for (auto& [q, c] : v) svec_axpy(m.field(), out, c, m.ract.col(q * dr + a));
  return out;
}

// Matrix of u: A → X ⊗_B Y, a ↦ a·z.
Matrix unit_map(const TensorPtr& xy, const Algebra& a, const SVec& z) {
  Matrix u(a.field(), xy->dim(), a.dim());
  for (uint32_t i = 0; i < a.dim(); ++i) u.set_col(i, act_left(*xy->module, i, z));
  return u;
}

// (1 ⊗ e)(z ⊗ -) on X and (e ⊗ 1)(- ⊗ z) on Y.
Matrix triangle_x(const DualityWitness& w, const SVec& z) {
  TensorPtr tx = as_tensor(w.x);
  TensorPtr tb = as_tensor(regular_bimodule(w.x->right));
  return tensor_map(tx, tx, {{0, op_insert_z(w.xy, z)}, {1, op_lift(w.e, w.yx, tb)}, {0, op_right_action(w.x)}});
}

Matrix triangle_y(const DualityWitness& w, const SVec& z) {
  TensorPtr ty = as_tensor(w.y);
  TensorPtr tb = as_tensor(regular_bimodule(w.x->right));
  return tensor_map(ty, ty, {{1, op_insert_z(w.xy, z)}, {0, op_lift(w.e, w.yx, tb)}, {0, op_left_action(w.y)}});
}

void append_block(std::vector<Triple>& out, size_t& offset, uint32_t col, const SVec& v, size_t len) {
  for (auto& [i, c] : v) out.push_back({uint32_t(offset + i), col, c});
  offset += len;
}

void append_matrix(std::vector<Triple>& out, size_t& offset, uint32_t col, const Matrix& m) {
  for (size_t j = 0; j < m.cols(); ++j)
    for (auto& [i, c] : m.col(j)) out.push_back({uint32_t(offset + j * m.rows() + i), col, c});
  offset += m.rows() * m.cols();
}

}  // namespace

LocalOp op_insert_z(const TensorPtr& xy, const SVec& z) { return op_insert(xy->fcx, elem_terms(xy->lift_vec(z))); }

Verdict validate_duality_witness(const DualityWitness& w) {
  auto fail = [&](const std::string& s) { return Verdict::fail("duality witness for " + w.x->name + ": " + s); };
  AlgPtr A = w.x->left, B = w.x->right;
  if (!same_algebra(*w.y->left, *B) || !same_algebra(*w.y->right, *A)) return fail("Y has the wrong algebras");
  if (auto v = check_module_map({regular_bimodule(A), w.xy->module, w.u}); !v.ok) return fail("u: " + v.detail);
  if (auto v = check_module_map({w.yx->module, regular_bimodule(B), w.e}); !v.ok) return fail("e: " + v.detail);
  SVec z = w.u.apply(A->unit);
  if (z != w.z) return fail("z is not u(1)");
  const Field& F = A->field();
  if (triangle_x(w, z) != Matrix::identity(F, w.x->dim())) return fail("(1⊗e)(u⊗1) is not the identity of X");
  if (triangle_y(w, z) != Matrix::identity(F, w.y->dim())) return fail("(e⊗1)(1⊗u) is not the identity of Y");
  return Verdict::pass();
}

DualityWitness make_duality_witness(const ModPtr& x, const ModPtr& y, const SVec& z_plain, const Matrix& e_plain) {
  if (!same_algebra(*x->right, *y->left) || !same_algebra(*x->left, *y->right))
    throw std::invalid_argument("duality witness: " + y->name + " is not a " + x->right->name + "-" + x->left->name +
                                " bimodule");
  DualityWitness w;
  w.x = x;
  w.y = y;
  w.xy = make_tensor({x, y});
  w.yx = make_tensor({y, x});
  size_t dY = y->dim(), dX = x->dim();
  if (e_plain.rows() != x->right->dim() || e_plain.cols() != dY * dX)
    throw std::invalid_argument("duality witness: e has the wrong shape");
  TElem z{w.xy->fcx, {}};
  for (auto& [i, c] : z_plain) z.terms[Tuple{uint32_t(i / dY), uint32_t(i % dY)}] = c;
  w.z = w.xy->project(z);
  w.u = unit_map(w.xy, *x->left, w.z);
  const Field& F = x->field();
  w.e = Matrix(F, e_plain.rows(), w.yx->dim());
  for (uint32_t q = 0; q < w.yx->dim(); ++q) {
    SVec col;
    for (auto& [tu, c] : w.yx->lift(q).terms) svec_axpy(F, col, c, e_plain.col(tu[0] * dX + tu[1]));
    w.e.set_col(q, col);
  }
  return w;
}

DualSearch find_dual_witness(const ModPtr& x) {
  DualSearch out;
  AlgPtr A = x->left, B = x->right;
  const Field& F = x->field();
  MapModule mm = map_module(x, regular_bimodule(B));
  out.map = mm;
  DualityWitness w;
  w.x = x;
  w.y = mm.module;
  w.xy = make_tensor({w.x, w.y});
  w.yx = make_tensor({w.y, w.x});
  w.e = evaluation(mm, w.yx);

  const Module& xym = *w.xy->module;
  size_t dxy = xym.dim(), dA = A->dim(), dX = x->dim(), dY = w.y->dim();
  std::vector<uint32_t> unknowns = xym.carrier.in_degree(0);
  std::vector<Triple> rows;
  size_t total = 0;
  for (uint32_t k = 0; k < unknowns.size(); ++k) {
    SVec zk{{unknowns[k], Scalar(1)}};
    size_t off = 0;
    for (uint32_t a = 0; a < dA; ++a) {
      SVec c = act_left(xym, a, zk);
      svec_axpy(F, c, F.neg(Scalar(1)), act_right(xym, zk, a));
      append_block(rows, off, k, c, dxy);
    }
    append_block(rows, off, k, xym.carrier.d.col(unknowns[k]), dxy);
    append_matrix(rows, off, k, triangle_x(w, zk));
    append_matrix(rows, off, k, triangle_y(w, zk));
    total = off;
  }
  if (total == 0) total = dA * dxy + dxy + dX * dX + dY * dY;
  Matrix sys = Matrix::from_triples(F, total, unknowns.size(), rows);
  SVec rhs;
  size_t base = dA * dxy + dxy;
  for (uint32_t i = 0; i < dX; ++i) rhs.emplace_back(uint32_t(base + i * dX + i), Scalar(1));
  base += dX * dX;
  for (uint32_t i = 0; i < dY; ++i) rhs.emplace_back(uint32_t(base + i * dY + i), Scalar(1));
  auto sol = solve(sys, rhs, total);
  if (!sol) {
    out.refutation = "no central degree-0 cycle z in " + xym.name +
                     " satisfies both triangle identities with the evaluation map";
    return out;
  }
  for (auto& [k, c] : *sol) w.z.emplace_back(unknowns[k], c);
  w.u = unit_map(w.xy, *A, w.z);
  out.witness = w;
  return out;
}

DualityWitness algebra_dual_witness(const AlgebraMorphism& phi) {
  AlgPtr B = phi.target;
  ModPtr reg = regular_bimodule(B);
  DualityWitness w;
  w.x = restrict_left(reg, phi);
  w.y = restrict_right(reg, phi);
  w.xy = make_tensor({w.x, w.y});
  w.yx = make_tensor({w.y, w.x});
  w.e = tensor_map(w.yx, as_tensor(reg), {{0, op_mult(B)}});
  TElem one{w.xy->fcx, {}};
  for (auto& [i, a] : B->unit)
    for (auto& [j, b] : B->unit) one.terms[Tuple{i, j}] = B->field().mul(a, b);
  w.z = w.xy->project(one);
  w.u = unit_map(w.xy, *phi.source, w.z);
  return w;
}

EllMap ell_map(const DualityWitness& w, const ModPtr& n) {
  EllMap out;
  const Field& F = n->field();
  out.source = make_tensor({n, w.y});
  out.target = map_module(w.x, n);
  TensorPtr tb = as_tensor(regular_bimodule(w.x->right));
  std::vector<CPtr> nyx{carrier_of(n), carrier_of(w.y), carrier_of(w.x)};
  Matrix plain = plain_map(F, nyx, {carrier_of(n)}, {{1, op_lift(w.e, w.yx, tb)}, {0, op_right_action(n)}});
  size_t dN = n->dim(), dY = w.y->dim(), dX = w.x->dim();
  out.m = Matrix(F, out.target.module->dim(), out.source->dim());
  for (uint32_t q = 0; q < out.source->dim(); ++q) {
    SVec hom;
    for (auto& [tu, c] : out.source->lift(q).terms)
      for (uint32_t i = 0; i < dX; ++i)
        for (auto& [j, v] : plain.col((tu[0] * dY + tu[1]) * dX + i))
          svec_axpy(F, hom, c, SVec{{uint32_t(i * dN + j), v}});
    out.m.set_col(q, map_coords(out.target, hom));
  }
  out.iso = is_invertible(out.m);
  out.weak_equivalence =
      is_weak_equivalence({out.source->module->carrier, out.target.module->carrier, 0, out.m}).ok;
  return out;
}

CanonicalCoring canonical_coring(const DualityWitness& w, const CoringPtr& c) {
  if (!same_algebra(*w.x->left, *c->algebra)) throw std::invalid_argument("canonical coring: X is not over " + c->name);
  CanonicalCoring out;
  std::string name = w.x->name + "_*(" + c->name + ")";
  out.ycx = make_tensor({w.y, c->carrier, w.x}, std::nullopt, name);
  ModPtr car = out.ycx->module;
  TensorPtr cc = make_tensor({car, car});
  Matrix delta = tensor_map(out.ycx, cc,
                            {{1, op_delta(*c)},
                             {2, op_insert_z(w.xy, w.z)},
                             {0, op_projection(out.ycx)},
                             {1, op_projection(out.ycx)}});
  TensorPtr tb = as_tensor(regular_bimodule(w.x->right));
  Matrix counit = tensor_map(out.ycx, tb,
                             {{1, op_counit(*c)}, {0, op_right_action(w.y)}, {0, op_lift(w.e, w.yx, tb)}});
  out.coring = make_coring(name, car, delta, counit);
  return out;
}

BraidedBimodule universal_braiding(const DualityWitness& w, const CoringPtr& c, const CanonicalCoring& can) {
  BraidedBimodule b = make_braided("T^univ", c, can.coring, w.x, Matrix());
  b.t = tensor_map(b.cx, b.xd, {{0, op_insert_z(w.xy, w.z)}, {1, op_projection(can.ycx)}});
  return b;
}

Verdict check_factorization(const BraidedBimodule& b, const BraidedBimodule& universal, const CoringMorphism& g) {
  BraidedBimodule comp = compose_braided(universal, braided_from_coring_morphism(g));
  AlgPtr B = b.target->algebra;
  TensorPtr xx = make_tensor({universal.x, restrict_left(regular_bimodule(B), g.phi)});
  if (xx->dim() != comp.x->dim()) return Verdict::fail("factorization: carrier mismatch");
  LocalOp one = op_insert({carrier_of(B)}, unit_terms(*B));
  Matrix iota = tensor_map(as_tensor(b.x), xx, {{1, one}});
  if (!is_invertible(iota)) return Verdict::fail("factorization: X → X ⊗_B B is not invertible");
  Matrix lhs = comp.t * tensor_map(b.cx, comp.cx, {{2, one}, {1, op_projection(xx)}});
  Matrix rhs = tensor_map(b.xd, comp.xd, {{1, one}, {0, op_projection(xx)}}) * b.t;
  return diff_verdict(lhs, rhs, b.cx, "factorization through the universal braiding");
}

GOfT g_of_t(const DualityWitness& w, const BraidedBimodule& b, const CanonicalCoring& can) {
  const Coring& d = *b.target;
  TensorPtr tb = as_tensor(regular_bimodule(d.algebra));
  Matrix g = tensor_map(can.ycx, as_tensor(d.carrier),
                        {{1, op_braiding(b)}, {0, op_lift(w.e, w.yx, tb)}, {0, op_left_action(d.carrier)}});
  GOfT out{{can.coring, b.target, identity_morphism(d.algebra), g}, {}, {}};
  out.morphism = validate_coring_morphism(out.g);
  out.factorization = out.morphism.ok ? check_factorization(b, universal_braiding(w, b.source, can), out.g)
                                      : Verdict::fail("g is not a coring morphism");
  return out;
}

DualBraidedVerdict check_dual_braided(const BraidedBimodule& b, const BraidedBimodule& bv, const DualityWitness& w,
                                      const std::vector<Comodule>& samples) {
  DualBraidedVerdict out;
  out.witness = validate_duality_witness(w);
  const Coring &c = *b.source, &d = *b.target;
  TensorPtr tc = as_tensor(c.carrier);
  TensorPtr xyc = make_tensor({w.x, w.y, c.carrier});
  LocalOp z = op_insert_z(w.xy, w.z);
  out.eta = diff_verdict(tensor_map(tc, xyc, {{1, z}, {0, op_braiding(b)}, {1, op_braiding(bv)}}),
                         tensor_map(tc, xyc, {{0, z}}), tc, "unit compatibility");
  TensorPtr dyx = make_tensor({d.carrier, w.y, w.x});
  TensorPtr td = as_tensor(d.carrier);
  LocalOp e = op_lift(w.e, w.yx, as_tensor(regular_bimodule(d.algebra)));
  out.epsilon = diff_verdict(
      tensor_map(dyx, td, {{0, op_braiding(bv)}, {1, op_braiding(b)}, {0, e}, {0, op_left_action(d.carrier)}}),
      tensor_map(dyx, td, {{1, e}, {0, op_right_action(d.carrier)}}), dyx, "counit compatibility");
  if (!out.ok()) return out;
  for (const Comodule& n : samples) {
    Comodule lower = induce_comodule(bv, n);
    Comodule upper = t_upper_star(b, w, n, Flatness::SpotChecked).comodule;
    out.realizes.push_back(lower.module->carrier.degree_dims() == upper.module->carrier.degree_dims());
  }
  return out;
}

BraidedBimodule counit_braided(const CoringPtr& d, const ModPtr& y) {
  AlgPtr A = y->right;
  BraidedBimodule b = make_braided("ε" + d->name, d, trivial_coring(A), y, Matrix());
  b.t = tensor_map(b.cx, b.xd,
                   {{0, op_counit(*d)}, {0, op_left_action(y)}, {1, op_insert({carrier_of(A)}, unit_terms(*A))}});
  return b;
}

}  // namespace dgc
