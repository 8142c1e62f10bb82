#include "dgc/corings.hpp"

#include <stdexcept>

namespace dgc {

namespace {

Verdict diff_verdict(const Matrix& a, const Matrix& b, const std::vector<CPtr>& src, const std::string& what) {
  Matrix d = a - b;
  if (d.is_zero()) return Verdict::pass();
  return Verdict::fail(what + " fails on " + first_nonzero_column(d, src));
}

std::vector<std::pair<Tuple, Scalar>> unit_terms(const Algebra& a) {
  std::vector<std::pair<Tuple, Scalar>> u;
  for (auto& [i, v] : a.unit) u.push_back({Tuple{i}, v});
  return u;
}

}  // namespace

LocalOp op_delta(const Coring& c) { return op_lift(c.delta, as_tensor(c.carrier), c.cc); }

LocalOp op_counit(const Coring& c) {
  return op_matrix(c.counit, {carrier_of(c.carrier)}, {carrier_of(c.algebra)});
}

Matrix project_plain(const TensorPtr& t, const Matrix& plain) {
  const Field& F = plain.field();
  size_t n = plain_dim(t->fcx);
  if (plain.rows() != n) throw std::invalid_argument("structure map has the wrong number of rows");
  Matrix out(F, t->dim(), plain.cols());
  std::vector<CPtr> f = t->fcx;
  for (size_t j = 0; j < plain.cols(); ++j) {
    TElem e{f, {}};
    for (auto& [r, v] : plain.col(j)) {
      Tuple tu(f.size());
      size_t code = r;
      for (size_t k = f.size(); k-- > 0;) {
        tu[k] = uint32_t(code % f[k]->dim());
        code /= f[k]->dim();
      }
      e.terms[tu] = v;
    }
    out.set_col(j, t->project(e));
  }
  return out;
}

CoringPtr make_coring(std::string name, ModPtr carrier, Matrix delta, Matrix counit, std::optional<Matrix> coaug) {
  auto c = std::make_shared<Coring>();
  c->name = std::move(name);
  c->algebra = carrier->left;
  c->carrier = carrier;
  c->cc = make_tensor({carrier, carrier});
  c->delta = std::move(delta);
  c->counit = std::move(counit);
  c->coaug = std::move(coaug);
  return c;
}

CoringPtr make_coring_plain(std::string name, ModPtr carrier, const Matrix& delta_plain, Matrix counit,
                            std::optional<Matrix> coaug) {
  TensorPtr cc = make_tensor({carrier, carrier});
  Matrix delta = project_plain(cc, delta_plain);
  auto c = std::make_shared<Coring>();
  c->name = std::move(name);
  c->algebra = carrier->left;
  c->carrier = carrier;
  c->cc = cc;
  c->delta = std::move(delta);
  c->counit = std::move(counit);
  c->coaug = std::move(coaug);
  return c;
}

Verdict validate_coring(const Coring& c) {
  const Field& F = c.carrier->field();
  auto fail = [&](const std::string& s) { return Verdict::fail("coring " + c.name + ": " + s); };
  if (!same_algebra(*c.carrier->left, *c.algebra) || !same_algebra(*c.carrier->right, *c.algebra))
    return fail("carrier is not a bimodule over the algebra");
  if (auto v = validate_module(*c.carrier); !v.ok) return fail(v.detail);
  size_t n = c.carrier->dim(), na = c.algebra->dim();
  if (c.delta.rows() != c.cc->dim() || c.delta.cols() != n) return fail("comultiplication has the wrong shape");
  if (c.counit.rows() != na || c.counit.cols() != n) return fail("counit has the wrong shape");
  const Complex& cx = c.carrier->carrier;
  auto C = carrier_of(c.carrier);
  auto A = carrier_of(c.algebra);
  const Complex& ccx = c.cc->module->carrier;
  if (!is_homogeneous(c.delta, cx.deg, ccx.deg, 0)) return fail("comultiplication does not preserve degree");
  if (!is_homogeneous(c.counit, cx.deg, c.algebra->carrier.deg, 0)) return fail("counit does not preserve degree");
  Verdict v = diff_verdict(ccx.d * c.delta, c.delta * cx.d, {C}, "comultiplication chain map law");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(c.algebra->carrier.d * c.counit, c.counit * cx.d, {C}, "counit chain map law");
  if (!v.ok) return fail(v.detail);

  auto CC = c.cc->carrier();
  LocalOp dl = op_matrix(c.delta, {C}, {CC});
  LocalOp eps = op_counit(c);
  v = diff_verdict(c.delta * c.carrier->lact, c.cc->module->lact * plain_map(F, {A, C}, {A, CC}, {{1, dl}}), {A, C},
                   "left linearity of the comultiplication");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(c.delta * c.carrier->ract, c.cc->module->ract * plain_map(F, {C, A}, {CC, A}, {{0, dl}}), {C, A},
                   "right linearity of the comultiplication");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(c.counit * c.carrier->lact, c.algebra->mult * plain_map(F, {A, C}, {A, A}, {{1, eps}}), {A, C},
                   "left linearity of the counit");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(c.counit * c.carrier->ract, c.algebra->mult * plain_map(F, {C, A}, {A, A}, {{0, eps}}), {C, A},
                   "right linearity of the counit");
  if (!v.ok) return fail(v.detail);

  TensorPtr tc = as_tensor(c.carrier);
  TensorPtr ccc = make_tensor({c.carrier, c.carrier, c.carrier});
  LocalOp D = op_delta(c);
  v = diff_verdict(tensor_map(tc, ccc, {{0, D}, {0, D}}), tensor_map(tc, ccc, {{0, D}, {1, D}}), {C}, "coassociativity");
  if (!v.ok) return fail(v.detail);
  Matrix I = Matrix::identity(F, n);
  v = diff_verdict(tensor_map(tc, tc, {{0, D}, {0, eps}, {0, op_left_action(c.carrier)}}), I, {C}, "left counit law");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(tensor_map(tc, tc, {{0, D}, {1, eps}, {0, op_right_action(c.carrier)}}), I, {C},
                   "right counit law");
  if (!v.ok) return fail(v.detail);

  if (c.coaug) {
    const Matrix& eta = *c.coaug;
    if (eta.rows() != n || eta.cols() != na) return fail("coaugmentation has the wrong shape");
    if (!is_homogeneous(eta, c.algebra->carrier.deg, cx.deg, 0)) return fail("coaugmentation does not preserve degree");
    if (cx.d * eta != eta * c.algebra->carrier.d) return fail("coaugmentation is not a chain map");
    LocalOp et = op_matrix(eta, {A}, {C});
    v = diff_verdict(eta * c.algebra->mult, c.carrier->lact * plain_map(F, {A, A}, {A, C}, {{1, et}}), {A, A},
                     "left linearity of the coaugmentation");
    if (!v.ok) return fail(v.detail);
    v = diff_verdict(eta * c.algebra->mult, c.carrier->ract * plain_map(F, {A, A}, {C, A}, {{0, et}}), {A, A},
                     "right linearity of the coaugmentation");
    if (!v.ok) return fail(v.detail);
    if (c.counit * eta != Matrix::identity(F, na)) return fail("counit does not split the coaugmentation");
    SVec one = eta.apply(c.algebra->unit);
    TElem e{c.cc->fcx, {}};
    for (auto& [i, a] : one)
      for (auto& [j, b] : one) e.terms[Tuple{i, j}] = F.mul(a, b);
    if (c.delta.apply(one) != c.cc->project(e)) return fail("coaugmentation is not grouplike");
  }
  return Verdict::pass();
}

Comodule make_comodule(std::string name, CoringPtr c, ModPtr m, Matrix delta) {
  TensorPtr mc = make_tensor({m, c->carrier});
  return {std::move(name), std::move(c), std::move(m), mc, std::move(delta)};
}

Comodule make_comodule_plain(std::string name, CoringPtr c, ModPtr m, const Matrix& delta_plain) {
  TensorPtr mc = make_tensor({m, c->carrier});
  Matrix delta = project_plain(mc, delta_plain);
  return {std::move(name), std::move(c), std::move(m), mc, std::move(delta)};
}

LeftComodule make_left_comodule(std::string name, CoringPtr c, ModPtr m, Matrix delta) {
  TensorPtr cm = make_tensor({c->carrier, m});
  return {std::move(name), std::move(c), std::move(m), cm, std::move(delta)};
}

LeftComodule make_left_comodule_plain(std::string name, CoringPtr c, ModPtr m, const Matrix& delta_plain) {
  TensorPtr cm = make_tensor({c->carrier, m});
  Matrix delta = project_plain(cm, delta_plain);
  return {std::move(name), std::move(c), std::move(m), cm, std::move(delta)};
}

Verdict validate_comodule(const Comodule& m) {
  const Field& F = m.module->field();
  const Coring& c = *m.coring;
  auto fail = [&](const std::string& s) { return Verdict::fail("comodule " + m.name + ": " + s); };
  if (!same_algebra(*m.module->right, *c.algebra)) return fail("module is not over the coring's algebra");
  if (auto v = validate_module(*m.module); !v.ok) return fail(v.detail);
  if (m.delta.rows() != m.mc->dim() || m.delta.cols() != m.module->dim()) return fail("coaction has the wrong shape");
  const Complex& mx = m.module->carrier;
  const Complex& mcx = m.mc->module->carrier;
  auto M = carrier_of(m.module), A = carrier_of(c.algebra), MC = m.mc->carrier();
  if (!is_homogeneous(m.delta, mx.deg, mcx.deg, 0)) return fail("coaction does not preserve degree");
  Verdict v = diff_verdict(mcx.d * m.delta, m.delta * mx.d, {M}, "coaction chain map law");
  if (!v.ok) return fail(v.detail);
  LocalOp dl = op_matrix(m.delta, {M}, {MC});
  v = diff_verdict(m.delta * m.module->ract, m.mc->module->ract * plain_map(F, {M, A}, {MC, A}, {{0, dl}}), {M, A},
                   "right linearity of the coaction");
  if (!v.ok) return fail(v.detail);
  if (!is_ground(*m.module->left)) {
    auto L = carrier_of(m.module->left);
    v = diff_verdict(m.delta * m.module->lact, m.mc->module->lact * plain_map(F, {L, M}, {L, MC}, {{1, dl}}), {L, M},
                     "left linearity of the coaction");
    if (!v.ok) return fail(v.detail);
  }
  TensorPtr tm = as_tensor(m.module);
  TensorPtr mcc = make_tensor({m.module, c.carrier, c.carrier});
  LocalOp d = op_lift(m.delta, tm, m.mc);
  v = diff_verdict(tensor_map(tm, mcc, {{0, d}, {0, d}}), tensor_map(tm, mcc, {{0, d}, {1, op_delta(c)}}), {M},
                   "coassociativity");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(tensor_map(tm, tm, {{0, d}, {1, op_counit(c)}, {0, op_right_action(m.module)}}),
                   Matrix::identity(F, m.module->dim()), {M}, "counit law");
  if (!v.ok) return fail(v.detail);
  return Verdict::pass();
}

Verdict validate_left_comodule(const LeftComodule& m) {
  const Field& F = m.module->field();
  const Coring& c = *m.coring;
  auto fail = [&](const std::string& s) { return Verdict::fail("left comodule " + m.name + ": " + s); };
  if (!same_algebra(*m.module->left, *c.algebra)) return fail("module is not over the coring's algebra");
  if (auto v = validate_module(*m.module); !v.ok) return fail(v.detail);
  if (m.delta.rows() != m.cm->dim() || m.delta.cols() != m.module->dim()) return fail("coaction has the wrong shape");
  const Complex& mx = m.module->carrier;
  const Complex& cmx = m.cm->module->carrier;
  auto M = carrier_of(m.module), A = carrier_of(c.algebra), CM = m.cm->carrier();
  if (!is_homogeneous(m.delta, mx.deg, cmx.deg, 0)) return fail("coaction does not preserve degree");
  Verdict v = diff_verdict(cmx.d * m.delta, m.delta * mx.d, {M}, "coaction chain map law");
  if (!v.ok) return fail(v.detail);
  LocalOp dl = op_matrix(m.delta, {M}, {CM});
  v = diff_verdict(m.delta * m.module->lact, m.cm->module->lact * plain_map(F, {A, M}, {A, CM}, {{1, dl}}), {A, M},
                   "left linearity of the coaction");
  if (!v.ok) return fail(v.detail);
  if (!is_ground(*m.module->right)) {
    auto R = carrier_of(m.module->right);
    v = diff_verdict(m.delta * m.module->ract, m.cm->module->ract * plain_map(F, {M, R}, {CM, R}, {{0, dl}}), {M, R},
                     "right linearity of the coaction");
    if (!v.ok) return fail(v.detail);
  }
  TensorPtr tm = as_tensor(m.module);
  TensorPtr ccm = make_tensor({c.carrier, c.carrier, m.module});
  LocalOp d = op_lift(m.delta, tm, m.cm);
  v = diff_verdict(tensor_map(tm, ccm, {{0, d}, {0, op_delta(c)}}), tensor_map(tm, ccm, {{0, d}, {1, d}}), {M},
                   "coassociativity");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(tensor_map(tm, tm, {{0, d}, {0, op_counit(c)}, {0, op_left_action(m.module)}}),
                   Matrix::identity(F, m.module->dim()), {M}, "counit law");
  if (!v.ok) return fail(v.detail);
  return Verdict::pass();
}

Verdict check_comodule_map(const Comodule& src, const Comodule& tgt, const Matrix& f, const std::string& what) {
  LocalOp fo = op_matrix(f, {carrier_of(src.module)}, {carrier_of(tgt.module)});
  Matrix lhs = tgt.delta * f;
  Matrix rhs = tensor_map(src.mc, tgt.mc, {{0, fo}}) * src.delta;
  if (lhs == rhs) return Verdict::pass();
  return Verdict::fail(what + " does not commute with the coactions");
}

Comodule regular_right_comodule(const CoringPtr& c) { return {c->name, c, c->carrier, c->cc, c->delta}; }

LeftComodule regular_left_comodule(const CoringPtr& c) { return {c->name, c, c->carrier, c->cc, c->delta}; }

Verdict validate_coring_morphism(const CoringMorphism& f) {
  const Coring &c = *f.source, &d = *f.target;
  const Field& F = c.carrier->field();
  auto fail = [&](const std::string& s) { return Verdict::fail("coring morphism: " + s); };
  if (!same_algebra(*f.phi.source, *c.algebra) || !same_algebra(*f.phi.target, *d.algebra))
    return fail("algebra morphism does not match the corings");
  if (auto v = validate_algebra_morphism(f.phi); !v.ok) return fail(v.detail);
  if (f.fsharp.rows() != d.carrier->dim() || f.fsharp.cols() != c.carrier->dim()) return fail("map has the wrong shape");
  const Complex &cx = c.carrier->carrier, &dx = d.carrier->carrier;
  if (!is_homogeneous(f.fsharp, cx.deg, dx.deg, 0)) return fail("map does not preserve degree");
  if (dx.d * f.fsharp != f.fsharp * cx.d) return fail("map is not a chain map");
  auto C = carrier_of(c.carrier), D = carrier_of(d.carrier), A = carrier_of(c.algebra), B = carrier_of(d.algebra);
  LocalOp fo = op_matrix(f.fsharp, {C}, {D}), ph = op_matrix(f.phi.map, {A}, {B});
  Verdict v = diff_verdict(plain_map(F, {A, C}, {D}, {{0, op_left_action(c.carrier)}, {0, fo}}),
                           plain_map(F, {A, C}, {D}, {{0, ph}, {1, fo}, {0, op_left_action(d.carrier)}}), {A, C},
                           "left linearity");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(plain_map(F, {C, A}, {D}, {{0, op_right_action(c.carrier)}, {0, fo}}),
                   plain_map(F, {C, A}, {D}, {{0, fo}, {1, ph}, {0, op_right_action(d.carrier)}}), {C, A},
                   "right linearity");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(d.counit * f.fsharp, f.phi.map * c.counit, {C}, "counit compatibility");
  if (!v.ok) return fail(v.detail);
  v = diff_verdict(tensor_map(as_tensor(c.carrier), d.cc, {{0, op_delta(c)}, {0, fo}, {1, fo}}), d.delta * f.fsharp,
                   {C}, "comultiplication compatibility");
  if (!v.ok) return fail(v.detail);
  return Verdict::pass();
}

CoringMorphism identity_coring_morphism(const CoringPtr& c) {
  return {c, c, identity_morphism(c->algebra), Matrix::identity(c->carrier->field(), c->carrier->dim())};
}

Matrix coring_morphism_adjoint(const CoringMorphism& f, TensorPtr* src_out) {
  ModPtr bb = regular_bimodule(f.phi.target);
  TensorPtr src = make_tensor({restrict_right(bb, f.phi), f.source->carrier, restrict_left(bb, f.phi)});
  const Coring& d = *f.target;
  LocalOp fo = op_matrix(f.fsharp, {carrier_of(f.source->carrier)}, {carrier_of(d.carrier)});
  Matrix m = tensor_map(src, as_tensor(d.carrier),
                        {{1, fo}, {0, op_left_action(d.carrier)}, {0, op_right_action(d.carrier)}});
  if (src_out) *src_out = src;
  return m;
}

CoringMorphism compose_coring_morphisms(const CoringMorphism& g, const CoringMorphism& f) {
  return {f.source, g.target, {f.phi.source, g.phi.target, g.phi.map * f.phi.map}, g.fsharp * f.fsharp};
}

CoringPtr trivial_coring(const AlgPtr& a) {
  const Field& F = a->field();
  ModPtr reg = regular_bimodule(a);
  TensorPtr cc = make_tensor({reg, reg});
  Matrix delta(F, cc->dim(), a->dim());
  for (uint32_t i = 0; i < a->dim(); ++i) {
    TElem e{cc->fcx, {}};
    for (auto& [j, v] : a->unit) e.terms[Tuple{i, j}] = v;
    delta.set_col(i, cc->project(e));
  }
  auto c = std::make_shared<Coring>();
  c->name = "(" + a->name + "," + a->name + ")";
  c->algebra = a;
  c->carrier = reg;
  c->cc = cc;
  c->delta = std::move(delta);
  c->counit = Matrix::identity(F, a->dim());
  c->coaug = Matrix::identity(F, a->dim());
  return c;
}

Comodule trivial_comodule(const CoringPtr& t, const ModPtr& m) {
  if (!same_algebra(*t->algebra, *m->right) || t->carrier->dim() != t->algebra->dim())
    throw std::invalid_argument("trivial comodule: " + t->name + " is not the trivial coring of " + m->right->name);
  TensorPtr mc = make_tensor({m, t->carrier});
  return make_comodule(m->name, t, m, tensor_map(as_tensor(m), mc, {{1, op_unit(t->algebra)}}));
}

DescentCoring descent_coring(const AlgebraMorphism& phi) {
  const Field& F = phi.target->field();
  AlgPtr B = phi.target;
  ModPtr bb = regular_bimodule(B);
  ModPtr b_a = restrict_right(bb, phi), a_b = restrict_left(bb, phi);
  std::string nm = B->name + "⊗_" + phi.source->name + B->name;
  TensorPtr ct = make_tensor({b_a, a_b}, std::nullopt, nm);
  ModPtr carrier = ct->module;
  TensorPtr cc = make_tensor({carrier, carrier});
  auto Bc = carrier_of(B);
  std::vector<std::pair<Tuple, Scalar>> ones;
  for (auto& [i, u] : B->unit)
    for (auto& [j, w] : B->unit) ones.push_back({Tuple{i, j}, F.mul(u, w)});
  LocalOp ins = op_insert({Bc, Bc}, ones);
  LocalOp pr = op_projection(ct);
  Matrix delta = tensor_map(ct, cc, {{1, ins}, {0, pr}, {1, pr}});
  Matrix counit = tensor_map(ct, as_tensor(bb), {{0, op_mult(B)}});

  auto c = std::make_shared<Coring>();
  c->name = nm;
  c->algebra = B;
  c->carrier = carrier;
  c->cc = cc;
  c->delta = std::move(delta);
  c->counit = std::move(counit);

  DescentCoring out;
  out.coring = c;
  out.tensor = ct;
  ModPtr b_right = right_module(B->name, B->carrier, B, B->mult);
  TensorPtr mc = make_tensor({b_right, carrier});
  LocalOp unit = op_unit(B);
  Matrix coact = tensor_map(as_tensor(b_right), mc, {{0, unit}, {0, unit}, {1, pr}});
  out.canonical = {B->name, c, b_right, mc, coact};

  CoringPtr triv = trivial_coring(phi.source);
  std::vector<std::pair<Tuple, Scalar>> one;
  for (auto& [i, u] : B->unit) one.push_back({Tuple{i}, u});
  LocalOp ph = op_matrix(phi.map, {carrier_of(phi.source)}, {Bc});
  Matrix fs =
      tensor_map(as_tensor(triv->carrier), as_tensor(carrier), {{0, ph}, {0, op_insert({Bc}, one)}, {0, pr}});
  out.from_trivial = {triv, c, phi, fs};
  return out;
}

CoringMorphism descent_square_morphism(const DescentCoring& src, const DescentCoring& tgt, const AlgebraMorphism& beta) {
  LocalOp b = op_matrix(beta.map, {carrier_of(beta.source)}, {carrier_of(beta.target)});
  Matrix fs = tensor_map(src.tensor, tgt.tensor, {{0, b}, {1, b}});
  return {src.coring, tgt.coring, beta, fs};
}

Matrix lift_through(const Matrix& j, const Matrix& v, const std::string& what) {
  auto x = solve_matrix(j, v);
  if (!x) throw std::logic_error(what + ": element does not lift");
  return *x;
}

Cotensor cotensor(const Comodule& m, const LeftComodule& n) {
  if (m.coring != n.coring && !same_algebra(*m.coring->algebra, *n.coring->algebra))
    throw std::invalid_argument("cotensor: comodules over different corings");
  const Coring& c = *m.coring;
  Cotensor out;
  out.mn = make_tensor({m.module, n.module});
  TensorPtr mcn = make_tensor({m.module, c.carrier, n.module});
  Matrix a = tensor_map(out.mn, mcn, {{0, op_lift(m.delta, as_tensor(m.module), m.mc)}});
  Matrix b = tensor_map(out.mn, mcn, {{1, op_lift(n.delta, as_tensor(n.module), n.cm)}});
  out.inclusion = graded_kernel(a - b, out.mn->module->carrier.deg);
  out.module = submodule(out.mn->module, out.inclusion, m.name + "□" + n.name);
  return out;
}

Comodule cotensor_with_coaction(const Comodule& m, const LeftComodule& n, const Comodule& n_right, Cotensor* out) {
  Cotensor t = cotensor(m, n);
  const Coring& d = *n_right.coring;
  TensorPtr cd = make_tensor({t.module, d.carrier});
  TensorPtr mnd = make_tensor({m.module, n.module, d.carrier});
  TensorPtr tt = as_tensor(t.module);
  LocalOp inc = op_lift(t.inclusion, tt, t.mn);
  Matrix j = tensor_map(cd, mnd, {{0, inc}});
  Matrix v = tensor_map(tt, mnd, {{0, inc}, {1, op_lift(n_right.delta, as_tensor(n.module), n_right.mc)}});
  Matrix delta = lift_through(j, v, "cotensor coaction");
  if (out) *out = t;
  return {t.module->name, n_right.coring, t.module, cd, delta};
}

Comodule cofree_comodule(const ModPtr& m, const CoringPtr& c) {
  TensorPtr mc = make_tensor({m, c->carrier});
  TensorPtr tgt = make_tensor({mc->module, c->carrier});
  Matrix delta = tensor_map(mc, tgt, {{1, op_delta(*c)}, {0, op_projection(mc)}});
  return {mc->module->name, c, mc->module, tgt, delta};
}

Comodule pushforward(const CoringMorphism& f, const Comodule& m) {
  TensorPtr md = make_tensor({m.module, f.target->carrier});
  LocalOp fo = op_matrix(f.fsharp, {carrier_of(f.source->carrier)}, {carrier_of(f.target->carrier)});
  Matrix delta = tensor_map(m.mc, md, {{1, fo}}) * m.delta;
  return {m.name, f.target, m.module, md, delta};
}

LeftComodule left_comodule_along(const CoringMorphism& f) {
  const Coring& c = *f.source;
  TensorPtr dc = make_tensor({f.target->carrier, c.carrier});
  LocalOp fo = op_matrix(f.fsharp, {carrier_of(c.carrier)}, {carrier_of(f.target->carrier)});
  Matrix delta = tensor_map(as_tensor(c.carrier), dc, {{0, op_delta(c)}, {0, fo}});
  return {c.name, f.target, c.carrier, dc, delta};
}

Pullback pullback(const CoringMorphism& f, const Comodule& n, bool flat_certified) {
  Pullback p;
  p.comodule = cotensor_with_coaction(n, left_comodule_along(f), regular_right_comodule(f.source), &p.cotensor);
  p.formula_level = !flat_certified;
  return p;
}

namespace {

Matrix counit_from_cotensor(const ModPtr& n, const Cotensor& t, const Coring& c) {
  TensorPtr tt = as_tensor(t.module);
  return tensor_map(tt, as_tensor(n),
                    {{0, op_lift(t.inclusion, tt, t.mn)}, {1, op_counit(c)}, {0, op_right_action(n)}});
}

}  // namespace

Matrix pullback_counit(const CoringMorphism& f, const Pullback& p, const Comodule& n) {
  return counit_from_cotensor(n.module, p.cotensor, *f.source);
}

Matrix cotensor_counit(const Comodule& m, const Cotensor& t) { return counit_from_cotensor(m.module, t, *m.coring); }

MapComodule map_comodule(const Comodule& m, const Comodule& n) {
  const Field& F = m.module->field();
  MapComodule out;
  out.map = map_module(m.module, n.module);
  const ModPtr& mm = out.map.module;
  size_t dM = m.module->dim(), dN = n.module->dim(), rows = n.mc->dim();
  auto Mc = carrier_of(m.module), Nc = carrier_of(n.module);
  std::vector<SVec> cols;
  for (uint32_t q = 0; q < mm->dim(); ++q) {
    std::vector<Triple> tr;
    for (auto& [h, v] : out.map.basis.col(q)) tr.push_back({uint32_t(h % dN), uint32_t(h / dN), v});
    Matrix f = Matrix::from_triples(F, dN, dM, tr);
    int k = mm->carrier.deg[q];
    Matrix lhs = n.delta * f;
    Matrix rhs = tensor_map(m.mc, n.mc, {{0, op_matrix(f, {Mc}, {Nc}, k)}}) * m.delta;
    Matrix diff = lhs - rhs;
    std::map<uint32_t, Scalar> acc;
    for (size_t j = 0; j < dM; ++j)
      for (auto& [r, v] : diff.col(j)) acc[uint32_t(j * rows + r)] = v;
    cols.push_back(svec_from_map(acc));
  }
  Matrix constraints = Matrix::from_columns(F, rows * dM, cols);
  out.basis = graded_kernel(constraints, mm->carrier.deg);
  out.complex = subcomplex(mm->carrier, out.basis, "Map^C(" + m.name + "," + n.name + ")");
  return out;
}

std::string to_string(Flatness f) {
  switch (f) {
    case Flatness::Certified:
      return "CERTIFIED";
    case Flatness::SpotChecked:
      return "SPOT-CHECKED";
    case Flatness::Refuted:
      return "REFUTED";
  }
  return "?";
}

FlatVerdict is_flat_coring(const Coring& c, const std::optional<std::vector<std::vector<SVec>>>& cells,
                           const std::vector<ModuleMap>& spot_checks) {
  FlatVerdict out;
  std::string note;
  if (cells) {
    auto rep = verify_cellular_filtration(c.carrier, Side::Left, *cells);
    if (rep.ok) {
      out.verdict = Flatness::Certified;
      out.detail = "left module filtration: " + rep.detail;
      return out;
    }
    note = "certificate rejected (" + rep.detail + "); ";
  }
  for (size_t i = 0; i < spot_checks.size(); ++i) {
    const ModuleMap& g = spot_checks[i];
    Matrix k = graded_kernel(g.m, g.source->carrier.deg);
    ModPtr kmod = submodule(g.source, k, "ker");
    TensorPtr kc = make_tensor({kmod, c.carrier}), mc = make_tensor({g.source, c.carrier}),
              nc = make_tensor({g.target, c.carrier});
    Matrix inc = tensor_map(kc, mc, {{0, op_matrix(k, {carrier_of(kmod)}, {carrier_of(g.source)})}});
    Matrix gc = tensor_map(mc, nc, {{0, op_matrix(g.m, {carrier_of(g.source)}, {carrier_of(g.target)}, g.degree)}});
    size_t r = rank(inc), ker = mc->dim() - rank(gc);
    if (r != kc->dim() || ker != r) {
      out.verdict = Flatness::Refuted;
      out.detail = note + "check " + std::to_string(i) + ": ker(g)⊗C has dim " + std::to_string(kc->dim()) +
                   ", its image has dim " + std::to_string(r) + ", ker(g⊗1) has dim " + std::to_string(ker);
      return out;
    }
  }
  out.verdict = Flatness::SpotChecked;
  out.detail = note + std::to_string(spot_checks.size()) + " exactness checks passed";
  return out;
}

}  // namespace dgc
