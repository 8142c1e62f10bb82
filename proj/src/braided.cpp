#include "dgc/braided.hpp"

#include <stdexcept>

namespace dgc {

namespace {

std::vector<std::pair<Tuple, Scalar>> unit_terms(const Algebra& a) {
  std::vector<std::pair<Tuple, Scalar>> u;
  for (auto& [i, v] : a.unit) u.push_back({Tuple{i}, v});
  return u;
}

Verdict diff_verdict(const Matrix& a, const Matrix& b, const TensorPtr& src, const std::string& what) {
  Matrix d = a - b;
  if (d.is_zero()) return Verdict::pass();
  for (size_t j = 0; j < d.cols(); ++j)
    if (!d.col(j).empty()) return Verdict::fail(what + " fails on " + src->module->carrier.names[j]);
  return Verdict::pass();
}

}  // namespace

LocalOp op_braiding(const BraidedBimodule& b) { return op_lift(b.t, b.cx, b.xd); }

BraidedBimodule make_braided(std::string name, CoringPtr source, CoringPtr target, ModPtr x, Matrix t) {
  BraidedBimodule b;
  b.name = std::move(name);
  b.cx = make_tensor({source->carrier, x});
  b.xd = make_tensor({x, target->carrier});
  b.source = std::move(source);
  b.target = std::move(target);
  b.x = std::move(x);
  b.t = std::move(t);
  return b;
}

BraidedBimodule make_braided_plain(std::string name, CoringPtr source, CoringPtr target, ModPtr x,
                                   const Matrix& t_plain) {
  BraidedBimodule b = make_braided(std::move(name), std::move(source), std::move(target), std::move(x), Matrix());
  const Field& F = b.x->field();
  size_t dX = b.x->dim(), dD = b.target->carrier->dim();
  if (t_plain.cols() != plain_dim(b.cx->fcx) || t_plain.rows() != dX * dD)
    throw std::invalid_argument("braiding " + b.name + " has the wrong shape");
  b.t = Matrix(F, b.xd->dim(), b.cx->dim());
  for (uint32_t q = 0; q < b.cx->dim(); ++q) {
    TElem src = b.cx->lift(q);
    std::map<uint32_t, Scalar> acc;
    for (auto& [tu, c] : src.terms)
      for (auto& [r, v] : t_plain.col(tu[0] * dX + tu[1])) {
        auto& s = acc[r];
        s = F.add(s, F.mul(c, v));
      }
    TElem out{b.xd->fcx, {}};
    for (auto& [r, v] : acc)
      if (v != 0) out.terms[Tuple{uint32_t(r / dD), uint32_t(r % dD)}] = v;
    b.t.set_col(q, b.xd->project(out));
  }
  return b;
}

Verdict validate_braided(const BraidedBimodule& b) {
  auto fail = [&](const std::string& s) { return Verdict::fail("braided bimodule " + b.name + ": " + s); };
  const Coring &c = *b.source, &d = *b.target;
  if (!same_algebra(*b.x->left, *c.algebra) || !same_algebra(*b.x->right, *d.algebra))
    return fail("carrier is not a bimodule over the coring algebras");
  if (auto v = validate_module(*b.x); !v.ok) return fail(v.detail);
  if (b.t.rows() != b.xd->dim() || b.t.cols() != b.cx->dim()) return fail("braiding has the wrong shape");
  if (auto v = check_module_map({b.cx->module, b.xd->module, b.t}); !v.ok) return fail(v.detail);
  TensorPtr xdd = make_tensor({b.x, d.carrier, d.carrier});
  LocalOp T = op_braiding(b);
  Verdict v = diff_verdict(tensor_map(b.cx, xdd, {{0, T}, {1, op_delta(d)}}),
                           tensor_map(b.cx, xdd, {{0, op_delta(c)}, {1, T}, {0, T}}), b.cx, "pentagon axiom");
  if (!v.ok) return fail(v.detail);
  TensorPtr tx = as_tensor(b.x);
  v = diff_verdict(tensor_map(b.cx, tx, {{0, T}, {1, op_counit(d)}, {0, op_right_action(b.x)}}),
                   tensor_map(b.cx, tx, {{0, op_counit(c)}, {0, op_left_action(b.x)}}), b.cx, "counit axiom");
  if (!v.ok) return fail(v.detail);
  return Verdict::pass();
}

BraidedBimodule identity_braided(const CoringPtr& c) {
  AlgPtr A = c->algebra;
  ModPtr x = regular_bimodule(A);
  BraidedBimodule b = make_braided("id" + c->name, c, c, x, Matrix());
  LocalOp ins = op_insert({carrier_of(A)}, unit_terms(*A));
  b.t = tensor_map(b.cx, b.xd, {{0, op_right_action(c->carrier)}, {0, ins}});
  return b;
}

BraidedBimodule braided_from_coring_morphism(const CoringMorphism& f) {
  AlgPtr B = f.phi.target;
  ModPtr x = restrict_left(regular_bimodule(B), f.phi);
  const Coring& d = *f.target;
  BraidedBimodule b = make_braided("T(" + f.source->name + "→" + d.name + ")", f.source, f.target, x, Matrix());
  LocalOp fo = op_matrix(f.fsharp, {carrier_of(f.source->carrier)}, {carrier_of(d.carrier)});
  LocalOp ins = op_insert({carrier_of(B)}, unit_terms(*B));
  b.t = tensor_map(b.cx, b.xd, {{0, fo}, {0, op_right_action(d.carrier)}, {0, ins}});
  return b;
}

BraidedBimodule trivial_braided(const ModPtr& x) {
  BraidedBimodule b = make_braided("T(" + x->name + ")", trivial_coring(x->left), trivial_coring(x->right), x, Matrix());
  LocalOp ins = op_insert({carrier_of(x->right)}, unit_terms(*x->right));
  b.t = tensor_map(b.cx, b.xd, {{0, op_left_action(x)}, {1, ins}});
  return b;
}

BraidedBimodule forgetful_braided(const CoringPtr& c) {
  CoringPtr t = trivial_coring(c->algebra);
  BraidedBimodule b = braided_from_coring_morphism({c, t, identity_morphism(c->algebra), c->counit});
  b.name = "U" + c->name;
  return b;
}

BraidedBimodule compose_braided(const BraidedBimodule& b1, const BraidedBimodule& b2) {
  if (!same_algebra(*b1.target->algebra, *b2.source->algebra) ||
      b1.target->carrier->dim() != b2.source->carrier->dim() || b1.target->delta != b2.source->delta)
    throw std::invalid_argument("compose: middle corings differ");
  TensorPtr xx = make_tensor({b1.x, b2.x}, std::nullopt, b1.x->name + "⊗" + b2.x->name);
  BraidedBimodule b = make_braided(b1.name + "∘" + b2.name, b1.source, b2.target, xx->module, Matrix());
  b.t = tensor_map(b.cx, b.xd,
                   {{1, op_section(xx)}, {0, op_braiding(b1)}, {1, op_braiding(b2)}, {0, op_projection(xx)}});
  return b;
}

Comodule induce_comodule(const BraidedBimodule& b, const Comodule& m) {
  TensorPtr mx = make_tensor({m.module, b.x}, std::nullopt, m.name + "⊗" + b.x->name);
  TensorPtr tgt = make_tensor({mx->module, b.target->carrier});
  Matrix delta = tensor_map(mx, tgt,
                            {{0, op_lift(m.delta, as_tensor(m.module), m.mc)},
                             {1, op_braiding(b)},
                             {0, op_projection(mx)}});
  return {mx->module->name, b.target, mx->module, tgt, delta};
}

LeftComodule dual_tensor_left_comodule(const BraidedBimodule& b, const DualityWitness& w) {
  const Coring &c = *b.source, &d = *b.target;
  TensorPtr yc = make_tensor({w.y, c.carrier}, std::nullopt, w.y->name + "⊗" + c.carrier->name);
  TensorPtr tgt = make_tensor({d.carrier, yc->module});
  TElem zl = w.xy->lift_vec(w.z);
  std::vector<std::pair<Tuple, Scalar>> zt(zl.terms.begin(), zl.terms.end());
  LocalOp ins = op_insert(w.xy->fcx, zt);
  ModPtr bmod = regular_bimodule(d.algebra);
  Matrix delta = tensor_map(yc, tgt,
                            {{1, op_delta(c)},
                             {2, ins},
                             {1, op_braiding(b)},
                             {0, op_lift(w.e, w.yx, as_tensor(bmod))},
                             {0, op_left_action(d.carrier)},
                             {1, op_projection(yc)}});
  return {yc->module->name, b.target, yc->module, tgt, delta};
}

Comodule dual_tensor_right_comodule(const BraidedBimodule& b, const DualityWitness& w) {
  const Coring& c = *b.source;
  TensorPtr yc = make_tensor({w.y, c.carrier}, std::nullopt, w.y->name + "⊗" + c.carrier->name);
  TensorPtr tgt = make_tensor({yc->module, c.carrier});
  Matrix delta = tensor_map(yc, tgt, {{1, op_delta(c)}, {0, op_projection(yc)}});
  return {yc->module->name, b.source, yc->module, tgt, delta};
}

UpperStar t_upper_star(const BraidedBimodule& b, const DualityWitness& w, const Comodule& n,
                       Flatness source_flatness) {
  if (source_flatness == Flatness::Refuted)
    throw std::invalid_argument("T^*: the source coring is not flat");
  UpperStar out;
  out.comodule =
      cotensor_with_coaction(n, dual_tensor_left_comodule(b, w), dual_tensor_right_comodule(b, w), &out.cotensor);
  return out;
}

}  // namespace dgc
