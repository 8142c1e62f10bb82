#include "dgc/cobar.hpp"

namespace dgc {

namespace {

int parity(int n) { return ((n % 2) + 2) % 2; }

Scalar sign(const Field& F, int n) { return parity(n) ? F.neg(Scalar(1)) : Scalar(1); }

// Expands a C-vector into s⁻¹C̄ coordinates.
SVec to_bar(const Desuspended& s, uint32_t i) { return s.projection.col(i); }

// −(−1)^{|x_i|} x_i ⊗ s⁻¹c̄^i: M → M ⊗ s⁻¹C̄.
LocalOp op_theta_m(const Comodule& m, const Desuspended& s) {
  LocalOp op;
  op.in = 1;
  op.out = {carrier_of(m.module), carrier_of(s.module)};
  op.degree = -1;
  const Field& F = m.module->field();
  op.image = [&m, &s, F](const Tuple& t) {
    std::vector<std::pair<Tuple, Scalar>> res;
    TElem e = m.mc->lift_vec(m.delta.col(t[0]));
    for (auto& [tu, c] : e.terms)
      for (auto& [b, v] : to_bar(s, tu[1]))
        res.push_back({Tuple{tu[0], b}, F.mul(F.mul(c, v), sign(F, m.module->carrier.deg[tu[0]] + 1))});
    return res;
  };
  return op;
}

// s⁻¹c̄^i ⊗ y_i: N → s⁻¹C̄ ⊗ N.
LocalOp op_theta_n(const LeftComodule& n, const Desuspended& s) {
  LocalOp op;
  op.in = 1;
  op.out = {carrier_of(s.module), carrier_of(n.module)};
  op.degree = -1;
  const Field& F = n.module->field();
  op.image = [&n, &s, F](const Tuple& t) {
    std::vector<std::pair<Tuple, Scalar>> res;
    TElem e = n.cm->lift_vec(n.delta.col(t[0]));
    for (auto& [tu, c] : e.terms)
      for (auto& [b, v] : to_bar(s, tu[0])) res.push_back({Tuple{b, tu[1]}, F.mul(c, v)});
    return res;
  };
  return op;
}

// (−1)^{|c'|} s⁻¹c̄' ⊗ s⁻¹c̄'': s⁻¹C̄ → s⁻¹C̄ ⊗ s⁻¹C̄.
LocalOp op_theta_c(const Coring& c, const Desuspended& s) {
  LocalOp op;
  op.in = 1;
  op.out = {carrier_of(s.module), carrier_of(s.module)};
  op.degree = -1;
  const Field& F = c.carrier->field();
  op.image = [&c, &s, F](const Tuple& t) {
    std::vector<std::pair<Tuple, Scalar>> res;
    TElem e = c.cc->lift_vec(c.delta.apply(s.section.col(t[0])));
    for (auto& [tu, v] : e.terms) {
      Scalar sg = F.mul(v, sign(F, c.carrier->carrier.deg[tu[0]]));
      for (auto& [b1, v1] : to_bar(s, tu[0]))
        for (auto& [b2, v2] : to_bar(s, tu[1])) res.push_back({Tuple{b1, b2}, F.mul(sg, F.mul(v1, v2))});
    }
    return res;
  };
  return op;
}

Matrix place(const Field& F, size_t rows, size_t cols, const Matrix& block, size_t r0, size_t c0) {
  std::vector<Triple> t;
  for (auto& tr : block.triples()) t.push_back({uint32_t(tr.row + r0), uint32_t(tr.col + c0), tr.value});
  return Matrix::from_triples(F, rows, cols, t);
}

std::string cobar_name(const std::string& tensor_name, size_t w) {
  std::vector<std::string> parts;
  std::string sep = "⊗";
  size_t start = 0;
  for (size_t pos; (pos = tensor_name.find(sep, start)) != std::string::npos; start = pos + sep.size())
    parts.push_back(tensor_name.substr(start, pos - start));
  parts.push_back(tensor_name.substr(start));
  if (parts.size() != w + 2) return tensor_name;
  std::string out = parts.front() + " ⊗ ";
  for (size_t i = 1; i <= w; ++i) out += (i > 1 ? "|" : "") + parts[i];
  return out + (w ? " ⊗ " : "") + parts.back();
}

}  // namespace

Desuspended desuspended_coideal(const Coring& c) {
  if (!c.coaug) throw CobarError(CobarError::Kind::MissingCoaugmentation, c.name + " has no coaugmentation");
  QuotientModule q = quotient_module(c.carrier, *c.coaug, c.name + "̄");
  for (size_t i = 0; i < q.module->dim(); ++i)
    if (q.module->carrier.deg[i] < 2)
      throw CobarError(CobarError::Kind::ConnectivityViolation,
                       "the coaugmentation coideal of " + c.name + " has " + q.module->carrier.names[i] +
                           " in degree " + std::to_string(q.module->carrier.deg[i]) + " < 2");
  const Module& qm = *q.module;
  const Field& F = qm.field();
  Complex s = desuspend(qm.carrier);
  Matrix lact(F, qm.dim(), qm.lact.cols());
  size_t dim = qm.dim();
  for (size_t j = 0; j < lact.cols(); ++j)
    lact.set_col(j, svec_scaled(F, qm.lact.col(j), sign(F, qm.left->carrier.deg[j / std::max<size_t>(dim, 1)])));
  ModPtr mod = make_module("s⁻¹" + qm.name, s, qm.left, lact, qm.right, qm.ract);
  return {mod, q.projection, q.section};
}

size_t CobarComplex::word_of(uint32_t i) const {
  size_t w = 0;
  while (w + 1 < offsets.size() && offsets[w + 1] <= i) ++w;
  return w;
}

CobarComplex cobar(const Comodule& m, const CoringPtr& c, const LeftComodule& n, Window window) {
  CobarComplex out;
  out.window = window;
  out.m = m.module;
  out.n = n.module;
  out.coring = c;
  out.bar = desuspended_coideal(*c);
  const Field& F = m.module->field();
  int lowest = m.module->carrier.min_degree() + n.module->carrier.min_degree();
  size_t wmax = out.bar.module->dim() ? size_t(std::max(0, window.second - lowest)) : 0;

  for (size_t w = 0; w <= wmax; ++w) {
    std::vector<ModPtr> f{m.module};
    for (size_t i = 0; i < w; ++i) f.push_back(out.bar.module);
    f.push_back(n.module);
    out.blocks.push_back(make_tensor(f, window));
  }
  size_t total = 0;
  for (auto& b : out.blocks) {
    out.offsets.push_back(total);
    total += b->dim();
  }

  std::vector<int> deg;
  std::vector<std::string> names;
  for (size_t w = 0; w < out.blocks.size(); ++w) {
    const Complex& bc = out.blocks[w]->module->carrier;
    deg.insert(deg.end(), bc.deg.begin(), bc.deg.end());
    for (auto& nm : bc.names) names.push_back(cobar_name(nm, w));
  }

  LocalOp tm = op_theta_m(m, out.bar), tc = op_theta_c(*c, out.bar), tn = op_theta_n(n, out.bar);
  out.internal = Matrix(F, total, total);
  out.raising = Matrix(F, total, total);
  for (size_t w = 0; w < out.blocks.size(); ++w) {
    const TensorPtr& b = out.blocks[w];
    out.internal = out.internal + place(F, total, total, b->module->carrier.d, out.offsets[w], out.offsets[w]);
    if (w + 1 >= out.blocks.size()) continue;
    const TensorPtr& up = out.blocks[w + 1];
    Matrix r = tensor_map(b, up, {{0, tm}}) + tensor_map(b, up, {{w + 1, tn}});
    for (size_t j = 1; j <= w; ++j) r = r + tensor_map(b, up, {{j, tc}});
    out.raising = out.raising + place(F, total, total, r, out.offsets[w + 1], out.offsets[w]);
  }

  Complex cx(F, deg, names);
  cx.d = out.internal + out.raising;
  AlgPtr L = m.module->left, R = n.module->right;
  Matrix lact(F, total, L->dim() * total), ract(F, total, total * R->dim());
  for (size_t w = 0; w < out.blocks.size(); ++w) {
    const Module& bm = *out.blocks[w]->module;
    size_t off = out.offsets[w], bd = bm.dim();
    for (size_t a = 0; a < L->dim(); ++a)
      for (size_t k = 0; k < bd; ++k) {
        SVec v;
        for (auto& [i, x] : bm.lact.col(a * bd + k)) v.emplace_back(uint32_t(i + off), x);
        lact.set_col(a * total + off + k, v);
      }
    for (size_t k = 0; k < bd; ++k)
      for (size_t b = 0; b < R->dim(); ++b) {
        SVec v;
        for (auto& [i, x] : bm.ract.col(k * R->dim() + b)) v.emplace_back(uint32_t(i + off), x);
        ract.set_col((off + k) * R->dim() + b, v);
      }
  }
  out.module = make_module("Ω(" + m.module->name + ";" + c->name + ";" + n.module->name + ")", std::move(cx), L,
                           std::move(lact), R, std::move(ract));
  return out;
}

CobarComodule cobar_comodule(const Comodule& m, Window window) {
  CoringPtr d = m.coring;
  const Field& F = m.module->field();
  CobarComodule out;
  out.omega = cobar(m, d, regular_left_comodule(d), window);
  const CobarComplex& om = out.omega;
  size_t total = om.module->dim();
  TensorPtr omd = make_tensor({om.module, d->carrier});
  Matrix delta(F, omd->dim(), total);
  for (size_t w = 0; w < om.blocks.size(); ++w) {
    const TensorPtr& b = om.blocks[w];
    Matrix incl = place(F, total, b->dim(), Matrix::identity(F, b->dim()), om.offsets[w], 0);
    Matrix part = tensor_map(b, omd,
                             {{w + 1, op_delta(*d)},
                              {0, op_projection(b)},
                              {0, op_matrix(incl, {b->carrier()}, {carrier_of(om.module)})}});
    delta = delta + place(F, omd->dim(), total, part, 0, om.offsets[w]);
  }
  out.comodule = make_comodule(om.module->name, d, om.module, delta);
  out.cofree = cofree_comodule(m.module, d);

  TensorPtr b0 = om.blocks[0];
  TensorPtr tm = as_tensor(m.module);
  Matrix rt = tensor_map(tm, b0, {{0, op_lift(m.delta, tm, m.mc)}});
  out.rho_tilde = place(F, total, m.module->dim(), rt, 0, 0);
  Matrix q0 = tensor_map(b0, m.mc, {});
  out.q = place(F, m.mc->dim(), total, q0, 0, 0);
  return out;
}

ResolutionVerdict check_cobar_resolution(const Comodule& m, Window window) {
  return check_cobar_resolution(cobar_comodule(m, window), m);
}

ResolutionVerdict check_cobar_resolution(const CobarComodule& cc, const Comodule& m) {
  ResolutionVerdict v;
  Window window = cc.omega.window;
  const Complex& om = cc.comodule.module->carrier;
  v.factorization = (cc.q * cc.rho_tilde == m.delta) ? Verdict::pass() : Verdict::fail("q ρ̃ differs from ρ");
  v.comodule_maps = check_comodule_map(m, cc.comodule, cc.rho_tilde, "ρ̃");
  if (v.comodule_maps.ok) v.comodule_maps = check_comodule_map(cc.comodule, cc.cofree, cc.q, "q");
  v.d_squared = (om.d * om.d).is_zero() ? Verdict::pass() : Verdict::fail("d_Ω² ≠ 0");
  if (!v.d_squared.ok) return v;
  Matrix eps = tensor_map(m.mc, as_tensor(m.module), {{1, op_counit(*m.coring)}, {0, op_right_action(m.module)}});
  v.weak = is_weak_equivalence_on({om, m.module->carrier, 0, eps * cc.q}, window.first + 1, window.second - 1);
  return v;
}

bool CopureVerdict::ok() const {
  for (auto& w : per_comodule)
    if (!w.ok) return false;
  return true;
}

CopureVerdict copure_spot_check(const CoringMorphism& f, const std::vector<Comodule>& tests, Window window,
                                const std::optional<Cells>& source_cells, const std::optional<Cells>& target_cells) {
  CopureVerdict out;
  out.source_flat = is_flat_coring(*f.source, source_cells, {});
  out.target_flat = is_flat_coring(*f.target, target_cells, {});
  if (out.source_flat.verdict == Flatness::Refuted || out.target_flat.verdict == Flatness::Refuted)
    throw CobarError(CobarError::Kind::NotFlat, "copurity: a coring is not flat");
  for (const Comodule& m : tests) {
    CobarComodule cc = cobar_comodule(m, window);
    Pullback p = pullback(f, cc.comodule, out.source_flat.verdict == Flatness::Certified);
    Matrix e = pullback_counit(f, p, cc.comodule);
    out.per_comodule.push_back(is_weak_equivalence_on(
        {p.comodule.module->carrier, cc.comodule.module->carrier, 0, e}, window.first + 1, window.second - 1));
  }
  return out;
}

}  // namespace dgc
