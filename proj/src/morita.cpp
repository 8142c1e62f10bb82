#include "dgc/morita.hpp"

#include <sstream>
#include <stdexcept>

namespace dgc {

namespace {

std::string dims_str(const std::map<int, size_t>& d) {
  std::string s = "{";
  for (auto& [n, k] : d) s += (s.size() > 1 ? ", " : "") + std::to_string(n) + ":" + std::to_string(k);
  return s + "}";
}

std::string homology_str(const Complex& c) {
  Homology h = homology(c);
  std::map<int, size_t> d;
  for (auto& [n, hd] : h.degrees)
    if (hd.dim) d[n] = hd.dim;
  return dims_str(d);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Criterion make_criterion(std::string name, std::string anchor, Scope scope, Verdict v, bool binding = true) {
  Criterion c;
  c.binding = binding;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.scope = scope;
  c.verdict = std::move(v);
  return c;
}

// Evidence of a chain map comparison: dimensions, rank and homology on both sides.
void map_evidence(Criterion& c, const Complex& src, const Complex& tgt, const Matrix& m, bool iso,
                  const WeakEquivalence& weak) {
  c.evidence.push_back({"source dims", dims_str(src.degree_dims())});
  c.evidence.push_back({"target dims", dims_str(tgt.degree_dims())});
  c.evidence.push_back({"rank", std::to_string(rank(m))});
  c.evidence.push_back({"isomorphism", yes_no(iso)});
  c.evidence.push_back({"source homology", homology_str(src)});
  c.evidence.push_back({"target homology", homology_str(tgt)});
  if (weak.first_failure) c.evidence.push_back({"first failing degree", std::to_string(*weak.first_failure)});
}

Verdict weak_verdict(const WeakEquivalence& w, const std::string& what) {
  if (w.ok) return Verdict::pass();
  return Verdict::fail(what + " is not a homology isomorphism" +
                       (w.first_failure ? " in degree " + std::to_string(*w.first_failure) : std::string()));
}

void finish(Report& r) {
  r.overall = true;
  for (auto& c : r.criteria)
    if (c.binding) r.overall = r.overall && c.verdict.ok;
}

std::string cell_count(const Cells& cells) {
  size_t n = 0;
  for (auto& s : cells) n += s.size();
  return std::to_string(cells.size()) + " stages, " + std::to_string(n) + " cells";
}

}  // namespace

std::string to_string(Scope s) {
  switch (s) {
    case Scope::Instance: return "instance";
    case Scope::SpotCheck: return "spot-check";
    case Scope::Certified: return "certified";
    case Scope::Conditional: return "conditional";
  }
  return "?";
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "report " << r.kind << ": " << r.subject << "\n";
  for (auto& c : r.criteria) {
    os << "  [" << (c.verdict.ok ? "PASS" : "FAIL") << "] " << c.name << " (" << to_string(c.scope);
    if (!c.anchor.empty()) os << "; " << c.anchor;
    os << ")\n";
    if (!c.verdict.detail.empty()) os << "      " << c.verdict.detail << "\n";
    for (auto& [k, v] : c.evidence) os << "      " << k << ": " << v << "\n";
  }
  os << "overall: " << (r.overall ? "PASS" : "FAIL") << "\n";
  for (auto& c : r.caveats) os << "caveat: " << c << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

UnitMap morita_unit(const ModPtr& x) {
  const Field& F = x->field();
  UnitMap out;
  out.map = map_module(x, x);
  const AlgPtr& A = x->left;
  size_t dX = x->dim();
  out.m = Matrix(F, out.map.module->dim(), A->dim());
  for (uint32_t a = 0; a < A->dim(); ++a) {
    SVec hom;
    for (uint32_t i = 0; i < dX; ++i)
      for (auto& [j, v] : x->lact.col(a * dX + i)) svec_axpy(F, hom, v, SVec{{uint32_t(i * dX + j), Scalar(1)}});
    out.m.set_col(a, map_coords(out.map, hom));
  }
  ChainMap f{A->carrier, out.map.module->carrier, 0, out.m};
  out.chain_map = check_chain_map(f);
  out.iso = is_invertible(out.m);
  if (out.chain_map.ok) out.weak = is_weak_equivalence(f);
  return out;
}

Matrix postcompose(const MapModule& src, const MapModule& tgt, const ModuleMap& g) {
  if (g.degree != 0) throw std::invalid_argument("postcompose: only degree-0 maps");
  const Field& F = g.m.field();
  size_t dN = src.n->dim(), dN2 = tgt.n->dim();
  Matrix out(F, tgt.module->dim(), src.module->dim());
  for (uint32_t q = 0; q < src.basis.cols(); ++q) {
    SVec hom;
    for (auto& [h, v] : src.basis.col(q)) {
      uint32_t i = h / uint32_t(dN), j = h % uint32_t(dN);
      SVec img;
      for (auto& [k, w] : g.m.col(j)) img.emplace_back(uint32_t(i * dN2 + k), F.mul(v, w));
      svec_axpy(F, hom, Scalar(1), img);
    }
    out.set_col(q, map_coords(tgt, hom));
  }
  return out;
}

Report morita_report(const ModPtr& x, const std::vector<ModPtr>& samples, const MoritaCertificates& certs) {
  Report r;
  r.kind = "morita";
  r.subject = "X = " + x->name + " as a " + x->left->name + "-" + x->right->name + " bimodule";
  const std::string thm = "homotopical Morita theorem";

  bool x_certified = false;
  if (certs.x_right_cells) {
    CellularReport cr = verify_cellular_filtration(x, Side::Right, *certs.x_right_cells);
    x_certified = cr.ok && cr.flat_cofibrant;
    Criterion c = make_criterion("X is cellular as a right " + x->right->name + "-module", thm + ", hypothesis",
                                 Scope::Certified, x_certified ? Verdict::pass(cr.detail) : Verdict::fail(cr.detail));
    c.evidence.push_back({"certificate", cell_count(*certs.x_right_cells)});
    r.criteria.push_back(std::move(c));
  } else {
    r.caveats.push_back("no cellular certificate for X as a right module; the dualizability verdict is conditional");
  }

  // (1) the unit.
  UnitMap u = morita_unit(x);
  {
    Verdict v = u.chain_map.ok ? weak_verdict(u.weak, "η_A") : u.chain_map;
    Criterion c = make_criterion("η_A: " + x->left->name + " → Map(X,X) is a weak equivalence", thm + ", condition (1)",
                                 Scope::Instance, v);
    map_evidence(c, x->left->carrier, u.map.module->carrier, u.m, u.iso, u.weak);
    r.criteria.push_back(std::move(c));
  }

  // (2) homotopy cofaithfulness.
  {
    auto retract = find_retract(x, Side::Right);
    Criterion c = make_criterion("X is homotopy cofaithful as a right module", thm + ", condition (2)",
                                 retract ? Scope::Certified : Scope::SpotCheck, Verdict::pass());
    if (retract) c.evidence.push_back({"retract", x->right->name + " is a retract of X"});
    size_t violations = 0;
    for (size_t i = 0; i < certs.reflection_samples.size(); ++i) {
      const ModuleMap& g = certs.reflection_samples[i];
      MapModule ms = map_module(x, g.source), mt = map_module(x, g.target);
      Matrix mg = postcompose(ms, mt, g);
      bool map_we = is_weak_equivalence({ms.module->carrier, mt.module->carrier, 0, mg}).ok;
      bool g_we = is_weak_equivalence(as_chain_map(g)).ok;
      c.evidence.push_back({"sample " + std::to_string(i) + " (" + g.source->name + " → " + g.target->name + ")",
                            "Map(X,g) weak equivalence: " + yes_no(map_we) + ", g weak equivalence: " + yes_no(g_we)});
      if (map_we && !g_we) ++violations;
    }
    if (violations)
      c.verdict = Verdict::fail(std::to_string(violations) + " sample(s) where Map(X,g) is a weak equivalence but g is not");
    else if (!retract && certs.reflection_samples.empty())
      c.verdict = Verdict::fail("no retract certificate and no reflection samples");
    r.criteria.push_back(std::move(c));
  }

  // (3) right dualizability through ℓ_N.
  DualSearch ds = find_dual_witness(x);
  {
    Scope scope = x_certified ? Scope::SpotCheck : Scope::Conditional;
    Criterion c = make_criterion("ℓ_N: N ⊗ Map(X,B) → Map(X,N) is a weak equivalence on the samples",
                                 thm + ", condition (3)", scope, Verdict::pass());
    if (!ds.witness) {
      c.verdict = Verdict::fail("X has no strict dual: " + ds.refutation);
    } else {
      Verdict wv = validate_duality_witness(*ds.witness);
      c.evidence.push_back({"duality witness", wv.ok ? "valid" : wv.detail});
      if (!wv.ok) c.verdict = Verdict::fail("duality witness invalid: " + wv.detail);
      for (const ModPtr& n : samples) {
        EllMap l = ell_map(*ds.witness, n);
        c.evidence.push_back({"ℓ at " + n->name, "dims " + std::to_string(l.source->dim()) + " → " +
                                                     std::to_string(l.target.module->dim()) +
                                                     ", iso: " + yes_no(l.iso) +
                                                     ", weak equivalence: " + yes_no(l.weak_equivalence)});
        if (!l.weak_equivalence && c.verdict.ok) c.verdict = Verdict::fail("ℓ is not a weak equivalence at " + n->name);
      }
    }
    r.criteria.push_back(std::move(c));
  }

  finish(r);
  r.caveats.push_back(std::string(r.overall ? "all" : "not all") + " per-instance criteria of the " + thm +
                      " passed on the supplied samples; Quillen equivalence is not asserted");
  return r;
}

// ---------------------------------------------------------------------------

DescentSetup descent_setup(const DualityWitness& w, const CoringPtr& c) {
  DescentSetup s{w, c, canonical_coring(w, c), {}};
  s.universal = universal_braiding(w, c, s.can);
  return s;
}

Comodule canonical_functor(const DescentSetup& s, const Comodule& m) { return induce_comodule(s.universal, m); }

UpperStar primitives_functor(const DescentSetup& s, const Comodule& n) {
  return t_upper_star(s.universal, s.w, n, Flatness::SpotChecked);
}

AdjunctionComponent descent_unit(const DescentSetup& s, const Comodule& m) {
  Comodule can = canonical_functor(s, m);
  UpperStar prim = primitives_functor(s, can);
  TensorPtr tm = as_tensor(m.module);
  TensorPtr mx = make_tensor({m.module, s.w.x});
  TensorPtr yc = make_tensor({s.w.y, s.c->carrier});
  Matrix into = tensor_map(tm, prim.cotensor.mn,
                           {{0, op_lift(m.delta, tm, m.mc)},
                            {1, op_insert_z(s.w.xy, s.w.z)},
                            {0, op_projection(mx)},
                            {1, op_projection(yc)}});
  AdjunctionComponent out{m, prim.comodule, lift_through(prim.cotensor.inclusion, into, "descent unit"), {}, false, {}};
  out.comodule_map = check_comodule_map(out.source, out.target, out.m, "the unit");
  out.iso = is_invertible(out.m);
  out.weak = is_weak_equivalence({m.module->carrier, prim.comodule.module->carrier, 0, out.m});
  return out;
}

AdjunctionComponent descent_counit(const DescentSetup& s, const Comodule& n) {
  UpperStar prim = primitives_functor(s, n);
  Comodule can = canonical_functor(s, prim.comodule);
  TensorPtr px = make_tensor({prim.comodule.module, s.w.x});
  TensorPtr yc = make_tensor({s.w.y, s.c->carrier});
  TensorPtr tb = as_tensor(regular_bimodule(s.w.x->right));
  const TensorPtr& mn = prim.cotensor.mn;
  Matrix m = tensor_map(px, as_tensor(n.module),
                        {{0, op_matrix(prim.cotensor.inclusion, {carrier_of(prim.comodule.module)}, {mn->carrier()})},
                         {0, op_section(mn)},
                         {1, op_section(yc)},
                         {2, op_counit(*s.c)},
                         {2, op_left_action(s.w.x)},
                         {1, op_lift(s.w.e, s.w.yx, tb)},
                         {0, op_right_action(n.module)}});
  AdjunctionComponent out{can, n, m, {}, false, {}};
  out.comodule_map = check_comodule_map(out.source, out.target, out.m, "the counit");
  out.iso = is_invertible(out.m);
  out.weak = is_weak_equivalence({can.module->carrier, n.module->carrier, 0, out.m});
  return out;
}

namespace {

Criterion component_criterion(const std::string& name, const std::string& anchor, const AdjunctionComponent& a) {
  Verdict v = a.comodule_map.ok ? weak_verdict(a.weak, name) : a.comodule_map;
  Criterion c = make_criterion(name + " is a weak equivalence", anchor, Scope::Instance, v);
  c.evidence.push_back({"comodule map", a.comodule_map.ok ? "yes" : a.comodule_map.detail});
  map_evidence(c, a.source.module->carrier, a.target.module->carrier, a.m, a.iso, a.weak);
  return c;
}

void descent_criteria(Report& r, const DescentSetup& s, const std::vector<Comodule>& samples,
                      const DescentCertificates& certs,
                      const std::function<std::vector<Comodule>(const CoringPtr&)>& extra) {
  const std::string def = "effective homotopic descent";
  const ModPtr& x = s.w.x;
  {
    Verdict wv = validate_duality_witness(s.w);
    Criterion c = make_criterion("duality witness for X", def + ", strict dualizability", Scope::Certified, wv);
    c.evidence.push_back({"dim X ⊗ Y", std::to_string(s.w.xy->dim())});
    c.evidence.push_back({"dim Y ⊗ X", std::to_string(s.w.yx->dim())});
    r.criteria.push_back(std::move(c));
  }
  // Sufficient conditions for faithful flatness, listed without affecting the verdict.
  if (certs.x_left_cells) {
    CellularReport cr = verify_cellular_filtration(x, Side::Left, *certs.x_left_cells);
    Criterion c = make_criterion("X is flat-cofibrant as a left " + x->left->name + "-module",
                                 def + ", sufficient condition", Scope::Certified,
                                 cr.ok && cr.flat_cofibrant ? Verdict::pass(cr.detail) : Verdict::fail(cr.detail), false);
    c.evidence.push_back({"certificate", cell_count(*certs.x_left_cells)});
    r.criteria.push_back(std::move(c));
  }
  {
    auto ret = find_retract(x, Side::Left);
    Criterion c = make_criterion(x->left->name + " is a retract of X as a left module", def + ", sufficient condition",
                                 Scope::Certified, ret ? Verdict::pass() : Verdict::fail("no retraction found"), false);
    r.criteria.push_back(std::move(c));
  }

  std::vector<Comodule> counit_samples;
  for (const Comodule& m : samples) {
    AdjunctionComponent u = descent_unit(s, m);
    r.criteria.push_back(component_criterion("unit at " + m.name, def + ", unit", u));
    counit_samples.push_back(canonical_functor(s, m));
  }
  counit_samples.push_back(regular_right_comodule(s.can.coring));
  if (extra)
    for (auto& n : extra(s.can.coring)) counit_samples.push_back(n);
  for (const Comodule& n : counit_samples) {
    AdjunctionComponent e = descent_counit(s, n);
    r.criteria.push_back(component_criterion("counit at " + n.name, def + ", counit", e));
  }
}

}  // namespace

Report descent_report(const DescentSetup& s, const std::vector<Comodule>& samples, const DescentCertificates& certs,
                      const std::function<std::vector<Comodule>(const CoringPtr&)>& extra) {
  Report r;
  r.kind = "descent";
  r.subject = "X = " + s.w.x->name + " over " + s.c->name + ", canonical coring " + s.can.coring->name;
  descent_criteria(r, s, samples, certs, extra);
  finish(r);
  r.caveats.push_back(std::string(r.overall ? "all" : "not all") +
                      " per-instance unit and counit checks passed on the supplied samples; Quillen equivalence is "
                      "not asserted");
  r.caveats.push_back("flat-cofibrancy and retract certificates are sufficient conditions and do not enter the verdict");
  return r;
}

Report coring_equivalence_report(const BraidedBimodule& b, const DualityWitness& w,
                                 const std::vector<Comodule>& samples, const EquivalenceOptions& opt) {
  Report r;
  r.kind = "equivalence";
  r.subject = b.name + ": (" + b.source->algebra->name + ", " + b.source->name + ") → (" + b.target->algebra->name +
              ", " + b.target->name + ")";
  const std::string thm = "comodule equivalence theorem";
  DescentSetup s = descent_setup(w, b.source);
  GOfT gt = g_of_t(w, b, s.can);
  const CoringMorphism& g = gt.g;
  r.criteria.push_back(make_criterion("g_T: X_*(C) → D is a morphism of corings", thm, Scope::Instance, gt.morphism));
  r.criteria.push_back(
      make_criterion("T factors through the universal braiding and g_T", thm + ", factorization", Scope::Instance,
                     gt.factorization));

  bool g_iso = is_invertible(g.fsharp);
  WeakEquivalence gw = is_weak_equivalence({s.can.coring->carrier->carrier, b.target->carrier->carrier, 0, g.fsharp});
  {
    Criterion c = make_criterion("g_T is a weak equivalence", thm + ", coring condition", Scope::Instance,
                                 weak_verdict(gw, "g_T"));
    map_evidence(c, s.can.coring->carrier->carrier, b.target->carrier->carrier, g.fsharp, g_iso, gw);
    r.criteria.push_back(std::move(c));
  }

  std::vector<Comodule> tests = opt.target_samples;
  for (const Comodule& m : samples) tests.push_back(induce_comodule(b, m));
  {
    Criterion c = make_criterion("g_T is copure", thm + ", coring condition", Scope::SpotCheck, Verdict::pass());
    if (g_iso) {
      c.scope = Scope::Certified;
      c.evidence.push_back({"g_T", "isomorphism of corings, so the counit of (g_T)_* ⊣ (g_T)^* is invertible"});
    } else if (!gw.ok) {
      c.verdict = Verdict::fail("g_T is not a weak equivalence");
    } else if (b.target->coaug) {
      try {
        CopureVerdict cv = copure_spot_check(g, tests, opt.window, opt.canonical_cells, opt.target_cells);
        c.evidence.push_back({"window", std::to_string(opt.window.first) + ":" + std::to_string(opt.window.second)});
        c.evidence.push_back({"source flatness", to_string(cv.source_flat.verdict) + " " + cv.source_flat.detail});
        c.evidence.push_back({"target flatness", to_string(cv.target_flat.verdict) + " " + cv.target_flat.detail});
        for (size_t i = 0; i < tests.size(); ++i)
          c.evidence.push_back({"counit on the cobar resolution of " + tests[i].name, yes_no(cv.per_comodule[i].ok)});
        if (!cv.ok()) c.verdict = Verdict::fail("the counit is not a weak equivalence on some test comodule");
      } catch (const CobarError& e) {
        c.verdict = Verdict::fail(e.what());
      }
    } else {
      r.caveats.push_back("D has no coaugmentation, so copurity is spot-checked on the test comodules themselves");
      for (const Comodule& n : tests) {
        Pullback p = pullback(g, n);
        Matrix e = pullback_counit(g, p, n);
        bool ok = is_weak_equivalence({p.comodule.module->carrier, n.module->carrier, 0, e}).ok;
        c.evidence.push_back({"counit at " + n.name, yes_no(ok)});
        if (!ok && c.verdict.ok) c.verdict = Verdict::fail("the counit is not a weak equivalence at " + n.name);
      }
    }
    r.criteria.push_back(std::move(c));
  }

  descent_criteria(r, s, samples, opt.descent, {});
  finish(r);
  r.caveats.push_back(std::string(r.overall ? "all" : "not all") + " per-instance criteria of the " + thm +
                      " passed on the supplied samples; Quillen equivalence is not asserted");
  r.caveats.push_back("verdicts in the converse direction are conditional on strong homotopy flatness of X, which is "
                      "not certified");
  return r;
}

Report coring_equivalence_report(const CoringMorphism& f, const std::vector<Comodule>& samples,
                                 const EquivalenceOptions& opt) {
  return coring_equivalence_report(braided_from_coring_morphism(f), algebra_dual_witness(f.phi), samples, opt);
}

}  // namespace dgc
