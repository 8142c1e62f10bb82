#include "workspace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace dgc;
using nlohmann::json;

namespace {

struct Output {
  Report report;
  json data = json::object();
};

struct Globals {
  std::string format = "text";
  std::string window_text;
  uint32_t seed = 1;
};

Window parse_window(const std::string& s, Window fallback) {
  if (s.empty()) return fallback;
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("");
    size_t a = 0, b = 0;
    int lo = std::stoi(s.substr(0, colon), &a), hi = std::stoi(s.substr(colon + 1), &b);
    if (a != colon || b != s.size() - colon - 1 || lo > hi) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw cf::InputError("bad window '" + s + "', expected lo:hi");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch != ',') {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

template <class M>
const typename M::mapped_type& need(const M& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw cf::InputError("unresolved reference '" + name + "' (expected " + what + ")");
  return it->second;
}

json degree_dims(const Complex& c) {
  json j = json::object();
  for (auto [d, n] : c.degree_dims()) j[std::to_string(d)] = n;
  return j;
}

json homology_dims(const Complex& c) {
  json j = json::object();
  Homology h = homology(c);
  for (auto& [d, hd] : h.degrees) j[std::to_string(d)] = hd.dim;
  return j;
}

std::string dims_text(const json& j) {
  std::string s;
  for (auto& [d, n] : j.items()) s += (s.empty() ? "" : ", ") + d + ":" + std::to_string(n.get<size_t>());
  return s.empty() ? "0" : s;
}

Criterion check(const std::string& name, const Verdict& v) { return {name, {}, Scope::Instance, v, true, {}}; }

void finish(Output& o) {
  o.report.overall = true;
  for (auto& c : o.report.criteria)
    if (c.binding && !c.verdict.ok) o.report.overall = false;
}

// A comodule by name, or a module wrapped as a comodule over the trivial coring.
Comodule sample_comodule(const cf::Workspace& ws, const std::string& name, const CoringPtr& c) {
  if (auto it = ws.comodules.find(name); it != ws.comodules.end()) {
    if (it->second.coring != c && !(it->second.coring->carrier->dim() == c->carrier->dim() &&
                                      it->second.coring->delta == c->delta))
      throw cf::InputError("sample '" + name + "' is not a comodule over " + c->name);
    return it->second;
  }
  if (auto it = ws.modules.find(name); it != ws.modules.end()) {
    try {
      return trivial_comodule(c, it->second);
    } catch (const std::exception& e) {
      throw cf::InputError("sample '" + name + "': " + e.what());
    }
  }
  throw cf::InputError("unresolved reference '" + name + "' (expected comodule or module)");
}

std::vector<Comodule> sample_comodules(const cf::Workspace& ws, const std::string& list, const CoringPtr& c) {
  std::vector<Comodule> out;
  for (auto& n : split_list(list)) out.push_back(sample_comodule(ws, n, c));
  return out;
}

std::optional<Cells> cells_for(const cf::Workspace& ws, const std::string& name, const ModPtr& m, Side side) {
  if (name.empty()) return std::nullopt;
  const cf::CellData& cd = need(ws.cells, name, "cells");
  if (cd.module != m) throw cf::InputError("cells '" + name + "' do not describe " + m->name);
  if (cd.side != side) throw cf::InputError("cells '" + name + "' are on the wrong side");
  return cd.cells;
}

// The algebra A as a left comodule through the coaugmentation, a ↦ η(1) ⊗ a.
LeftComodule coaugmentation_left(const CoringPtr& c) {
  if (!c->coaug) throw cf::InputError("coring " + c->name + " has no coaugmentation; pass --left");
  const Field& F = c->carrier->field();
  ModPtr a = regular_bimodule(c->algebra);
  size_t dA = a->dim(), dC = c->carrier->dim();
  SVec one;
  for (auto& [j, s] : c->algebra->unit) svec_axpy(F, one, s, c->coaug->col(j));
  std::vector<SVec> cols;
  for (uint32_t i = 0; i < dA; ++i) {
    SVec v;
    for (auto& [r, s] : one) svec_axpy(F, v, s, SVec{{uint32_t(r * dA + i), Scalar(1)}});
    cols.push_back(v);
  }
  return make_left_comodule_plain(c->algebra->name, c, a, Matrix::from_columns(F, dC * dA, cols));
}

// ---------------------------------------------------------------------------
// Commands.

Output cmd_validate(const cf::Workspace& ws, uint32_t seed, size_t trials) {
  Output o;
  o.report.kind = "validate";
  o.report.subject = std::to_string(ws.validation.size()) + " objects over " + ws.doc.field.describe();
  json objs = json::array();
  for (auto& v : ws.validation) {
    o.report.criteria.push_back(check(v.kind + " " + v.name, v.verdict));
    objs.push_back({{"kind", v.kind}, {"name", v.name}, {"ok", v.verdict.ok}, {"detail", v.verdict.detail}});
  }
  o.data["objects"] = objs;
  if (trials > 0) {
    auto ps = cf::perturbation_trials(ws.doc, seed, trials);
    size_t detected = 0;
    Criterion c{"perturbations detected", {}, Scope::SpotCheck, Verdict::pass(), true, {}};
    json pj = json::array();
    for (auto& p : ps) {
      detected += p.detected;
      pj.push_back({{"object", p.object}, {"entry", p.key + " " + p.entry}, {"detected", p.detected}});
      if (!p.detected) c.evidence.push_back({"undetected", p.object + ": " + p.key + " " + p.entry});
    }
    c.verdict = detected == ps.size() && !ps.empty()
                    ? Verdict::pass(std::to_string(detected) + "/" + std::to_string(ps.size()))
                    : Verdict::fail(std::to_string(detected) + "/" + std::to_string(ps.size()) + " detected");
    o.report.criteria.push_back(c);
    o.data["perturbations"] = pj;
  }
  finish(o);
  return o;
}

Complex object_complex(const cf::Workspace& ws, const std::string& name) {
  const std::string& kind = ws.kind_of(name);
  if (kind == "complex") return ws.complexes.at(name);
  if (kind == "algebra") return ws.algebras.at(name)->carrier;
  if (kind == "module") return ws.modules.at(name)->carrier;
  if (kind == "coring") return ws.corings.at(name)->carrier->carrier;
  if (kind == "comodule") return ws.comodules.at(name).module->carrier;
  if (kind == "leftcomodule") return ws.left_comodules.at(name).module->carrier;
  throw cf::InputError("'" + name + "' is a " + kind + ", which has no underlying complex");
}

Output describe(const std::string& kind, const std::string& subject, const Complex& c, Verdict v) {
  Output o;
  o.report.kind = kind;
  o.report.subject = subject;
  o.data["dims"] = degree_dims(c);
  o.data["homology"] = homology_dims(c);
  Criterion cr = check("result validates", v);
  cr.evidence = {{"graded dimensions", dims_text(o.data["dims"])}, {"homology", dims_text(o.data["homology"])}};
  o.report.criteria.push_back(cr);
  return o;
}

Output cmd_homology(const cf::Workspace& ws, const std::string& name) {
  Complex c = object_complex(ws, name);
  Output o = describe("homology", name, c, validate_complex(c));
  finish(o);
  return o;
}

Output cmd_tensor(const cf::Workspace& ws, const std::string& l, const std::string& r) {
  TensorPtr t = tensor_over_A(need(ws.modules, l, "module"), need(ws.modules, r, "module"));
  Output o = describe("tensor", l + " ⊗ " + r, t->module->carrier, validate_module(*t->module));
  o.data["plain_dim"] = t->plain_dim();
  finish(o);
  return o;
}

Output cmd_map(const cf::Workspace& ws, const std::string& x, const std::string& n) {
  MapModule mm = map_module(need(ws.modules, x, "module"), need(ws.modules, n, "module"));
  Output o = describe("map", "Map(" + x + ", " + n + ")", mm.module->carrier, validate_module(*mm.module));
  finish(o);
  return o;
}

Output cmd_cotensor(const cf::Workspace& ws, const std::string& m, const std::string& n) {
  const Comodule& cm = need(ws.comodules, m, "comodule");
  const LeftComodule& cn = need(ws.left_comodules, n, "left comodule");
  Cotensor t = cotensor(cm, cn);
  Output o = describe("cotensor", m + " □ " + n, t.module->carrier, validate_module(*t.module));
  o.data["tensor_dim"] = t.mn->dim();
  finish(o);
  return o;
}

Output coring_output(const std::string& kind, const std::string& subject, const CoringPtr& c) {
  Output o = describe(kind, subject, c->carrier->carrier, validate_coring(*c));
  o.data["algebra"] = c->algebra->name;
  return o;
}

Output cmd_descent_coring(const cf::Workspace& ws, const std::string& phi) {
  DescentCoring dc = descent_coring(need(ws.morphisms, phi, "morphism"));
  Output o = coring_output("descent-coring", phi, dc.coring);
  o.report.criteria.push_back(check("canonical comodule", validate_comodule(dc.canonical)));
  o.report.criteria.push_back(check("morphism from the trivial coring", validate_coring_morphism(dc.from_trivial)));
  finish(o);
  return o;
}

Output cmd_canonical_coring(const cf::Workspace& ws, const std::string& w, const std::string& c) {
  CanonicalCoring can = canonical_coring(need(ws.witnesses, w, "witness"), need(ws.corings, c, "coring"));
  Output o = coring_output("canonical-coring", w + " over " + c, can.coring);
  finish(o);
  return o;
}

Output cmd_compose(const cf::Workspace& ws, const std::string& f, const std::string& g) {
  Output o;
  o.report.kind = "compose";
  o.report.subject = g + " ∘ " + f;
  if (ws.coring_morphisms.count(f) && ws.coring_morphisms.count(g)) {
    const CoringMorphism &mf = ws.coring_morphisms.at(f), &mg = ws.coring_morphisms.at(g);
    if (mf.target != mg.source) throw cf::InputError("target of " + f + " is not the source of " + g);
    CoringMorphism h = compose_coring_morphisms(mg, mf);
    o.report.criteria.push_back(check("coring morphism", validate_coring_morphism(h)));
    o.data["source"] = h.source->name;
    o.data["target"] = h.target->name;
  } else if (ws.braidings.count(f) && ws.braidings.count(g)) {
    const BraidedBimodule &bf = ws.braidings.at(f), &bg = ws.braidings.at(g);
    if (bf.target != bg.source) throw cf::InputError("target of " + f + " is not the source of " + g);
    BraidedBimodule b = compose_braided(bf, bg);
    o.report.criteria.push_back(check("braided bimodule", validate_braided(b)));
    o.data["dims"] = degree_dims(b.x->carrier);
  } else {
    throw cf::InputError("compose needs two coring morphisms or two braidings");
  }
  finish(o);
  return o;
}

Output cmd_cobar(const cf::Workspace& ws, const std::string& m, const std::string& c, const std::string& n,
                 Window w) {
  const Comodule& cm = need(ws.comodules, m, "comodule");
  CoringPtr coring = c.empty() ? cm.coring : need(ws.corings, c, "coring");
  if (coring != cm.coring) throw cf::InputError("comodule " + m + " is not over " + coring->name);
  LeftComodule cn = n.empty() ? coaugmentation_left(coring) : need(ws.left_comodules, n, "left comodule");
  CobarComplex om = cobar(cm, coring, cn, w);
  Complex cx = om.complex();
  Output o;
  o.report.kind = "cobar";
  o.report.subject = "Ω(" + m + "; " + coring->name + "; " + cn.name + ") on [" + std::to_string(w.first) + ", " +
                     std::to_string(w.second) + "]";
  o.data["window"] = {w.first, w.second};
  o.data["dims"] = degree_dims(cx);
  Homology h = homology(cx);
  json all = json::object();
  json interior = json::array();
  for (int d = w.first; d <= w.second; ++d) {
    all[std::to_string(d)] = h.dim(d);
    if (d > w.first && d < w.second) interior.push_back(h.dim(d));
  }
  o.data["homology"] = all;
  o.data["interior"] = {{"degrees", {w.first + 1, w.second - 1}}, {"dims", interior}};
  Criterion sq = check("d² = 0", (cx.d * cx.d).is_zero() ? Verdict::pass() : Verdict::fail("d² ≠ 0"));
  sq.evidence = {{"graded dimensions", dims_text(o.data["dims"])}, {"homology", dims_text(all)},
                 {"interior homology", interior.dump()}};
  o.report.criteria.push_back(sq);
  o.report.criteria.push_back(check("module structure", validate_module(*om.module)));
  ResolutionVerdict rv = check_cobar_resolution(cm, w);
  Criterion res{"cobar resolution of " + m, "cobar resolution of a comodule", Scope::Instance,
                rv.ok() ? Verdict::pass() : Verdict::fail("resolution check failed"), true, {}};
  res.evidence = {{"factorization", rv.factorization.ok ? "ok" : rv.factorization.detail},
                  {"comodule maps", rv.comodule_maps.ok ? "ok" : rv.comodule_maps.detail},
                  {"quasi-isomorphism on interior",
                   rv.weak.ok ? "yes" : "no" + (rv.weak.first_failure ? " (degree " + std::to_string(*rv.weak.first_failure) + ")" : std::string())}};
  o.report.criteria.push_back(res);
  finish(o);
  return o;
}

Output cmd_report_morita(const cf::Workspace& ws, const std::string& x, const std::string& samples,
                         const std::string& cells) {
  const ModPtr& xm = need(ws.modules, x, "module");
  std::vector<ModPtr> ns;
  for (auto& n : split_list(samples)) ns.push_back(need(ws.modules, n, "module"));
  MoritaCertificates certs;
  certs.x_right_cells = cells_for(ws, cells, xm, Side::Right);
  return {morita_report(xm, ns, certs)};
}

Output cmd_report_descent(const cf::Workspace& ws, const std::string& w, const std::string& phi,
                          const std::string& c, const std::string& samples, const std::string& cells) {
  DualityWitness wit = !w.empty() ? need(ws.witnesses, w, "witness")
                                  : algebra_dual_witness(need(ws.morphisms, phi, "morphism"));
  CoringPtr coring = c.empty() ? trivial_coring(wit.x->left) : need(ws.corings, c, "coring");
  DescentSetup s = descent_setup(wit, coring);
  DescentCertificates certs;
  certs.x_left_cells = cells_for(ws, cells, wit.x, Side::Left);
  return {descent_report(s, sample_comodules(ws, samples, coring), certs)};
}

Output cmd_report_equivalence(const cf::Workspace& ws, const std::string& f, const std::string& t,
                              const std::string& w, const std::string& samples, const std::string& target_samples,
                              Window win) {
  EquivalenceOptions opt;
  opt.window = win;
  if (!f.empty()) {
    const CoringMorphism& m = need(ws.coring_morphisms, f, "coring morphism");
    opt.target_samples = sample_comodules(ws, target_samples, m.target);
    return {coring_equivalence_report(m, sample_comodules(ws, samples, m.source), opt)};
  }
  const BraidedBimodule& b = need(ws.braidings, t, "braiding");
  opt.target_samples = sample_comodules(ws, target_samples, b.target);
  return {coring_equivalence_report(b, need(ws.witnesses, w, "witness"), sample_comodules(ws, samples, b.source), opt)};
}

// ---------------------------------------------------------------------------

json report_doc(const Output& o) {
  const Report& r = o.report;
  json crit = json::array();
  for (auto& c : r.criteria) {
    json ev = json::array();
    for (auto& [k, v] : c.evidence) ev.push_back({{"key", k}, {"value", v}});
    crit.push_back({{"name", c.name},
                    {"anchor", c.anchor},
                    {"scope", to_string(c.scope)},
                    {"verdict", c.verdict.ok ? "PASS" : "FAIL"},
                    {"detail", c.verdict.detail},
                    {"binding", c.binding},
                    {"evidence", ev}});
  }
  return {{"kind", r.kind},       {"subject", r.subject}, {"criteria", crit},
          {"overall", r.overall ? "PASS" : "FAIL"}, {"caveats", r.caveats}, {"data", o.data}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgc: differential graded corings, comodules and Morita criteria"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "text or report-doc")->check(CLI::IsMember({"text", "report-doc"}));
  app.add_option("--window", g.window_text, "degree window lo:hi");
  app.add_option("--seed", g.seed, "seed for randomized negative tests");

  std::string file;
  auto with_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "workspace document (.cf)")->required();
    return sub;
  };

  size_t trials = 0;
  auto* validate = with_file(app.add_subcommand("validate", "load and validate every object"));
  validate->add_option("--trials", trials, "seeded single-entry perturbations to run");

  std::string object, left, right, source, target, comodule, coring, morphism, witness, first, second;
  std::string bimodule, samples, cells, braiding, target_samples;
  auto* hom = with_file(app.add_subcommand("homology", "graded homology of an object"));
  hom->add_option("--object", object)->required();
  auto* ten = with_file(app.add_subcommand("tensor", "M ⊗_A N"));
  ten->add_option("--left", left)->required();
  ten->add_option("--right", right)->required();
  auto* map = with_file(app.add_subcommand("map", "Map_B(X, N)"));
  map->add_option("--source", source)->required();
  map->add_option("--target", target)->required();
  auto* cot = with_file(app.add_subcommand("cotensor", "M □_C N"));
  cot->add_option("--comodule", comodule)->required();
  cot->add_option("--left", left)->required();
  auto* desc = with_file(app.add_subcommand("descent-coring", "descent coring of an algebra morphism"));
  desc->add_option("--morphism", morphism)->required();
  auto* can = with_file(app.add_subcommand("canonical-coring", "canonical coring of a duality witness"));
  can->add_option("--witness", witness)->required();
  can->add_option("--coring", coring)->required();
  auto* comp = with_file(app.add_subcommand("compose", "compose coring morphisms or braidings"));
  comp->add_option("--first", first)->required();
  comp->add_option("--second", second)->required();
  auto* cob = with_file(app.add_subcommand("cobar", "cobar construction Ω(M; C; N)"));
  cob->add_option("--comodule", comodule)->required();
  cob->add_option("--coring", coring);
  cob->add_option("--left", left, "left comodule (default: A through the coaugmentation)");

  auto* rep = app.add_subcommand("report", "Morita, descent and equivalence reports");
  rep->require_subcommand(1);
  auto* rm = with_file(rep->add_subcommand("morita", "Morita criteria for a bimodule"));
  rm->add_option("--bimodule", bimodule)->required();
  rm->add_option("--samples", samples, "comma-separated right B-modules");
  rm->add_option("--cells", cells, "cellular filtration of X as a right module");
  auto* rd = with_file(rep->add_subcommand("descent", "effective descent along a duality witness"));
  auto* rdw = rd->add_option("--witness", witness);
  rd->add_option("--morphism", morphism)->excludes(rdw);
  rd->add_option("--coring", coring, "coring over A (default: the trivial coring)");
  rd->add_option("--samples", samples, "comma-separated comodules or modules");
  rd->add_option("--cells", cells, "cellular filtration of X as a left module");
  auto* re = with_file(rep->add_subcommand("equivalence", "equivalence of comodule categories"));
  auto* ref = re->add_option("--morphism", morphism, "coring morphism");
  re->add_option("--braiding", braiding)->excludes(ref);
  re->add_option("--witness", witness)->excludes(ref);
  re->add_option("--samples", samples, "comma-separated comodules or modules over the source");
  re->add_option("--target-samples", target_samples, "comodules over the target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cf::Workspace ws = cf::load(file);
    Output out;
    if (validate->parsed()) {
      out = cmd_validate(ws, g.seed, trials);
    } else {
      if (!ws.valid()) {
        for (auto& v : ws.validation)
          if (!v.verdict.ok) std::cerr << "invalid " << v.kind << " " << v.name << ": " << v.verdict.detail << "\n";
        return 2;
      }
      if (hom->parsed()) out = cmd_homology(ws, object);
      else if (ten->parsed()) out = cmd_tensor(ws, left, right);
      else if (map->parsed()) out = cmd_map(ws, source, target);
      else if (cot->parsed()) out = cmd_cotensor(ws, comodule, left);
      else if (desc->parsed()) out = cmd_descent_coring(ws, morphism);
      else if (can->parsed()) out = cmd_canonical_coring(ws, witness, coring);
      else if (comp->parsed()) out = cmd_compose(ws, first, second);
      else if (cob->parsed()) out = cmd_cobar(ws, comodule, coring, left, parse_window(g.window_text, {0, 6}));
      else if (rm->parsed()) out = cmd_report_morita(ws, bimodule, samples, cells);
      else if (rd->parsed()) {
        if (witness.empty() && morphism.empty()) throw cf::InputError("report descent needs --witness or --morphism");
        out = cmd_report_descent(ws, witness, morphism, coring, samples, cells);
      } else if (re->parsed()) {
        if (morphism.empty() && (braiding.empty() || witness.empty()))
          throw cf::InputError("report equivalence needs --morphism or both --braiding and --witness");
        out = cmd_report_equivalence(ws, morphism, braiding, witness, samples, target_samples,
                                     parse_window(g.window_text, {0, 6}));
      }
    }
    if (g.format == "report-doc")
      std::cout << report_doc(out).dump(2) << "\n";
    else
      std::cout << render_text(out.report);
    return out.report.overall ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
