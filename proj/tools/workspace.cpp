#include "workspace.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace dgc::cf {

namespace {

const std::vector<std::string> kKinds = {"complex",  "algebra",      "morphism",       "module",
                                         "coring",   "comodule",     "leftcomodule",   "coringmorphism",
                                         "braiding", "witness",      "cells"};

const std::map<std::string, std::vector<std::string>> kKeys = {
    {"complex", {"basis", "d"}},
    {"algebra", {"basis", "d", "unit", "mult"}},
    {"morphism", {"source", "target", "map"}},
    {"module", {"left", "right", "basis", "d", "lact", "ract"}},
    {"coring", {"carrier", "delta", "counit", "coaug"}},
    {"comodule", {"coring", "module", "delta"}},
    {"leftcomodule", {"coring", "module", "delta"}},
    {"coringmorphism", {"source", "target", "phi", "map"}},
    {"braiding", {"source", "target", "module", "t"}},
    {"witness", {"x", "y", "z", "e"}},
    {"cells", {"module", "side", "stage"}},
};

// Keys whose lines are matrix entries ending in a scalar; their order is immaterial.
const std::set<std::string> kEntryKeys = {"d",     "unit",   "mult",  "lact", "ract", "map",
                                          "delta", "counit", "coaug", "t",    "z",    "e"};
// Entries that count as structure constants for perturbation trials.
const std::set<std::string> kStructureKeys = {"unit", "mult", "lact", "ract", "map", "delta",
                                              "counit", "coaug", "t", "z", "e"};
// Keys holding a single reference or word.
const std::set<std::string> kSingleKeys = {"left",   "right",  "source", "target", "carrier", "coring",
                                           "module", "phi",    "x",      "y",      "side"};

size_t kind_rank(const std::string& k) {
  return size_t(std::find(kKinds.begin(), kKinds.end(), k) - kKinds.begin());
}

std::vector<std::string> tokens(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t pos; (pos = s.find(sep, start)) != std::string::npos; start = pos + 1) out.push_back(s.substr(start, pos - start));
  out.push_back(s.substr(start));
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// ---------------------------------------------------------------------------
// Resolution of one block.

class Builder {
 public:
  Builder(Workspace& ws, const Block& b) : ws_(ws), b_(b), F_(ws.doc.field) {}

  [[noreturn]] void fail(const std::string& msg, const Line* l = nullptr) const {
    throw InputError(b_.kind + " " + b_.name + (l ? " (line " + std::to_string(l->lineno) + ")" : std::string()) +
                     ": " + msg);
  }

  const Line* single(const std::string& key, bool required) const {
    const Line* found = nullptr;
    for (auto& l : b_.lines)
      if (l.key == key) {
        if (found) fail("duplicate '" + key + "'", &l);
        if (l.args.size() != 1) fail("'" + key + "' takes one argument", &l);
        found = &l;
      }
    if (!found && required) fail("missing '" + key + "'");
    return found;
  }

  std::string word(const std::string& key) const { return single(key, true)->args[0]; }

  template <class M>
  auto lookup(const M& m, const std::string& key, const char* what) const {
    const Line* l = single(key, true);
    auto it = m.find(l->args[0]);
    if (it == m.end()) fail("unresolved reference '" + l->args[0] + "' (expected " + what + ")", l);
    return it->second;
  }

  AlgPtr algebra_or_ground(const std::string& key) const {
    const Line* l = single(key, false);
    if (!l) return ws_.algebras.at("k");
    auto it = ws_.algebras.find(l->args[0]);
    if (it == ws_.algebras.end()) fail("unresolved reference '" + l->args[0] + "' (expected algebra)", l);
    return it->second;
  }

  Complex basis() const {
    std::vector<int> deg;
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (auto& l : b_.lines) {
      if (l.key != "basis") continue;
      for (auto& t : l.args) {
        auto p = split(t, ':');
        if (p.size() != 2 || p[0].empty()) fail("basis element '" + t + "' is not name:degree", &l);
        if (!seen.insert(p[0]).second) fail("duplicate basis name '" + p[0] + "'", &l);
        try {
          size_t used = 0;
          deg.push_back(std::stoi(p[1], &used));
          if (used != p[1].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          fail("bad degree in '" + t + "'", &l);
        }
        names.push_back(p[0]);
      }
    }
    Complex c(F_, deg, names);
    c.d = entries("d", {&c.names}, {&c.names});
    return c;
  }

  Scalar scalar(const std::string& s, const Line& l) const {
    try {
      return F_.parse(s);
    } catch (const std::exception& e) {
      fail(e.what(), &l);
    }
  }

  // Index of a (possibly comma-separated) tuple of basis names; each position
  // ranges over its own basis and the index is row-major.
  uint32_t index(const std::string& tok, const std::vector<const std::vector<std::string>*>& bases,
                 const Line& l) const {
    auto parts = split(tok, ',');
    if (parts.size() != bases.size())
      fail("'" + tok + "' should name " + std::to_string(bases.size()) + " basis element(s)", &l);
    size_t code = 0;
    for (size_t k = 0; k < parts.size(); ++k) {
      const auto& names = *bases[k];
      auto it = std::find(names.begin(), names.end(), parts[k]);
      if (it == names.end()) fail("unknown basis element '" + parts[k] + "'", &l);
      code = code * names.size() + size_t(it - names.begin());
    }
    return uint32_t(code);
  }

  static size_t size_of(const std::vector<const std::vector<std::string>*>& bases) {
    size_t n = 1;
    for (auto* b : bases) n *= b->size();
    return n;
  }

  // Entries "key ROW COL SCALAR".
  Matrix entries(const std::string& key, const std::vector<const std::vector<std::string>*>& rows,
                 const std::vector<const std::vector<std::string>*>& cols) const {
    std::vector<Triple> t;
    for (auto& l : b_.lines) {
      if (l.key != key) continue;
      if (l.args.size() != 3) fail("'" + key + "' takes row, column and scalar", &l);
      t.push_back({index(l.args[0], rows, l), index(l.args[1], cols, l), scalar(l.args[2], l)});
    }
    return Matrix::from_triples(F_, size_of(rows), size_of(cols), t);
  }

  // Entries "key NAME SCALAR" forming one vector.
  SVec vector(const std::string& key, const std::vector<const std::vector<std::string>*>& rows) const {
    std::vector<Triple> t;
    for (auto& l : b_.lines) {
      if (l.key != key) continue;
      if (l.args.size() != 2) fail("'" + key + "' takes an element and a scalar", &l);
      t.push_back({index(l.args[0], rows, l), 0, scalar(l.args[1], l)});
    }
    return Matrix::from_triples(F_, size_of(rows), 1, t).col(0);
  }

  bool has(const std::string& key) const {
    return std::any_of(b_.lines.begin(), b_.lines.end(), [&](const Line& l) { return l.key == key; });
  }

  template <class F>
  auto guarded(F&& f) const {
    try {
      return f();
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  Verdict run() {
    const std::string& k = b_.kind;
    const std::string& n = b_.name;
    if (k == "complex") {
      Complex c = basis();
      ws_.complexes[n] = c;
      return validate_complex(c);
    }
    if (k == "algebra") {
      Complex c = basis();
      std::vector<const std::vector<std::string>*> one{&c.names}, two{&c.names, &c.names};
      SVec unit = vector("unit", one);
      Matrix mult = entries("mult", one, two);
      AlgPtr a = guarded([&] { return make_algebra(n, c, unit, mult); });
      ws_.algebras[n] = a;
      return validate_algebra(*a);
    }
    if (k == "morphism") {
      AlgPtr s = lookup(ws_.algebras, "source", "algebra"), t = lookup(ws_.algebras, "target", "algebra");
      AlgebraMorphism f{s, t, entries("map", {&t->carrier.names}, {&s->carrier.names})};
      ws_.morphisms[n] = f;
      return validate_algebra_morphism(f);
    }
    if (k == "module") {
      AlgPtr L = algebra_or_ground("left"), R = algebra_or_ground("right");
      Complex c = basis();
      Matrix lact = has("lact") || !is_ground(*L) ? entries("lact", {&c.names}, {&L->carrier.names, &c.names})
                                                   : trivial_left_action(c);
      Matrix ract = has("ract") || !is_ground(*R) ? entries("ract", {&c.names}, {&c.names, &R->carrier.names})
                                                   : trivial_right_action(c);
      ModPtr m = guarded([&] { return make_module(n, c, L, lact, R, ract); });
      ws_.modules[n] = m;
      return validate_module(*m);
    }
    if (k == "coring") {
      ModPtr c = lookup(ws_.modules, "carrier", "module");
      const auto& cn = c->carrier.names;
      const auto& an = c->left->carrier.names;
      Matrix dp = entries("delta", {&cn, &cn}, {&cn});
      Matrix eps = entries("counit", {&an}, {&cn});
      std::optional<Matrix> eta;
      if (has("coaug")) eta = entries("coaug", {&cn}, {&an});
      CoringPtr r = guarded([&] { return make_coring_plain(n, c, dp, eps, eta); });
      ws_.corings[n] = r;
      return validate_coring(*r);
    }
    if (k == "comodule" || k == "leftcomodule") {
      CoringPtr c = lookup(ws_.corings, "coring", "coring");
      ModPtr m = lookup(ws_.modules, "module", "module");
      const auto& cn = c->carrier->carrier.names;
      const auto& mn = m->carrier.names;
      if (k == "comodule") {
        Matrix dp = entries("delta", {&mn, &cn}, {&mn});
        Comodule r = guarded([&] { return make_comodule_plain(n, c, m, dp); });
        ws_.comodules[n] = r;
        return validate_comodule(r);
      }
      Matrix dp = entries("delta", {&cn, &mn}, {&mn});
      LeftComodule r = guarded([&] { return make_left_comodule_plain(n, c, m, dp); });
      ws_.left_comodules[n] = r;
      return validate_left_comodule(r);
    }
    if (k == "coringmorphism") {
      CoringPtr s = lookup(ws_.corings, "source", "coring"), t = lookup(ws_.corings, "target", "coring");
      const Line* pl = single("phi", false);
      AlgebraMorphism phi = identity_morphism(s->algebra);
      if (pl && pl->args[0] != "identity") phi = lookup(ws_.morphisms, "phi", "morphism");
      CoringMorphism f{s, t, phi,
                       entries("map", {&t->carrier->carrier.names}, {&s->carrier->carrier.names})};
      ws_.coring_morphisms[n] = f;
      return validate_coring_morphism(f);
    }
    if (k == "braiding") {
      CoringPtr s = lookup(ws_.corings, "source", "coring"), t = lookup(ws_.corings, "target", "coring");
      ModPtr x = lookup(ws_.modules, "module", "module");
      const auto &cn = s->carrier->carrier.names, &dn = t->carrier->carrier.names, &xn = x->carrier.names;
      Matrix tp = entries("t", {&xn, &dn}, {&cn, &xn});
      BraidedBimodule b = guarded([&] { return make_braided_plain(n, s, t, x, tp); });
      ws_.braidings[n] = b;
      return validate_braided(b);
    }
    if (k == "witness") {
      ModPtr x = lookup(ws_.modules, "x", "module"), y = lookup(ws_.modules, "y", "module");
      const auto &xn = x->carrier.names, &yn = y->carrier.names, &bn = x->right->carrier.names;
      SVec z = vector("z", {&xn, &yn});
      Matrix e = entries("e", {&bn}, {&yn, &xn});
      DualityWitness w = guarded([&] { return make_duality_witness(x, y, z, e); });
      ws_.witnesses[n] = w;
      return validate_duality_witness(w);
    }
    if (k == "cells") {
      CellData cd;
      cd.module = lookup(ws_.modules, "module", "module");
      std::string side = word("side");
      if (side != "left" && side != "right") fail("side must be left or right", single("side", true));
      cd.side = side == "left" ? Side::Left : Side::Right;
      for (auto& l : b_.lines) {
        if (l.key != "stage") continue;
        std::vector<SVec> stage;
        for (auto& g : l.args) stage.push_back(SVec{{index(g, {&cd.module->carrier.names}, l), Scalar(1)}});
        cd.cells.push_back(stage);
      }
      ws_.cells[n] = cd;
      CellularReport rep = verify_cellular_filtration(cd.module, cd.side, cd.cells);
      return rep.ok ? Verdict::pass(rep.detail) : Verdict::fail("cells " + n + ": " + rep.detail);
    }
    fail("unknown kind");
  }

 private:
  Workspace& ws_;
  const Block& b_;
  const Field& F_;
};

std::vector<const Block*> canonical_order(const Document& doc) {
  std::vector<const Block*> order;
  for (auto& b : doc.blocks) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(), [](const Block* a, const Block* b) {
    size_t ra = kind_rank(a->kind), rb = kind_rank(b->kind);
    return ra != rb ? ra < rb : a->name < b->name;
  });
  return order;
}

}  // namespace

bool Workspace::valid() const {
  return std::all_of(validation.begin(), validation.end(), [](const Validation& v) { return v.verdict.ok; });
}

const std::string& Workspace::kind_of(const std::string& name) const {
  for (auto& b : doc.blocks)
    if (b.name == name) return b.kind;
  throw InputError("unresolved reference '" + name + "'");
}

Document parse(const std::string& text, const std::string& source) {
  Document doc;
  bool have_field = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<Block> cur;
  std::set<std::string> names{"k"};
  auto err = [&](const std::string& m) { throw InputError(source + ":" + std::to_string(lineno) + ": " + m); };
  while (std::getline(in, raw)) {
    ++lineno;
    auto t = tokens(raw);
    if (t.empty()) continue;
    if (!cur) {
      if (t[0] == "field") {
        if (have_field) err("field declared twice");
        have_field = true;
        if (t.size() == 2 && t[1] == "Q") {
          doc.field = Field::rationals();
        } else if (t.size() == 3 && t[1] == "F") {
          long p = 0;
          try {
            size_t used = 0;
            p = std::stol(t[2], &used);
            if (used != t[2].size()) throw std::invalid_argument("");
          } catch (const std::exception&) {
            err("bad modulus '" + t[2] + "'");
          }
          if (!is_prime_number(p)) err("non-prime modulus " + t[2]);
          doc.field = Field::prime(p);
        } else {
          err("expected 'field Q' or 'field F p'");
        }
      } else if (kind_rank(t[0]) < kKinds.size()) {
        if (t.size() != 2) err("expected '" + t[0] + " NAME'");
        if (!names.insert(t[1]).second) err("name '" + t[1] + "' is already taken");
        cur = Block{t[0], t[1], lineno, {}};
      } else {
        err("unknown statement '" + t[0] + "'");
      }
      continue;
    }
    if (t[0] == "end") {
      if (t.size() != 1) err("'end' takes no arguments");
      doc.blocks.push_back(std::move(*cur));
      cur.reset();
      continue;
    }
    const auto& keys = kKeys.at(cur->kind);
    if (std::find(keys.begin(), keys.end(), t[0]) == keys.end())
      err("'" + t[0] + "' is not a field of " + cur->kind);
    cur->lines.push_back({t[0], std::vector<std::string>(t.begin() + 1, t.end()), lineno});
  }
  if (cur) throw InputError(source + ": " + cur->kind + " " + cur->name + " is missing 'end'");
  if (!have_field) throw InputError(source + ": missing field declaration");
  return doc;
}

Workspace build(const Document& doc) {
  Workspace ws;
  ws.doc = doc;
  ws.algebras["k"] = ground_algebra(doc.field);
  for (const Block* b : canonical_order(doc)) {
    Verdict v = Builder(ws, *b).run();
    ws.validation.push_back({b->kind, b->name, v});
  }
  return ws;
}

Workspace load_string(const std::string& text) { return build(parse(text)); }

Workspace load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return build(parse(ss.str(), path));
}

std::string save(const Document& doc) {
  const Field& F = doc.field;
  std::ostringstream os;
  os << "field " << (F.is_prime() ? "F " + std::to_string(F.p()) : std::string("Q")) << "\n";
  for (const Block* b : canonical_order(doc)) {
    os << "\n" << b->kind << " " << b->name << "\n";
    for (const std::string& key : kKeys.at(b->kind)) {
      if (!kEntryKeys.count(key)) {
        for (auto& l : b->lines)
          if (l.key == key) os << "  " << key << (l.args.empty() ? "" : " " + join(l.args, " ")) << "\n";
        continue;
      }
      std::map<std::vector<std::string>, Scalar> merged;
      for (auto& l : b->lines) {
        if (l.key != key || l.args.empty()) continue;
        std::vector<std::string> pos(l.args.begin(), l.args.end() - 1);
        auto& s = merged[pos];
        s = F.add(s, F.parse(l.args.back()));
      }
      for (auto& [pos, v] : merged)
        if (v != 0) os << "  " << key << " " << join(pos, " ") << " " << F.str(v) << "\n";
    }
    os << "end\n";
  }
  return os.str();
}

std::vector<Perturbation> perturbation_trials(const Document& doc, uint32_t seed, size_t count) {
  std::vector<std::pair<size_t, size_t>> sites;
  for (size_t i = 0; i < doc.blocks.size(); ++i)
    for (size_t j = 0; j < doc.blocks[i].lines.size(); ++j)
      if (kStructureKeys.count(doc.blocks[i].lines[j].key)) sites.push_back({i, j});
  std::vector<Perturbation> out;
  if (sites.empty()) return out;
  const Field& F = doc.field;
  std::mt19937 rng(seed);
  long top = F.is_prime() ? std::min(3L, F.p() - 1) : 3;
  for (size_t trial = 0; trial < count; ++trial) {
    auto [bi, li] = sites[rng() % sites.size()];
    Document d = doc;
    Line& l = d.blocks[bi].lines[li];
    long r = 1 + long(rng() % uint32_t(top));
    l.args.back() = F.str(F.add(F.parse(l.args.back()), F.from_int(r)));
    Perturbation p{d.blocks[bi].name, l.key, join(l.args, " "), false, {}};
    try {
      Workspace ws = build(d);
      for (auto& v : ws.validation)
        if (!v.verdict.ok) {
          p.detected = true;
          p.detail = v.verdict.detail;
          break;
        }
    } catch (const std::exception& e) {
      p.detected = true;
      p.detail = std::string("rejected on load: ") + e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace dgc::cf
