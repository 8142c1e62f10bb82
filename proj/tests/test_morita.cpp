#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coring_support.hpp"
#include "dgc/morita.hpp"

using namespace dgc;
using namespace testsupport;

namespace {

ModPtr cone_of_identity(const Field& F) {
  return ground_module("cone", mapping_cone(identity_map(ground_complex(F))));
}

ModPtr zero_bimodule(const AlgPtr& a, const AlgPtr& b) {
  const Field& F = a->field();
  return make_module("0", zero_complex(F), a, Matrix(F, 0, 0), b, Matrix(F, 0, 0));
}

// k × k × k with idempotents e1, e2, e3.
AlgPtr split_triple(const Field& F) {
  Complex c(F, {0, 0, 0}, {"e1", "e2", "e3"});
  return make_algebra("kxkxk", c, {{0, Scalar(1)}, {1, Scalar(1)}, {2, Scalar(1)}},
                      mult_table(F, 3, {{0, 0, 0, 1}, {1, 1, 1, 1}, {2, 2, 2, 1}}));
}

AlgebraMorphism unit_map(const AlgPtr& a) {
  const Field& F = a->field();
  std::vector<Triple> t;
  for (auto& [i, v] : a->unit) t.push_back({i, 0, v});
  return {ground_algebra(F), a, Matrix::from_triples(F, a->dim(), 1, t)};
}

const Criterion* find(const Report& r, const std::string& prefix) {
  for (auto& c : r.criteria)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

bool all_binding_pass(const Report& r) {
  for (auto& c : r.criteria)
    if (c.binding && !c.verdict.ok) return false;
  return true;
}

// The F5 samples: A, A ⊕ s⁻¹A and a seeded random three-dimensional module.
std::vector<Comodule> descent_samples(const CoringPtr& t) {
  const Field& F = t->carrier->field();
  Complex a = ground_complex(F);
  return {trivial_comodule(t, ground_module("A", a)),
          trivial_comodule(t, ground_module("A⊕s⁻¹A", direct_sum(a, desuspend(a)))),
          trivial_comodule(t, random_three_dim(F, 7))};
}

}  // namespace

TEST_CASE("matrix Morita context passes every condition") {
  Field Q;
  AlgPtr m2 = matrix_algebra(Q, 2);
  ModPtr x = column_module(m2, 2);
  REQUIRE(validate_module(*x).ok);
  UnitMap u = morita_unit(x);
  CHECK(u.chain_map.ok);
  CHECK(u.map.module->dim() == 4);
  CHECK(u.iso);
  CHECK(u.weak.ok);

  std::vector<ModPtr> samples{ground_space(Q, {0}, "k"), ground_space(Q, {0, 0}, "k2"), cone_of_identity(Q)};
  Report r = morita_report(x, samples);
  CHECK(r.overall);
  CHECK(all_binding_pass(r));
  const Criterion* eta = find(r, "η_A");
  REQUIRE(eta);
  CHECK(eta->scope == Scope::Instance);
  const Criterion* cof = find(r, "X is homotopy cofaithful");
  REQUIRE(cof);
  CHECK(cof->scope == Scope::Certified);
  const Criterion* ell = find(r, "ℓ_N");
  REQUIRE(ell);
  CHECK(ell->scope == Scope::Conditional);
  CHECK(ell->evidence.size() == 1 + samples.size());
  std::string text = render_text(r);
  CHECK(text.find("overall: PASS") != std::string::npos);
  CHECK(text.find("Quillen equivalence is not asserted") != std::string::npos);

  // With a cellular certificate the dualizability verdict is no longer conditional.
  MoritaCertificates certs;
  certs.x_right_cells = Cells{{SVec{{0, Scalar(1)}}, SVec{{1, Scalar(1)}}}};
  Report rc = morita_report(x, samples, certs);
  CHECK(rc.overall);
  CHECK(find(rc, "ℓ_N")->scope == Scope::SpotCheck);
}

TEST_CASE("Morita reports on the identity and on the zero bimodule") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  Report r = morita_report(regular_bimodule(b), {regular_right(b), residue_right(b)});
  CHECK(r.overall);

  AlgPtr m2 = matrix_algebra(Q, 2);
  Report z = morita_report(zero_bimodule(m2, ground_algebra(Q)), {ground_space(Q, {0}, "k")});
  CHECK_FALSE(z.overall);
  CHECK_FALSE(find(z, "η_A")->verdict.ok);
}

TEST_CASE("reflection spot checks catch a bimodule that misses a summand") {
  Field Q;
  AlgPtr kk = split_pair(Q);
  ModPtr x1 = right_module("x1", ground_complex(Q), kk, action_table(Q, 1, 2, {{0, 0, 1}}));
  ModPtr n2 = right_module("k2nd", ground_complex(Q), kk, action_table(Q, 1, 2, {{0, 1, 1}}));
  REQUIRE(validate_module(*n2).ok);
  ModPtr zero = zero_bimodule(ground_algebra(Q), kk);
  MoritaCertificates certs;
  certs.reflection_samples = {{n2, zero, Matrix(Q, 0, 1)}};
  Report r = morita_report(x1, {n2}, certs);
  const Criterion* cof = find(r, "X is homotopy cofaithful");
  REQUIRE(cof);
  CHECK(cof->scope == Scope::SpotCheck);
  CHECK_FALSE(cof->verdict.ok);
  CHECK_FALSE(r.overall);

  // Without samples or a retract the condition is not established.
  Report bare = morita_report(x1, {n2});
  CHECK_FALSE(find(bare, "X is homotopy cofaithful")->verdict.ok);
}

TEST_CASE("post-composition is functorial") {
  Field Q;
  ModPtr x = ground_space(Q, {0, 1}, "X");
  ModPtr n0 = ground_space(Q, {0, 1, 1}, "N"), n1 = ground_space(Q, {0, 1}, "P"), n2 = ground_space(Q, {0, 0, 1}, "R");
  Matrix g = Matrix::from_dense(Q, {{1, 0, 0}, {0, 2, -1}});
  Matrix h = Matrix::from_dense(Q, {{3, 0}, {1, 0}, {0, 5}});
  ModuleMap mg{n0, n1, g}, mh{n1, n2, h}, mhg{n0, n2, h * g};
  MapModule a = map_module(x, n0), b = map_module(x, n1), c = map_module(x, n2);
  CHECK(postcompose(a, c, mhg) == postcompose(b, c, mh) * postcompose(a, b, mg));
  CHECK(postcompose(a, a, {n0, n0, Matrix::identity(Q, 3)}) == Matrix::identity(Q, a.module->dim()));
}

TEST_CASE("faithfully flat descent along k → k × k") {
  Field Q;
  AlgPtr kk = split_pair(Q);
  AlgebraMorphism phi = diagonal(kk);
  DescentSetup s = descent_setup(algebra_dual_witness(phi), trivial_coring(phi.source));
  std::vector<Comodule> samples = descent_samples(s.c);
  for (const Comodule& m : samples) {
    REQUIRE(validate_comodule(m).ok);
    AdjunctionComponent u = descent_unit(s, m);
    CHECK(u.comodule_map.ok);
    CHECK(u.iso);
    CHECK(u.weak.ok);
    Comodule can = canonical_functor(s, m);
    CHECK(validate_comodule(can).ok);
    CHECK(can.module->dim() == 2 * m.module->dim());
    AdjunctionComponent e = descent_counit(s, can);
    CHECK(e.comodule_map.ok);
    CHECK(e.iso);
  }
  // The canonical comodule B over the descent coring.
  AdjunctionComponent e = descent_counit(s, regular_right_comodule(s.can.coring));
  CHECK(e.iso);

  Report r = descent_report(s, samples);
  CHECK(r.overall);
  size_t units = 0, counits = 0;
  for (auto& c : r.criteria) {
    units += c.name.rfind("unit at", 0) == 0;
    counits += c.name.rfind("counit at", 0) == 0;
    if (c.name.rfind("unit at", 0) == 0 || c.name.rfind("counit at", 0) == 0) {
      bool iso = false;
      for (auto& [k, v] : c.evidence) iso = iso || (k == "isomorphism" && v == "yes");
      CHECK(iso);
    }
  }
  CHECK(units == 3);
  CHECK(counits == 4);
}

TEST_CASE("descent along the identity and failure for a non-faithful bimodule") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  DescentSetup s = descent_setup(algebra_dual_witness(identity_morphism(b)), trivial_coring(b));
  Report r = descent_report(s, {trivial_comodule(s.c, regular_right(b)), trivial_comodule(s.c, residue_right(b))});
  CHECK(r.overall);

  AlgPtr kk = split_pair(Q);
  ModPtr x1 = left_module("x1", kk, ground_complex(Q), action_table(Q, 1, 2, {{0, 0, 1}}));
  REQUIRE(validate_module(*x1).ok);
  DualSearch ds = find_dual_witness(x1);
  REQUIRE(ds.witness);
  DescentSetup s1 = descent_setup(*ds.witness, trivial_coring(kk));
  AdjunctionComponent u = descent_unit(s1, trivial_comodule(s1.c, regular_right(kk)));
  CHECK(u.comodule_map.ok);
  CHECK_FALSE(u.weak.ok);
  Report r1 = descent_report(s1, {trivial_comodule(s1.c, regular_right(kk))});
  CHECK_FALSE(r1.overall);
  CHECK_FALSE(find(r1, "unit at")->verdict.ok);
}

TEST_CASE("descent over a coalgebra with a differential") {
  Field Q;
  CoringPtr c3 = three_dim_coalgebra(Q);
  DescentSetup s = descent_setup(algebra_dual_witness(identity_morphism(c3->algebra)), c3);
  for (const Comodule& m : {trivial_right(c3), regular_right_comodule(c3)}) {
    AdjunctionComponent u = descent_unit(s, m);
    CHECK(u.comodule_map.ok);
    CHECK(u.iso);
  }
}

TEST_CASE("coring equivalence reports") {
  Field Q;
  SUBCASE("identity coring morphism") {
    CoringPtr c3 = three_dim_coalgebra(Q);
    Report r = coring_equivalence_report(identity_coring_morphism(c3), {trivial_right(c3), regular_right_comodule(c3)});
    CHECK(r.overall);
    CHECK(find(r, "g_T is copure")->scope == Scope::Certified);
  }
  SUBCASE("the universal braiding itself reduces to descent") {
    AlgPtr kk = split_pair(Q);
    DualityWitness w = algebra_dual_witness(diagonal(kk));
    DescentSetup s = descent_setup(w, trivial_coring(w.x->left));
    GOfT g = g_of_t(w, s.universal, s.can);
    CHECK(g.g.fsharp == Matrix::identity(Q, s.can.coring->carrier->dim()));
    Report r = coring_equivalence_report(s.universal, w, descent_samples(s.c));
    CHECK(r.overall);
    Report d = descent_report(s, descent_samples(s.c));
    CHECK(d.overall == r.overall);
  }
  SUBCASE("coring morphism into the descent coring") {
    AlgPtr kk = split_pair(Q);
    DescentCoring dc = descent_coring(diagonal(kk));
    Report r = coring_equivalence_report(dc.from_trivial, descent_samples(dc.from_trivial.source));
    CHECK(r.overall);
  }
  SUBCASE("descent-coring squares") {
    AlgPtr kk = split_pair(Q), k3 = split_triple(Q);
    // α = id_k, β: k × k → k × k × k with e2 ↦ e2 + e3.
    AlgebraMorphism beta{kk, k3, Matrix::from_dense(Q, {{1, 0}, {0, 1}, {0, 1}})};
    REQUIRE(validate_algebra_morphism(beta).ok);
    DescentCoring d1 = descent_coring(diagonal(kk)), d2 = descent_coring(unit_map(k3));
    CoringMorphism f = descent_square_morphism(d1, d2, beta);
    REQUIRE(validate_coring_morphism(f).ok);
    Report pass = coring_equivalence_report(f, {d1.canonical, regular_right_comodule(d1.coring)});
    CHECK(pass.overall);
    CHECK(find(pass, "g_T is a weak equivalence")->verdict.ok);

    // α = k → k × k, β = id: B ⊗_k B → B ⊗_B B is not a quasi-isomorphism.
    DescentCoring d3 = descent_coring(identity_morphism(kk));
    CoringMorphism f2 = descent_square_morphism(d1, d3, identity_morphism(kk));
    REQUIRE(validate_coring_morphism(f2).ok);
    Report fail = coring_equivalence_report(f2, {d1.canonical});
    CHECK_FALSE(fail.overall);
    CHECK_FALSE(find(fail, "g_T is a weak equivalence")->verdict.ok);
  }
}
