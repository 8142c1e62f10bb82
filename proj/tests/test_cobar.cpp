#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coring_support.hpp"
#include "dgc/cobar.hpp"

using namespace dgc;
using namespace testsupport;

namespace {

uint32_t idx(const Complex& c, const std::string& name) {
  auto i = c.index_of(name);
  REQUIRE_MESSAGE(i.has_value(), name);
  return *i;
}

}  // namespace

TEST_CASE("cobar of the primitive coalgebra is a tensor algebra on one degree-1 class") {
  Field Q;
  CoringPtr c = primitive_coalgebra(Q);
  CobarComplex om = cobar(trivial_right(c), c, trivial_left(c), {0, 8});
  const Complex& cx = om.complex();
  CHECK(cx.d.is_zero());
  for (int n = 0; n <= 8; ++n) CHECK(cx.in_degree(n).size() == 1);
  Homology h = homology(cx);
  for (int n = 0; n <= 6; ++n) CHECK(h.dim(n) == 1);
  CHECK(cx.index_of("1 ⊗ s⁻¹x|s⁻¹x ⊗ 1").has_value());
}

TEST_CASE("cobar over a trivial coring is M ⊗_A N") {
  Field Q;
  CoringPtr t = trivial_coring(ground_algebra(Q));
  ModPtr v = ground_space(Q, {0, 1}, "v");
  Comodule m = cofree_comodule(v, t);
  CobarComplex om = cobar(m, t, regular_left_comodule(t), {0, 4});
  CHECK(om.blocks.size() == 1);
  CHECK(om.complex().dim() == 2);
  CobarComodule cc = cobar_comodule(m, {0, 4});
  CHECK(is_invertible(cc.rho_tilde));
}

TEST_CASE("d² = 0 on coalgebras with differentials") {
  Field Q;
  for (CoringPtr c : {two_generator_coalgebra(Q), three_dim_coalgebra(Q), acyclic_extension(Q)}) {
    std::vector<Comodule> ms{trivial_right(c), regular_right_comodule(c), cofree_comodule(ground_space(Q, {0, 1}, "v"), c)};
    std::vector<LeftComodule> ns{trivial_left(c), regular_left_comodule(c)};
    for (auto& m : ms)
      for (auto& n : ns) {
        CobarComplex om = cobar(m, c, n, {0, 7});
        const Matrix& d = om.module->carrier.d;
        CHECK((d * d).is_zero());
        CHECK(validate_module(*om.module).ok);
      }
  }
}

TEST_CASE("d_Ω splits into a word-preserving and a word-raising part") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  CobarComplex om = cobar(regular_right_comodule(c), c, regular_left_comodule(c), {0, 7});
  CHECK(om.internal + om.raising == om.module->carrier.d);
  CHECK_FALSE(om.raising.is_zero());
  for (auto& t : om.internal.triples()) CHECK(om.word_of(t.row) == om.word_of(t.col));
  for (auto& t : om.raising.triples()) CHECK(om.word_of(t.row) == om.word_of(t.col) + 1);
}

TEST_CASE("preconditions of the cobar construction") {
  Field Q;
  auto dc = descent_coring(diagonal(split_pair(Q)));
  try {
    cobar_comodule(dc.canonical, {0, 4});
    FAIL("expected an error");
  } catch (const CobarError& e) {
    CHECK(e.kind == CobarError::Kind::MissingCoaugmentation);
  }
  CoringPtr low = ground_coalgebra(Q, "L", {{0, 1}, {"1", "a"}, {}, {{0, 0, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 1}}});
  REQUIRE(validate_coring(*low).ok);
  try {
    cobar_comodule(trivial_right(low), {0, 4});
    FAIL("expected an error");
  } catch (const CobarError& e) {
    CHECK(e.kind == CobarError::Kind::ConnectivityViolation);
  }
}

TEST_CASE("hand formulas for Ω(k; C4; C4) in word length at most 2") {
  Field Q;
  CoringPtr c = primitive_coalgebra(Q);
  Comodule k = trivial_right(c);
  CobarComodule cc = cobar_comodule(k, {0, 4});
  const Complex& cx = cc.comodule.module->carrier;
  REQUIRE(validate_comodule(cc.comodule).ok);
  uint32_t e0 = idx(cx, "1 ⊗ 1"), e1 = idx(cx, "1 ⊗ x"), e2 = idx(cx, "1 ⊗ s⁻¹x ⊗ 1"),
           e3 = idx(cx, "1 ⊗ s⁻¹x ⊗ x"), e4 = idx(cx, "1 ⊗ s⁻¹x|s⁻¹x ⊗ 1");
  CHECK(cc.rho_tilde.col(0) == SVec{{e0, Scalar(1)}});
  CHECK(cx.d.col(e0).empty());
  CHECK(cx.d.col(e1) == SVec{{e2, Scalar(1)}});
  CHECK(cx.d.col(e3) == SVec{{e4, Scalar(-1)}});
  // δ(1 ⊗ s⁻¹x ⊗ x) = (1 ⊗ s⁻¹x ⊗ x) ⊗ 1 + (1 ⊗ s⁻¹x ⊗ 1) ⊗ x.
  TElem img = cc.comodule.mc->lift_vec(cc.comodule.delta.col(e3));
  std::map<Tuple, Scalar> want{{Tuple{e3, 0}, Scalar(1)}, {Tuple{e2, 1}, Scalar(1)}};
  CHECK(img.terms == want);
  Homology h = homology(cx);
  CHECK(h.dim(0) == 1);
  for (int n = 1; n <= 3; ++n) CHECK(h.dim(n) == 0);
}

TEST_CASE("the cobar resolution factors the coaction") {
  Field Q;
  for (CoringPtr c : {primitive_coalgebra(Q), two_generator_coalgebra(Q)}) {
    for (const Comodule& m : {trivial_right(c), regular_right_comodule(c),
                              cofree_comodule(ground_space(Q, {0, 1}, "v"), c)}) {
      CobarComodule cc = cobar_comodule(m, {0, 8});
      CHECK(validate_comodule(cc.comodule).ok);
      CHECK(cc.q * cc.rho_tilde == m.delta);
      ResolutionVerdict v = check_cobar_resolution(cc, m);
      CHECK(v.factorization.ok);
      CHECK(v.comodule_maps.ok);
      CHECK(v.d_squared.ok);
      CHECK(v.weak.ok);
      // q is onto M ⊗_A D in every window degree.
      const Complex& md = cc.cofree.module->carrier;
      std::vector<uint32_t> inside;
      for (uint32_t i = 0; i < md.dim(); ++i)
        if (md.deg[i] <= 8) inside.push_back(i);
      CHECK(rank(cc.q.select_rows(inside)) == inside.size());
    }
  }
}

TEST_CASE("a perturbed cobar differential is caught") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  Comodule m = trivial_right(c);
  CobarComodule cc = cobar_comodule(m, {0, 6});
  REQUIRE(check_cobar_resolution(cc, m).ok());
  const Complex& cx = cc.comodule.module->carrier;
  auto bad = std::make_shared<Module>(*cc.comodule.module);
  // Kill d on the degree-1 generator 1 ⊗ x: its image s⁻¹x-class survives.
  uint32_t j = idx(cx, "1 ⊗ x");
  bad->carrier.d.set_col(j, {});
  cc.comodule.module = bad;
  CHECK_FALSE(check_cobar_resolution(cc, m).ok());
}

TEST_CASE("copurity spot checks") {
  Field Q;
  CoringPtr c4 = primitive_coalgebra(Q);
  CoringPtr d = acyclic_extension(Q);
  CoringMorphism f = leading_inclusion(c4, d);
  REQUIRE(validate_coring_morphism(f).ok);
  Cells c4_cells{{SVec{{0, Scalar(1)}}, SVec{{1, Scalar(1)}}}};
  Cells d_cells{{SVec{{0, Scalar(1)}}, SVec{{1, Scalar(1)}}, SVec{{2, Scalar(1)}}}, {SVec{{3, Scalar(1)}}}};
  CopureVerdict v = copure_spot_check(f, {regular_right_comodule(d), trivial_right(d)}, {0, 6}, c4_cells, d_cells);
  CHECK(v.source_flat.verdict == Flatness::Certified);
  CHECK(v.target_flat.verdict == Flatness::Certified);
  CHECK(v.ok());

  CHECK(copure_spot_check(identity_coring_morphism(c4), {regular_right_comodule(c4)}, {0, 6}).ok());

  CoringPtr e = extra_primitive(Q);
  CoringMorphism g = leading_inclusion(c4, e);
  REQUIRE(validate_coring_morphism(g).ok);
  CopureVerdict w = copure_spot_check(g, {regular_right_comodule(e)}, {0, 6});
  CHECK_FALSE(w.ok());
}
