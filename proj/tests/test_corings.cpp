#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coring_support.hpp"

using namespace dgc;
using namespace testsupport;

TEST_CASE("trivial corings validate") {
  Field Q;
  CoringPtr k = trivial_coring(ground_algebra(Q));
  CHECK(k->carrier->dim() == 1);
  CHECK(validate_coring(*k).ok);
  CoringPtr b = trivial_coring(dual_numbers(Q));
  CHECK(validate_coring(*b).ok);
  CHECK(validate_coring(*trivial_coring(acyclic_augmented(Q))).ok);
}

TEST_CASE("comodules over the trivial coring: the coaction is forced") {
  Field Q;
  AlgPtr a = dual_numbers(Q);
  CoringPtr t = trivial_coring(a);
  for (ModPtr m : {regular_right(a), residue_right(a)}) {
    TensorPtr mc = make_tensor({m, t->carrier});
    // The counit law says ρ(1⊗ε)δ = id; ρ(1⊗ε) is invertible, so δ is unique.
    Matrix r = tensor_map(mc, as_tensor(m), {{1, op_matrix(t->counit, {carrier_of(t->carrier)},
                                                           {carrier_of(a)})},
                                             {0, op_right_action(m)}});
    auto inv = inverse(r);
    REQUIRE(inv);
    Comodule c = make_comodule("M", t, m, *inv);
    CHECK(validate_comodule(c).ok);
    Comodule cf = cofree_comodule(m, t);
    CHECK(cf.module->dim() == m->dim());
  }
}

TEST_CASE("coalgebra fixtures validate and structural perturbations are caught") {
  Field Q;
  for (CoringPtr c : {primitive_coalgebra(Q), two_generator_coalgebra(Q)}) {
    REQUIRE(validate_coring(*c).ok);
    for (size_t j = 0; j < c->delta.cols(); ++j)
      for (auto& [i, v] : c->delta.col(j)) {
        auto bad = std::make_shared<Coring>(*c);
        bad->delta.add_to(i, uint32_t(j), Scalar(1));
        CHECK_FALSE(validate_coring(*bad).ok);
      }
  }
}

TEST_CASE("a non-coassociative comultiplication is reported as such") {
  Field Q;
  // Divided powers: Δx = x⊗1 + 1⊗x + y⊗y is coassociative.
  CoringPtr c = ground_coalgebra(Q, "N", {{0, 2, 4}, {"1", "y", "x"}, {},
                                          {{0, 0, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 1},
                                           {2, 2, 0, 1}, {2, 0, 2, 1}, {2, 1, 1, 1}}});
  CHECK(validate_coring(*c).ok);
  // With the same x, Δw = w⊗1 + 1⊗w + y⊗x is counital but not coassociative.
  CoringPtr d = ground_coalgebra(Q, "N2", {{0, 2, 4, 6}, {"1", "y", "x", "w"}, {},
                                           {{0, 0, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 1},
                                            {2, 2, 0, 1}, {2, 0, 2, 1}, {2, 1, 1, 1},
                                            {3, 3, 0, 1}, {3, 0, 3, 1}, {3, 1, 2, 1}}});
  auto v = validate_coring(*d);
  CHECK_FALSE(v.ok);
  CHECK(v.detail.find("coassociativity") != std::string::npos);
}

TEST_CASE("descent coring of k → k×k") {
  Field Q;
  AlgPtr kk = split_pair(Q);
  auto dc = descent_coring(diagonal(kk));
  CHECK(dc.coring->carrier->dim() == 4);
  CHECK(validate_coring(*dc.coring).ok);
  CHECK(validate_comodule(dc.canonical).ok);
  CHECK(validate_coring_morphism(dc.from_trivial).ok);
  CHECK_FALSE(dc.coring->coaug.has_value());

  auto id = descent_coring(identity_morphism(kk));
  CHECK(id.coring->carrier->dim() == 2);
  CHECK(validate_coring(*id.coring).ok);

  AlgPtr b = dual_numbers(Q);
  auto idb = descent_coring(identity_morphism(b));
  CHECK(idb.coring->carrier->dim() == 2);
  CHECK(validate_coring(*idb.coring).ok);
}

TEST_CASE("perturbing the descent coring is detected") {
  Field Q;
  auto dc = descent_coring(diagonal(split_pair(Q)));
  const Coring& c = *dc.coring;
  for (size_t j = 0; j < c.delta.cols(); ++j)
    for (auto& [i, v] : c.delta.col(j)) {
      auto bad = std::make_shared<Coring>(c);
      bad->delta.add_to(i, uint32_t(j), Scalar(1));
      CHECK_FALSE(validate_coring(*bad).ok);
    }
  for (size_t j = 0; j < c.counit.cols(); ++j)
    for (auto& [i, v] : c.counit.col(j)) {
      auto bad = std::make_shared<Coring>(c);
      bad->counit.add_to(i, uint32_t(j), Scalar(1));
      CHECK_FALSE(validate_coring(*bad).ok);
    }
}

TEST_CASE("cotensor with the coring itself recovers the comodule") {
  Field Q;
  CoringPtr c5 = two_generator_coalgebra(Q);
  auto dc = descent_coring(diagonal(split_pair(Q)));
  std::vector<Comodule> ms{trivial_right(primitive_coalgebra(Q)), trivial_right(c5), regular_right_comodule(c5),
                           dc.canonical, cofree_comodule(ground_space(Q, {0, 1}, "v"), c5)};
  for (auto& m : ms) {
    REQUIRE(validate_comodule(m).ok);
    Cotensor t = cotensor(m, regular_left_comodule(m.coring));
    Matrix e = cotensor_counit(m, t);
    CHECK(is_invertible(e));
    CHECK(check_chain_map({t.module->carrier, m.module->carrier, 0, e}).ok);
  }
  Cotensor bd = cotensor(dc.canonical, regular_left_comodule(dc.coring));
  CHECK(bd.module->dim() == 2);
}

TEST_CASE("cotensor over the trivial coring is the tensor product") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  CoringPtr t = trivial_coring(b);
  Comodule m = cofree_comodule(residue_right(b), t);
  Comodule reg = regular_right_comodule(t);
  LeftComodule n = regular_left_comodule(t);
  CHECK(cotensor(m, n).module->dim() == make_tensor({m.module, n.module})->dim());
  CHECK(cotensor(reg, n).module->dim() == 2);
}

TEST_CASE("cofree comodules") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  Comodule a = cofree_comodule(ground_module("k", ground_complex(Q)), c);
  CHECK(a.module->dim() == c->carrier->dim());
  CHECK(validate_comodule(a).ok);
  Comodule m = cofree_comodule(ground_space(Q, {0, 1, 1}, "m"), c);
  CHECK(validate_comodule(m).ok);
  // 1 ⊗ ε is surjective.
  TensorPtr mc = make_tensor({ground_space(Q, {0, 1, 1}, "m"), c->carrier});
  Matrix counit = tensor_map(mc, as_tensor(ground_space(Q, {0, 1, 1}, "m")),
                             {{1, op_matrix(c->counit, {carrier_of(c->carrier)}, {carrier_of(c->algebra)})},
                              {0, op_right_action(ground_space(Q, {0, 1, 1}, "m"))}});
  CHECK(rank(counit) == 3);
}

TEST_CASE("pushforward along the counit is the forgetful functor") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  CoringPtr t = trivial_coring(c->algebra);
  CoringMorphism eps{c, t, identity_morphism(c->algebra), c->counit};
  REQUIRE(validate_coring_morphism(eps).ok);
  for (const Comodule& m : {regular_right_comodule(c), trivial_right(c)}) {
    Comodule u = pushforward(eps, m);
    CHECK(validate_comodule(u).ok);
    // Unit coaction m ↦ m ⊗ 1.
    Matrix unit = tensor_map(as_tensor(m.module), u.mc, {{1, op_unit(c->algebra)}});
    CHECK(u.delta == unit);
  }
  Comodule m = regular_right_comodule(c);
  Comodule same = pushforward(identity_coring_morphism(c), m);
  CHECK(same.delta == m.delta);
}

TEST_CASE("pullback along the identity") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  for (const Comodule& n : {regular_right_comodule(c), trivial_right(c)}) {
    Pullback p = pullback(identity_coring_morphism(c), n);
    CHECK(p.formula_level);
    CHECK(validate_comodule(p.comodule).ok);
    Matrix e = pullback_counit(identity_coring_morphism(c), p, n);
    CHECK(is_invertible(e));
    Comodule back = pushforward(identity_coring_morphism(c), p.comodule);
    CHECK(back.module->dim() == n.module->dim());
  }
}

TEST_CASE("mapping complexes of comodules") {
  Field Q;
  CoringPtr c = two_generator_coalgebra(Q);
  Comodule m = regular_right_comodule(c);
  MapComodule mc = map_comodule(m, m);
  CHECK(validate_complex(mc.complex).ok);
  // The identity is a degree-0 cycle.
  SVec id;
  for (uint32_t i = 0; i < 5; ++i) id.emplace_back(i * 5 + i, Scalar(1));
  SVec in_map = map_coords(mc.map, id);
  auto coords = echelon_coords(mc.basis, Matrix::from_columns(Q, mc.map.module->dim(), {in_map}));
  CHECK(coords.has_value());

  AlgPtr b = dual_numbers(Q);
  CoringPtr t = trivial_coring(b);
  Comodule r = cofree_comodule(regular_right(b), t), k = cofree_comodule(residue_right(b), t);
  CHECK(map_comodule(r, k).complex.dim() == map_module(r.module, k.module).module->dim());
  CHECK(map_comodule(r, r).complex.dim() == 2);
}

TEST_CASE("flatness verdicts") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  CoringPtr t = trivial_coring(b);
  CHECK(is_flat_coring(*t, std::vector<std::vector<SVec>>{{SVec{{0, Scalar(1)}}}}, {}).verdict ==
        Flatness::Certified);

  auto dc = descent_coring(diagonal(split_pair(Q)));
  // Left free on 1⊗e1 and 1⊗e2.
  std::vector<std::vector<SVec>> cells{{SVec{{0, Scalar(1)}, {2, Scalar(1)}}, SVec{{1, Scalar(1)}, {3, Scalar(1)}}}};
  CHECK(is_flat_coring(*dc.coring, cells, {}).verdict == Flatness::Certified);

  // B ⊕ k·z over the dual numbers, z primitive with t acting by zero: not flat.
  Complex cx(Q, {0, 0, 2}, {"1", "t", "z"});
  Matrix lact = action_table(Q, 3, 6, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {1, 3, 1}});
  Matrix ract = action_table(Q, 3, 6, {{0, 0, 1}, {1, 1, 1}, {1, 2, 1}, {2, 4, 1}});
  ModPtr car = make_module("Cz", cx, b, lact, b, ract);
  REQUIRE(validate_module(*car).ok);
  std::vector<Triple> dp{{0, 0, Scalar(1)}, {1, 1, Scalar(1)}, {2 * 3 + 0, 2, Scalar(1)}, {0 * 3 + 2, 2, Scalar(1)}};
  Matrix eps = action_table(Q, 2, 3, {{0, 0, 1}, {1, 1, 1}});
  CoringPtr cz = make_coring_plain("Cz", car, Matrix::from_triples(Q, 9, 3, dp), eps);
  REQUIRE(validate_coring(*cz).ok);
  ModPtr a = regular_right(b);
  ModuleMap times_t{a, a, action_table(Q, 2, 2, {{1, 0, 1}})};
  REQUIRE(check_module_map(times_t).ok);
  auto v = is_flat_coring(*cz, std::nullopt, {times_t});
  CHECK(v.verdict == Flatness::Refuted);
  CHECK(is_flat_coring(*t, std::nullopt, {times_t}).verdict == Flatness::SpotChecked);
}
