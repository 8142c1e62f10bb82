#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include <random>

using namespace dgc;
using namespace testsupport;

TEST_CASE("dual numbers validate, and so does k[t]/(t²-1)") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  CHECK(validate_algebra(*b).ok);
  CHECK(validate_module(*regular_bimodule(b)).ok);

  auto alt = std::make_shared<Algebra>(*b);
  alt->mult.add_to(0, 3, Scalar(1));  // t·t = 1
  CHECK(validate_algebra(*alt).ok);
}

TEST_CASE("perturbing a Leibniz-relevant constant of a dg algebra is detected") {
  AlgPtr e = acyclic_augmented();
  REQUIRE(validate_algebra(*e).ok);
  auto bad = std::make_shared<Algebra>(*e);
  bad->mult.add_to(2, 2 * 3 + 2, Scalar(1));  // b·b = b
  auto v = validate_algebra(*bad);
  CHECK_FALSE(v.ok);
  CHECK(v.detail.find("Leibniz") != std::string::npos);

  auto bad_d = std::make_shared<Algebra>(*e);
  bad_d->carrier.d.add_to(2, 0, Scalar(1));  // d(1) = b
  CHECK_FALSE(validate_algebra(*bad_d).ok);
}

TEST_CASE("module axioms: a broken right action is reported") {
  AlgPtr b = dual_numbers();
  ModPtr m = regular_right(b);
  CHECK(validate_module(*m).ok);
  auto bad = std::make_shared<Module>(*m);
  bad->ract.add_to(0, 1 * 2 + 1, Scalar(1));  // t·t = 1 inside the module only
  CHECK_FALSE(validate_module(*bad).ok);
}

TEST_CASE("tensor over A: unit law and hand-computed dimensions") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  auto t = tensor_over_A(regular_bimodule(b), regular_bimodule(b));
  CHECK(t->dim() == 2);
  CHECK(validate_module(*t->module).ok);
  // Canonical iso B⊗_B B → B is the multiplication.
  Matrix mu = tensor_map(t, as_tensor(regular_bimodule(b)), {{0, op_mult(b)}});
  CHECK(is_invertible(mu));

  AlgPtr kk = split_pair(Q);
  auto phi = diagonal(kk);
  REQUIRE(validate_algebra_morphism(phi).ok);
  ModPtr kk_right = restrict_left(regular_bimodule(kk), phi);  // k-(k×k)
  ModPtr kk_left = restrict_right(regular_bimodule(kk), phi);  // (k×k)-k
  auto big = make_tensor({kk_left, kk_right});
  CHECK(big->dim() == 4);
  CHECK(validate_module(*big->module).ok);

  ModPtr k = residue_right(b);
  auto kb = tensor_over_A(k, regular_bimodule(b));
  CHECK(kb->dim() == 1);
}

TEST_CASE("mapping modules: free, ground and residue cases") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  auto free = map_module(regular_right(b), regular_right(b));
  CHECK(free.module->dim() == 2);

  ModPtr k2 = ground_space(Q, {0, 0}, "v");
  auto mat = map_module(k2, k2);
  CHECK(mat.module->dim() == 4);
  CHECK(mat.module->carrier.in_degree(0).size() == 4);

  auto res = map_module(regular_right(b), residue_right(b));
  CHECK(res.module->dim() == 1);
  CHECK(res.module->carrier.deg[0] == 0);
}

TEST_CASE("Map_B(X, N) is a subcomplex of the hom complex on dg inputs") {
  Field Q;
  AlgPtr e = acyclic_augmented(Q);
  ModPtr reg = regular_bimodule(e);
  auto mm = map_module(reg, reg);
  CHECK(mm.module->dim() == 3);
  CHECK(validate_complex(mm.module->carrier).ok);
  CHECK(validate_module(*mm.module).ok);
  // Evaluation Map ⊗_E E → E is a chain map and an isomorphism.
  auto src = make_tensor({mm.module, reg});
  Matrix ev = evaluation(mm, src);
  CHECK(check_chain_map({src->module->carrier, reg->carrier, 0, ev}).ok);
  CHECK(is_invertible(ev));
}

TEST_CASE("tensor over A is associative up to dimension on fixtures") {
  Field Q;
  AlgPtr b = dual_numbers(Q), e = acyclic_augmented(Q);
  ModPtr bb = regular_bimodule(b), ee = regular_bimodule(e);
  ModPtr k = residue_right(b);
  for (auto [m, x, y] : {std::tuple{k, bb, bb}, std::tuple{bb, bb, bb}, std::tuple{ee, ee, ee}}) {
    auto left = make_tensor({make_tensor({m, x})->module, y});
    auto right = make_tensor({m, make_tensor({x, y})->module});
    auto flat = make_tensor({m, x, y});
    CHECK(left->dim() == right->dim());
    CHECK(left->dim() == flat->dim());
    for (int n = -2; n <= 3; ++n) {
      CHECK(left->module->carrier.in_degree(n).size() == flat->module->carrier.in_degree(n).size());
    }
  }
}

TEST_CASE("hom-tensor adjunction: degree-0 cycle counts agree") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  ModPtr k2 = ground_space(Q, {0, 0}, "n");
  ModPtr x = make_module("X", b->carrier, b, b->mult, nullptr, Matrix());  // B-k bimodule
  for (ModPtr m : {residue_right(b), regular_right(b)}) {
    auto mx = make_tensor({m, x});
    auto lhs = map_module(mx->module, k2);
    auto inner = map_module(x, k2);
    auto rhs = map_module(m, inner.module);
    CHECK(cycles_in_degree(lhs.module->carrier, 0) == cycles_in_degree(rhs.module->carrier, 0));
  }
}

TEST_CASE("scalars along a morphism") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  ModPtr m = regular_right(b);
  ModPtr same = scalars_along(identity_morphism(b), m, ScalarsDirection::Restrict);
  CHECK(same->ract == m->ract);

  AlgPtr kk = split_pair(Q);
  auto phi = diagonal(kk);
  ModPtr k = regular_right(phi.source);
  ModPtr ext = scalars_along(phi, k, ScalarsDirection::Extend);
  CHECK(ext->dim() == 2);
  CHECK(same_algebra(*ext->right, *kk));
  CHECK(validate_module(*ext).ok);

  ModPtr res = scalars_along(phi, regular_right(kk), ScalarsDirection::Restrict);
  CHECK(res->dim() == 2);
  CHECK(is_ground(*res->right));
}

TEST_CASE("pure weak equivalences") {
  Field Q;
  AlgPtr e = acyclic_augmented(Q);
  ModPtr a = regular_left(e);
  ModuleMap id{a, a, Matrix::identity(Q, 3)};
  CHECK(check_module_map(id).ok);
  auto v = is_pure_weak_equivalence(id, {regular_right(e)});
  CHECK(v.pure());

  // Augmentation E → k is a quasi-isomorphism of left E-modules.
  ModPtr k = left_module("k", e, ground_complex(Q), action_table(Q, 1, 3, {{0, 0, 1}}));
  REQUIRE(validate_module(*k).ok);
  ModuleMap aug{a, k, action_table(Q, 1, 3, {{0, 0, 1}})};
  CHECK(check_module_map(aug).ok);
  auto w = is_pure_weak_equivalence(aug, {regular_right(e)});
  CHECK(w.weak_equivalence);
  REQUIRE(w.witness_results.size() == 1);
  CHECK(w.witness_results[0]);

  ModuleMap zero{k, k, Matrix::zero(Q, 1, 1)};
  CHECK_FALSE(is_pure_weak_equivalence(zero, {}).pure());
}

TEST_CASE("cellular filtrations") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  ModPtr a = regular_right(b);
  auto one = verify_cellular_filtration(a, Side::Right, {{SVec{{0, Scalar(1)}}}});
  CHECK(one.ok);
  CHECK(one.flat_cofibrant);

  // A ⊕ e·A with |e| = 1 and de = 1.
  Complex c(Q, {0, 0, 1, 1}, {"1", "t", "e", "et"});
  c.d = Matrix::from_triples(Q, 4, 4, {{0, 2, Scalar(1)}, {1, 3, Scalar(1)}});
  Matrix ract = action_table(Q, 4, 8, {{0, 0, 1}, {1, 1, 1}, {1, 2, 1}, {2, 4, 1}, {3, 5, 1}, {3, 6, 1}});
  ModPtr n = right_module("N", c, b, ract);
  REQUIRE(validate_module(*n).ok);
  auto two = verify_cellular_filtration(n, Side::Right, {{SVec{{0, Scalar(1)}}}, {SVec{{2, Scalar(1)}}}});
  CHECK(two.ok);

  auto flat = verify_cellular_filtration(n, Side::Right, {{SVec{{0, Scalar(1)}}, SVec{{2, Scalar(1)}}}});
  CHECK_FALSE(flat.ok);

  auto partial = verify_cellular_filtration(n, Side::Right, {{SVec{{0, Scalar(1)}}}});
  CHECK_FALSE(partial.ok);

  auto not_free = verify_cellular_filtration(residue_right(b), Side::Right, {{SVec{{0, Scalar(1)}}}});
  CHECK_FALSE(not_free.ok);
}

TEST_CASE("retracts onto A") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  auto r = find_retract(regular_right(b), Side::Right);
  REQUIRE(r);
  CHECK(r->r.apply(r->x0) == b->unit);
  CHECK_FALSE(find_retract(residue_right(b), Side::Right).has_value());
}

TEST_CASE("quotient and sub modules") {
  Field Q;
  AlgPtr b = dual_numbers(Q);
  ModPtr reg = regular_bimodule(b);
  Matrix tspan = Matrix::from_triples(Q, 2, 1, {{1, 0, Scalar(1)}});
  ModPtr sub = submodule(reg, tspan, "tB");
  CHECK(sub->dim() == 1);
  CHECK(validate_module(*sub).ok);
  auto q = quotient_module(reg, tspan, "B/t");
  CHECK(q.module->dim() == 1);
  CHECK(validate_module(*q.module).ok);
  Matrix one = Matrix::from_triples(Q, 2, 1, {{0, 0, Scalar(1)}});
  CHECK_THROWS(submodule(reg, one, "bad"));
}

TEST_CASE("property: random right modules over the dual numbers validate and tensor sensibly") {
  std::mt19937 rng(9);
  Field F = Field::prime(5);
  AlgPtr b = dual_numbers(F);
  for (int trial = 0; trial < 10; ++trial) {
    // Free module on r generators of random degrees, with t acting as the shift.
    size_t r = 1 + rng() % 3;
    std::vector<int> deg;
    std::vector<std::string> names;
    std::vector<Triple> act;
    for (size_t g = 0; g < r; ++g) {
      int d = int(rng() % 3);
      deg.insert(deg.end(), {d, d});
      names.push_back("g" + std::to_string(g));
      names.push_back("g" + std::to_string(g) + "t");
      uint32_t base = uint32_t(2 * g);
      act.push_back({base, base * 2, Scalar(1)});
      act.push_back({base + 1, base * 2 + 1, Scalar(1)});
      act.push_back({base + 1, (base + 1) * 2, Scalar(1)});
    }
    ModPtr m = right_module("M", Complex(F, deg, names), b, Matrix::from_triples(F, 2 * r, 4 * r, act));
    REQUIRE(validate_module(*m).ok);
    CHECK(tensor_over_A(m, regular_bimodule(b))->dim() == 2 * r);
    CHECK(tensor_over_A(m, make_module("k", ground_complex(F), b, action_table(F, 1, 2, {{0, 0, 1}}), nullptr,
                                       Matrix()))
              ->dim() == r);
    CHECK(map_module(m, regular_right(b)).module->dim() == 2 * r);
  }
}
