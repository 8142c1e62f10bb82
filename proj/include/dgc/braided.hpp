#pragma once

// Braided bimodules between corings and the functors they induce on comodules.

#include "dgc/corings.hpp"

namespace dgc {

struct BraidedBimodule {
  std::string name;
  CoringPtr source;  // (A, C)
  CoringPtr target;  // (B, D)
  ModPtr x;          // A-B bimodule
  TensorPtr cx;      // C ⊗_A X
  TensorPtr xd;      // X ⊗_B D
  Matrix t;          // xd x cx
};

BraidedBimodule make_braided(std::string name, CoringPtr source, CoringPtr target, ModPtr x, Matrix t);
// T given on the plain tensor C ⊗ X (column i*dim X + j) into the plain X ⊗ D.
BraidedBimodule make_braided_plain(std::string name, CoringPtr source, CoringPtr target, ModPtr x,
                                   const Matrix& t_plain);

Verdict validate_braided(const BraidedBimodule& b);
// T: C ⊗_A X → X ⊗_B D as an operator on two factors.
LocalOp op_braiding(const BraidedBimodule& b);

// Carrier A, T(c ⊗ a) = 1 ⊗ ca.
BraidedBimodule identity_braided(const CoringPtr& c);
// Carrier ₐB_B, T(c ⊗ b) = 1 ⊗ f♯(c) b.
BraidedBimodule braided_from_coring_morphism(const CoringMorphism& f);
// (A, A) → (B, B) on any A-B bimodule, T(a ⊗ x) = ax ⊗ 1.
BraidedBimodule trivial_braided(const ModPtr& x);
// (A, C) → (A, A) along the counit.
BraidedBimodule forgetful_braided(const CoringPtr& c);

BraidedBimodule compose_braided(const BraidedBimodule& b1, const BraidedBimodule& b2);

// T_*: M ↦ M ⊗_A X with coaction (1 ⊗ T)(δ ⊗ 1).
Comodule induce_comodule(const BraidedBimodule& b, const Comodule& m);

// Strict duality data for an A-B bimodule X with dual Y (a B-A bimodule).
struct DualityWitness {
  ModPtr x;
  ModPtr y;
  TensorPtr xy;  // X ⊗_B Y
  TensorPtr yx;  // Y ⊗_A X
  SVec z;        // u(1) in xy coordinates
  Matrix u;      // xy x A
  Matrix e;      // B x yx
};

// Left D-comodule structure on Y ⊗_A C.
LeftComodule dual_tensor_left_comodule(const BraidedBimodule& b, const DualityWitness& w);
// Y ⊗_A C as a right C-comodule through 1 ⊗ Δ.
Comodule dual_tensor_right_comodule(const BraidedBimodule& b, const DualityWitness& w);

struct UpperStar {
  Comodule comodule;
  Cotensor cotensor;
};
// T^*(N) = N □_D (Y ⊗_A C); refuses when the source coring is known not to be flat.
UpperStar t_upper_star(const BraidedBimodule& b, const DualityWitness& w, const Comodule& n,
                       Flatness source_flatness);

}  // namespace dgc
