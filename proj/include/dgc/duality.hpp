#pragma once

// Duality witnesses, the canonical coring of a dualizable bimodule, the
// universal braiding and the coring morphism g_T.

#include "dgc/braided.hpp"

namespace dgc {

Verdict validate_duality_witness(const DualityWitness& w);
// Inserts z ∈ X ⊗_B Y as two new factors.
LocalOp op_insert_z(const TensorPtr& xy, const SVec& z);

struct DualSearch {
  std::optional<DualityWitness> witness;
  std::string refutation;  // set when the triangle system is inconsistent
  std::optional<MapModule> map;
};
// z given on the plain tensor X ⊗ Y (index i*dim Y + j) and e on the plain Y ⊗ X.
DualityWitness make_duality_witness(const ModPtr& x, const ModPtr& y, const SVec& z_plain, const Matrix& e_plain);

// Y = Map_B(X, B) with e the evaluation; u solved from the triangle identities.
DualSearch find_dual_witness(const ModPtr& x);

// X = ₐB_B, Y = ᵦB_A, e the multiplication and u(1) = 1 ⊗ 1.
DualityWitness algebra_dual_witness(const AlgebraMorphism& phi);

struct EllMap {
  TensorPtr source;  // N ⊗_B Y
  MapModule target;  // Map_B(X, N)
  Matrix m;
  bool iso = false;
  bool weak_equivalence = false;
};
// ℓ_N(n ⊗ y)(x) = n · e(y ⊗ x).
EllMap ell_map(const DualityWitness& w, const ModPtr& n);

struct CanonicalCoring {
  CoringPtr coring;  // Y ⊗_A C ⊗_A X over B
  TensorPtr ycx;
};
CanonicalCoring canonical_coring(const DualityWitness& w, const CoringPtr& c);

// (A, C) → (B, X_*(C)) with T(c ⊗ x) = z ⊗ c ⊗ x.
BraidedBimodule universal_braiding(const DualityWitness& w, const CoringPtr& c, const CanonicalCoring& can);

struct GOfT {
  CoringMorphism g;  // X_*(C) → D over id_B
  Verdict morphism;
  Verdict factorization;
};
GOfT g_of_t(const DualityWitness& w, const BraidedBimodule& b, const CanonicalCoring& can);

// Checks the factorization b = (change of corings along g) ∘ universal braiding.
Verdict check_factorization(const BraidedBimodule& b, const BraidedBimodule& universal, const CoringMorphism& g);

struct DualBraidedVerdict {
  Verdict witness;
  Verdict eta;
  Verdict epsilon;
  // Per sample: (T∨)_* N and T^* N have the same graded dimensions.
  std::vector<bool> realizes;
  bool ok() const { return witness.ok && eta.ok && epsilon.ok; }
};
// b: (A,C) → (B,D) on X, bv: (B,D) → (A,C) on Y. Samples are right D-comodules.
DualBraidedVerdict check_dual_braided(const BraidedBimodule& b, const BraidedBimodule& bv, const DualityWitness& w,
                                      const std::vector<Comodule>& samples = {});

// (B, D) → (A, A) on a B-A bimodule Y, T(d ⊗ y) = ε(d) y ⊗ 1.
BraidedBimodule counit_braided(const CoringPtr& d, const ModPtr& y);

}  // namespace dgc
