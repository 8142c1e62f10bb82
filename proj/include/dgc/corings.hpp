#pragma once

// Corings over dg algebras, comodules, coring morphisms and cotensor products.

#include "dgc/dgalgebra.hpp"

namespace dgc {

struct Coring {
  std::string name;
  AlgPtr algebra;
  ModPtr carrier;               // A-A bimodule
  TensorPtr cc;                 // C ⊗_A C
  Matrix delta;                 // cc x C
  Matrix counit;                // A x C
  std::optional<Matrix> coaug;  // C x A
};
using CoringPtr = std::shared_ptr<const Coring>;

// Δ given in quotient coordinates of C ⊗_A C.
CoringPtr make_coring(std::string name, ModPtr carrier, Matrix delta, Matrix counit,
                      std::optional<Matrix> coaug = std::nullopt);
// Δ given on the plain tensor C ⊗ C (row i*dim + j) and projected.
CoringPtr make_coring_plain(std::string name, ModPtr carrier, const Matrix& delta_plain, Matrix counit,
                            std::optional<Matrix> coaug = std::nullopt);

// Projects a map into the plain tensor of t's factors (row-major rows) onto t.
Matrix project_plain(const TensorPtr& t, const Matrix& plain);

Verdict validate_coring(const Coring& c);

// Δ: C → C ⊗_A C and ε: C → A as operators on one factor.
LocalOp op_delta(const Coring& c);
LocalOp op_counit(const Coring& c);

// Right comodule: δ: M → M ⊗_A C.
struct Comodule {
  std::string name;
  CoringPtr coring;
  ModPtr module;
  TensorPtr mc;
  Matrix delta;  // mc x M
};
// Left comodule: δ: N → C ⊗_A N.
struct LeftComodule {
  std::string name;
  CoringPtr coring;
  ModPtr module;
  TensorPtr cm;
  Matrix delta;  // cm x N
};

Comodule make_comodule(std::string name, CoringPtr c, ModPtr m, Matrix delta);
Comodule make_comodule_plain(std::string name, CoringPtr c, ModPtr m, const Matrix& delta_plain);
LeftComodule make_left_comodule(std::string name, CoringPtr c, ModPtr m, Matrix delta);
LeftComodule make_left_comodule_plain(std::string name, CoringPtr c, ModPtr m, const Matrix& delta_plain);

Verdict validate_comodule(const Comodule& m);
Verdict validate_left_comodule(const LeftComodule& m);
// δ_N f = (f ⊗ 1) δ_M for a degree-0 map f: M → N of right comodules.
Verdict check_comodule_map(const Comodule& src, const Comodule& tgt, const Matrix& f, const std::string& what);

// C as a right and as a left comodule over itself.
Comodule regular_right_comodule(const CoringPtr& c);
LeftComodule regular_left_comodule(const CoringPtr& c);

// (φ, f♯) with f♯: C → D a map of A-bimodules along φ.
struct CoringMorphism {
  CoringPtr source;
  CoringPtr target;
  AlgebraMorphism phi;
  Matrix fsharp;  // D x C
};
Verdict validate_coring_morphism(const CoringMorphism& f);
CoringMorphism identity_coring_morphism(const CoringPtr& c);
// The adjoint f: B ⊗_A C ⊗_A B → D, b ⊗ c ⊗ b' ↦ b f♯(c) b'.
Matrix coring_morphism_adjoint(const CoringMorphism& f, TensorPtr* src_out = nullptr);
CoringMorphism compose_coring_morphisms(const CoringMorphism& g, const CoringMorphism& f);

CoringPtr trivial_coring(const AlgPtr& a);
// A right A-module as a comodule over the trivial coring t, m ↦ m ⊗ 1.
Comodule trivial_comodule(const CoringPtr& t, const ModPtr& m);

struct DescentCoring {
  CoringPtr coring;         // over B, carrier B ⊗_A B
  TensorPtr tensor;         // the carrier as a tensor product
  Comodule canonical;       // B as a right comodule
  CoringMorphism from_trivial;  // (A, A) → (B, B ⊗_A B)
};
DescentCoring descent_coring(const AlgebraMorphism& phi);
// β ⊗ β: B ⊗_A B → B' ⊗_A' B' for a commuting square β φ = φ' α.
CoringMorphism descent_square_morphism(const DescentCoring& src, const DescentCoring& tgt, const AlgebraMorphism& beta);

struct Cotensor {
  ModPtr module;
  TensorPtr mn;      // M ⊗_A N
  Matrix inclusion;  // mn x module, echelon basis of the kernel
};
Cotensor cotensor(const Comodule& m, const LeftComodule& n);
// When n also carries a right D-coaction the cotensor inherits it.
Comodule cotensor_with_coaction(const Comodule& m, const LeftComodule& n, const Comodule& n_right,
                                Cotensor* out = nullptr);

// M ⊗_A C with coaction 1 ⊗ Δ.
Comodule cofree_comodule(const ModPtr& m, const CoringPtr& c);

// f_*(M, δ) = (M, (1 ⊗ f)δ) for a coring map over the same algebra.
Comodule pushforward(const CoringMorphism& f, const Comodule& m);
// C as a left D-comodule through (f ⊗ 1)Δ.
LeftComodule left_comodule_along(const CoringMorphism& f);
struct Pullback {
  Comodule comodule;  // N □_D C over C
  Cotensor cotensor;
  bool formula_level = true;  // true unless a flatness certificate was supplied
};
Pullback pullback(const CoringMorphism& f, const Comodule& n, bool flat_certified = false);
// N □_D C → N, n ⊗ c ↦ n ε_C(c): the counit f_* f^* N → N.
Matrix pullback_counit(const CoringMorphism& f, const Pullback& p, const Comodule& n);
// M □_C C → M via the counit.
Matrix cotensor_counit(const Comodule& m, const Cotensor& t);

struct MapComodule {
  MapModule map;
  Matrix basis;  // columns in coordinates of map.module
  Complex complex;
};
MapComodule map_comodule(const Comodule& m, const Comodule& n);

enum class Flatness { Certified, SpotChecked, Refuted };
std::string to_string(Flatness f);
struct FlatVerdict {
  Flatness verdict = Flatness::SpotChecked;
  std::string detail;
};
// Spot check: for a map g of right A-modules, 0 → ker g ⊗ C → M ⊗ C → M' ⊗ C is exact.
FlatVerdict is_flat_coring(const Coring& c, const std::optional<std::vector<std::vector<SVec>>>& cells,
                           const std::vector<ModuleMap>& spot_checks);

// Lifts columns of v through the injective map j; throws when impossible.
Matrix lift_through(const Matrix& j, const Matrix& v, const std::string& what);

}  // namespace dgc
