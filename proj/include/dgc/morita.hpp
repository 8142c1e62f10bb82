#pragma once

// Per-instance reports for homotopical Morita equivalence of algebras,
// effective homotopic descent and equivalences of comodule categories.

#include "dgc/cobar.hpp"
#include "dgc/duality.hpp"

namespace dgc {

// How far a verdict reaches: a check on the supplied instances, a spot check
// of a universally quantified condition, a certified sufficient condition, or
// a verdict that holds only under an unverified hypothesis.
enum class Scope { Instance, SpotCheck, Certified, Conditional };
std::string to_string(Scope s);

struct Criterion {
  std::string name;
  std::string anchor;
  Scope scope = Scope::Instance;
  Verdict verdict;
  bool binding = true;  // false for sufficient conditions that are only listed
  std::vector<std::pair<std::string, std::string>> evidence;
};

struct Report {
  std::string kind;  // morita, descent or equivalence
  std::string subject;
  std::vector<Criterion> criteria;
  bool overall = false;
  std::vector<std::string> caveats;
};

std::string render_text(const Report& r);

// ---------------------------------------------------------------------------
// Algebras.

struct UnitMap {
  MapModule map;  // Map_B(X, X)
  Matrix m;       // η_A: A → Map_B(X, X), a ↦ (x ↦ a x)
  Verdict chain_map;
  bool iso = false;
  WeakEquivalence weak;
};
UnitMap morita_unit(const ModPtr& x);

// Map_B(X, g): Map_B(X, N) → Map_B(X, N'), f ↦ g f.
Matrix postcompose(const MapModule& src, const MapModule& tgt, const ModuleMap& g);

struct MoritaCertificates {
  std::optional<Cells> x_right_cells;          // X as a right B-module
  std::vector<ModuleMap> reflection_samples;   // maps of right B-modules
};
Report morita_report(const ModPtr& x, const std::vector<ModPtr>& samples, const MoritaCertificates& certs = {});

// ---------------------------------------------------------------------------
// Descent.

struct DescentSetup {
  DualityWitness w;
  CoringPtr c;
  CanonicalCoring can;
  BraidedBimodule universal;  // (A, C) → (B, X_*(C))
};
DescentSetup descent_setup(const DualityWitness& w, const CoringPtr& c);

// Can_X(M) = M ⊗_A X over X_*(C) and Prim_X(N) = N □ (Y ⊗_A C) over C.
Comodule canonical_functor(const DescentSetup& s, const Comodule& m);
UpperStar primitives_functor(const DescentSetup& s, const Comodule& n);

struct AdjunctionComponent {
  Comodule source;
  Comodule target;
  Matrix m;
  Verdict comodule_map;
  bool iso = false;
  WeakEquivalence weak;
};
// m ↦ m_0 ⊗ z ⊗ m_1 into Prim_X Can_X(M).
AdjunctionComponent descent_unit(const DescentSetup& s, const Comodule& m);
// (n ⊗ y ⊗ c) ⊗ x ↦ n · e(y ⊗ ε(c) x) out of Can_X Prim_X(N).
AdjunctionComponent descent_counit(const DescentSetup& s, const Comodule& n);

struct DescentCertificates {
  std::optional<Cells> x_left_cells;  // X as a left A-module
};
// Counits are checked on Can_X(M) for every sample, on X_*(C) itself and on
// the extra comodules over X_*(C) supplied through `extra`.
Report descent_report(const DescentSetup& s, const std::vector<Comodule>& samples,
                      const DescentCertificates& certs = {},
                      const std::function<std::vector<Comodule>(const CoringPtr&)>& extra = {});

// ---------------------------------------------------------------------------
// Coring equivalences.

struct EquivalenceOptions {
  Window window{0, 6};
  std::vector<Comodule> target_samples;  // right D-comodules; T_*(M) of each sample is always added
  std::optional<Cells> canonical_cells;  // X_*(C) as a left B-module
  std::optional<Cells> target_cells;     // D as a left B-module
  DescentCertificates descent;
};
Report coring_equivalence_report(const BraidedBimodule& b, const DualityWitness& w,
                                 const std::vector<Comodule>& samples, const EquivalenceOptions& opt = {});
// Through the braiding on ₐB_B and the dual ᵦB_A.
Report coring_equivalence_report(const CoringMorphism& f, const std::vector<Comodule>& samples,
                                 const EquivalenceOptions& opt = {});

}  // namespace dgc
