#pragma once

// The two-sided cobar construction Ω_A(M; C; N) on a degree window, the
// cobar resolution of a comodule and copurity spot checks.

#include "dgc/corings.hpp"

#include <stdexcept>

namespace dgc {

using Window = std::pair<int, int>;

class CobarError : public std::invalid_argument {
 public:
  enum class Kind { MissingCoaugmentation, ConnectivityViolation, NotFlat };
  CobarError(Kind k, const std::string& what) : std::invalid_argument(what), kind(k) {}
  Kind kind;
};

// s⁻¹C̄ as an A-bimodule together with the projection C → C̄.
struct Desuspended {
  ModPtr module;
  Matrix projection;  // s⁻¹C̄ x C, degree -1
  Matrix section;     // C x s⁻¹C̄
};
Desuspended desuspended_coideal(const Coring& c);

struct CobarComplex {
  Window window;
  ModPtr m, n;
  CoringPtr coring;
  Desuspended bar;
  std::vector<TensorPtr> blocks;  // word length w: M ⊗ (s⁻¹C̄)^w ⊗ N
  std::vector<size_t> offsets;
  ModPtr module;                  // the direct sum with d_Ω
  Matrix internal;                // word-preserving part of d_Ω
  Matrix raising;                 // word length +1 part of d_Ω
  size_t word_of(uint32_t i) const;
  Complex complex() const { return module->carrier; }
};

CobarComplex cobar(const Comodule& m, const CoringPtr& c, const LeftComodule& n, Window window);

struct CobarComodule {
  CobarComplex omega;
  Comodule comodule;  // Ω(M; D; D) with the coaction of the last factor
  Matrix rho_tilde;   // Ω x M
  Matrix q;           // (M ⊗_A D) x Ω
  Comodule cofree;    // M ⊗_A D
};
CobarComodule cobar_comodule(const Comodule& m, Window window);

struct ResolutionVerdict {
  Verdict factorization;  // q ρ̃ = ρ
  Verdict comodule_maps;
  Verdict d_squared;
  WeakEquivalence weak;   // (1 ⊗ ε) q on [lo+1, hi-1]
  bool ok() const { return factorization.ok && comodule_maps.ok && d_squared.ok && weak.ok; }
};
ResolutionVerdict check_cobar_resolution(const Comodule& m, Window window);
ResolutionVerdict check_cobar_resolution(const CobarComodule& cc, const Comodule& m);

using Cells = std::vector<std::vector<SVec>>;

struct CopureVerdict {
  FlatVerdict source_flat;
  FlatVerdict target_flat;
  std::vector<WeakEquivalence> per_comodule;
  bool ok() const;
};
// f: C → D over the identity of A; test comodules are right D-comodules.
CopureVerdict copure_spot_check(const CoringMorphism& f, const std::vector<Comodule>& tests, Window window,
                                const std::optional<Cells>& source_cells = std::nullopt,
                                const std::optional<Cells>& target_cells = std::nullopt);

}  // namespace dgc
