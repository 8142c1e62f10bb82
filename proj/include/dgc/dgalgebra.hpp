#pragma once

// Dg algebras, dg modules, iterated tensor products over algebras and
// mapping complexes.

#include "dgc/complexes.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dgc {

struct Algebra {
  std::string name;
  Complex carrier;
  SVec unit;    // degree-0 element
  Matrix mult;  // dim x dim², column i*dim + j holds e_i e_j

  size_t dim() const { return carrier.dim(); }
  const Field& field() const { return carrier.field; }
};
using AlgPtr = std::shared_ptr<const Algebra>;

AlgPtr make_algebra(std::string name, Complex carrier, SVec unit, Matrix mult);
AlgPtr ground_algebra(Field F);
bool is_ground(const Algebra& a);
bool same_algebra(const Algebra& a, const Algebra& b);

struct Module {
  std::string name;
  Complex carrier;
  AlgPtr left;   // ground algebra when there is no left action
  AlgPtr right;  // ground algebra when there is no right action
  Matrix lact;   // dim x (dim(left) * dim), column a*dim + m
  Matrix ract;   // dim x (dim * dim(right)), column m*dim(right) + b

  size_t dim() const { return carrier.dim(); }
  const Field& field() const { return carrier.field; }
  std::string sidedness() const;
};
using ModPtr = std::shared_ptr<const Module>;
using CPtr = std::shared_ptr<const Complex>;

CPtr carrier_of(const ModPtr& m);
CPtr carrier_of(const AlgPtr& a);

// Trivial action of the ground field on either side.
Matrix trivial_left_action(const Complex& c);
Matrix trivial_right_action(const Complex& c);

ModPtr make_module(std::string name, Complex carrier, AlgPtr left, Matrix lact, AlgPtr right, Matrix ract);
ModPtr right_module(std::string name, Complex carrier, AlgPtr right, Matrix ract);
ModPtr left_module(std::string name, AlgPtr left, Complex carrier, Matrix lact);
ModPtr ground_module(std::string name, Complex carrier);  // k-k bimodule
// A as an A-A bimodule.
ModPtr regular_bimodule(const AlgPtr& a);

struct AlgebraMorphism {
  AlgPtr source;
  AlgPtr target;
  Matrix map;  // target.dim x source.dim
};

AlgebraMorphism identity_morphism(const AlgPtr& a);

Verdict validate_algebra(const Algebra& a);
Verdict validate_module(const Module& m);
Verdict validate_algebra_morphism(const AlgebraMorphism& f);

// Degrees of the plain tensor product of the given factors, row-major.
std::vector<int> plain_degrees(const std::vector<CPtr>& f);

// ---------------------------------------------------------------------------
// Iterated tensor products over algebras.

using Tuple = std::vector<uint32_t>;

// Element of a plain (ground-field) tensor product of factor complexes.
struct TElem {
  std::vector<CPtr> factors;
  std::map<Tuple, Scalar> terms;
};

// Linear operator on `in` consecutive factors, producing the factors in
// `out`. Applied to an element at a given slot it picks up the Koszul sign of
// moving an operator of degree `degree` past the preceding factors.
struct LocalOp {
  size_t in = 0;
  std::vector<CPtr> out;
  int degree = 0;
  std::function<std::vector<std::pair<Tuple, Scalar>>(const Tuple&)> image;
};

void apply_op(const Field& F, TElem& e, size_t slot, const LocalOp& op);
void add_elem(const Field& F, TElem& acc, const TElem& x, const Scalar& c);

LocalOp op_matrix(const Matrix& m, std::vector<CPtr> in, std::vector<CPtr> out, int degree = 0);
LocalOp op_insert(std::vector<CPtr> out, std::vector<std::pair<Tuple, Scalar>> elem);
LocalOp op_differential(const CPtr& c);
LocalOp op_left_action(const ModPtr& m);
LocalOp op_right_action(const ModPtr& m);
LocalOp op_mult(const AlgPtr& a);
LocalOp op_unit(const AlgPtr& a);

struct Tensor;
using TensorPtr = std::shared_ptr<const Tensor>;

// M_1 ⊗_{A_1} M_2 ⊗ ... ⊗_{A_{r-1}} M_r, the quotient of the plain tensor by
// the balancing relations at every junction, optionally truncated to a degree
// window.
struct Tensor {
  std::vector<ModPtr> factors;
  std::vector<CPtr> fcx;
  std::optional<std::pair<int, int>> window;
  std::vector<Tuple> tuples;
  std::map<Tuple, uint32_t> index;
  Matrix relations;
  Matrix P;  // quotient x plain
  Matrix S;  // plain x quotient
  ModPtr module;

  size_t plain_dim() const { return tuples.size(); }
  size_t dim() const { return module->dim(); }
  CPtr carrier() const { return carrier_of(module); }
  // Lift of a quotient basis vector.
  TElem lift(uint32_t q) const;
  TElem lift_vec(const SVec& v) const;
  SVec project(const TElem& e) const;
};

TensorPtr make_tensor(const std::vector<ModPtr>& factors, std::optional<std::pair<int, int>> window = std::nullopt,
                      const std::string& name = {});
TensorPtr as_tensor(const ModPtr& m);

// Enumerates tuples of basis indices with total degree inside the window.
std::vector<Tuple> enumerate_tuples(const std::vector<CPtr>& factors, std::optional<std::pair<int, int>> window);

// Quotient basis vector -> lifted plain tuples; and plain tuples -> quotient.
LocalOp op_section(const TensorPtr& t);
LocalOp op_projection(const TensorPtr& t);
// S_tgt ∘ f ∘ P_src on plain factors.
LocalOp op_lift(const Matrix& f, const TensorPtr& src, const TensorPtr& tgt, int degree = 0);

using OpSeq = std::vector<std::pair<size_t, LocalOp>>;
// Matrix Q_src -> Q_tgt obtained by lifting each basis vector, applying the
// operators in order and projecting.
Matrix tensor_map(const TensorPtr& src, const TensorPtr& tgt, const OpSeq& ops);
// Same on plain row-major spaces of the given factors.
Matrix plain_map(const Field& F, const std::vector<CPtr>& src, const std::vector<CPtr>& tgt, const OpSeq& ops);
size_t plain_dim(const std::vector<CPtr>& f);
std::string plain_tuple_name(const std::vector<CPtr>& f, size_t col);

// ---------------------------------------------------------------------------
// Module operations.

TensorPtr tensor_over_A(const ModPtr& m, const ModPtr& n);

// Module carried by the span of an echelon basis of m's carrier; throws if the
// span is not a sub-bimodule.
ModPtr submodule(const ModPtr& m, const Matrix& basis, const std::string& name);

// Quotient of m by a sub-bimodule spanned by the columns of `relations`.
struct QuotientModule {
  ModPtr module;
  Matrix projection;  // quotient x m
  Matrix section;     // m x quotient
};
QuotientModule quotient_module(const ModPtr& m, const Matrix& relations, const std::string& name);

struct MapModule {
  ModPtr module;      // left: n.left, right: x.left
  Complex hom;        // full hom complex
  Matrix basis;       // columns in hom coordinates
  ModPtr x, n;
};

// Map_B(X, N) for right B-modules; B-linearity f(x b) = f(x) b.
MapModule map_module(const ModPtr& x, const ModPtr& n);
// Evaluation Map_B(X,N) ⊗_A X -> N with A = x.left.
LocalOp op_evaluation(const MapModule& mm);
Matrix evaluation(const MapModule& mm, const TensorPtr& src);
// Coordinates in Map_B(X,N) of a hom-complex vector; throws if outside.
SVec map_coords(const MapModule& mm, const SVec& hom_vec);

// Restrict the right (resp. left) action along φ.
ModPtr restrict_right(const ModPtr& m, const AlgebraMorphism& phi);
ModPtr restrict_left(const ModPtr& m, const AlgebraMorphism& phi);

enum class ScalarsDirection { Restrict, Extend };
// Right modules: restrict uses φ on the action, extend is m ⊗_A B.
ModPtr scalars_along(const AlgebraMorphism& phi, const ModPtr& m, ScalarsDirection dir);

// Map of modules with the same algebras, as a chain map of carriers.
struct ModuleMap {
  ModPtr source;
  ModPtr target;
  Matrix m;
  int degree = 0;
};
Verdict check_module_map(const ModuleMap& f);
ChainMap as_chain_map(const ModuleMap& f);

struct PureVerdict {
  bool weak_equivalence = false;
  std::vector<bool> witness_results;
  bool pure() const;
};
// f: map of left A-modules; witnesses: right A-modules.
PureVerdict is_pure_weak_equivalence(const ModuleMap& f, const std::vector<ModPtr>& witnesses);

// 1 ⊗ f: W ⊗_A M -> W ⊗_A M'.
Matrix tensor_left_with(const ModPtr& w, const ModuleMap& f, TensorPtr* src_out = nullptr, TensorPtr* tgt_out = nullptr);

enum class Side { Left, Right };

// Cells: for stage k the generators of X(k), as homogeneous vectors in the
// carrier of n. Stage F_k is the submodule generated by the cells up to k.
struct CellularReport {
  bool ok = false;
  bool flat_cofibrant = false;
  std::string detail;
};
CellularReport verify_cellular_filtration(const ModPtr& n, Side side, const std::vector<std::vector<SVec>>& cells);

struct RetractWitness {
  SVec x0;   // degree-0 cycle, i(a) = a·x0 (or x0·a)
  Matrix r;  // A-linear chain map back to A with r(x0) = 1
};
std::optional<RetractWitness> find_retract(const ModPtr& x, Side side);

std::string first_nonzero_column(const Matrix& diff, const std::vector<CPtr>& src);

}  // namespace dgc
