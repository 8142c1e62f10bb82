#pragma once

// Small hand-built algebras and modules shared by the unit tests.

#include "dgc/dgalgebra.hpp"

#include <random>
#include <tuple>

namespace testsupport {

using namespace dgc;

// Structure constants e_i e_j = c e_k given as (i, j, k, c).
inline Matrix mult_table(const Field& F, size_t n, std::initializer_list<std::tuple<int, int, int, long>> t) {
  std::vector<Triple> tr;
  for (auto [i, j, k, c] : t) tr.push_back({uint32_t(k), uint32_t(i * n + j), F.from_int(c)});
  return Matrix::from_triples(F, n, n * n, tr);
}

inline Matrix action_table(const Field& F, size_t rows, size_t cols,
                           std::initializer_list<std::tuple<int, int, long>> t) {
  std::vector<Triple> tr;
  for (auto [r, c, v] : t) tr.push_back({uint32_t(r), uint32_t(c), F.from_int(v)});
  return Matrix::from_triples(F, rows, cols, tr);
}

// k[t]/(t²), everything in degree 0.
inline AlgPtr dual_numbers(Field F = Field()) {
  Complex c(F, {0, 0}, {"1", "t"});
  return make_algebra("B", c, {{0, Scalar(1)}}, mult_table(F, 2, {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}}));
}

// k⟨1, a, b⟩ with |a| = 1, da = b and all products of a, b zero.
inline AlgPtr acyclic_augmented(Field F = Field()) {
  Complex c(F, {0, 1, 0}, {"1", "a", "b"});
  c.d = Matrix::from_triples(F, 3, 3, {{2, 1, Scalar(1)}});
  return make_algebra("E", c, {{0, Scalar(1)}},
                      mult_table(F, 3, {{0, 0, 0, 1}, {0, 1, 1, 1}, {0, 2, 2, 1}, {1, 0, 1, 1}, {2, 0, 2, 1}}));
}

// k × k with idempotents e1, e2.
inline AlgPtr split_pair(Field F = Field()) {
  Complex c(F, {0, 0}, {"e1", "e2"});
  return make_algebra("kxk", c, {{0, Scalar(1)}, {1, Scalar(1)}}, mult_table(F, 2, {{0, 0, 0, 1}, {1, 1, 1, 1}}));
}

// The unit map k → k × k.
inline AlgebraMorphism diagonal(const AlgPtr& kk) {
  const Field& F = kk->field();
  return {ground_algebra(F), kk, Matrix::from_triples(F, 2, 1, {{0, 0, Scalar(1)}, {1, 0, Scalar(1)}})};
}

// A as a right A-module only.
inline ModPtr regular_right(const AlgPtr& a) { return right_module(a->name, a->carrier, a, a->mult); }
inline ModPtr regular_left(const AlgPtr& a) { return left_module(a->name, a, a->carrier, a->mult); }

// k over the dual numbers with t acting by zero.
inline ModPtr residue_right(const AlgPtr& b) {
  const Field& F = b->field();
  return right_module("k", ground_complex(F), b, action_table(F, 1, 2, {{0, 0, 1}}));
}

// M_n(k) with basis E_ij at index i*n + j.
inline AlgPtr matrix_algebra(const Field& F, size_t n) {
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
  Complex c(F, std::vector<int>(n * n, 0), names);
  size_t d = n * n;
  std::vector<Triple> tr;
  SVec unit;
  for (size_t i = 0; i < n; ++i) {
    unit.emplace_back(uint32_t(i * n + i), Scalar(1));
    for (size_t j = 0; j < n; ++j)
      for (size_t l = 0; l < n; ++l) tr.push_back({uint32_t(i * n + l), uint32_t((i * n + j) * d + j * n + l), Scalar(1)});
  }
  return make_algebra("M" + std::to_string(n), c, unit, Matrix::from_triples(F, d, d * d, tr));
}

// Column vectors k^n as an M_n-k bimodule, row vectors as a k-M_n bimodule.
inline ModPtr column_module(const AlgPtr& a, size_t n) {
  const Field& F = a->field();
  std::vector<Triple> tr;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) tr.push_back({uint32_t(i), uint32_t((i * n + j) * n + j), Scalar(1)});
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i + 1));
  return left_module("col", a, Complex(F, std::vector<int>(n, 0), names), Matrix::from_triples(F, n, n * n * n, tr));
}

inline ModPtr row_module(const AlgPtr& a, size_t n) {
  const Field& F = a->field();
  std::vector<Triple> tr;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) tr.push_back({uint32_t(j), uint32_t(i * n * n + i * n + j), Scalar(1)});
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i) names.push_back("r" + std::to_string(i + 1));
  return right_module("row", Complex(F, std::vector<int>(n, 0), names), a, Matrix::from_triples(F, n, n * n * n, tr));
}

inline ModPtr ground_space(const Field& F, std::vector<int> deg, const std::string& name) {
  std::vector<std::string> names;
  for (size_t i = 0; i < deg.size(); ++i) names.push_back(name + std::to_string(i));
  return ground_module(name, Complex(F, deg, names));
}

// Three-dimensional k-module in degrees 0, 0, 1 with a seeded random differential.
inline ModPtr random_three_dim(const Field& F, uint32_t seed) {
  std::mt19937 rng(seed);
  Complex c(F, {0, 0, 1}, {"r0", "r1", "r2"});
  std::vector<Triple> t;
  for (uint32_t i = 0; i < 2; ++i) {
    long v = long(rng() % 5) - 2;
    if (v) t.push_back({i, 2, F.from_int(v)});
  }
  c.d = Matrix::from_triples(F, 3, 3, t);
  return ground_module("R" + std::to_string(seed), c);
}

inline size_t cycles_in_degree(const Complex& c, int n) {
  auto idx = c.in_degree(n);
  if (idx.empty()) return 0;
  return idx.size() - rank(c.d.select_cols(idx));
}

}  // namespace testsupport
