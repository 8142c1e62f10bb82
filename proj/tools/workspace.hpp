#pragma once

// The .cf workspace format: parsing, resolution of named references,
// validation, canonical saving and seeded perturbation trials.

#include "dgc/morita.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgc::cf {

struct Line {
  std::string key;
  std::vector<std::string> args;
  int lineno = 0;
};

struct Block {
  std::string kind;
  std::string name;
  int lineno = 0;
  std::vector<Line> lines;
};

struct Document {
  Field field;
  std::vector<Block> blocks;
};

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct CellData {
  ModPtr module;
  Side side = Side::Left;
  Cells cells;
};

struct Workspace {
  Document doc;
  std::map<std::string, Complex> complexes;
  std::map<std::string, AlgPtr> algebras;  // always holds the ground algebra "k"
  std::map<std::string, AlgebraMorphism> morphisms;
  std::map<std::string, ModPtr> modules;
  std::map<std::string, CoringPtr> corings;
  std::map<std::string, Comodule> comodules;
  std::map<std::string, LeftComodule> left_comodules;
  std::map<std::string, CoringMorphism> coring_morphisms;
  std::map<std::string, BraidedBimodule> braidings;
  std::map<std::string, DualityWitness> witnesses;
  std::map<std::string, CellData> cells;
  // Per object in canonical order: (kind, name, verdict with the first failing axiom).
  struct Validation {
    std::string kind, name;
    Verdict verdict;
  };
  std::vector<Validation> validation;

  bool valid() const;
  const std::string& kind_of(const std::string& name) const;
};

// Throws InputError on syntax errors, unresolved references, a non-prime
// modulus or malformed structure maps. Validation failures are recorded, not thrown.
Document parse(const std::string& text, const std::string& source = "<input>");
Workspace build(const Document& doc);
Workspace load(const std::string& path);
Workspace load_string(const std::string& text);

// Canonical text: kinds in dependency order, blocks by name, entries sorted
// with duplicates merged.
std::string save(const Document& doc);

struct Perturbation {
  std::string object;
  std::string key;
  std::string entry;
  bool detected = false;
  std::string detail;
};
// Changes one structure-constant entry per trial and rebuilds the workspace.
std::vector<Perturbation> perturbation_trials(const Document& doc, uint32_t seed, size_t count);

}  // namespace dgc::cf
