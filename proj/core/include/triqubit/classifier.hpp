#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "triqubit/optimizer.hpp"
#include "triqubit/state.hpp"

namespace triqubit {

enum class Separability { kFullySeparable, kPartiallySeparable, kGenuine };

struct SeparabilityClass {
  Separability kind = Separability::kGenuine;
  std::vector<int> fixed_qubits;  // 1-based qubits whose bit is the same in every term
};

[[nodiscard]] const char* to_string(Separability s);

/// Qubits whose bit is constant across the combination. Such a qubit factors
/// out of every state in the family, so its entropy is zero.
[[nodiscard]] std::vector<int> fixed_qubits(const TermCombination& combination);

/// Structural rule on fixed qubits, confirmed for the no-fixed-qubit case by
/// three random coefficient draws (all S_i > 1e-9 on at least one draw).
[[nodiscard]] SeparabilityClass separability_class(const TermCombination& combination);

enum class TypeKind {
  kGhz2,
  kFullSep2,
  kPartSep2,
  kW3,
  kMixed3,
  kPartSep3,
  kI4,
  kII4,
  kIII4,
  kIV4,
  kV4,
  kPartSep4,
  kI5,
  kII5,
  kIII5,
  kGenericK,
};

struct TypeLabel {
  TypeKind kind = TypeKind::kGenericK;
  int k = 0;

  [[nodiscard]] std::string name() const;
  friend bool operator==(const TypeLabel&, const TypeLabel&) = default;
};

[[nodiscard]] TypeLabel classify_type(const TermCombination& combination);

/// Qubit permutation followed by per-qubit bit flips, acting on 3-bit strings
/// and hence on the eight basis terms. The 48 elements form the symmetry
/// group of the cube {0,1}^3.
struct SymmetryElement {
  std::array<int, 3> perm{0, 1, 2};  // qubit q (0-based) moves to perm[q]
  unsigned flips = 0;                // XOR mask applied after the permutation

  [[nodiscard]] unsigned apply(unsigned bits) const noexcept;
  [[nodiscard]] BasisTerm apply(BasisTerm term) const;
  [[nodiscard]] TermCombination apply(const TermCombination& combination) const;
};

[[nodiscard]] const std::array<SymmetryElement, 48>& symmetry_group();

struct CanonicalForm {
  TermCombination representative;
  std::size_t element = 0;  // symmetry_group()[element].apply(input) == representative
};

/// Orbit representative: the image whose sorted term ordinals are
/// lexicographically smallest.
[[nodiscard]] CanonicalForm symmetry_canonicalize(const TermCombination& combination);

[[nodiscard]] std::size_t orbit_size(const TermCombination& combination);

/// Term-position permutations induced by the group elements that map the
/// combination onto itself. Entry p of each map is the image position of p.
[[nodiscard]] std::vector<std::vector<std::size_t>> stabilizer_permutations(
    const TermCombination& combination);

/// All C(8,k) combinations in ascending mask order. Requires 2 <= k <= 8.
[[nodiscard]] std::vector<TermCombination> enumerate_combinations(int k);

struct OrbitOutcome {
  TermCombination representative;
  std::size_t orbit_size = 0;
  bool optimized = false;
  Extrema extrema;
};

struct SurveyEntry {
  TypeLabel label;
  Separability separability = Separability::kGenuine;
  std::size_t count = 0;
  std::vector<OrbitOutcome> orbits;

  [[nodiscard]] bool has_interior() const;
  /// Best interior cluster across the orbits, if any.
  [[nodiscard]] const OptResult* witness() const;
};

struct SurveyReport {
  int k = 0;
  std::vector<SurveyEntry> entries;

  [[nodiscard]] std::size_t total() const;
  [[nodiscard]] const SurveyEntry* find(TypeKind kind) const;
};

/// Enumerates, classifies and optimizes one representative per genuine orbit.
[[nodiscard]] SurveyReport survey(int k, const OptConfig& config);

}  // namespace triqubit
