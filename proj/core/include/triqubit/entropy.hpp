#pragma once

#include <array>
#include <vector>

#include "triqubit/state.hpp"

namespace triqubit {

inline constexpr double kDefaultZeroThreshold = 1e-12;

/// Single-qubit reduced density matrix (rho_Psi)_i.
struct ReducedDensity {
  Mat2 matrix = Mat2::Zero();
  int qubit = 1;

  /// Eigenvalues in ascending order, clipped to [0, 1]. Closed form from the
  /// trace and determinant; the small root is det/large to keep precision when
  /// the qubit is nearly pure.
  [[nodiscard]] std::array<double, 2> eigenvalues() const;
};

struct EntropyProfile {
  std::vector<double> entropies;  // S_1..S_N in bits
  double value = 0.0;             // E
  bool genuine = false;           // every S_i above the zero threshold
};

/// Partial trace over every qubit except `qubit` (1-based, qubit 1 = MSB).
[[nodiscard]] ReducedDensity reduced_density(const PureState& state, int qubit);

/// -sum lambda log2 lambda, with 0 log 0 = 0.
[[nodiscard]] double von_neumann_entropy(const ReducedDensity& rho);

/// Binary entropy of the eigenvalue pair {lambda, 1-lambda}, in bits.
[[nodiscard]] double binary_entropy(double lambda);

/// Average single-qubit entropy, forced to 0 unless every S_i exceeds
/// `zero_threshold`.
[[nodiscard]] EntropyProfile measure(const PureState& state,
                                     double zero_threshold = kDefaultZeroThreshold);

/// Closed form of E for the four-term family
///   a W_j + b W_t + c W_i + d Wbar_i   (i, j, t distinct),
/// which does not depend on the relative phases. Requires
/// a^2+b^2+c^2+d^2 = 1 within 1e-10.
[[nodiscard]] double measure_closed_form_iii4(double a, double b, double c, double d);

}  // namespace triqubit
