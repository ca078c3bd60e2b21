#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "triqubit/state.hpp"

namespace triqubit {

inline constexpr double kRankThreshold = 1e-10;

/// Ranks (1 or 2) of the three single-qubit reduced densities. Unchanged by
/// any invertible local operator.
struct LocalRankVector {
  std::array<int, 3> ranks{1, 1, 1};

  friend bool operator==(const LocalRankVector&, const LocalRankVector&) = default;
};

[[nodiscard]] LocalRankVector local_ranks(const PureState& state);

enum class SplitKind { kBellProductPlusGhz, kWPlusProduct };

/// state = part_one + part_two, amplitude by amplitude. Parts are
/// unnormalized and may vanish.
struct StructuralSplit {
  Amplitudes part_one;
  Amplitudes part_two;
  SplitKind kind = SplitKind::kBellProductPlusGhz;

  [[nodiscard]] double norm_one() const { return norm(part_one); }
  [[nodiscard]] double norm_two() const { return norm(part_two); }
};

/// For x1|110> + x2|101> + x3|011> + x4|100>:
///   |1>_A (x1|10> + x2|01>)_BC  +  (x3|011> + x4|100>).
/// Throws std::invalid_argument when the state has weight outside those kets.
[[nodiscard]] StructuralSplit split_bell_product_plus_ghz(const PureState& state);

/// Same support; splits as (x1|110> + x2|101> + x3|011>) + x4|100>.
[[nodiscard]] StructuralSplit split_w_plus_product(const PureState& state);

using OperatorSampler = std::function<LocalOperator(std::mt19937_64&)>;

/// Haar-random unitary factors.
[[nodiscard]] OperatorSampler unitary_sampler(int num_qubits);
/// Factors with i.i.d. standard complex Gaussian entries, redrawn while
/// |det| < 1e-6.
[[nodiscard]] OperatorSampler gaussian_ilo_sampler(int num_qubits);

[[nodiscard]] Mat2 haar_unitary(std::mt19937_64& rng);

struct ScanSample {
  std::size_t index = 0;
  std::uint64_t operator_seed = 0;
  double e_before = 0.0;
  double e_after = 0.0;
  LocalRankVector ranks_before;
  LocalRankVector ranks_after;
  bool unitary = false;
};

/// Applies n_samples sampled operators to `state` (renormalizing the image)
/// and records E and the local ranks before and after. Sample i draws from
/// its own generator seeded by (seed, i). Singular draws (|det| <= 1e-6) are
/// resampled up to 100 times before std::runtime_error.
[[nodiscard]] std::vector<ScanSample> slocc_measure_scan(const PureState& state,
                                                         const OperatorSampler& sampler,
                                                         std::size_t n_samples,
                                                         std::uint64_t seed);

}  // namespace triqubit
