#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "triqubit/state.hpp"

namespace triqubit {

/// A point on the coefficient manifold of a k-term combination: nonnegative
/// moduli on the unit sphere and k-1 phases relative to the first term.
struct ParamPoint {
  std::vector<double> moduli;
  std::vector<double> phases;
};

struct OptConfig {
  int num_starts = 200;
  int max_iters = 500;
  double stationarity_tol = 1e-7;
  double boundary_tol = 1e-4;
  double cluster_tol = 1e-5;
  std::uint64_t rng_seed = 1;

  // A stationary point whose smaller moduli (below snap_tol) can be zeroed
  // without changing E, and which stays stationary on that face, belongs to
  // the boundary.
  double snap_tol = 1e-2;
  // Interior extrema must keep every single-qubit entropy above this floor.
  double separable_floor = 1e-6;
  // Moduli distance under which two points of one cluster count as the same.
  double point_tol = 1e-3;
  // Stationary points where E still rises along some pure phase direction
  // (phase-block Hessian eigenvalue above this) are not maxima over the
  // phases and are discarded.
  double phase_curvature_tol = 1e-6;
  bool inject_seeds = true;
  // Optimize moduli only, holding the k-1 relative phases fixed.
  std::optional<std::vector<double>> fixed_phases;

  /// Throws std::invalid_argument on non-positive tolerances or num_starts < 1.
  void validate() const;
};

struct OptResult {
  ParamPoint best_point;
  double value = 0.0;
  double gradient_norm = 0.0;
  bool interior = false;
  std::vector<std::size_t> boundary_terms;
  /// theta = alpha - beta - gamma for the {W_i, W_j, Wbar_i, Wbar_j} family,
  /// wrapped to [0, 2*pi).
  std::optional<double> phase_relation;
  std::vector<double> entropies;
  std::size_t multiplicity = 0;     // runs that landed in this cluster
  std::size_t distinct_points = 0;  // member points up to the combination's symmetries
};

struct Extrema {
  std::vector<OptResult> clusters;  // descending E
  std::size_t runs = 0;
  std::size_t converged_runs = 0;
  std::size_t separable_runs = 0;
  std::size_t phase_saddle_runs = 0;

  [[nodiscard]] bool has_interior() const;
  [[nodiscard]] const OptResult* best_interior() const;
};

/// E at `point` through build_state + measure.
[[nodiscard]] double evaluate(const TermCombination& combination, const ParamPoint& point);

/// Gradient of E in hyperspherical-angle (k-1) then phase (k-1) coordinates.
/// Throws std::domain_error when some modulus is ~0 (the chart is singular
/// there). Combinations with a qubit fixed across all terms have E = 0
/// identically and get a zero gradient.
[[nodiscard]] std::vector<double> gradient(const TermCombination& combination,
                                           const ParamPoint& point);

/// Multi-start search for stationary points of E, clustered by value.
///
/// Every start runs twice: adaptive gradient ascent followed by a
/// Levenberg-Marquardt polish, and a Levenberg-Marquardt solve of grad E = 0
/// directly. The second route is what finds saddle-type extrema.
[[nodiscard]] Extrema maximize(const TermCombination& combination, const OptConfig& config);

struct InteriorVerdict {
  bool found = false;
  std::optional<OptResult> witness;
};

[[nodiscard]] InteriorVerdict has_interior_extremum(const TermCombination& combination,
                                                    const OptConfig& config);

/// theta = phi(W_i) + phi(Wbar_i) - phi(W_j) - phi(Wbar_j) when `combination`
/// is {W_i, W_j, Wbar_i, Wbar_j}; nullopt otherwise.
[[nodiscard]] std::optional<double> type_i4_phase_relation(const TermCombination& combination,
                                                           const ParamPoint& point);

namespace chart {

/// Angles alpha_0..alpha_{k-2} such that the hyperspherical moduli equal
/// `point.moduli`, followed by the phases.
[[nodiscard]] std::vector<double> to_chart(const ParamPoint& point);
/// Inverse of to_chart. Negative moduli are folded into the phases.
[[nodiscard]] ParamPoint from_chart(std::span<const double> coords, std::size_t k);

/// Smooth objective: the mean single-qubit entropy without the zero cutoff,
/// over free coordinates (all 2k-2, or the k-1 angles when phases are fixed).
class Objective {
 public:
  Objective(const TermCombination& combination, std::optional<std::vector<double>> fixed_phases);

  [[nodiscard]] std::size_t dim() const noexcept;
  [[nodiscard]] std::size_t terms() const noexcept { return k_; }
  [[nodiscard]] double value(std::span<const double> x) const;
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;
  [[nodiscard]] std::vector<double> gradient(std::span<const double> x) const;
  /// Full (angles, phases) coordinates for free coordinates `x`.
  [[nodiscard]] std::vector<double> full(std::span<const double> x) const;
  /// Free coordinates of a full coordinate vector.
  [[nodiscard]] std::vector<double> free(std::span<const double> full_coords) const;

 private:
  double evaluate(std::span<const double> x, double* grad) const;

  std::size_t k_;
  std::optional<std::vector<double>> fixed_phases_;
  // Per qubit: term positions with a 0 on that qubit, and position pairs
  // (j, l) whose kets differ only on that qubit with j holding the 0.
  std::array<std::vector<std::size_t>, 3> zeros_;
  std::array<std::vector<std::pair<std::size_t, std::size_t>>, 3> pairs_;
};

}  // namespace chart

}  // namespace triqubit
