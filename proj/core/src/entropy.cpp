#include "triqubit/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace triqubit {

std::array<double, 2> ReducedDensity::eigenvalues() const {
  const double p = matrix(0, 0).real();
  const double q = matrix(1, 1).real();
  const double off = std::abs(matrix(0, 1));
  const double trace = p + q;
  const double half_gap = std::sqrt(0.25 * (p - q) * (p - q) + off * off);
  double hi = 0.5 * trace + half_gap;
  const double det = p * q - off * off;
  double lo = hi > 0.0 ? det / hi : 0.0;
  hi = std::clamp(hi, 0.0, 1.0);
  lo = std::clamp(lo, 0.0, 1.0);
  return {lo, hi};
}

ReducedDensity reduced_density(const PureState& state, int qubit) {
  const int n = state.num_qubits();
  if (qubit < 1 || qubit > n) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside 1.." +
                            std::to_string(n));
  }
  const std::size_t bit = std::size_t{1} << (n - qubit);
  const auto& psi = state.amplitudes();
  double p0 = 0.0;
  double p1 = 0.0;
  Complex c01{};
  for (std::size_t x = 0; x < psi.size(); ++x) {
    if (x & bit) {
      p1 += std::norm(psi[x]);
    } else {
      p0 += std::norm(psi[x]);
      c01 += psi[x] * std::conj(psi[x | bit]);
    }
  }
  ReducedDensity rho;
  rho.qubit = qubit;
  rho.matrix << p0, c01, std::conj(c01), p1;
  return rho;
}

double binary_entropy(double lambda) {
  lambda = std::clamp(lambda, 0.0, 1.0);
  double s = 0.0;
  if (lambda > 0.0) s -= lambda * std::log2(lambda);
  const double mu = 1.0 - lambda;
  if (mu > 0.0) s -= mu * std::log2(mu);
  return s;
}

double von_neumann_entropy(const ReducedDensity& rho) {
  double s = 0.0;
  for (double lambda : rho.eigenvalues()) {
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

EntropyProfile measure(const PureState& state, double zero_threshold) {
  EntropyProfile profile;
  const int n = state.num_qubits();
  profile.entropies.reserve(static_cast<std::size_t>(n));
  double total = 0.0;
  profile.genuine = true;
  for (int q = 1; q <= n; ++q) {
    const double s = von_neumann_entropy(reduced_density(state, q));
    profile.entropies.push_back(s);
    total += s;
    if (!(s > zero_threshold)) profile.genuine = false;
  }
  profile.value = profile.genuine ? total / n : 0.0;
  return profile;
}

namespace {

double clipped_sqrt(double x) {
  if (x < 0.0) {
    if (x < -1e-12) throw std::domain_error("negative argument under closed-form square root");
    return 0.0;
  }
  return std::sqrt(x);
}

}  // namespace

double measure_closed_form_iii4(double a, double b, double c, double d) {
  const double a2 = a * a, b2 = b * b, c2 = c * c, d2 = d * d;
  if (std::abs(a2 + b2 + c2 + d2 - 1.0) > 1e-10) {
    throw std::invalid_argument("closed form needs a^2+b^2+c^2+d^2 = 1");
  }
  const double u = clipped_sqrt(1.0 - 4.0 * (a2 * b2 + a2 * c2 + c2 * d2));
  const double v = clipped_sqrt(1.0 - 4.0 * (a2 * b2 + b2 * c2 + c2 * d2));
  const double s_a = binary_entropy(c2);
  const double s_u = binary_entropy(0.5 * (1.0 - u));
  const double s_v = binary_entropy(0.5 * (1.0 - v));
  return (s_a + s_u + s_v) / 3.0;
}

}  // namespace triqubit
