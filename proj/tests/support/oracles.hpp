#pragma once

// Independent reference implementations used to check the library. Nothing
// here calls into triqubit beyond its value types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline Vec random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(std::size_t{1} << n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v.normalized();
}

inline std::vector<Complex> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// Reduced density of `qubit` (1-based, qubit 1 = most significant bit) by
// forming |psi><psi| and summing over every other index.
inline Eigen::Matrix2cd partial_trace(const Vec& psi, int n, int qubit) {
  const Mat rho = psi * psi.adjoint();
  const int shift = n - qubit;
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      const std::size_t rest_x = x & ~(std::size_t{1} << shift);
      const std::size_t rest_y = y & ~(std::size_t{1} << shift);
      if (rest_x != rest_y) continue;
      out((x >> shift) & 1u, (y >> shift) & 1u) += rho(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    }
  }
  return out;
}

inline double entropy_bits(const Eigen::Matrix2cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

inline double mean_entropy(const Vec& psi, int n) {
  double s = 0.0;
  for (int q = 1; q <= n; ++q) s += entropy_bits(partial_trace(psi, n, q));
  return s / n;
}

// Explicit 2^n x 2^n Kronecker product, first factor on qubit 1.
inline Mat kron(const std::vector<Eigen::Matrix2cd>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& f : factors) {
    Mat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
    }
    out = std::move(next);
  }
  return out;
}

// exp(iH) for a random Hermitian H: unitary by construction.
inline Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix2cd h;
  h(0, 0) = g(rng);
  h(1, 1) = g(rng);
  h(0, 1) = Complex(g(rng), g(rng));
  h(1, 0) = std::conj(h(0, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  Eigen::Vector2cd phases;
  for (int i = 0; i < 2; ++i) phases[i] = std::polar(1.0, 3.0 * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::Matrix2cd random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix2cd m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(g(rng), g(rng));
  return m;
}

// Kets of the eight triqubit terms written out by hand, indexed W1..W4 then
// W1bar..W4bar.
inline constexpr unsigned kTermKets[8] = {0b000, 0b110, 0b101, 0b011, 0b111, 0b001, 0b010, 0b100};

// Orbit of a term subset (bit mask over the eight ordinals) under the group
// generated by two qubit swaps and one bit flip, by breadth-first search.
inline std::set<std::uint8_t> orbit(std::uint8_t mask) {
  auto ordinal_of = [](unsigned ket) {
    for (int o = 0; o < 8; ++o) {
      if (kTermKets[o] == ket) return o;
    }
    return -1;
  };
  auto act = [&](std::uint8_t m, auto&& on_ket) {
    std::uint8_t out = 0;
    for (int o = 0; o < 8; ++o) {
      if (m & (1u << o)) out |= static_cast<std::uint8_t>(1u << ordinal_of(on_ket(kTermKets[o])));
    }
    return out;
  };
  auto swap12 = [](unsigned b) { return (b & 1u) | ((b >> 1) & 2u) | ((b << 1) & 4u); };
  auto swap23 = [](unsigned b) { return (b & 4u) | ((b >> 1) & 1u) | ((b << 1) & 2u); };
  auto flip1 = [](unsigned b) { return b ^ 4u; };
  std::set<std::uint8_t> seen{mask};
  std::vector<std::uint8_t> frontier{mask};
  while (!frontier.empty()) {
    const std::uint8_t m = frontier.back();
    frontier.pop_back();
    for (std::uint8_t next : {act(m, swap12), act(m, swap23), act(m, flip1)}) {
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return seen;
}

}  // namespace oracle
