#include "triqubit/slocc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>

#include "triqubit/entropy.hpp"

namespace triqubit {

namespace {

constexpr unsigned kKet110 = 0b110;
constexpr unsigned kKet101 = 0b101;
constexpr unsigned kKet011 = 0b011;
constexpr unsigned kKet100 = 0b100;
constexpr double kSupportTol = 1e-12;
constexpr double kSingularDet = 1e-6;
constexpr int kRetryCap = 100;

void require_representative_support(const PureState& state) {
  if (state.num_qubits() != kTriqubits) throw std::invalid_argument("split needs a triqubit state");
  for (unsigned x = 0; x < 8; ++x) {
    if (x == kKet110 || x == kKet101 || x == kKet011 || x == kKet100) continue;
    if (std::abs(state[x]) > kSupportTol) {
      throw std::invalid_argument("state has weight outside {|110>,|101>,|011>,|100>}");
    }
  }
}

StructuralSplit split(const PureState& state, std::initializer_list<unsigned> first, SplitKind kind) {
  require_representative_support(state);
  StructuralSplit out;
  out.kind = kind;
  out.part_one.assign(8, Complex{});
  out.part_two.assign(8, Complex{});
  for (unsigned x : {kKet110, kKet101, kKet011, kKet100}) {
    const bool in_first = std::find(first.begin(), first.end(), x) != first.end();
    (in_first ? out.part_one : out.part_two)[x] = state[x];
  }
  return out;
}

Mat2 gaussian_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

}  // namespace

LocalRankVector local_ranks(const PureState& state) {
  if (state.num_qubits() != kTriqubits) throw std::invalid_argument("local ranks need a triqubit state");
  LocalRankVector out;
  for (int q = 1; q <= kTriqubits; ++q) {
    const auto eig = reduced_density(state, q).eigenvalues();
    out.ranks[q - 1] = (eig[0] > kRankThreshold ? 1 : 0) + (eig[1] > kRankThreshold ? 1 : 0);
  }
  return out;
}

StructuralSplit split_bell_product_plus_ghz(const PureState& state) {
  return split(state, {kKet110, kKet101}, SplitKind::kBellProductPlusGhz);
}

StructuralSplit split_w_plus_product(const PureState& state) {
  return split(state, {kKet110, kKet101, kKet011}, SplitKind::kWPlusProduct);
}

Mat2 haar_unitary(std::mt19937_64& rng) {
  const Mat2 g = gaussian_matrix(rng);
  Eigen::HouseholderQR<Mat2> qr(g);
  Mat2 q = qr.householderQ();
  const Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (int c = 0; c < 2; ++c) {
    const Complex d = r(c, c);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(c) *= d / ad;
  }
  return q;
}

OperatorSampler unitary_sampler(int num_qubits) {
  return [num_qubits](std::mt19937_64& rng) {
    std::vector<Mat2> f;
    for (int q = 0; q < num_qubits; ++q) f.push_back(haar_unitary(rng));
    return LocalOperator(std::move(f));
  };
}

OperatorSampler gaussian_ilo_sampler(int num_qubits) {
  return [num_qubits](std::mt19937_64& rng) {
    std::vector<Mat2> f;
    for (int q = 0; q < num_qubits; ++q) {
      Mat2 m = gaussian_matrix(rng);
      for (int retry = 0; std::abs(m.determinant()) < kSingularDet && retry < kRetryCap; ++retry) {
        m = gaussian_matrix(rng);
      }
      f.push_back(m);
    }
    return LocalOperator(std::move(f));
  };
}

std::vector<ScanSample> slocc_measure_scan(const PureState& state, const OperatorSampler& sampler,
                                           std::size_t n_samples, std::uint64_t seed) {
  std::vector<ScanSample> out;
  out.reserve(n_samples);
  const double e_before = measure(state).value;
  const LocalRankVector ranks_before = local_ranks(state);
  for (std::size_t i = 0; i < n_samples; ++i) {
    ScanSample sample;
    sample.index = i;
    sample.operator_seed = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    std::mt19937_64 rng(sample.operator_seed);
    LocalOperator op = sampler(rng);
    int retries = 0;
    while (!op.invertible(kSingularDet)) {
      if (++retries > kRetryCap) throw std::runtime_error("operator sampler kept producing singular factors");
      op = sampler(rng);
    }
    const PureState image = apply_local_operator(state, op, RequireInvertible::kYes).normalized();
    sample.e_before = e_before;
    sample.e_after = measure(image).value;
    sample.ranks_before = ranks_before;
    sample.ranks_after = local_ranks(image);
    sample.unitary = op.unitary();
    out.push_back(sample);
  }
  return out;
}

}  // namespace triqubit
