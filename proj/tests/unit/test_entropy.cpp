#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "triqubit/entropy.hpp"

using namespace triqubit;
using Catch::Approx;

namespace {

PureState from_oracle(const oracle::Vec& v, int n) { return PureState(n, oracle::to_std(v)); }

const double kWValue = std::log2(3.0) - 2.0 / 3.0;

}  // namespace

TEST_CASE("reduced densities match the brute-force partial trace", "[entropy]") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto v = oracle::random_vector(rng, n);
      const PureState s = from_oracle(v, n);
      for (int q = 1; q <= n; ++q) {
        const auto rho = reduced_density(s, q);
        const auto expect = oracle::partial_trace(v, n, q);
        CHECK((rho.matrix - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(rho.qubit == q);
      }
    }
  }
}

TEST_CASE("closed-form eigenvalues match a Hermitian solver", "[entropy]") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 500; ++rep) {
    const auto v = oracle::random_vector(rng, 3);
    const auto rho = reduced_density(from_oracle(v, 3), 1 + rep % 3);
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho.matrix);
    const auto eig = rho.eigenvalues();
    CHECK(eig[0] <= eig[1]);
    CHECK(eig[0] == Approx(es.eigenvalues()[0]).margin(1e-12));
    CHECK(eig[1] == Approx(es.eigenvalues()[1]).margin(1e-12));
    CHECK(von_neumann_entropy(rho) == Approx(oracle::entropy_bits(rho.matrix)).margin(1e-12));
  }
}

TEST_CASE("nearly pure qubits keep their small eigenvalue", "[entropy]") {
  const double eps = 1e-9;
  const PureState s(2, {std::sqrt(1 - eps * eps), 0, 0, eps});
  const auto eig = reduced_density(s, 1).eigenvalues();
  CHECK(eig[0] == Approx(eps * eps).epsilon(1e-6));
}

TEST_CASE("binary entropy reference values", "[entropy]") {
  CHECK(binary_entropy(0.5) == Approx(1.0).margin(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(1.0 / 3.0) == Approx(kWValue).margin(1e-15));
  CHECK(binary_entropy(0.2) == Approx(binary_entropy(0.8)).margin(1e-15));
}

TEST_CASE("E of the GHZ, W and product states", "[entropy]") {
  const PureState ghz(3, {1, 0, 0, 0, 0, 0, 0, 1});
  const PureState w(3, {0, 1, 1, 0, 1, 0, 0, 0});
  const auto pg = measure(ghz);
  CHECK(pg.value == Approx(1.0).margin(1e-12));
  CHECK(pg.genuine);
  const auto pw = measure(w);
  CHECK(pw.value == Approx(0.918296).margin(1e-6));
  CHECK(pw.value == Approx(kWValue).margin(1e-12));
  for (double s : pw.entropies) CHECK(s == Approx(kWValue).margin(1e-12));
  const auto pp = measure(PureState::basis(3, 0));
  CHECK(pp.value == 0.0);
  CHECK_FALSE(pp.genuine);
}

TEST_CASE("a qubit that factors out forces E to zero", "[entropy]") {
  // (|00> + |11>)/sqrt2 (x) |0>
  const PureState bell0(3, {1, 0, 0, 0, 0, 0, 1, 0});
  const auto p = measure(bell0);
  CHECK(p.entropies[0] == Approx(1.0));
  CHECK(p.entropies[1] == Approx(1.0));
  CHECK(p.entropies[2] == Approx(0.0).margin(1e-15));
  CHECK(p.value == 0.0);
  CHECK_FALSE(p.genuine);
}

TEST_CASE("two-term states with a shared qubit value are separable", "[entropy]") {
  // W1 + W2 = |000> + |110>: qubit 3 is |0> throughout.
  const PureState s = build_state(TermCombination::parse("W1,W2"), std::vector<double>{0.6, 0.8},
                                  std::vector<double>{1.0});
  const auto p = measure(s);
  CHECK(p.entropies[0] == Approx(binary_entropy(0.36)));
  CHECK(p.entropies[1] == Approx(binary_entropy(0.36)));
  CHECK(p.value == 0.0);
}

TEST_CASE("the zero threshold decides genuineness", "[entropy]") {
  const double t = 1e-5;  // S_i ~ 3e-9
  const PureState s(3, {std::sqrt(1 - t * t), 0, 0, 0, 0, 0, 0, t});
  CHECK(measure(s).genuine);
  CHECK(measure(s, 1e-3).value == 0.0);
  CHECK_FALSE(measure(s, 1e-3).genuine);
}

TEST_CASE("qubit permutations permute the entropies", "[entropy][property]") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const auto v = oracle::random_vector(rng, 3);
    // swap qubits 1 and 3
    Amplitudes swapped(8);
    for (unsigned x = 0; x < 8; ++x) {
      const unsigned y = ((x & 1u) << 2) | (x & 2u) | ((x >> 2) & 1u);
      swapped[y] = v[x];
    }
    const auto a = measure(from_oracle(v, 3));
    const auto b = measure(PureState(3, swapped));
    CHECK(a.entropies[0] == Approx(b.entropies[2]).margin(1e-12));
    CHECK(a.entropies[1] == Approx(b.entropies[1]).margin(1e-12));
    CHECK(a.entropies[2] == Approx(b.entropies[0]).margin(1e-12));
    CHECK(a.value == Approx(b.value).margin(1e-12));
    CHECK(a.value == Approx(oracle::mean_entropy(v, 3)).margin(1e-12));
  }
}

TEST_CASE("the four-term closed form matches the pipeline", "[entropy]") {
  const auto c = TermCombination::parse("W2,W3,W4,W4bar");
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 2 * std::numbers::pi);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> m(4);
    for (auto& x : m) x = std::abs(g(rng));
    double n = 0.0;
    for (double x : m) n += x * x;
    for (auto& x : m) x /= std::sqrt(n);
    const std::vector<double> p{ph(rng), ph(rng), ph(rng)};
    const double pipeline = oracle::mean_entropy(
        Eigen::Map<const oracle::Vec>(build_state(c, m, p).amplitudes().data(), 8), 3);
    CHECK(measure_closed_form_iii4(m[0], m[1], m[2], m[3]) == Approx(pipeline).margin(1e-10));
  }
  std::vector<double> paper{0.462175, 0.462175, 0.653614, 0.381546};
  double n = 0.0;
  for (double x : paper) n += x * x;
  for (double& x : paper) x /= std::sqrt(n);
  CHECK(measure_closed_form_iii4(paper[0], paper[1], paper[2], paper[3]) == Approx(0.893295).margin(1e-6));
  CHECK_THROWS_AS(measure_closed_form_iii4(0.5, 0.5, 0.5, 0.6), std::invalid_argument);
}

TEST_CASE("reduced_density rejects qubits outside the register", "[entropy]") {
  const PureState s = PureState::basis(3, 0);
  CHECK_THROWS_AS(reduced_density(s, 0), std::out_of_range);
  CHECK_THROWS_AS(reduced_density(s, 4), std::out_of_range);
}
