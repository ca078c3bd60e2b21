#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "triqubit/state.hpp"

using namespace triqubit;
using Catch::Approx;

TEST_CASE("basis terms map to their kets", "[state]") {
  const char* kets[8] = {"000", "110", "101", "011", "111", "001", "010", "100"};
  for (int o = 0; o < 8; ++o) {
    const BasisTerm t = BasisTerm::from_ordinal(o);
    CHECK(t.ket() == kets[o]);
    CHECK(t.bits() == oracle::kTermKets[o]);
    CHECK(BasisTerm::from_bits(t.bits()) == t);
    CHECK(t.ordinal() == o);
  }
}

TEST_CASE("bar is an involution and complements the bits", "[state]") {
  for (int o = 0; o < 8; ++o) {
    const BasisTerm t = BasisTerm::from_ordinal(o);
    CHECK(t.bar().bar() == t);
    CHECK(t.bar() != t);
    CHECK((t.bar().bits() ^ t.bits()) == 0b111u);
  }
}

TEST_CASE("term labels parse case-insensitively", "[state]") {
  CHECK(BasisTerm::parse("W3") == BasisTerm{3, false});
  CHECK(BasisTerm::parse("w3") == BasisTerm{3, false});
  CHECK(BasisTerm::parse("W4bar") == BasisTerm{4, true});
  CHECK(BasisTerm::parse("w4BAR") == BasisTerm{4, true});
  CHECK(BasisTerm{2, true}.label() == "W2bar");
  for (const char* bad : {"", "W", "W0", "W5", "X1", "W1b", "W12", "W1barr"}) {
    CHECK_THROWS_AS(BasisTerm::parse(bad), std::invalid_argument);
  }
  CHECK_THROWS_AS(BasisTerm::from_ordinal(8), std::invalid_argument);
  CHECK_THROWS_AS(BasisTerm::from_bits(8), std::invalid_argument);
}

TEST_CASE("combinations are kept in canonical order", "[state]") {
  const auto c = TermCombination::parse("W4bar, W2,w1BAR,W3");
  CHECK(c.to_string() == "W2,W3,W1bar,W4bar");
  CHECK(c.size() == 4);
  CHECK(c.position_of(BasisTerm{1, true}) == 2u);
  CHECK_FALSE(c.contains(BasisTerm{1, false}));
  CHECK_THROWS_AS(TermCombination::parse("W1,w1"), std::invalid_argument);
  CHECK_THROWS_AS(TermCombination::parse("W1,,W2"), std::invalid_argument);
  CHECK_THROWS_AS(TermCombination::parse("W1,W9"), std::invalid_argument);
  CHECK_THROWS_AS(TermCombination(std::vector<BasisTerm>{}), std::invalid_argument);
}

TEST_CASE("every mask round-trips through a combination", "[state]") {
  for (unsigned m = 1; m < 256; ++m) {
    const auto c = TermCombination::from_mask(static_cast<std::uint8_t>(m));
    CHECK(c.mask() == m);
    CHECK(TermCombination::parse(c.to_string()) == c);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i - 1] < c[i]);
  }
}

TEST_CASE("pure states are normalized on construction", "[state]") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int n = 2; n <= 6; ++n) {
    Amplitudes a(std::size_t{1} << n);
    for (auto& x : a) x = Complex(g(rng), g(rng));
    const PureState s(n, a);
    CHECK(std::abs(norm(s.amplitudes()) - 1.0) < 1e-12);
    const double scale = norm(a);
    CHECK(std::abs(s[3] - a[3] / scale) < 1e-14);
  }
  CHECK_THROWS_AS(PureState(3, Amplitudes(8)), std::invalid_argument);
  CHECK_THROWS_AS(PureState(3, Amplitudes(4, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(PureState(1, Amplitudes(2, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(PureState(kMaxQubits + 1, Amplitudes(std::size_t{1} << (kMaxQubits + 1), 1.0)),
                  std::invalid_argument);
}

TEST_CASE("normalize leaves unit vectors alone", "[state]") {
  const PureState ghz(3, {M_SQRT1_2, 0, 0, 0, 0, 0, 0, M_SQRT1_2});
  const PureState again = normalize(ghz);
  for (std::size_t i = 0; i < 8; ++i) CHECK(again[i] == ghz[i]);
  CHECK(PureState::basis(3, 5)[5] == Complex(1.0));
}

TEST_CASE("build_state places moduli and phases on the term kets", "[state]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0), ph(0.0, 2 * std::numbers::pi);
  for (unsigned m = 1; m < 256; m += 7) {
    const auto c = TermCombination::from_mask(static_cast<std::uint8_t>(m));
    std::vector<double> mod(c.size()), rel(c.size() - 1);
    for (auto& x : mod) x = u(rng);
    for (auto& x : rel) x = ph(rng);
    const PureState s = build_state(c, mod, rel);
    double n2 = 0.0;
    for (double x : mod) n2 += x * x;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double phase = j == 0 ? 0.0 : rel[j - 1];
      const Complex expect = std::polar(mod[j] / std::sqrt(n2), phase);
      CHECK(std::abs(s[oracle::kTermKets[c[j].ordinal()]] - expect) < 1e-14);
    }
    if (c.size() >= 2) {
      const auto back_m = term_moduli(s, c);
      const auto back_p = term_phases(s, c);
      for (std::size_t j = 0; j < c.size(); ++j) CHECK(back_m[j] == Approx(mod[j] / std::sqrt(n2)).margin(1e-14));
      for (std::size_t j = 0; j + 1 < c.size(); ++j) CHECK(back_p[j] == Approx(rel[j]).margin(1e-12));
    }
  }
}

TEST_CASE("build_state treats a full phase list as carrying a global phase", "[state]") {
  const auto c = TermCombination::parse("W2,W3,W4");
  const std::vector<double> m{1.0, 2.0, 3.0};
  const PureState full = build_state(c, m, std::vector<double>{0.7, 1.2, 2.0});
  const PureState rel = build_state(c, m, std::vector<double>{0.5, 1.3});
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(full[i] - rel[i]) < 1e-14);
  CHECK_THROWS_AS(build_state(c, m, std::vector<double>{0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_state(c, std::vector<double>{1.0, -1.0, 1.0}, std::vector<double>{0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_state(c, std::vector<double>{0, 0, 0}, std::vector<double>{0, 0}), std::invalid_argument);
}

TEST_CASE("H on every qubit maps GHZ to the even-parity superposition", "[state]") {
  const PureState ghz(3, {M_SQRT1_2, 0, 0, 0, 0, 0, 0, M_SQRT1_2});
  const auto op = LocalOperator::uniform(gates::hadamard(), 3);
  const PureState image = apply_local_operator(ghz, op, RequireInvertible::kYes).normalized();
  const oracle::Mat big = oracle::kron({gates::hadamard(), gates::hadamard(), gates::hadamard()});
  const oracle::Vec expect = big * Eigen::Map<const oracle::Vec>(ghz.amplitudes().data(), 8);
  for (std::size_t x = 0; x < 8; ++x) {
    const bool even = __builtin_popcount(static_cast<unsigned>(x)) % 2 == 0;
    CHECK(std::abs(image[x] - Complex(even ? 0.5 : 0.0)) < 1e-14);
    CHECK(std::abs(image[x] - expect[static_cast<Eigen::Index>(x)]) < 1e-14);
  }
}

TEST_CASE("local operators agree with the explicit Kronecker product", "[state]") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Mat2> f;
      for (int q = 0; q < n; ++q) f.push_back(oracle::random_matrix(rng));
      const oracle::Vec v = oracle::random_vector(rng, n);
      const auto got = apply_kronecker(LocalOperator(f), oracle::to_std(v));
      const oracle::Vec expect = oracle::kron(f) * v;
      for (Eigen::Index i = 0; i < expect.size(); ++i) {
        CHECK(std::abs(got[static_cast<std::size_t>(i)] - expect[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("local operator action is linear", "[state][property]") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Mat2> f;
    for (int q = 0; q < 3; ++q) f.push_back(oracle::random_matrix(rng));
    const LocalOperator op(f);
    const auto u = oracle::to_std(oracle::random_vector(rng, 3));
    const auto v = oracle::to_std(oracle::random_vector(rng, 3));
    const Complex alpha(0.3, -1.1), beta(-2.0, 0.4);
    Amplitudes mix(8);
    for (std::size_t i = 0; i < 8; ++i) mix[i] = alpha * u[i] + beta * v[i];
    const auto lhs = apply_kronecker(op, mix);
    const auto au = apply_kronecker(op, u), av = apply_kronecker(op, v);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(lhs[i] - (alpha * au[i] + beta * av[i])) < 1e-12);
  }
}

TEST_CASE("invertible and unitary flags", "[state]") {
  Mat2 singular;
  singular << 1, 2, 2, 4;
  const PureState ghz(3, {1, 0, 0, 0, 0, 0, 0, 1});
  const LocalOperator bad({Mat2::Identity(), singular, Mat2::Identity()});
  CHECK_FALSE(bad.invertible());
  CHECK_THROWS_AS(apply_local_operator(ghz, bad, RequireInvertible::kYes), std::invalid_argument);
  CHECK_NOTHROW(apply_local_operator(ghz, bad));
  CHECK(LocalOperator::uniform(gates::hadamard(), 3).unitary());
  CHECK(LocalOperator::identity(3).unitary());
  Mat2 d = Mat2::Identity();
  d(0, 0) = 2.0;
  CHECK(LocalOperator({d, Mat2::Identity(), Mat2::Identity()}).invertible());
  CHECK_FALSE(LocalOperator({d, Mat2::Identity(), Mat2::Identity()}).unitary());
  CHECK_THROWS_AS(apply_local_operator(ghz, LocalOperator::identity(2)), std::invalid_argument);
}

TEST_CASE("an operator annihilating the state leaves nothing to normalize", "[state]") {
  Mat2 p0 = Mat2::Zero();
  p0(0, 0) = 1.0;
  const PureState one = PureState::basis(2, 3);
  const auto image = apply_local_operator(one, LocalOperator({p0, Mat2::Identity()}));
  CHECK(image.norm == 0.0);
  CHECK_THROWS_AS(image.normalized(), std::invalid_argument);
}
