#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "oracles.hpp"
#include "triqubit/classifier.hpp"
#include "triqubit/entropy.hpp"

using namespace triqubit;
using Catch::Approx;

namespace {

std::map<std::string, std::size_t> label_counts(int k) {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : enumerate_combinations(k)) ++counts[classify_type(c).name()];
  return counts;
}

}  // namespace

TEST_CASE("enumeration covers every subset once", "[classifier]") {
  const std::size_t binom[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  for (int k = 2; k <= 8; ++k) {
    const auto all = enumerate_combinations(k);
    CHECK(all.size() == binom[k]);
    std::set<std::uint8_t> masks;
    for (const auto& c : all) {
      CHECK(c.size() == static_cast<std::size_t>(k));
      masks.insert(c.mask());
    }
    CHECK(masks.size() == all.size());
  }
  CHECK_THROWS_AS(enumerate_combinations(1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_combinations(9), std::invalid_argument);
}

TEST_CASE("type counts per k", "[classifier]") {
  using M = std::map<std::string, std::size_t>;
  CHECK(label_counts(2) == M{{"PartSep2", 12}, {"FullSep2", 12}, {"GHZ2", 4}});
  CHECK(label_counts(3) == M{{"PartSep3", 24}, {"Mixed3", 24}, {"W3", 8}});
  CHECK(label_counts(4) == M{{"PartSep4", 6}, {"I4", 6}, {"II4", 2}, {"III4", 24}, {"IV4", 24}, {"V4", 8}});
  CHECK(label_counts(5) == M{{"I5", 8}, {"II5", 24}, {"III5", 24}});
  CHECK(label_counts(6) == M{{"Generic6", 28}});
  CHECK(label_counts(7) == M{{"Generic7", 8}});
  CHECK(label_counts(8) == M{{"Generic8", 1}});
}

TEST_CASE("named representatives get the expected labels", "[classifier]") {
  CHECK(classify_type(TermCombination::parse("W2,W3,W4,W4bar")).kind == TypeKind::kIII4);
  CHECK(classify_type(TermCombination::parse("W1,W2,W1bar,W2bar")).kind == TypeKind::kI4);
  CHECK(classify_type(TermCombination::parse("W1,W2,W3,W4")).kind == TypeKind::kII4);
  CHECK(classify_type(TermCombination::parse("W1,W2,W1bar,W4bar")).kind == TypeKind::kIV4);
  CHECK(classify_type(TermCombination::parse("W1,W2,W3,W4bar")).kind == TypeKind::kV4);
  CHECK(classify_type(TermCombination::parse("W2bar,W3bar,W4bar")).kind == TypeKind::kW3);
  CHECK(classify_type(TermCombination::parse("W1,W1bar")).kind == TypeKind::kGhz2);
  CHECK(classify_type(TermCombination::parse("W1,W2,W3,W4,W1bar")).kind == TypeKind::kI5);
}

TEST_CASE("the symmetry group has 48 distinct elements and is closed", "[classifier]") {
  const auto& g = symmetry_group();
  std::set<std::vector<unsigned>> tables;
  for (const auto& e : g) {
    std::vector<unsigned> t;
    for (unsigned b = 0; b < 8; ++b) t.push_back(e.apply(b));
    std::set<unsigned> image(t.begin(), t.end());
    CHECK(image.size() == 8);
    tables.insert(t);
  }
  CHECK(tables.size() == 48);
  for (const auto& a : g) {
    for (const auto& b : g) {
      std::vector<unsigned> t;
      for (unsigned x = 0; x < 8; ++x) t.push_back(a.apply(b.apply(x)));
      CHECK(tables.count(t) == 1);
    }
  }
}

TEST_CASE("orbits agree with a breadth-first search over generators", "[classifier]") {
  for (unsigned m = 1; m < 256; ++m) {
    const auto c = TermCombination::from_mask(static_cast<std::uint8_t>(m));
    const auto orb = oracle::orbit(static_cast<std::uint8_t>(m));
    CHECK(orbit_size(c) == orb.size());
    const auto rep = symmetry_canonicalize(c).representative;
    CHECK(orb.count(rep.mask()) == 1);
    for (std::uint8_t other : orb) {
      CHECK(symmetry_canonicalize(TermCombination::from_mask(other)).representative == rep);
    }
  }
}

TEST_CASE("labels are constant on orbits and E is invariant under the symmetries", "[classifier][property]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.1, 1.0), ph(0.0, 2 * std::numbers::pi);
  for (unsigned m = 3; m < 256; m += 5) {
    const auto c = TermCombination::from_mask(static_cast<std::uint8_t>(m));
    if (c.size() < 2) continue;
    std::vector<double> mod(c.size()), phase(c.size());
    for (auto& x : mod) x = u(rng);
    for (auto& x : phase) x = ph(rng);
    const PureState s = build_state(c, mod, phase);
    const double e = measure(s).value;
    for (const auto& g : symmetry_group()) {
      const auto image = g.apply(c);
      CHECK(classify_type(image) == classify_type(c));
      // Same coefficients carried to the image terms.
      Amplitudes amps(8);
      for (std::size_t j = 0; j < c.size(); ++j) amps[g.apply(c[j]).bits()] = s[c[j].bits()];
      CHECK(measure(PureState(3, amps)).value == Approx(e).margin(1e-12));
    }
  }
}

TEST_CASE("structural separability agrees with the entropies", "[classifier][property]") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 1.0), ph(0.0, 2 * std::numbers::pi);
  for (int k = 2; k <= 8; ++k) {
    for (const auto& c : enumerate_combinations(k)) {
      const auto sep = separability_class(c);
      std::vector<double> mod(c.size()), phase(c.size());
      for (auto& x : mod) x = u(rng);
      for (auto& x : phase) x = ph(rng);
      const auto p = measure(build_state(c, mod, phase));
      std::size_t zeros = 0;
      for (double s : p.entropies) zeros += s < 1e-12 ? 1 : 0;
      CHECK(zeros == sep.fixed_qubits.size() + (sep.fixed_qubits.size() == 2 ? 1 : 0));
      CHECK((sep.kind == Separability::kGenuine) == p.genuine);
      CHECK((sep.kind == Separability::kFullySeparable) == (zeros == 3));
    }
  }
}

TEST_CASE("stabilizer permutations map the combination to itself", "[classifier]") {
  const auto c = TermCombination::parse("W1,W2,W1bar,W2bar");
  const auto perms = stabilizer_permutations(c);
  // Swapping qubits 1 and 2 fixes every term here, so term permutations
  // are a quotient of the stabilizer.
  CHECK(perms.size() == 4);
  CHECK((48 / orbit_size(c)) % perms.size() == 0);
  CHECK(std::find(perms.begin(), perms.end(), std::vector<std::size_t>{0, 1, 2, 3}) != perms.end());
  for (const auto& p : perms) {
    std::set<std::size_t> image(p.begin(), p.end());
    CHECK(image.size() == c.size());
  }
}

TEST_CASE("two- and three-term surveys", "[classifier]") {
  OptConfig cfg;
  cfg.num_starts = 30;
  const auto two = survey(2, cfg);
  CHECK(two.total() == 28);
  const auto* ghz = two.find(TypeKind::kGhz2);
  REQUIRE(ghz);
  CHECK(ghz->count == 4);
  CHECK(ghz->has_interior());
  CHECK(ghz->witness()->value == Approx(1.0).margin(1e-10));
  CHECK(two.find(TypeKind::kFullSep2)->separability == Separability::kFullySeparable);
  CHECK_FALSE(two.find(TypeKind::kPartSep2)->orbits.front().optimized);

  const auto three = survey(3, cfg);
  CHECK(three.total() == 56);
  CHECK(three.find(TypeKind::kW3)->witness()->value == Approx(std::log2(3.0) - 2.0 / 3.0).margin(1e-9));
  CHECK_FALSE(three.find(TypeKind::kMixed3)->has_interior());
  CHECK(three.find(TypeKind::kMixed3)->separability == Separability::kGenuine);
}
