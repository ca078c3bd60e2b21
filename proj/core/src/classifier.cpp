#include "triqubit/classifier.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "triqubit/entropy.hpp"

namespace triqubit {

const char* to_string(Separability s) {
  switch (s) {
    case Separability::kFullySeparable: return "fully separable";
    case Separability::kPartiallySeparable: return "partially separable";
    case Separability::kGenuine: return "genuine";
  }
  return "?";
}

std::vector<int> fixed_qubits(const TermCombination& combination) {
  std::vector<int> fixed;
  for (int q = 1; q <= kTriqubits; ++q) {
    const unsigned bit = 1u << (kTriqubits - q);
    const unsigned first = combination[0].bits() & bit;
    const bool constant = std::all_of(combination.terms().begin(), combination.terms().end(),
                                      [&](const BasisTerm& t) { return (t.bits() & bit) == first; });
    if (constant) fixed.push_back(q);
  }
  return fixed;
}

SeparabilityClass separability_class(const TermCombination& combination) {
  SeparabilityClass out;
  out.fixed_qubits = fixed_qubits(combination);
  if (out.fixed_qubits.size() >= static_cast<std::size_t>(kTriqubits - 1)) {
    out.kind = Separability::kFullySeparable;
    return out;
  }
  if (!out.fixed_qubits.empty()) {
    out.kind = Separability::kPartiallySeparable;
    return out;
  }
  std::mt19937_64 rng(0x5eedu + combination.mask());
  std::uniform_real_distribution<double> modulus(0.1, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  const std::size_t k = combination.size();
  for (int draw = 0; draw < 3; ++draw) {
    std::vector<double> m(k), p(k - 1);
    for (auto& v : m) v = modulus(rng);
    for (auto& v : p) v = phase(rng);
    const auto profile = measure(build_state(combination, m, p), 1e-9);
    if (profile.genuine) return out;
  }
  out.kind = Separability::kPartiallySeparable;
  return out;
}

// -------------------------------------------------------------------- labels

std::string TypeLabel::name() const {
  switch (kind) {
    case TypeKind::kGhz2: return "GHZ2";
    case TypeKind::kFullSep2: return "FullSep2";
    case TypeKind::kPartSep2: return "PartSep2";
    case TypeKind::kW3: return "W3";
    case TypeKind::kMixed3: return "Mixed3";
    case TypeKind::kPartSep3: return "PartSep3";
    case TypeKind::kI4: return "I4";
    case TypeKind::kII4: return "II4";
    case TypeKind::kIII4: return "III4";
    case TypeKind::kIV4: return "IV4";
    case TypeKind::kV4: return "V4";
    case TypeKind::kPartSep4: return "PartSep4";
    case TypeKind::kI5: return "I5";
    case TypeKind::kII5: return "II5";
    case TypeKind::kIII5: return "III5";
    case TypeKind::kGenericK: return "Generic" + std::to_string(k);
  }
  return "?";
}

namespace {

struct IndexSets {
  unsigned plain = 0;   // bit i-1 set when W_i is present
  unsigned barred = 0;  // bit i-1 set when Wbar_i is present
};

IndexSets index_sets(const TermCombination& combination) {
  IndexSets s;
  for (const auto& t : combination.terms()) (t.barred ? s.barred : s.plain) |= 1u << (t.index - 1);
  return s;
}

int popcount(unsigned x) { return __builtin_popcount(x); }

// Pattern rules on the unbarred/barred index sets, symmetric under swapping
// the two (global complement).
TypeKind label_of(const TermCombination& combination) {
  const IndexSets s = index_sets(combination);
  const int k = static_cast<int>(combination.size());
  unsigned big = s.plain, small = s.barred;
  if (popcount(big) < popcount(small)) std::swap(big, small);
  const int nb = popcount(big), ns = popcount(small), shared = popcount(big & small);
  switch (k) {
    case 2:
      if (nb == 2) return TypeKind::kPartSep2;
      return shared == 1 ? TypeKind::kGhz2 : TypeKind::kFullSep2;
    case 3:
      if (nb == 3) return TypeKind::kW3;
      return shared == 1 ? TypeKind::kMixed3 : TypeKind::kPartSep3;
    case 4:
      if (nb == 4) return TypeKind::kII4;
      if (nb == 3) return shared == 1 ? TypeKind::kIII4 : TypeKind::kV4;
      if (shared == 2) return TypeKind::kI4;
      return shared == 1 ? TypeKind::kIV4 : TypeKind::kPartSep4;
    case 5:
      if (nb == 4) return TypeKind::kI5;
      return shared == 2 ? TypeKind::kII5 : TypeKind::kIII5;
    default:
      (void)ns;
      return TypeKind::kGenericK;
  }
}

}  // namespace

TypeLabel classify_type(const TermCombination& combination) {
  const auto canonical = symmetry_canonicalize(combination);
  return {label_of(canonical.representative), static_cast<int>(combination.size())};
}

// ------------------------------------------------------------------ symmetry

unsigned SymmetryElement::apply(unsigned bits) const noexcept {
  unsigned out = 0;
  for (int q = 0; q < 3; ++q) {
    const unsigned b = (bits >> (2 - q)) & 1u;
    out |= b << (2 - perm[q]);
  }
  return out ^ flips;
}

BasisTerm SymmetryElement::apply(BasisTerm term) const {
  return BasisTerm::from_bits(apply(term.bits()));
}

TermCombination SymmetryElement::apply(const TermCombination& combination) const {
  std::vector<BasisTerm> image;
  image.reserve(combination.size());
  for (const auto& t : combination.terms()) image.push_back(apply(t));
  return TermCombination(std::move(image));
}

const std::array<SymmetryElement, 48>& symmetry_group() {
  static const std::array<SymmetryElement, 48> group = [] {
    std::array<SymmetryElement, 48> g{};
    std::array<int, 3> perm{0, 1, 2};
    std::size_t n = 0;
    do {
      for (unsigned flips = 0; flips < 8; ++flips) g[n++] = SymmetryElement{perm, flips};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g;
  }();
  return group;
}

namespace {

std::vector<int> ordinals(const TermCombination& c) {
  std::vector<int> out;
  for (const auto& t : c.terms()) out.push_back(t.ordinal());
  return out;
}

}  // namespace

CanonicalForm symmetry_canonicalize(const TermCombination& combination) {
  const auto& group = symmetry_group();
  std::size_t best = 0;
  TermCombination best_image = group[0].apply(combination);
  std::vector<int> best_key = ordinals(best_image);
  for (std::size_t e = 1; e < group.size(); ++e) {
    TermCombination image = group[e].apply(combination);
    auto key = ordinals(image);
    if (key < best_key) {
      best = e;
      best_key = std::move(key);
      best_image = std::move(image);
    }
  }
  return {std::move(best_image), best};
}

std::size_t orbit_size(const TermCombination& combination) {
  std::vector<std::uint8_t> seen;
  for (const auto& e : symmetry_group()) seen.push_back(e.apply(combination).mask());
  std::sort(seen.begin(), seen.end());
  return static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

std::vector<std::vector<std::size_t>> stabilizer_permutations(const TermCombination& combination) {
  std::vector<std::vector<std::size_t>> perms;
  for (const auto& e : symmetry_group()) {
    if (e.apply(combination).mask() != combination.mask()) continue;
    std::vector<std::size_t> map(combination.size());
    for (std::size_t p = 0; p < combination.size(); ++p) {
      map[p] = *combination.position_of(e.apply(combination[p]));
    }
    if (std::find(perms.begin(), perms.end(), map) == perms.end()) perms.push_back(std::move(map));
  }
  return perms;
}

std::vector<TermCombination> enumerate_combinations(int k) {
  if (k < 2 || k > 8) throw std::invalid_argument("k must be in 2..8");
  std::vector<TermCombination> out;
  for (unsigned mask = 0; mask < 256; ++mask) {
    if (popcount(mask) == k) out.push_back(TermCombination::from_mask(static_cast<std::uint8_t>(mask)));
  }
  return out;
}

// -------------------------------------------------------------------- survey

bool SurveyEntry::has_interior() const {
  return std::any_of(orbits.begin(), orbits.end(),
                     [](const OrbitOutcome& o) { return o.extrema.has_interior(); });
}

const OptResult* SurveyEntry::witness() const {
  const OptResult* best = nullptr;
  for (const auto& o : orbits) {
    const OptResult* w = o.extrema.best_interior();
    if (w && (!best || w->value > best->value)) best = w;
  }
  return best;
}

std::size_t SurveyReport::total() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.count;
  return n;
}

const SurveyEntry* SurveyReport::find(TypeKind kind) const {
  for (const auto& e : entries) {
    if (e.label.kind == kind) return &e;
  }
  return nullptr;
}

SurveyReport survey(int k, const OptConfig& config) {
  config.validate();
  SurveyReport report;
  report.k = k;

  std::map<TypeKind, SurveyEntry> entries;
  std::map<std::uint8_t, std::size_t> orbit_members;  // representative mask -> count
  for (const auto& combination : enumerate_combinations(k)) {
    const TypeLabel label = classify_type(combination);
    auto& entry = entries[label.kind];
    entry.label = label;
    ++entry.count;
    ++orbit_members[symmetry_canonicalize(combination).representative.mask()];
  }

  for (const auto& [mask, members] : orbit_members) {
    const TermCombination representative = TermCombination::from_mask(mask);
    auto& entry = entries[classify_type(representative).kind];
    OrbitOutcome outcome{representative, members, false, {}};
    const SeparabilityClass sep = separability_class(representative);
    entry.separability = sep.kind;
    if (sep.kind == Separability::kGenuine) {
      outcome.extrema = maximize(representative, config);
      outcome.optimized = true;
    }
    entry.orbits.push_back(std::move(outcome));
  }

  for (auto& [kind, entry] : entries) report.entries.push_back(std::move(entry));
  return report;
}

}  // namespace triqubit
