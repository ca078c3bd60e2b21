#include "triqubit/state.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

namespace triqubit {

namespace {

constexpr unsigned kUnbarredBits[4] = {0b000, 0b110, 0b101, 0b011};

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

}  // namespace

// ---------------------------------------------------------------- BasisTerm

BasisTerm BasisTerm::from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal > 7) throw std::invalid_argument("basis term ordinal out of range");
  return {ordinal % 4 + 1, ordinal >= 4};
}

BasisTerm BasisTerm::from_bits(unsigned bits) {
  if (bits > 7) throw std::invalid_argument("basis term bit string out of range");
  for (int i = 0; i < 4; ++i) {
    if (kUnbarredBits[i] == bits) return {i + 1, false};
    if ((kUnbarredBits[i] ^ 0b111u) == bits) return {i + 1, true};
  }
  throw std::logic_error("unreachable");
}

BasisTerm BasisTerm::parse(std::string_view label) {
  const std::string s = lowercase(trim(label));
  const bool barred = s.size() == 5 && s.ends_with("bar");
  if (!(s.size() == 2 || barred) || s[0] != 'w' || s[1] < '1' || s[1] > '4') {
    throw std::invalid_argument("unknown term label '" + std::string(label) + "'");
  }
  return {s[1] - '0', barred};
}

unsigned BasisTerm::bits() const noexcept {
  const unsigned b = kUnbarredBits[index - 1];
  return barred ? b ^ 0b111u : b;
}

std::string BasisTerm::label() const {
  return "W" + std::to_string(index) + (barred ? "bar" : "");
}

std::string BasisTerm::ket() const {
  const unsigned b = bits();
  std::string s(3, '0');
  for (int q = 0; q < 3; ++q) s[q] = ((b >> (2 - q)) & 1u) ? '1' : '0';
  return s;
}

// ---------------------------------------------------------- TermCombination

TermCombination::TermCombination(std::vector<BasisTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty() || terms_.size() > 8) {
    throw std::invalid_argument("a term combination holds between 1 and 8 terms");
  }
  for (const auto& t : terms_) {
    if (t.index < 1 || t.index > 4) throw std::invalid_argument("term index must be in 1..4");
  }
  std::sort(terms_.begin(), terms_.end());
  if (std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
    throw std::invalid_argument("duplicate term in combination");
  }
}

TermCombination TermCombination::from_mask(std::uint8_t mask) {
  std::vector<BasisTerm> terms;
  for (int j = 0; j < 8; ++j) {
    if (mask & (1u << j)) terms.push_back(BasisTerm::from_ordinal(j));
  }
  return TermCombination(std::move(terms));
}

TermCombination TermCombination::parse(std::string_view list) {
  std::vector<BasisTerm> terms;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto piece = list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    if (trim(piece).empty()) throw std::invalid_argument("empty term label in list");
    const BasisTerm term = BasisTerm::parse(piece);
    if (std::find(terms.begin(), terms.end(), term) != terms.end()) {
      throw std::invalid_argument("duplicate term label '" + term.label() + "'");
    }
    terms.push_back(term);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return TermCombination(std::move(terms));
}

std::uint8_t TermCombination::mask() const noexcept {
  std::uint8_t m = 0;
  for (const auto& t : terms_) m = static_cast<std::uint8_t>(m | (1u << t.ordinal()));
  return m;
}

std::optional<std::size_t> TermCombination::position_of(BasisTerm term) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i] == term) return i;
  }
  return std::nullopt;
}

std::string TermCombination::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += ',';
    out += terms_[i].label();
  }
  return out;
}

// ---------------------------------------------------------------- PureState

double norm(std::span<const Complex> amplitudes) {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

PureState::PureState(int num_qubits, Amplitudes amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits < 2 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("num_qubits must be in [2, " + std::to_string(kMaxQubits) + "]");
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
  }
  const double n = norm(amplitudes_);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero vector");
  if (std::abs(n - 1.0) > 1e-15) {
    for (auto& a : amplitudes_) a /= n;
  }
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  if (num_qubits < 2 || num_qubits > kMaxQubits || index >= (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("basis index out of range");
  }
  Amplitudes a(std::size_t{1} << num_qubits, Complex{});
  a[index] = 1.0;
  return PureState(num_qubits, std::move(a));
}

PureState normalize(int num_qubits, Amplitudes amplitudes) {
  return PureState(num_qubits, std::move(amplitudes));
}

PureState normalize(const PureState& state) {
  return PureState(state.num_qubits(), state.amplitudes());
}

PureState build_state(const TermCombination& combination, std::span<const double> moduli,
                      std::span<const double> phases) {
  const std::size_t k = combination.size();
  if (moduli.size() != k) throw std::invalid_argument("moduli length must match the combination");
  if (phases.size() != k && phases.size() + 1 != k) {
    throw std::invalid_argument("phases must have k or k-1 entries");
  }
  if (std::any_of(moduli.begin(), moduli.end(), [](double m) { return !(m >= 0.0); })) {
    throw std::invalid_argument("moduli must be nonnegative");
  }
  const double global = phases.size() == k ? phases[0] : 0.0;
  Amplitudes amps(8, Complex{});
  for (std::size_t j = 0; j < k; ++j) {
    double phi = 0.0;
    if (phases.size() == k) {
      phi = phases[j] - global;
    } else if (j > 0) {
      phi = phases[j - 1];
    }
    amps[combination[j].bits()] = std::polar(moduli[j], phi);
  }
  if (norm(amps) == 0.0) throw std::invalid_argument("all moduli are zero");
  return PureState(kTriqubits, std::move(amps));
}

std::vector<double> term_moduli(const PureState& state, const TermCombination& combination) {
  if (state.num_qubits() != kTriqubits) throw std::invalid_argument("term moduli need a triqubit state");
  std::vector<double> out;
  out.reserve(combination.size());
  for (const auto& t : combination.terms()) out.push_back(std::abs(state[t.bits()]));
  return out;
}

std::vector<double> term_phases(const PureState& state, const TermCombination& combination) {
  if (state.num_qubits() != kTriqubits) throw std::invalid_argument("term phases need a triqubit state");
  const double ref = std::arg(state[combination[0].bits()]);
  std::vector<double> out;
  for (std::size_t j = 1; j < combination.size(); ++j) {
    out.push_back(wrap_phase(std::arg(state[combination[j].bits()]) - ref));
  }
  return out;
}

// ------------------------------------------------------------ LocalOperator

LocalOperator::LocalOperator(std::vector<Mat2> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("local operator needs at least one factor");
}

LocalOperator LocalOperator::identity(int num_qubits) {
  return uniform(Mat2::Identity(), num_qubits);
}

LocalOperator LocalOperator::uniform(const Mat2& factor, int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("num_qubits must be positive");
  return LocalOperator(std::vector<Mat2>(static_cast<std::size_t>(num_qubits), factor));
}

bool LocalOperator::invertible(double det_tol) const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const Mat2& m) { return std::abs(m.determinant()) > det_tol; });
}

bool LocalOperator::unitary(double tol) const {
  return std::all_of(factors_.begin(), factors_.end(), [&](const Mat2& m) {
    return (m * m.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
  });
}

namespace gates {

Mat2 hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  Mat2 h;
  h << s, s, s, -s;
  return h;
}

Mat2 pauli_x() {
  Mat2 x;
  x << 0, 1, 1, 0;
  return x;
}

}  // namespace gates

Amplitudes apply_kronecker(const LocalOperator& op, std::span<const Complex> amplitudes) {
  const int n = op.num_qubits();
  if (amplitudes.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("operator has " + std::to_string(n) +
                                " factors but the vector does not have 2^" + std::to_string(n) +
                                " entries");
  }
  Amplitudes v(amplitudes.begin(), amplitudes.end());
  for (int q = 1; q <= n; ++q) {
    const Mat2& m = op.factor(q);
    const std::size_t stride = std::size_t{1} << (n - q);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i & stride) continue;
      const Complex lo = v[i];
      const Complex hi = v[i | stride];
      v[i] = m(0, 0) * lo + m(0, 1) * hi;
      v[i | stride] = m(1, 0) * lo + m(1, 1) * hi;
    }
  }
  return v;
}

LocalImage apply_local_operator(const PureState& state, const LocalOperator& op,
                                RequireInvertible require) {
  if (op.num_qubits() != state.num_qubits()) {
    throw std::invalid_argument("local operator and state have different qubit counts");
  }
  if (require == RequireInvertible::kYes && !op.invertible()) {
    throw std::invalid_argument("local operator has a singular factor");
  }
  LocalImage image;
  image.amplitudes = apply_kronecker(op, state.amplitudes());
  image.norm = norm(image.amplitudes);
  image.num_qubits = state.num_qubits();
  return image;
}

}  // namespace triqubit
