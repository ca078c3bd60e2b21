#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace triqubit {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr int kTriqubits = 3;
inline constexpr int kMaxQubits = 10;

/// One of the eight labelled triqubit kets. The unbarred terms are the
/// even-parity strings W1=000, W2=110, W3=101, W4=011; a barred term is the
/// bitwise complement of its partner.
///
/// Bit strings are read with qubit 1 (particle A) as the most significant bit.
struct BasisTerm {
  int index = 1;
  bool barred = false;

  /// Ordinal in canonical order: W1..W4 -> 0..3, W1bar..W4bar -> 4..7.
  static BasisTerm from_ordinal(int ordinal);
  static BasisTerm from_bits(unsigned bits);
  /// Accepts "W3", "w3", "W3bar", "W3BAR".
  static BasisTerm parse(std::string_view label);

  [[nodiscard]] int ordinal() const noexcept { return (barred ? 4 : 0) + index - 1; }
  [[nodiscard]] unsigned bits() const noexcept;
  [[nodiscard]] BasisTerm bar() const noexcept { return {index, !barred}; }
  [[nodiscard]] std::string label() const;
  /// Bit string such as "110".
  [[nodiscard]] std::string ket() const;

  friend bool operator==(const BasisTerm& a, const BasisTerm& b) noexcept {
    return a.ordinal() == b.ordinal();
  }
  friend std::strong_ordering operator<=>(const BasisTerm& a, const BasisTerm& b) noexcept {
    return a.ordinal() <=> b.ordinal();
  }
};

/// A set of distinct basis terms in canonical order (unbarred before barred,
/// then by index). Describes the family of states spanned by those kets.
class TermCombination {
 public:
  explicit TermCombination(std::vector<BasisTerm> terms);

  /// Bit j of `mask` selects the term with ordinal j.
  static TermCombination from_mask(std::uint8_t mask);
  /// Comma separated labels, e.g. "W2,W3,W4,W4bar".
  static TermCombination parse(std::string_view list);

  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] const std::vector<BasisTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] const BasisTerm& operator[](std::size_t i) const { return terms_[i]; }
  [[nodiscard]] std::uint8_t mask() const noexcept;
  [[nodiscard]] std::optional<std::size_t> position_of(BasisTerm term) const noexcept;
  [[nodiscard]] bool contains(BasisTerm term) const noexcept { return position_of(term).has_value(); }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const TermCombination& a, const TermCombination& b) noexcept {
    return a.mask() == b.mask();
  }

 private:
  std::vector<BasisTerm> terms_;
};

/// Unit-norm amplitude vector over 2^N computational basis states.
class PureState {
 public:
  /// Normalizes `amplitudes`; throws std::invalid_argument on a zero vector,
  /// a length other than 2^num_qubits, or num_qubits outside [2, kMaxQubits].
  PureState(int num_qubits, Amplitudes amplitudes);

  static PureState basis(int num_qubits, std::size_t index);

  [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  int num_qubits_;
  Amplitudes amplitudes_;
};

[[nodiscard]] double norm(std::span<const Complex> amplitudes);

/// Rescales to unit norm. A vector already normalized to within one ulp is
/// returned unchanged.
[[nodiscard]] PureState normalize(int num_qubits, Amplitudes amplitudes);
[[nodiscard]] PureState normalize(const PureState& state);

/// Builds sum_j moduli[j] e^{i phases[j]} |term_j>, normalized.
///
/// `phases` may carry one entry per term (the first is then removed as a
/// global phase) or k-1 entries, read as the phases of terms 2..k relative to
/// the first. Amplitudes live in a `num_qubits`=3 register.
[[nodiscard]] PureState build_state(const TermCombination& combination,
                                    std::span<const double> moduli,
                                    std::span<const double> phases);

/// Moduli of the combination's terms in `state`.
[[nodiscard]] std::vector<double> term_moduli(const PureState& state,
                                              const TermCombination& combination);
/// Phases of terms 2..k relative to term 1, wrapped to [0, 2*pi).
[[nodiscard]] std::vector<double> term_phases(const PureState& state,
                                              const TermCombination& combination);

/// Q_1 (x) Q_2 (x) ... (x) Q_N with factor q acting on qubit q.
class LocalOperator {
 public:
  explicit LocalOperator(std::vector<Mat2> factors);

  static LocalOperator identity(int num_qubits);
  static LocalOperator uniform(const Mat2& factor, int num_qubits);

  [[nodiscard]] int num_qubits() const noexcept { return static_cast<int>(factors_.size()); }
  /// 1-based qubit index.
  [[nodiscard]] const Mat2& factor(int qubit) const { return factors_.at(qubit - 1); }
  [[nodiscard]] const std::vector<Mat2>& factors() const noexcept { return factors_; }

  [[nodiscard]] bool invertible(double det_tol = 1e-12) const;
  [[nodiscard]] bool unitary(double tol = 1e-10) const;

 private:
  std::vector<Mat2> factors_;
};

namespace gates {
Mat2 hadamard();
Mat2 pauli_x();
}  // namespace gates

/// Raw action of the Kronecker product on an arbitrary (unnormalized) vector.
[[nodiscard]] Amplitudes apply_kronecker(const LocalOperator& op,
                                         std::span<const Complex> amplitudes);

struct LocalImage {
  Amplitudes amplitudes;  // unnormalized
  double norm = 0.0;
  int num_qubits = 0;

  /// Throws if the image vanished.
  [[nodiscard]] PureState normalized() const { return normalize(num_qubits, amplitudes); }
};

enum class RequireInvertible : bool { kNo = false, kYes = true };

[[nodiscard]] LocalImage apply_local_operator(const PureState& state, const LocalOperator& op,
                                              RequireInvertible require = RequireInvertible::kNo);

}  // namespace triqubit
