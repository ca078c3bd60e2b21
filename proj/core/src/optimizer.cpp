#include "triqubit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "triqubit/classifier.hpp"
#include "triqubit/entropy.hpp"

namespace triqubit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kChartEps = 1e-10;
constexpr double kHessianStep = 1e-5;

double wrap(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_dimensions(const TermCombination& combination, const ParamPoint& point) {
  const std::size_t k = combination.size();
  if (point.moduli.size() != k || point.phases.size() + 1 != k) {
    throw std::invalid_argument("point has " + std::to_string(point.moduli.size()) + " moduli and " +
                                std::to_string(point.phases.size()) + " phases; combination has " +
                                std::to_string(k) + " terms");
  }
}

}  // namespace

void OptConfig::validate() const {
  if (num_starts < 1) throw std::invalid_argument("num_starts must be at least 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  for (double t : {stationarity_tol, boundary_tol, cluster_tol, snap_tol, separable_floor, point_tol,
                   phase_curvature_tol}) {
    if (!(t > 0.0)) throw std::invalid_argument("optimizer tolerances must be positive");
  }
}

bool Extrema::has_interior() const {
  return std::any_of(clusters.begin(), clusters.end(), [](const OptResult& r) { return r.interior; });
}

const OptResult* Extrema::best_interior() const {
  for (const auto& c : clusters) {
    if (c.interior) return &c;
  }
  return nullptr;
}

// -------------------------------------------------------------------- chart

namespace chart {

std::vector<double> to_chart(const ParamPoint& point) {
  const std::size_t k = point.moduli.size();
  if (k == 0 || point.phases.size() + 1 != k) throw std::invalid_argument("malformed parameter point");
  std::vector<double> coords;
  coords.reserve(2 * k - 2);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    double tail = 0.0;
    for (std::size_t l = j + 1; l < k; ++l) tail += point.moduli[l] * point.moduli[l];
    coords.push_back(std::atan2(std::sqrt(tail), point.moduli[j]));
  }
  coords.insert(coords.end(), point.phases.begin(), point.phases.end());
  return coords;
}

ParamPoint from_chart(std::span<const double> coords, std::size_t k) {
  if (k == 0 || coords.size() != 2 * k - 2) throw std::invalid_argument("chart coordinate length");
  std::vector<double> m(k);
  std::vector<double> phi(k, 0.0);
  double prefix = 1.0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    m[j] = prefix * std::cos(coords[j]);
    prefix *= std::sin(coords[j]);
  }
  m[k - 1] = prefix;
  for (std::size_t j = 1; j < k; ++j) phi[j] = coords[k - 1 + j - 1];
  for (std::size_t j = 0; j < k; ++j) {
    if (m[j] < 0.0) {
      m[j] = -m[j];
      phi[j] += std::numbers::pi;
    }
  }
  ParamPoint p;
  p.moduli = m;
  for (std::size_t j = 1; j < k; ++j) p.phases.push_back(wrap(phi[j] - phi[0]));
  return p;
}

Objective::Objective(const TermCombination& combination,
                     std::optional<std::vector<double>> fixed_phases)
    : k_(combination.size()), fixed_phases_(std::move(fixed_phases)) {
  if (fixed_phases_ && fixed_phases_->size() + 1 != k_) {
    throw std::invalid_argument("fixed phases need k-1 entries");
  }
  for (int q = 0; q < 3; ++q) {
    const unsigned bit = 1u << (2 - q);
    for (std::size_t j = 0; j < k_; ++j) {
      const unsigned bj = combination[j].bits();
      if (bj & bit) continue;
      zeros_[q].push_back(j);
      if (auto l = combination.position_of(BasisTerm::from_bits(bj | bit))) pairs_[q].emplace_back(j, *l);
    }
  }
}

std::size_t Objective::dim() const noexcept {
  return fixed_phases_ ? k_ - 1 : 2 * k_ - 2;
}

double Objective::value(std::span<const double> x) const { return evaluate(x, nullptr); }

double Objective::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
  if (grad.size() != dim()) throw std::invalid_argument("gradient buffer size");
  return evaluate(x, grad.data());
}

std::vector<double> Objective::gradient(std::span<const double> x) const {
  std::vector<double> g(dim());
  evaluate(x, g.data());
  return g;
}

std::vector<double> Objective::full(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (fixed_phases_) out.insert(out.end(), fixed_phases_->begin(), fixed_phases_->end());
  return out;
}

std::vector<double> Objective::free(std::span<const double> full_coords) const {
  const std::size_t n = dim();
  return {full_coords.begin(), full_coords.begin() + static_cast<std::ptrdiff_t>(n)};
}

double Objective::evaluate(std::span<const double> x, double* grad) const {
  if (x.size() != dim()) throw std::invalid_argument("objective coordinate length");
  const std::size_t k = k_;
  const std::size_t na = k - 1;
  const std::size_t n = dim();

  std::array<double, 8> phi{};
  for (std::size_t j = 1; j < k; ++j) phi[j] = fixed_phases_ ? (*fixed_phases_)[j - 1] : x[na + j - 1];

  std::array<double, 8> s{}, c{}, prefix{};
  for (std::size_t p = 0; p < na; ++p) {
    s[p] = std::sin(x[p]);
    c[p] = std::cos(x[p]);
  }
  prefix[0] = 1.0;
  for (std::size_t j = 1; j < k; ++j) prefix[j] = prefix[j - 1] * s[j - 1];

  std::array<double, 8> m{};
  for (std::size_t j = 0; j < k; ++j) m[j] = prefix[j] * (j < na ? c[j] : 1.0);

  // dm[j][p] = d m_j / d alpha_p
  std::array<std::array<double, 7>, 8> dm{};
  if (grad) {
    for (std::size_t j = 0; j < k; ++j) {
      const double tail = j < na ? c[j] : 1.0;
      for (std::size_t p = 0; p < na; ++p) {
        if (p < j) {
          double prod = c[p] * tail;
          for (std::size_t l = 0; l < j; ++l) {
            if (l != p) prod *= s[l];
          }
          dm[j][p] = prod;
        } else if (p == j && j < na) {
          dm[j][p] = -prefix[j] * s[j];
        }
      }
    }
    std::fill(grad, grad + n, 0.0);
  }

  std::array<Complex, 8> amp{};
  for (std::size_t j = 0; j < k; ++j) amp[j] = std::polar(m[j], phi[j]);

  double total = 0.0;
  for (int q = 0; q < 3; ++q) {
    double rho00 = 0.0;
    for (std::size_t j : zeros_[q]) rho00 += m[j] * m[j];
    Complex rho01{};
    for (auto [j, l] : pairs_[q]) rho01 += amp[j] * std::conj(amp[l]);

    const double z = 2.0 * rho00 - 1.0;
    const double r2 = std::clamp(z * z + 4.0 * std::norm(rho01), 0.0, 1.0);
    const double r = std::sqrt(r2);
    const double hi = 0.5 * (1.0 + r);
    const double lo = (1.0 - r2) / (4.0 * hi);
    double entropy = -hi * std::log2(hi);
    if (lo > 0.0) entropy -= lo * std::log2(lo);
    total += entropy;

    if (!grad) continue;
    // dS/d(r^2) = -atanh(r) / (2 r ln 2), -> -1/(2 ln 2) as r -> 0.
    double ds_dr2;
    if (r < 1e-8) {
      ds_dr2 = -1.0 / (2.0 * std::numbers::ln2);
    } else {
      const double rc = std::min(r, 1.0 - 1e-16);
      ds_dr2 = -std::atanh(rc) / (2.0 * rc * std::numbers::ln2);
    }
    const double scale = ds_dr2 / 3.0;
    for (std::size_t p = 0; p < na; ++p) {
      double d00 = 0.0;
      for (std::size_t j : zeros_[q]) d00 += 2.0 * m[j] * dm[j][p];
      Complex d01{};
      for (auto [j, l] : pairs_[q]) {
        d01 += (dm[j][p] * m[l] + m[j] * dm[l][p]) * std::polar(1.0, phi[j] - phi[l]);
      }
      const double dr2 = 4.0 * z * d00 + 8.0 * (std::conj(rho01) * d01).real();
      grad[p] += scale * dr2;
    }
    if (!fixed_phases_) {
      for (auto [j, l] : pairs_[q]) {
        // d(amp_j conj(amp_l)) / d phi_t = i ([t==j] - [t==l]) amp_j conj(amp_l)
        const Complex term = amp[j] * std::conj(amp[l]);
        const double contrib = 8.0 * (std::conj(rho01) * Complex(0.0, 1.0) * term).real();
        if (j > 0) grad[na + j - 1] += scale * contrib;
        if (l > 0) grad[na + l - 1] -= scale * contrib;
      }
    }
  }
  return total / 3.0;
}

}  // namespace chart

// --------------------------------------------------------- public evaluation

double evaluate(const TermCombination& combination, const ParamPoint& point) {
  check_dimensions(combination, point);
  return measure(build_state(combination, point.moduli, point.phases)).value;
}

std::vector<double> gradient(const TermCombination& combination, const ParamPoint& point) {
  check_dimensions(combination, point);
  const std::size_t k = combination.size();
  if (!fixed_qubits(combination).empty()) return std::vector<double>(2 * k - 2, 0.0);
  const double lowest = *std::min_element(point.moduli.begin(), point.moduli.end());
  if (lowest < kChartEps) {
    throw std::domain_error("gradient requested at a boundary point (a modulus is ~0)");
  }
  double n2 = 0.0;
  for (double m : point.moduli) n2 += m * m;
  ParamPoint unit = point;
  for (double& m : unit.moduli) m /= std::sqrt(n2);
  const chart::Objective objective(combination, std::nullopt);
  return objective.gradient(chart::to_chart(unit));
}

std::optional<double> type_i4_phase_relation(const TermCombination& combination,
                                             const ParamPoint& point) {
  if (combination.size() != 4 || point.phases.size() != 3) return std::nullopt;
  // Canonical order puts {W_i, W_j, Wbar_i, Wbar_j} as positions 0..3 with i < j.
  const auto& t = combination.terms();
  if (t[0].barred || t[1].barred || !t[2].barred || !t[3].barred) return std::nullopt;
  if (t[0].index != t[2].index || t[1].index != t[3].index) return std::nullopt;
  // phases[] are relative to W_i: [W_j, Wbar_i, Wbar_j].
  return wrap(point.phases[1] - point.phases[0] - point.phases[2]);
}

// ---------------------------------------------------------------- optimizer

namespace {

using chart::Objective;

struct LocalRun {
  std::vector<double> x;
  double grad_norm = 0.0;
};

Eigen::MatrixXd hessian(const Objective& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  Eigen::MatrixXd h(n, n);
  std::vector<double> xp = x;
  std::vector<double> gp(n), gm(n);
  for (std::size_t i = 0; i < n; ++i) {
    xp[i] = x[i] + kHessianStep;
    f.value_and_gradient(xp, gp);
    xp[i] = x[i] - kHessianStep;
    f.value_and_gradient(xp, gm);
    xp[i] = x[i];
    for (std::size_t r = 0; r < n; ++r) h(r, i) = (gp[r] - gm[r]) / (2.0 * kHessianStep);
  }
  return 0.5 * (h + h.transpose());
}

// Levenberg-Marquardt on the system grad f(x) = 0, with the finite-difference
// Hessian as its Jacobian. Converges to maxima, minima and saddles alike.
LocalRun solve_stationary(const Objective& f, std::vector<double> x, int max_iters) {
  const std::size_t n = x.size();
  std::vector<double> g = f.gradient(x);
  double gn = l2(g);
  double mu = -1.0;
  double scale = 1.0;
  std::vector<double> trial(n), gt(n);
  for (int it = 0; it < max_iters && gn > 1e-14; ++it) {
    const Eigen::MatrixXd h = hessian(f, x);
    const Eigen::MatrixXd a = h.transpose() * h;
    const Eigen::VectorXd b = -(h.transpose() * Eigen::Map<const Eigen::VectorXd>(g.data(), n));
    if (mu < 0.0) {
      scale = std::max(a.diagonal().maxCoeff(), 1e-8);
      mu = 1e-3 * scale;
    }
    bool accepted = false;
    while (mu < 1e10 * scale) {
      const Eigen::MatrixXd damped = a + mu * Eigen::MatrixXd::Identity(n, n);
      const Eigen::VectorXd step = damped.ldlt().solve(b);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step[i];
      f.value_and_gradient(trial, gt);
      const double tn = l2(gt);
      if (std::isfinite(tn) && tn < gn) {
        x = trial;
        g = gt;
        gn = tn;
        mu = std::max(mu / 3.0, 1e-15 * scale);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }
  return {std::move(x), gn};
}

// Gradient ascent with an adaptive step and an Armijo acceptance test.
std::vector<double> ascend(const Objective& f, std::vector<double> x, int max_iters, double tol) {
  const std::size_t n = x.size();
  std::vector<double> g(n), gt(n), trial(n);
  double value = f.value_and_gradient(x, g);
  double step = 0.1;
  for (int it = 0; it < max_iters; ++it) {
    const double gn = l2(g);
    if (gn < tol) break;
    bool accepted = false;
    while (step > 1e-14) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * g[i];
      const double tv = f.value_and_gradient(trial, gt);
      if (std::isfinite(tv) && tv >= value + 1e-4 * step * gn * gn) {
        x = trial;
        g = gt;
        value = tv;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

ParamPoint with_phases(std::vector<double> moduli, const std::vector<double>& phases) {
  double n2 = 0.0;
  for (double m : moduli) n2 += m * m;
  for (double& m : moduli) m /= std::sqrt(n2);
  return {std::move(moduli), phases};
}

// Known stationary configurations, planted so that the multi-start budget
// cannot miss them.
std::vector<ParamPoint> analytic_seeds(const TermCombination& combination,
                                       const std::vector<double>& phases, bool free_phases) {
  const std::size_t k = combination.size();
  constexpr double kFloor = 1e-3;
  std::vector<ParamPoint> seeds;
  auto base = [&] { return std::vector<double>(k, kFloor); };

  seeds.push_back(with_phases(std::vector<double>(k, 1.0), phases));
  if (free_phases) {
    auto flipped = phases;
    flipped.back() = std::numbers::pi;
    seeds.push_back(with_phases(std::vector<double>(k, 1.0), flipped));
  }

  for (int i = 1; i <= 4; ++i) {
    auto u = combination.position_of({i, false});
    auto b = combination.position_of({i, true});
    if (u && b) {
      auto m = base();
      m[*u] = m[*b] = 1.0;
      seeds.push_back(with_phases(m, phases));
    }
  }

  for (bool barred : {false, true}) {
    std::vector<std::size_t> same;
    for (int i = 1; i <= 4; ++i) {
      if (auto p = combination.position_of({i, barred})) same.push_back(*p);
    }
    for (std::size_t x = 0; x < same.size(); ++x) {
      for (std::size_t y = x + 1; y < same.size(); ++y) {
        for (std::size_t z = y + 1; z < same.size(); ++z) {
          auto m = base();
          m[same[x]] = m[same[y]] = m[same[z]] = 1.0;
          seeds.push_back(with_phases(m, phases));
        }
      }
    }
    // a W_j + b W_t + c W_i + d Wbar_i family point with the four-term
    // extremum coefficients.
    for (int i = 1; i <= 4; ++i) {
      auto pi = combination.position_of({i, barred});
      auto pbar = combination.position_of({i, !barred});
      if (!pi || !pbar) continue;
      std::vector<std::size_t> others;
      for (int j = 1; j <= 4; ++j) {
        if (j == i) continue;
        if (auto p = combination.position_of({j, barred})) others.push_back(*p);
      }
      for (std::size_t x = 0; x < others.size(); ++x) {
        for (std::size_t y = x + 1; y < others.size(); ++y) {
          auto m = base();
          m[others[x]] = m[others[y]] = 0.462175;
          m[*pi] = 0.653614;
          m[*pbar] = 0.381546;
          seeds.push_back(with_phases(m, phases));
        }
      }
      if (others.size() == 3) {
        auto m = base();
        for (auto p : others) m[p] = 1.0 / 3.0;
        m[*pi] = 2.0 / 3.0;
        m[*pbar] = std::numbers::sqrt2 / 3.0;
        seeds.push_back(with_phases(m, phases));
      }
    }
  }
  return seeds;
}

ParamPoint face_point(const ParamPoint& p, const std::vector<std::size_t>& keep) {
  ParamPoint face;
  const auto phase_of = [&](std::size_t j) { return j == 0 ? 0.0 : p.phases[j - 1]; };
  for (std::size_t j : keep) face.moduli.push_back(p.moduli[j]);
  for (std::size_t r = 1; r < keep.size(); ++r) face.phases.push_back(wrap(phase_of(keep[r]) - phase_of(keep[0])));
  double n2 = 0.0;
  for (double m : face.moduli) n2 += m * m;
  for (double& m : face.moduli) m /= std::sqrt(n2);
  return face;
}

// True when the stationary point is the interior shadow of a boundary
// critical point: zeroing its small moduli keeps the value and the face
// point stays stationary.
bool boundary_attached(const TermCombination& combination, const ParamPoint& point,
                       double smooth_value, const OptConfig& config,
                       std::vector<std::size_t>& snapped) {
  const std::size_t k = combination.size();
  std::vector<std::size_t> keep;
  snapped.clear();
  for (std::size_t j = 0; j < k; ++j) {
    (point.moduli[j] < config.snap_tol ? snapped : keep).push_back(j);
  }
  if (snapped.empty() || keep.empty()) return false;
  if (keep.size() == 1) return std::abs(smooth_value) <= config.cluster_tol;

  std::vector<BasisTerm> terms;
  for (std::size_t j : keep) terms.push_back(combination[j]);
  const TermCombination face(terms);
  const ParamPoint fp = face_point(point, keep);
  std::optional<std::vector<double>> fixed;
  if (config.fixed_phases) fixed = fp.phases;
  const Objective objective(face, fixed);
  const auto run = solve_stationary(objective, objective.free(chart::to_chart(fp)), config.max_iters);
  if (!(run.grad_norm < config.stationarity_tol)) return false;
  return std::abs(objective.value(run.x) - smooth_value) <= config.cluster_tol;
}

// Zeroing the vanishing moduli leaves a state with some S_i = 0: the run
// crept toward a separable face rather than a boundary extremum.
bool separable_limit(const TermCombination& combination, const ParamPoint& point, double snap_tol) {
  ParamPoint face = point;
  for (double& m : face.moduli) {
    if (m < snap_tol) m = 0.0;
  }
  return !measure(build_state(combination, face.moduli, face.phases)).genuine;
}

// Largest eigenvalue of the Hessian block over the k-1 phases.
double phase_curvature(const Objective& f, const std::vector<double>& x) {
  const auto k = static_cast<Eigen::Index>(f.terms());
  const Eigen::MatrixXd h = hessian(f, x);
  const Eigen::MatrixXd block = h.block(k - 1, k - 1, k - 1, k - 1);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

struct Candidate {
  OptResult result;
  std::size_t run_index = 0;
};

bool same_point(const ParamPoint& a, const ParamPoint& b,
                const std::vector<std::vector<std::size_t>>& perms, double tol) {
  for (const auto& perm : perms) {
    double worst = 0.0;
    for (std::size_t p = 0; p < perm.size(); ++p) {
      worst = std::max(worst, std::abs(a.moduli[perm[p]] - b.moduli[p]));
    }
    if (worst < tol) return true;
  }
  return false;
}

}  // namespace

Extrema maximize(const TermCombination& combination, const OptConfig& config) {
  config.validate();
  const std::size_t k = combination.size();
  if (k < 2) throw std::invalid_argument("maximize needs at least two terms");
  if (config.fixed_phases && config.fixed_phases->size() + 1 != k) {
    throw std::invalid_argument("fixed_phases must have k-1 entries");
  }

  Extrema out;
  if (!fixed_qubits(combination).empty()) return out;  // E vanishes identically

  const Objective objective(combination, config.fixed_phases);
  const std::vector<double> seed_phases =
      config.fixed_phases ? *config.fixed_phases : std::vector<double>(k - 1, 0.0);

  std::vector<std::vector<double>> starts;
  if (config.inject_seeds) {
    for (const auto& s : analytic_seeds(combination, seed_phases, !config.fixed_phases)) {
      starts.push_back(objective.free(chart::to_chart(s)));
    }
  }
  for (int s = 0; s < config.num_starts; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.rng_seed & 0xffffffffu),
                      static_cast<std::uint32_t>(config.rng_seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<double> x(objective.dim());
    for (std::size_t p = 0; p < k - 1; ++p) x[p] = angle(rng);
    for (std::size_t p = k - 1; p < x.size(); ++p) x[p] = phase(rng);
    starts.push_back(std::move(x));
  }

  std::vector<LocalRun> runs;
  runs.reserve(2 * starts.size());
  for (const auto& x0 : starts) {
    runs.push_back(solve_stationary(
        objective, ascend(objective, x0, config.max_iters, 0.1 * config.stationarity_tol),
        config.max_iters));
    runs.push_back(solve_stationary(objective, x0, config.max_iters));
  }
  out.runs = runs.size();

  const auto perms = stabilizer_permutations(combination);
  const auto i4 = [&](const ParamPoint& p) { return type_i4_phase_relation(combination, p); };

  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    if (!(run.grad_norm < config.stationarity_tol)) continue;
    ++out.converged_runs;
    if (!config.fixed_phases && phase_curvature(objective, run.x) > config.phase_curvature_tol) {
      ++out.phase_saddle_runs;
      continue;
    }
    const ParamPoint point = chart::from_chart(objective.full(run.x), k);
    const EntropyProfile profile = measure(build_state(combination, point.moduli, point.phases));
    if (!profile.genuine) {
      ++out.separable_runs;
      continue;
    }
    Candidate cand;
    cand.run_index = r;
    OptResult& res = cand.result;
    res.best_point = point;
    res.value = profile.value;
    res.entropies = profile.entropies;
    res.phase_relation = i4(point);
    res.gradient_norm = l2(objective.gradient(objective.free(chart::to_chart(point))));
    for (std::size_t j = 0; j < k; ++j) {
      if (point.moduli[j] < config.boundary_tol) res.boundary_terms.push_back(j);
    }
    const double min_entropy = *std::min_element(profile.entropies.begin(), profile.entropies.end());
    res.interior = res.boundary_terms.empty() && min_entropy > config.separable_floor &&
                   res.gradient_norm < config.stationarity_tol;
    if (res.interior) {
      std::vector<std::size_t> snapped;
      if (boundary_attached(combination, point, objective.value(run.x), config, snapped)) {
        res.interior = false;
        res.boundary_terms = snapped;
      }
    }
    if (!res.interior && separable_limit(combination, point, config.snap_tol)) {
      ++out.separable_runs;
      continue;
    }
    candidates.push_back(std::move(cand));
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.result.value != b.result.value) return a.result.value > b.result.value;
    if (a.result.interior != b.result.interior) return a.result.interior;
    return a.run_index < b.run_index;
  });

  std::vector<std::vector<const Candidate*>> groups;
  for (const auto& cand : candidates) {
    bool placed = false;
    for (auto& g : groups) {
      const OptResult& head = g.front()->result;
      if (head.interior == cand.result.interior &&
          std::abs(head.value - cand.result.value) <= config.cluster_tol) {
        g.push_back(&cand);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({&cand});
  }

  for (const auto& g : groups) {
    const Candidate* rep = g.front();
    for (const Candidate* c : g) {
      if (c->result.gradient_norm < rep->result.gradient_norm ||
          (c->result.gradient_norm == rep->result.gradient_norm && c->run_index < rep->run_index)) {
        rep = c;
      }
    }
    OptResult cluster = rep->result;
    cluster.multiplicity = g.size();
    std::vector<const ParamPoint*> distinct;
    for (const Candidate* c : g) {
      const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const ParamPoint* p) {
        return same_point(*p, c->result.best_point, perms, config.point_tol);
      });
      if (!seen) distinct.push_back(&c->result.best_point);
    }
    cluster.distinct_points = distinct.size();
    out.clusters.push_back(std::move(cluster));
  }
  std::stable_sort(out.clusters.begin(), out.clusters.end(),
                   [](const OptResult& a, const OptResult& b) { return a.value > b.value; });
  return out;
}

InteriorVerdict has_interior_extremum(const TermCombination& combination, const OptConfig& config) {
  const Extrema extrema = maximize(combination, config);
  InteriorVerdict verdict;
  if (const OptResult* best = extrema.best_interior()) {
    verdict.found = true;
    verdict.witness = *best;
  }
  return verdict;
}

}  // namespace triqubit
