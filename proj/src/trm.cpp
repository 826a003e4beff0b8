#include "susytrm/trm.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "susytrm/oracle.hpp"
#include "susytrm/specfun.hpp"

namespace susytrm::trm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cval kI{0.0, 1.0};

using specfun::hyp2f1;
using specfun::hyp2f1_dz;

void check_domain(double x) {
  if (!(x > 0.0 && x < kPi)) throw DomainError("evaluation point outside (0, pi)");
}

// every closed form here is a sum of terms c * e^{p x} * sin(x)^q * F(z(x)),
// differentiated by the product rule with dF/dx = dF/dz * dz/dx
struct TermFrame {
  double s, ct;  // sin x, cot x
  explicit TermFrame(double x) : s(std::sin(x)), ct(std::cos(x) / std::sin(x)) {}
};

}  // namespace

TrmParams TrmParams::make(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("potential parameter a must be positive");
  if (!std::isfinite(b)) throw DomainError("potential parameter b must be finite");
  return TrmParams{a, b};
}

EvalPair Solution::eval(double x) const {
  check_domain(x);
  return f(x);
}

std::pair<double, double> Solution::eval_real(double x) const {
  EvalPair e = eval(x);
  double mag = std::abs(e.value);
  if (mag > 0.0 && imag_residue_) {
    double res = std::abs(e.value.imag()) / mag;
    double cur = imag_residue_->load(std::memory_order_relaxed);
    while (res > cur &&
           !imag_residue_->compare_exchange_weak(cur, res, std::memory_order_relaxed)) {
    }
  }
  return {e.value.real(), e.deriv.real()};
}

double potential(const TrmParams& p, double x) {
  check_domain(x);
  double s = std::sin(x);
  return 0.5 * p.a * (p.a + 1.0) / (s * s) - p.b * std::cos(x) / s;
}

double bound_energy(const TrmParams& p, int n) {
  if (n < 0) throw DomainError("bound-state index must be non-negative");
  double s = n + p.a + 1.0;
  return 0.5 * s * s - p.b * p.b / (2.0 * s * s);
}

AuxExponents exponents(const TrmParams& p, cval E) {
  cval disc = E * E + p.b * p.b;
  if (std::abs(disc) == 0.0) throw BranchError("exponents: E^2 + b^2 vanishes");
  cval inner = E + std::sqrt(disc);
  if (std::abs(inner) == 0.0) throw BranchError("exponents: E + sqrt(E^2+b^2) vanishes");
  cval root = std::sqrt(inner);
  return {2.0 * p.b / root, 1.0 - root};
}

TwoTermCoeffs coeffs_L(const TrmParams& p, cval E) {
  using specfun::gamma;
  using specfun::rgamma;
  const double a = p.a;
  auto [mu, nu] = exponents(p, E);
  cval imu2 = kI * mu * 0.5;
  // denominators via the reciprocal gamma: at bound-state energies they sit
  // exactly on gamma poles and the coefficient legitimately vanishes there
  cval kappa = gamma(cval(2 * a + 2)) * gamma(1.0 - nu - imu2) * rgamma(a + 1.0 - imu2) *
               rgamma(a + 2.0 - nu);
  cval rho = std::pow(kI * 0.5, 2 * a + 1) * gamma(cval(2 * a + 2)) * gamma(nu - 1.0 + imu2) *
             rgamma(a + 1.0 + imu2) * rgamma(a + nu);
  return {kappa, rho};
}

TwoTermCoeffs coeffs_R(const TrmParams& p, cval E) {
  using specfun::rgamma;
  const double a = p.a;
  auto [mu, nu] = exponents(p, E);
  cval imu2 = kI * mu * 0.5;
  TwoTermCoeffs L = coeffs_L(p, E);
  // Gamma(nu - i mu/2) Gamma(1 - nu + i mu/2) by reflection
  cval lead = kPi / std::sin(kPi * (nu - imu2));
  cval kappa = lead * L.kappa *
               (std::exp(0.5 * mu * kPi) * rgamma(a + 1.0 + imu2) * rgamma(-a - imu2) +
                std::exp(-kI * nu * kPi) * rgamma(a + nu) * rgamma(1.0 - a - nu));
  cval rho = -lead * L.rho *
             (std::exp(-0.5 * mu * kPi) * rgamma(a + 1.0 - imu2) * rgamma(-a + imu2) +
              std::exp(kI * nu * kPi) * rgamma(a + 2.0 - nu) * rgamma(nu - a - 1.0));
  return {kappa, rho};
}

namespace {

// assembly of the single-term closed form from the series value and its
// z-derivative; shared by the one-shot entry points and the cached evaluator
EvalPair single_term_assemble(const TrmParams& p, const AuxExponents& ex, bool left, cval F,
                              cval Fd, cval z, double x) {
  const double a = p.a;
  TermFrame t(x);
  cval pe = left ? -0.5 * ex.mu - kI * (ex.nu + a) : -0.5 * ex.mu + kI * (ex.nu + a);
  // the right form carries e^{-pe pi} so its scale matches the two-term form
  cval pref = left ? cval(1.0) : std::exp(-pe * kPi);
  cval A = pref * std::exp(pe * x) * std::pow(t.s, a + 1.0);
  cval dz = left ? 2.0 * kI * (1.0 - z) : 2.0 * kI * (z - 1.0);
  return {A * F, A * ((pe + (a + 1.0) * t.ct) * F + Fd * dz)};
}

cval single_term_z(bool left, double x) {
  return left ? 1.0 - std::exp(-2.0 * kI * x) : 1.0 - std::exp(2.0 * kI * x);
}

cval single_term_beta(const TrmParams& p, const AuxExponents& ex, bool left) {
  return left ? p.a + 1.0 - kI * ex.mu * 0.5 : p.a + 1.0 + kI * ex.mu * 0.5;
}

}  // namespace

EvalPair psi_L_single_term(const TrmParams& p, cval E, double x) {
  check_domain(x);
  AuxExponents ex = exponents(p, E);
  cval z = single_term_z(true, x);
  cval alpha = ex.nu + p.a, beta = single_term_beta(p, ex, true), gamma_c = 2.0 * p.a + 2.0;
  cval F = hyp2f1(alpha, beta, gamma_c, z);
  cval Fd = hyp2f1_dz(alpha, beta, gamma_c, z);
  return single_term_assemble(p, ex, true, F, Fd, z, x);
}

EvalPair psi_R_single_term(const TrmParams& p, cval E, double x) {
  check_domain(x);
  AuxExponents ex = exponents(p, E);
  cval z = single_term_z(false, x);
  cval alpha = ex.nu + p.a, beta = single_term_beta(p, ex, false), gamma_c = 2.0 * p.a + 2.0;
  cval F = hyp2f1(alpha, beta, gamma_c, z);
  cval Fd = hyp2f1_dz(alpha, beta, gamma_c, z);
  return single_term_assemble(p, ex, false, F, Fd, z, x);
}

namespace {

// series tables for one boundary solution at a fixed energy: the two
// unit-circle series of the two-term form plus the single-term series used
// near the solution's vanishing endpoint
struct SideTables {
  specfun::Hyp2f1Table first, second, near_end;
};

SideTables make_side_tables(const TrmParams& p, const AuxExponents& ex, bool left) {
  const double a = p.a;
  cval imu2 = kI * ex.mu * 0.5;
  const double circle = 1.0 - kCircleInset;
  const double near_mag = std::abs(single_term_z(left, kFormSwitch));
  return {specfun::Hyp2f1Table(imu2 - a, ex.nu - a - 1.0, ex.nu + imu2, circle),
          specfun::Hyp2f1Table(1.0 - ex.nu - a, -a - imu2, 2.0 - ex.nu - imu2, circle),
          specfun::Hyp2f1Table(ex.nu + a, single_term_beta(p, ex, left), 2.0 * a + 2.0, near_mag)};
}

// two-term unit-circle form shared by psi_L and psi_R; only the coefficient
// pair differs. The first basis function has series exponent -(2a+1) on the
// circle, so it is summed through the Euler transformation
// 2F1(alpha,beta;gamma;z) = (1-z)^{gamma-alpha-beta} 2F1(gamma-alpha,gamma-beta;gamma;z),
// whose right-hand side converges there. T1 holds the transformed first
// series, T2 the direct second one.
EvalPair two_term_value_from(const TrmParams& p, const AuxExponents& ex, const TwoTermCoeffs& c,
                             const specfun::Hyp2f1Table& T1, const specfun::Hyp2f1Table& T2,
                             double x) {
  const double a = p.a;
  const cval mu = ex.mu, nu = ex.nu;
  TermFrame t(x);
  cval z = (1.0 - kCircleInset) * std::exp(2.0 * kI * x);
  cval omz = 1.0 - z;

  cval G, Gd, F2, F2d;
  T1.eval(z, G, Gd);
  T2.eval(z, F2, F2d);
  cval pw = std::pow(omz, -(2.0 * a + 1.0));
  cval F1 = pw * G;
  cval F1d = (2.0 * a + 1.0) * pw / omz * G + pw * Gd;

  cval p1 = -0.5 * mu + kI * (nu + a);
  cval p2 = 0.5 * mu + kI * (1.0 - nu - a);
  cval A = c.kappa * std::exp(p1 * x) * std::pow(t.s, a + 1.0);
  cval B = c.rho * std::exp(p2 * x) * std::pow(t.s, -a);
  cval dz = 2.0 * kI * z;

  cval value = A * F1 + B * F2;
  cval deriv = A * ((p1 + (a + 1.0) * t.ct) * F1 + F1d * dz) +
               B * ((p2 - a * t.ct) * F2 + F2d * dz);
  return {value, deriv};
}

EvalPair two_term_value(const TrmParams& p, const AuxExponents& ex, const TwoTermCoeffs& c,
                        double x) {
  const double a = p.a;
  cval imu2 = kI * ex.mu * 0.5;
  const double circle = 1.0 - kCircleInset;
  specfun::Hyp2f1Table T1(imu2 - a, ex.nu - a - 1.0, ex.nu + imu2, circle);
  specfun::Hyp2f1Table T2(1.0 - ex.nu - a, -a - imu2, 2.0 - ex.nu - imu2, circle);
  return two_term_value_from(p, ex, c, T1, T2, x);
}

Solution make_boundary_solution(const TrmParams& p, cval E, bool left) {
  AuxExponents ex = exponents(p, E);
  TwoTermCoeffs c = left ? coeffs_L(p, E) : coeffs_R(p, E);
  auto tables = std::make_shared<const SideTables>(make_side_tables(p, ex, left));
  Solution s;
  s.energy = E;
  s.kind = left ? SeedKind::pure_L : SeedKind::pure_R;
  s.f = [p, ex, c, left, tables](double x) -> EvalPair {
    bool near_vanishing_end = left ? (x < kFormSwitch) : (x > kPi - kFormSwitch);
    if (near_vanishing_end) {
      cval z = single_term_z(left, x);
      cval F, Fd;
      tables->near_end.eval(z, F, Fd);
      return single_term_assemble(p, ex, left, F, Fd, z, x);
    }
    return two_term_value_from(p, ex, c, tables->first, tables->second, x);
  };
  return s;
}

}  // namespace

EvalPair psi_L_two_term(const TrmParams& p, cval E, double x) {
  check_domain(x);
  return two_term_value(p, exponents(p, E), coeffs_L(p, E), x);
}

EvalPair psi_R_two_term(const TrmParams& p, cval E, double x) {
  check_domain(x);
  return two_term_value(p, exponents(p, E), coeffs_R(p, E), x);
}

Solution psi_L(const TrmParams& p, cval E) { return make_boundary_solution(p, E, true); }
Solution psi_R(const TrmParams& p, cval E) { return make_boundary_solution(p, E, false); }

Solution bound_state(const TrmParams& p, int n) {
  if (n < 0) throw DomainError("bound-state index must be non-negative");
  const double a = p.a, b = p.b;
  const double s = n + 1.0 + a;
  const double En = bound_energy(p, n);

  // terminating series, valid at every x
  auto raw = [a, b, s, n](double x) -> EvalPair {
    TermFrame t(x);
    cval z = 1.0 - std::exp(-2.0 * kI * x);
    cval alpha = cval(-double(n)), beta = a + 1.0 - kI * b / s, gamma_c = 2.0 * a + 2.0;
    cval F = hyp2f1(alpha, beta, gamma_c, z);
    cval Fd = hyp2f1_dz(alpha, beta, gamma_c, z);
    cval pe = cval(-b / s, double(n));
    cval A = std::exp(pe * x) * std::pow(t.s, a + 1.0);
    cval dz = 2.0 * kI * (1.0 - z);
    return {A * F, A * ((pe + (a + 1.0) * t.ct) * F + Fd * dz)};
  };

  // normalization: two-pass quadrature so the absolute tolerance tracks the
  // (possibly tiny) scale of the un-normalized norm integral
  auto density = [&raw](double x) { return std::norm(raw(x).value); };
  double rough = oracle::quadrature(density, 0.0, kPi, 1e-6);
  double norm2 = oracle::quadrature(density, 0.0, kPi, std::max(1e-300, 1e-11 * rough));
  double cn = 1.0 / std::sqrt(norm2);

  Solution sol;
  sol.energy = En;
  sol.kind = SeedKind::boundstate;
  sol.index = n;
  sol.square_integrable = 1;
  sol.normalized = true;
  sol.f = [raw, cn](double x) -> EvalPair {
    EvalPair e = raw(x);
    return {cn * e.value, cn * e.deriv};
  };
  return sol;
}

Solution general_solution(const TrmParams& p, double E, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  Solution L = psi_L(p, E);
  Solution R = psi_R(p, E);
  Solution s;
  s.energy = E;
  s.kind = SeedKind::general;
  s.lambda = lambda;
  s.f = [L, R, lambda](double x) -> EvalPair {
    EvalPair l = L.f(x), r = R.f(x);
    return {l.value + lambda * r.value, l.deriv + lambda * r.deriv};
  };
  return s;
}

int gap_index(const TrmParams& p, double E) {
  for (int n = 0;; ++n) {
    double En = bound_energy(p, n);
    if (std::abs(E - En) <= 1e-9)
      throw SpectralCollisionError("energy collides with a bound level");
    if (E < En) return n - 1;
  }
}

int predicted_node_count(const TrmParams& p, double E, double lambda) {
  int j = gap_index(p, E);
  if (j < 0) return lambda >= 0.0 ? 0 : 1;
  if (j % 2 == 0) return lambda > 0.0 ? j + 2 : j + 1;
  return lambda >= 0.0 ? j + 1 : j + 2;
}

}  // namespace susytrm::trm
