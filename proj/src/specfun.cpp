#include "susytrm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace susytrm::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, 9 coefficients. Good to ~1e-13 relative on
// the right half-plane for the argument magnitudes this library needs.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// core Lanczos evaluation, valid for Re(z) >= 0.5
cval lanczos_gamma(cval z) {
  z -= 1.0;
  cval x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cval t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

bool is_nonpositive_integer(cval z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  double r = std::round(z.real());
  return r <= 0.5 && std::abs(z.real() - r) <= tol;
}

cval gamma(cval z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma: argument at a non-positive integer pole");
  if (z.real() >= 0.5) return lanczos_gamma(z);
  // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
  return kPi / (std::sin(kPi * z) * lanczos_gamma(1.0 - z));
}

cval rgamma(cval z) {
  if (z.real() >= 0.5) return 1.0 / lanczos_gamma(z);
  if (is_nonpositive_integer(z)) return 0.0;  // exact zero at the poles of Gamma
  // entire continuation through the poles: 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi
  return std::sin(kPi * z) * lanczos_gamma(1.0 - z) / kPi;
}

namespace {

// terminating degree of the Gauss series, or -1; rejects a gamma parameter
// pole that the termination does not sidestep
int series_degree(cval alpha, cval beta, cval gamma_c) {
  int degree = -1;
  if (is_nonpositive_integer(alpha)) degree = -static_cast<int>(std::round(alpha.real()));
  if (is_nonpositive_integer(beta)) {
    int d = -static_cast<int>(std::round(beta.real()));
    if (degree < 0 || d < degree) degree = d;
  }

  if (is_nonpositive_integer(gamma_c)) {
    // (gamma_c)_k first vanishes at k = 1 - gamma_c; fatal unless the series
    // stops strictly before that index
    int fatal_k = 1 - static_cast<int>(std::round(gamma_c.real()));
    if (degree < 0 || degree >= fatal_k)
      throw ParameterPoleError("hyp2f1: gamma parameter at a non-positive integer");
  }
  return degree;
}

}  // namespace

cval hyp2f1(cval alpha, cval beta, cval gamma_c, cval z) {
  int degree = series_degree(alpha, beta, gamma_c);

  if (degree < 0 && std::abs(z) >= 1.0)
    throw ConvergenceError("hyp2f1: |z| >= 1 with non-terminating series");

  cval sum = 1.0;
  cval term = 1.0;
  int small_streak = 0;
  const int kmax = (degree >= 0) ? degree : kSeriesCap;
  for (int k = 0; k < kmax; ++k) {
    double dk = static_cast<double>(k);
    term *= (alpha + dk) * (beta + dk) / ((gamma_c + dk) * (dk + 1.0)) * z;
    sum += term;
    if (degree < 0) {
      if (std::abs(term) <= kTermRel * std::abs(sum)) {
        if (++small_streak >= 2) return sum;
      } else {
        small_streak = 0;
      }
      if (k == kSeriesCap - 1)
        throw ConvergenceError("hyp2f1: series did not converge within the term cap");
    }
  }
  return sum;
}

cval hyp2f1_dz(cval alpha, cval beta, cval gamma_c, cval z) {
  if (std::abs(gamma_c) <= kPoleTol)
    throw ParameterPoleError("hyp2f1_dz: gamma parameter at zero");
  // a series of degree zero is constant; skip the shifted call, whose
  // parameters would no longer terminate
  if (alpha == 0.0 || beta == 0.0) return 0.0;
  return alpha * beta / gamma_c * hyp2f1(alpha + 1.0, beta + 1.0, gamma_c + 1.0, z);
}

Hyp2f1Table::Hyp2f1Table(cval alpha, cval beta, cval gamma_c, double z_mag)
    : alpha_(alpha), beta_(beta), gamma_c_(gamma_c) {
  int degree = series_degree(alpha, beta, gamma_c);
  terminating_ = degree >= 0;

  if (!terminating_ && z_mag >= 1.0)
    throw ConvergenceError("hyp2f1 table: |z| >= 1 with non-terminating series");

  c_.push_back(1.0);
  if (terminating_) {
    // a terminating series is finite: cache it whole
    extend(static_cast<std::size_t>(degree) + 1);
  } else {
    extend(64);
  }
}

void Hyp2f1Table::extend(std::size_t want) const {
  c_.reserve(want);
  while (c_.size() < want) {
    double dk = static_cast<double>(c_.size() - 1);
    c_.push_back(c_.back() * (alpha_ + dk) * (beta_ + dk) / ((gamma_c_ + dk) * (dk + 1.0)));
  }
}

void Hyp2f1Table::eval(cval z, cval& F, cval& Fd) const {
  cval sum = c_[0];
  cval ds = 0.0;  // sum of k c_k z^k; Fd = ds / z
  if (std::norm(z) == 0.0) {
    F = sum;
    Fd = c_.size() > 1 ? c_[1] : cval(0.0);
    return;
  }
  const double rel2 = kTermRel * kTermRel;
  cval zpow = 1.0;
  int small_streak = 0;
  for (std::size_t k = 1;; ++k) {
    if (k == c_.size()) {
      if (terminating_) break;
      if (c_.size() >= static_cast<std::size_t>(kSeriesCap))
        throw ConvergenceError("hyp2f1 table: series did not converge within the term cap");
      extend(std::min<std::size_t>(2 * c_.size(), kSeriesCap));
    }
    double dk = static_cast<double>(k);
    zpow *= z;
    cval term = c_[k] * zpow;
    sum += term;
    ds += dk * term;
    if (terminating_) continue;
    // both the value and the derivative series must have settled
    if (std::norm(term) <= rel2 * std::norm(sum) &&
        dk * dk * std::norm(term) <= rel2 * std::norm(ds)) {
      if (++small_streak >= 2) break;
    } else {
      small_streak = 0;
    }
  }
  F = sum;
  Fd = ds / z;
}

}  // namespace susytrm::specfun
