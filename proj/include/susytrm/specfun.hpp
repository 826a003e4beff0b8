// Complex special functions: gamma (Lanczos), its reciprocal, and the Gauss
// hypergeometric series with complex parameters plus its z-derivative.
#pragma once

#include <complex>
#include <vector>

#include "susytrm/errors.hpp"

namespace susytrm::specfun {

using cval = std::complex<double>;

// tolerance inside which an argument counts as sitting on a pole
inline constexpr double kPoleTol = 1e-12;
// hard cap on Gauss-series terms before giving up
inline constexpr int kSeriesCap = 200000;
// relative term size at which the series is considered converged
inline constexpr double kTermRel = 1e-16;

// true if z is within tol of {0, -1, -2, ...}
bool is_nonpositive_integer(cval z, double tol = kPoleTol);

// Gamma(z); throws PoleError within kPoleTol of a non-positive integer.
cval gamma(cval z);

// 1/Gamma(z), entire: returns exactly 0 at the poles of Gamma.
cval rgamma(cval z);

// Gauss series sum_k (alpha)_k (beta)_k / [(gamma_c)_k k!] z^k.
// Terminates exactly when alpha or beta is a non-positive integer (within
// kPoleTol); otherwise requires |z| < 1 and throws ConvergenceError if the
// term cap is exhausted. gamma_c at a non-positive integer throws
// ParameterPoleError unless the series terminates before the offending index.
cval hyp2f1(cval alpha, cval beta, cval gamma_c, cval z);

// d/dz of hyp2f1 = (alpha*beta/gamma_c) * 2F1(alpha+1, beta+1; gamma_c+1; z)
cval hyp2f1_dz(cval alpha, cval beta, cval gamma_c, cval z);

// Cached Gauss-series coefficients for one fixed parameter set, for
// evaluation at many z of bounded magnitude. One pass over the cache yields
// the value and the z-derivative together, so repeated evaluations skip the
// per-term parameter recurrence and the second series that hyp2f1_dz would
// run. The cache extends itself as evaluations demand more terms, up to the
// same kSeriesCap as hyp2f1. z_mag is the largest |z| the table will be
// asked about, rejected up front when the series cannot converge there.
// Construction applies the same termination and pole rules as hyp2f1.
class Hyp2f1Table {
 public:
  Hyp2f1Table(cval alpha, cval beta, cval gamma_c, double z_mag);

  // F = 2F1(...; z), Fd = dF/dz, under hyp2f1's convergence criterion
  // applied to both series; throws ConvergenceError at the term cap
  void eval(cval z, cval& F, cval& Fd) const;

  int terms() const { return static_cast<int>(c_.size()); }

 private:
  void extend(std::size_t want) const;

  cval alpha_, beta_, gamma_c_;
  mutable std::vector<cval> c_;
  bool terminating_ = false;
};

}  // namespace susytrm::specfun
