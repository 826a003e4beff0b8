// The trigonometric Rosen-Morse model on (0,pi): potential, exact spectrum,
// the boundary solutions psi_L/psi_R built from Gauss hypergeometric closed
// forms, bound states, general seeds psi_L + lambda psi_R, and the
// gap-parity node-count predictor.
#pragma once

#include <atomic>
#include <complex>
#include <functional>
#include <memory>
#include <utility>

#include "susytrm/errors.hpp"

namespace susytrm::trm {

using cval = std::complex<double>;

struct TrmParams {
  double a = 2.0;  // strength of the csc^2 term, a > 0
  double b = 50.0; // strength of the cot term

  static TrmParams make(double a, double b);  // validates the invariants
};

// auxiliary exponents mu, nu parameterizing the closed forms; for a real
// energy below the first gap both are real, and at E = E_n they reduce to
// mu = 2b/(n+a+1), nu = -(n+a)
struct AuxExponents {
  cval mu, nu;
};

enum class SeedKind { boundstate, general, pure_L, pure_R };

struct EvalPair {
  cval value, deriv;
};

// A solution of the base Schrodinger equation at fixed energy. Immutable
// after construction; evaluation is thread-safe. For real energies the
// closed forms are real up to rounding: eval_real returns the real parts and
// tracks the worst relative imaginary residue seen, as a diagnostic.
struct Solution {
  cval energy{};
  SeedKind kind = SeedKind::general;
  double lambda = 0.0;  // mixing coefficient when kind == general
  int index = -1;       // bound-state index when kind == boundstate
  // set by the transform layers on derived states; -1 = not probed
  int square_integrable = -1;
  bool normalized = false;

  std::function<EvalPair(double)> f;

  EvalPair eval(double x) const;
  std::pair<double, double> eval_real(double x) const;
  bool real_energy() const { return energy.imag() == 0.0; }
  double imag_residue() const { return imag_residue_ ? imag_residue_->load() : 0.0; }

  std::shared_ptr<std::atomic<double>> imag_residue_ =
      std::make_shared<std::atomic<double>>(0.0);
};

// evaluation policy constants
inline constexpr double kEndpointInset = 1e-4;  // grids live on [delta, pi-delta]
inline constexpr double kCircleInset = 1e-12;   // |z| = 1 - inset for the circle series
inline constexpr double kFormSwitch = 0.25;     // single-term form within this of its endpoint

double potential(const TrmParams& p, double x);
double bound_energy(const TrmParams& p, int n);
AuxExponents exponents(const TrmParams& p, cval E);

// coefficients of the two-term closed forms
struct TwoTermCoeffs {
  cval kappa, rho;
};
TwoTermCoeffs coeffs_L(const TrmParams& p, cval E);
TwoTermCoeffs coeffs_R(const TrmParams& p, cval E);

// The solution vanishing at x=0 (psi_L) / at x=pi (psi_R), at the exact
// overall scale the kappa/rho coefficient formulas dictate. Production
// evaluators switch between the two equivalent closed forms to avoid the
// cancellation each suffers near one endpoint.
Solution psi_L(const TrmParams& p, cval E);
Solution psi_R(const TrmParams& p, cval E);

// normalized n-th bound state, positive on its first lobe
Solution bound_state(const TrmParams& p, int n);

// psi_L + lambda * psi_R at a common real energy
Solution general_solution(const TrmParams& p, double E, double lambda);

// gap index j such that E lies in (E_j, E_{j+1}), with j = -1 below E_0;
// throws SpectralCollisionError within 1e-9 of a bound energy
int gap_index(const TrmParams& p, double E);

// interior-node count of psi_L + lambda psi_R from the gap-parity rules
int predicted_node_count(const TrmParams& p, double E, double lambda);

// The individual closed forms, exposed for cross-validation: the single-term
// series (convergent where 2 sin x < 1, i.e. within pi/6 of the vanishing
// endpoint) and the two-term unit-circle form (usable on the whole interval,
// cancellation-prone near the vanishing endpoint).
EvalPair psi_L_single_term(const TrmParams& p, cval E, double x);
EvalPair psi_L_two_term(const TrmParams& p, cval E, double x);
EvalPair psi_R_single_term(const TrmParams& p, cval E, double x);
EvalPair psi_R_two_term(const TrmParams& p, cval E, double x);

}  // namespace susytrm::trm
