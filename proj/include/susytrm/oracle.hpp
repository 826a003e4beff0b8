// Independent numerical verification layer: finite-difference eigensolver on
// (0,pi) with Dirichlet ends, node counter, ODE residual checker, quadrature.
// Deliberately self-contained: nothing here knows how the potentials or
// wavefunctions under test were produced.
#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "susytrm/errors.hpp"

namespace susytrm::oracle {

using RealFn = std::function<double(double)>;
using cval = std::complex<double>;
// value and first derivative of a solution at x
using CEvalFn = std::function<std::pair<cval, cval>(double)>;

struct Grid {
  int n_points = 2001;
  double delta = 1e-4;

  double length() const;
  double h() const;
  double x(int k) const;

  // validates the invariants n_points >= 501, 0 < delta <= 1e-3
  static Grid make(int n_points = 2001, double delta = 1e-4);
};

struct SpectrumReport {
  std::vector<double> eigenvalues;         // finer-resolution estimates
  std::vector<double> coarse_eigenvalues;  // base-resolution estimates
  double certified_tolerance = 0.0;        // 4 x max per-level |difference|
};

// Lowest k eigenvalues of -1/2 d^2/dx^2 + V with Dirichlet conditions at the
// grid ends, computed at n_points and 2*n_points-1 (same delta, halved step).
SpectrumReport fd_eigensolve(const RealFn& V, Grid grid, int k);

// Sign changes of f across the grid. A same-sign sliver pinched between two
// lobes at least twelve orders larger is a rounding-noise touch-down and is
// not counted; the comparison is against the neighboring lobes (not the
// global maximum) so that solutions diverging at an endpoint keep their
// genuine interior nodes.
int count_nodes(const RealFn& f, Grid grid);

// max over points of |-1/2 f'' + V f - E f| / [(1+|f|)(1+|E|)], with f''
// taken as a central difference (step 1e-5) of the evaluator's derivative.
double ode_residual(const CEvalFn& f, cval E, const RealFn& V,
                    const std::vector<double>& points);

// Adaptive composite 32-node Gauss-Legendre integration.
double quadrature(const RealFn& f, double lo, double hi, double abs_tol = 1e-10,
                  long max_evals = 1000000);

// one fixed 32-node Gauss-Legendre panel over [lo, hi], no adaptivity;
// exact to machine precision once f is smooth on the panel
double gl32_panel(const RealFn& f, double lo, double hi);

}  // namespace susytrm::oracle
