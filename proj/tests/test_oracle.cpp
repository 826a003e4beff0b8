#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "susytrm/oracle.hpp"

using namespace susytrm;
using oracle::Grid;

namespace {
constexpr double kPi = std::numbers::pi;

// the model potential, written out directly so this suite stays independent
// of the library's own potential code
double trm_pot(double a, double b, double x) {
  double s = std::sin(x);
  return 0.5 * a * (a + 1.0) / (s * s) - b * std::cos(x) / s;
}
}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid::make(100), DomainError);
  CHECK_THROWS_AS(Grid::make(1001, 2e-3), DomainError);
  Grid g = Grid::make(501, 1e-4);
  CHECK(g.x(0) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(g.x(500) == doctest::Approx(kPi - 1e-4).epsilon(1e-12));
}

TEST_CASE("free particle in a box of width pi") {
  // Dirichlet box: E_n = n^2/2. The walls here are the grid truncation
  // itself, so the bias is linear in delta; 1e-3 absolute is appropriate.
  auto rep = oracle::fd_eigensolve([](double) { return 0.0; }, Grid::make(1501), 3);
  CHECK(rep.eigenvalues[0] == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(rep.eigenvalues[1] == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(rep.eigenvalues[2] == doctest::Approx(4.5).epsilon(2e-3));
}

TEST_CASE("model potential spectrum, a=2 b=50") {
  auto V = [](double x) { return trm_pot(2, 50, x); };
  auto rep = oracle::fd_eigensolve(V, Grid::make(2001), 5);
  const double want[5] = {-134.389, -70.125, -37.5, -16.722, -1.010};
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(rep.eigenvalues[i] - want[i]) < 1e-2);
    CHECK(std::abs(rep.eigenvalues[i] - want[i]) <
          std::max(rep.certified_tolerance, 5e-4));
  }
}

TEST_CASE("model potential spectrum, b=0 closed form") {
  auto V = [](double x) { return trm_pot(2, 0, x); };
  auto rep = oracle::fd_eigensolve(V, Grid::make(1501), 3);
  for (int n = 0; n < 3; ++n) {
    double want = 0.5 * (n + 3.0) * (n + 3.0);
    CHECK(std::abs(rep.eigenvalues[n] - want) < 1e-2);
  }
}

TEST_CASE("second-order convergence of the eigensolver") {
  auto V = [](double x) { return trm_pot(2, 50, x); };
  // use the coarse-resolution estimates so the grids are exactly 1001/2001/4001
  double e1 = oracle::fd_eigensolve(V, Grid::make(1001), 1).coarse_eigenvalues[0];
  double e2 = oracle::fd_eigensolve(V, Grid::make(2001), 1).coarse_eigenvalues[0];
  double e4 = oracle::fd_eigensolve(V, Grid::make(4001), 1).coarse_eigenvalues[0];
  // Richardson: successive differences shrink by the order of the scheme
  double ratio = (e2 - e1) / (e4 - e2);
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("certified tolerance is honest") {
  auto V = [](double x) { return trm_pot(2, 50, x); };
  auto at2001 = oracle::fd_eigensolve(V, Grid::make(2001), 5);
  auto at4001 = oracle::fd_eigensolve(V, Grid::make(4001), 5);
  // at4001.eigenvalues come from the 8001-point grid; the tolerance certified
  // at 2001 must still cover the remaining refinement error
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(at4001.eigenvalues[i] - at2001.eigenvalues[i]) <=
          at2001.certified_tolerance);
}

TEST_CASE("node counting") {
  Grid g = Grid::make(2001);
  CHECK(oracle::count_nodes([](double x) { return std::sin(3.0 * x); }, g) == 2);
  CHECK(oracle::count_nodes([](double x) { return std::sin(5.0 * x); }, g) == 4);
  CHECK(oracle::count_nodes([](double x) { return 1.0 + std::cos(x); }, g) == 0);
  // a touch-down without crossing is not a node
  CHECK(oracle::count_nodes([](double x) { return (x - 1.0) * (x - 1.0); }, g) == 0);
  // counts are grid-stable
  CHECK(oracle::count_nodes([](double x) { return std::sin(5.0 * x); }, Grid::make(4001)) == 4);
  // nodes must survive a 27-order dynamic range: the early zeros of this
  // function sit ~1e-22 below its maximum, yet they are genuine crossings
  CHECK(oracle::count_nodes([](double x) { return std::sin(5.0 * x) * std::exp(20.0 * x); }, g) == 4);
  // ...while a noise-scale undershoot pinched between large same-signed
  // lobes is a touch-down, not a pair of crossings
  CHECK(oracle::count_nodes(
            [](double x) { return std::abs(x - 1.0) < 8e-4 ? -1e-25 : 1.0 + x; }, g) == 0);
  // the same undershoot against comparable neighbors is a real double crossing
  CHECK(oracle::count_nodes(
            [](double x) { return std::abs(x - 1.0) < 8e-4 ? -0.5 : 1.0 + x; }, g) == 2);
}

TEST_CASE("quadrature basics") {
  double v = oracle::quadrature([](double x) { return std::sin(x) * std::sin(x); }, 0.0, kPi);
  CHECK(v == doctest::Approx(kPi / 2).epsilon(1e-12));

  // the normalization-style integrand, cross-checked against a dense trapezoid
  auto f = [](double x) {
    double s = std::sin(x);
    return std::pow(s, 6.0) * std::exp(-100.0 * x / 3.0);
  };
  double gl = oracle::quadrature(f, 0.0, kPi, 1e-14);
  long n = 100000;
  double h = kPi / n, trap = 0.0;
  for (long i = 1; i < n; ++i) trap += f(i * h);
  trap = h * (trap + 0.5 * (f(0.0) + f(kPi)));
  CHECK(std::abs(gl - trap) / std::abs(gl) < 1e-8);
}

TEST_CASE("quadrature raises when the budget runs out") {
  CHECK_THROWS_AS(
      oracle::quadrature([](double x) { return std::sin(5000.0 * x * x); }, 0.0, kPi, 1e-15, 500),
      ConvergenceError);
}

TEST_CASE("ode residual detects faults") {
  auto V = [](double) { return 0.0; };
  std::vector<double> pts;
  for (int i = 1; i <= 50; ++i) pts.push_back(0.1 + (kPi - 0.2) * i / 51.0);

  // sin(2x) solves -f''/2 = 2 f
  oracle::CEvalFn good = [](double x) {
    return std::make_pair(oracle::cval(std::sin(2 * x), 0.0),
                          oracle::cval(2.0 * std::cos(2 * x), 0.0));
  };
  CHECK(oracle::ode_residual(good, 2.0, V, pts) < 1e-7);

  // same solution with the value channel scaled by 1+1e-3 on half the domain
  oracle::CEvalFn bad = [](double x) {
    double scale = x > 1.5 ? 1.001 : 1.0;
    return std::make_pair(oracle::cval(scale * std::sin(2 * x), 0.0),
                          oracle::cval(2.0 * std::cos(2 * x), 0.0));
  };
  CHECK(oracle::ode_residual(bad, 2.0, V, pts) > 1e-4);
}
