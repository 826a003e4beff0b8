#include "susytrm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace susytrm::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// ---- symmetric tridiagonal eigenvalues by Sturm-sequence bisection ----

// number of eigenvalues of the tridiagonal matrix (diag d, constant
// off-diagonal e) strictly below lambda, via the LDL^T pivot recurrence
int sturm_count(const std::vector<double>& d, double e2, double lambda) {
  int count = 0;
  double q = d[0] - lambda;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-290;  // pivot guard, standard bisection practice
    q = d[i] - lambda - e2 / q;
    if (q < 0) ++count;
  }
  return count;
}

std::vector<double> tridiag_lowest(const std::vector<double>& d, double e, int k) {
  const double e2 = e * e;
  double lo = *std::min_element(d.begin(), d.end()) - 2.0 * std::abs(e);
  double hi = *std::max_element(d.begin(), d.end()) + 2.0 * std::abs(e);

  std::vector<double> out;
  out.reserve(k);
  double level_lo = lo;
  for (int i = 0; i < k; ++i) {
    double a = level_lo, b = hi;
    for (int it = 0; it < 120 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
      double mid = 0.5 * (a + b);
      if (sturm_count(d, e2, mid) >= i + 1)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
    level_lo = a;  // eigenvalues are ordered; reuse as the next lower bound
  }
  return out;
}

std::vector<double> fd_lowest(const RealFn& V, const Grid& g, int k) {
  const double h = g.h();
  std::vector<double> d(g.n_points);
  for (int i = 0; i < g.n_points; ++i) d[i] = 1.0 / (h * h) + V(g.x(i));
  return tridiag_lowest(d, -0.5 / (h * h), k);
}

// ---- 32-node Gauss-Legendre rule on [-1,1] ----

struct GlRule {
  double node[32];
  double weight[32];
};

// Newton iteration on the Legendre polynomial roots (standard construction)
GlRule make_gl32() {
  GlRule r{};
  const int n = 32;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.node[i] = -x;
    r.node[n - 1 - i] = x;
    r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weight[n - 1 - i] = r.weight[i];
  }
  return r;
}

const GlRule& gl32() {
  static const GlRule rule = make_gl32();
  return rule;
}

double gl32_panel(const RealFn& f, double lo, double hi, long& evals) {
  const GlRule& r = gl32();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < 32; ++i) s += r.weight[i] * f(mid + half * r.node[i]);
  evals += 32;
  return s * half;
}

double quad_adaptive(const RealFn& f, double lo, double hi, double tol, long& evals,
                     long max_evals, double whole) {
  if (evals > max_evals)
    throw ConvergenceError("quadrature: evaluation budget exhausted");
  double mid = 0.5 * (lo + hi);
  double left = gl32_panel(f, lo, mid, evals);
  double right = gl32_panel(f, mid, hi, evals);
  double refined = left + right;
  if (std::abs(refined - whole) <= std::max(tol, 1e-16 * std::abs(refined)))
    return refined;
  return quad_adaptive(f, lo, mid, 0.5 * tol, evals, max_evals, left) +
         quad_adaptive(f, mid, hi, 0.5 * tol, evals, max_evals, right);
}

}  // namespace

double Grid::length() const { return kPi - 2.0 * delta; }
double Grid::h() const { return length() / (n_points - 1); }
double Grid::x(int k) const { return delta + k * h(); }

Grid Grid::make(int n_points, double delta) {
  if (n_points < 501) throw DomainError("grid: n_points must be at least 501");
  if (!(delta > 0.0) || delta > 1e-3) throw DomainError("grid: delta must be in (0, 1e-3]");
  return Grid{n_points, delta};
}

SpectrumReport fd_eigensolve(const RealFn& V, Grid grid, int k) {
  SpectrumReport rep;
  rep.coarse_eigenvalues = fd_lowest(V, grid, k);
  Grid fine{2 * grid.n_points - 1, grid.delta};
  rep.eigenvalues = fd_lowest(V, fine, k);
  double worst = 0.0;
  for (int i = 0; i < k; ++i)
    worst = std::max(worst, std::abs(rep.eigenvalues[i] - rep.coarse_eigenvalues[i]));
  rep.certified_tolerance = 4.0 * worst;
  return rep;
}

int count_nodes(const RealFn& f, Grid grid) {
  // group the samples into maximal same-sign runs (exact zeros join nothing)
  struct Run {
    int sign;
    double mag;
  };
  std::vector<Run> runs;
  for (int i = 0; i < grid.n_points; ++i) {
    double v = f(grid.x(i));
    int s = (v > 0.0) ? 1 : (v < 0.0) ? -1 : 0;
    if (s == 0) continue;
    if (!runs.empty() && runs.back().sign == s)
      runs.back().mag = std::max(runs.back().mag, std::abs(v));
    else
      runs.push_back({s, std::abs(v)});
  }

  // A sliver pinched between two same-signed lobes at least twelve orders
  // larger is a rounding-noise touch-down, not a pair of crossings; merge
  // it away. The comparison is against the neighboring lobes rather than
  // the global maximum because solutions diverging at an endpoint place
  // genuine interior nodes 20+ orders below their peak.
  for (size_t k = 1; k + 1 < runs.size();) {
    if (runs[k - 1].sign == runs[k + 1].sign &&
        runs[k].mag < 1e-12 * std::min(runs[k - 1].mag, runs[k + 1].mag)) {
      runs[k - 1].mag = std::max(runs[k - 1].mag, runs[k + 1].mag);
      runs.erase(runs.begin() + long(k), runs.begin() + long(k) + 2);
      if (k > 1) --k;
    } else {
      ++k;
    }
  }
  return runs.empty() ? 0 : int(runs.size()) - 1;
}

double ode_residual(const CEvalFn& f, cval E, const RealFn& V,
                    const std::vector<double>& points) {
  const double h = 1e-5;
  double worst = 0.0;
  for (double x : points) {
    auto [v, dv] = f(x);
    (void)dv;
    cval dplus = f(x + h).second;
    cval dminus = f(x - h).second;
    cval fpp = (dplus - dminus) / (2.0 * h);
    cval res = -0.5 * fpp + (V(x) - E) * v;
    worst = std::max(worst, std::abs(res) / ((1.0 + std::abs(v)) * (1.0 + std::abs(E))));
  }
  return worst;
}

double quadrature(const RealFn& f, double lo, double hi, double abs_tol, long max_evals) {
  if (!(lo < hi)) throw DomainError("quadrature: need lo < hi");
  long evals = 0;
  double whole = gl32_panel(f, lo, hi, evals);
  return quad_adaptive(f, lo, hi, abs_tol, evals, max_evals, whole);
}

double gl32_panel(const RealFn& f, double lo, double hi) {
  long evals = 0;
  return gl32_panel(f, lo, hi, evals);
}

}  // namespace susytrm::oracle
