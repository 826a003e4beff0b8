#include "susytrm/susy1.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace susytrm::susy1 {

namespace {

constexpr double kPi = std::numbers::pi;

// endpoint behavior of a seed decides the transformed csc^2 strength:
// a seed vanishing like sin^{a+1} steps a -> a+1 there, one diverging
// like sin^{-a} steps a -> a-1
double stepped_coefficient(double a, bool seed_vanishes) {
  double ae = seed_vanishes ? a + 1.0 : a - 1.0;
  return 0.5 * ae * (ae + 1.0);
}

void require_nodeless(const trm::Solution& seed) {
  oracle::Grid scan = oracle::Grid::make(2000);
  int nodes = oracle::count_nodes([&seed](double x) { return seed.eval_real(x).first; }, scan);
  if (nodes != 0)
    throw SingularTransformError("first-order seed has " + std::to_string(nodes) +
                                 " node(s); transform would be singular");
}

std::vector<double> ladder(const trm::TrmParams& p, int first, int count) {
  std::vector<double> E(count);
  for (int k = 0; k < count; ++k) E[k] = trm::bound_energy(p, first + k);
  return E;
}

}  // namespace

PartnerPotential first_order_potential(const trm::TrmParams& p, const trm::Solution& seed,
                                       double epsilon, int levels) {
  if (levels < 1) throw DomainError("levels must be positive");
  require_nodeless(seed);

  PartnerPotential out;
  out.base = p;
  out.epsilon = epsilon;
  out.seed = seed;
  trm::Solution u = seed;
  out.V = [p, u, epsilon](double x) {
    auto [v, d] = u.eval_real(x);
    double w = d / v;
    return 2.0 * epsilon - trm::potential(p, x) + w * w;
  };

  // a general seed with no admixture is the left boundary solution; label
  // and endpoint coefficients must reflect its actual behavior
  trm::SeedKind kind = seed.kind;
  if (kind == trm::SeedKind::general && seed.lambda == 0.0) kind = trm::SeedKind::pure_L;

  switch (kind) {
    case trm::SeedKind::boundstate:
      if (seed.index != 0)
        throw PreconditionError("only the ground state seeds a deletion");
      if (std::abs(epsilon - trm::bound_energy(p, 0)) > 1e-9 * (1.0 + std::abs(epsilon)))
        throw PreconditionError("deletion seed and factorization energy disagree");
      out.construction = "delete-ground";
      out.predicted_spectrum = ladder(p, 1, levels);
      out.singular_c0 = stepped_coefficient(p.a, true);
      out.singular_cpi = stepped_coefficient(p.a, true);
      break;
    case trm::SeedKind::general:
      out.construction = "create-ground";
      out.predicted_spectrum.push_back(epsilon);
      for (double E : ladder(p, 0, levels - 1)) out.predicted_spectrum.push_back(E);
      out.singular_c0 = stepped_coefficient(p.a, false);
      out.singular_cpi = stepped_coefficient(p.a, false);
      break;
    case trm::SeedKind::pure_L:
      out.construction = "isospectral-L";
      out.predicted_spectrum = ladder(p, 0, levels);
      out.singular_c0 = stepped_coefficient(p.a, true);
      out.singular_cpi = stepped_coefficient(p.a, false);
      break;
    case trm::SeedKind::pure_R:
      out.construction = "isospectral-R";
      out.predicted_spectrum = ladder(p, 0, levels);
      out.singular_c0 = stepped_coefficient(p.a, false);
      out.singular_cpi = stepped_coefficient(p.a, true);
      break;
  }
  return out;
}

PartnerPotential delete_ground(const trm::TrmParams& p, int levels) {
  return first_order_potential(p, trm::bound_state(p, 0), trm::bound_energy(p, 0), levels);
}

PartnerPotential create_ground(const trm::TrmParams& p, double epsilon, double lambda,
                               int levels) {
  if (!(epsilon < trm::bound_energy(p, 0)))
    throw PreconditionError("create-ground needs epsilon below the ground level");
  if (!(lambda > 0.0))
    throw PreconditionError("create-ground needs lambda > 0 for a nodeless seed");
  return first_order_potential(p, trm::general_solution(p, epsilon, lambda), epsilon, levels);
}

PartnerPotential isospectral(const trm::TrmParams& p, trm::SeedKind side, double epsilon,
                             int levels) {
  if (side != trm::SeedKind::pure_L && side != trm::SeedKind::pure_R)
    throw PreconditionError("isospectral transform takes a pure boundary solution");
  if (!(epsilon < trm::bound_energy(p, 0)))
    throw PreconditionError("isospectral transform needs epsilon below the ground level");
  trm::Solution u =
      (side == trm::SeedKind::pure_L) ? trm::psi_L(p, epsilon) : trm::psi_R(p, epsilon);
  return first_order_potential(p, u, epsilon, levels);
}

trm::Solution map_eigenfunction_1(const trm::Solution& seed, double epsilon,
                                  const trm::Solution& psi, double E_n) {
  if (std::abs(E_n - epsilon) <= 1e-12 * (1.0 + std::abs(E_n)))
    throw DegenerateEnergyError("cannot map a state at the factorization energy");
  if (E_n < epsilon)
    throw PreconditionError("mapped energy must lie above the factorization energy");
  const double scale = 1.0 / std::sqrt(2.0 * (E_n - epsilon));

  trm::Solution out;
  out.energy = E_n;
  out.kind = psi.kind;
  out.index = psi.index;
  out.square_integrable = psi.square_integrable;
  out.normalized = psi.normalized;
  trm::Solution u = seed, ps = psi;
  out.f = [u, ps, epsilon, E_n, scale](double x) -> trm::EvalPair {
    trm::EvalPair se = u.f(x);
    trm::EvalPair pe = ps.f(x);
    trm::cval w = se.deriv / se.value;
    trm::cval val = (-pe.deriv + w * pe.value) * scale;
    // d/dx of the intertwined state, with psi'' and (u'/u)' removed through
    // the eigenvalue equation: the base potential cancels out
    trm::cval der = ((2.0 * (E_n - epsilon) - w * w) * pe.value + w * pe.deriv) * scale;
    return {val, der};
  };
  return out;
}

trm::Solution missing_state(const trm::Solution& seed) {
  require_nodeless(seed);

  trm::Solution out;
  out.energy = seed.energy;
  out.kind = seed.kind;
  trm::Solution u = seed;
  auto raw = [u](double x) -> trm::EvalPair {
    trm::EvalPair se = u.f(x);
    trm::cval inv = 1.0 / se.value;
    return {inv, -se.deriv * inv * inv};
  };

  // integrability probe: the inverse-square norm must be inset-stable as
  // the integration window approaches the endpoints
  auto density = [&raw](double x) {
    trm::cval v = raw(x).value;
    return std::norm(v);
  };
  // endpoint densities are powers of the wall distance, so steady growth
  // under a shrinking inset already decides divergence without quadrature
  bool converged = true;
  for (int side = 0; side < 2 && converged; ++side) {
    double d1 = density(side ? kPi - 1e-3 : 1e-3);
    double d2 = density(side ? kPi - 1e-4 : 1e-4);
    double d3 = density(side ? kPi - 1e-5 : 1e-5);
    if (d2 > 100.0 * d1 && d3 > 100.0 * d2) converged = false;
  }
  double prev = 0.0;
  for (int k = 0; converged && k < 3; ++k) {
    double delta = std::pow(10.0, -(3 + k));
    double I;
    try {
      // capped budget: a bound density settles in a few thousand panels,
      // and exhausting the cap is itself the divergence verdict
      double rough = oracle::quadrature(density, delta, kPi - delta, 1e-6, 150000);
      I = oracle::quadrature(density, delta, kPi - delta,
                             std::max(1e-300, 1e-9 * std::abs(rough)), 150000);
    } catch (const ConvergenceError&) {
      // a norm that cannot settle within the evaluation budget is the
      // divergence signature, not a failure of the probe
      converged = false;
      break;
    }
    if (k > 0 && std::abs(I - prev) >= 1e-4 * std::abs(I)) converged = false;
    prev = I;
  }

  out.square_integrable = converged ? 1 : 0;
  if (converged) {
    double cn = 1.0 / std::sqrt(prev);
    out.normalized = true;
    out.f = [raw, cn](double x) -> trm::EvalPair {
      trm::EvalPair e = raw(x);
      return {cn * e.value, cn * e.deriv};
    };
  } else {
    out.normalized = false;
    out.f = raw;
  }
  return out;
}

}  // namespace susytrm::susy1
