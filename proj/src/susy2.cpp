#include "susytrm/susy2.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace susytrm::susy2 {

namespace {

constexpr double kPi = std::numbers::pi;

double strength(double a_eff) { return 0.5 * a_eff * (a_eff + 1.0); }

bool vanishes_at_0(trm::SeedKind k) {
  return k == trm::SeedKind::boundstate || k == trm::SeedKind::pure_L;
}
bool vanishes_at_pi(trm::SeedKind k) {
  return k == trm::SeedKind::boundstate || k == trm::SeedKind::pure_R;
}

// endpoint rule: each vanishing seed steps a up by one there, each
// diverging seed steps it down by one
double paired_strength(double a, bool v1, bool v2) {
  return strength(a + 2.0 * (double(v1) + double(v2) - 1.0));
}

SeedSpec canonical(const trm::TrmParams& p, SeedSpec s) {
  if (s.kind == trm::SeedKind::general && s.lambda == 0.0) {
    s.kind = trm::SeedKind::pure_L;
  }
  if (s.kind == trm::SeedKind::boundstate) {
    if (s.index < 0) throw DomainError("bound seed needs a nonnegative index");
    s.epsilon = trm::bound_energy(p, s.index);
    s.lambda = 0.0;
  }
  return s;
}

trm::Solution build_seed(const trm::TrmParams& p, const SeedSpec& s) {
  switch (s.kind) {
    case trm::SeedKind::boundstate:
      return trm::bound_state(p, s.index);
    case trm::SeedKind::general:
      return trm::general_solution(p, s.epsilon, s.lambda);
    case trm::SeedKind::pure_L:
      return trm::psi_L(p, s.epsilon);
    case trm::SeedKind::pure_R:
      return trm::psi_R(p, s.epsilon);
  }
  throw DomainError("unreachable seed kind");
}

void require_node_count(const trm::TrmParams& p, const SeedSpec& s, int needed,
                        const char* role) {
  if (s.kind != trm::SeedKind::general) return;  // pure counts are fixed by the gap
  int have = trm::predicted_node_count(p, s.epsilon, s.lambda);
  if (have != needed)
    throw PreconditionError(std::string(role) + " seed has " + std::to_string(have) +
                            " node(s) where " + std::to_string(needed) +
                            " are required; flip the sign of lambda");
}

void require_sign_definite(const oracle::RealFn& f, const char* what) {
  int crossings = oracle::count_nodes(f, oracle::Grid::make(2000));
  if (crossings != 0)
    throw SingularTransformError(std::string(what) + " changes sign " +
                                 std::to_string(crossings) +
                                 " time(s); the transformed potential would be singular");
}

std::vector<double> edited_ladder(const trm::TrmParams& p, const std::vector<int>& removed,
                                  const std::vector<double>& added, int levels) {
  std::vector<double> out = added;
  int reach = levels + int(removed.size()) + 2;
  for (int n = 0; n < reach; ++n) {
    if (std::find(removed.begin(), removed.end(), n) == removed.end())
      out.push_back(trm::bound_energy(p, n));
  }
  std::sort(out.begin(), out.end());
  out.resize(levels);
  return out;
}

// shrinking-inset probe shared by the candidate states at the seed
// energies; returns {square integrable, settled norm}
std::pair<bool, double> probe_norm(const std::function<trm::EvalPair(double)>& raw) {
  auto density = [&raw](double x) { return std::norm(raw(x).value); };
  // endpoint densities are powers of the wall distance, so steady growth
  // under a shrinking inset already decides divergence without quadrature
  for (int side = 0; side < 2; ++side) {
    double d1 = density(side ? kPi - 1e-3 : 1e-3);
    double d2 = density(side ? kPi - 1e-4 : 1e-4);
    double d3 = density(side ? kPi - 1e-5 : 1e-5);
    if (d2 > 100.0 * d1 && d3 > 100.0 * d2) return {false, 0.0};
  }
  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    double delta = std::pow(10.0, -(3 + k));
    double I;
    try {
      // capped budget: a bound density settles in a few thousand panels,
      // and exhausting the cap is itself the divergence verdict
      double rough = oracle::quadrature(density, delta, kPi - delta, 1e-6, 150000);
      I = oracle::quadrature(density, delta, kPi - delta,
                             std::max(1e-300, 1e-9 * std::abs(rough)), 150000);
    } catch (const ConvergenceError&) {
      return {false, 0.0};  // a norm that cannot settle is the divergence signature
    }
    if (k > 0 && std::abs(I - prev) >= 1e-4 * std::abs(I)) return {false, 0.0};
    prev = I;
  }
  return {true, prev};
}

// cumulative norm of one bound state, cached per cell so that W(x) costs at
// most one fixed panel beyond a table lookup
struct NormCache {
  int cells = 2048;
  double h = kPi / 2048;
  std::vector<double> from_left;   // integral over (0, x_k)
  std::vector<double> from_right;  // integral over (x_k, pi)
};

std::shared_ptr<const NormCache> build_norm_cache(const trm::Solution& u) {
  auto cache = std::make_shared<NormCache>();
  auto density = [&u](double x) {
    double v = u.eval_real(x).first;
    return v * v;
  };
  std::vector<double> cell(cache->cells);
  for (int i = 0; i < cache->cells; ++i)
    cell[i] = oracle::gl32_panel(density, i * cache->h, (i + 1) * cache->h);
  cache->from_left.assign(cache->cells + 1, 0.0);
  cache->from_right.assign(cache->cells + 1, 0.0);
  for (int i = 0; i < cache->cells; ++i)
    cache->from_left[i + 1] = cache->from_left[i] + cell[i];
  for (int i = cache->cells - 1; i >= 0; --i)
    cache->from_right[i] = cache->from_right[i + 1] + cell[i];
  return cache;
}

// the factorization function of the confluent case, W(x) = w0 + Q(x),
// computed from whichever end keeps the increments additive (no
// cancellation): Q directly for w0 >= 0, (w0+1) - T for w0 <= -1
class ConfluentW {
 public:
  ConfluentW(trm::Solution u, double w0)
      : u_(std::move(u)), w0_(w0), tail_(w0 <= -1.0), cache_(build_norm_cache(u_)) {}

  double operator()(double x) const {
    auto density = [this](double t) {
      double v = u_.eval_real(t).first;
      return v * v;
    };
    int k = std::clamp(int(x / cache_->h), 0, cache_->cells - 1);
    if (tail_) {
      double t = cache_->from_right[k + 1] + oracle::gl32_panel(density, x, (k + 1) * cache_->h);
      return (w0_ + 1.0) - t;
    }
    double q = cache_->from_left[k] + oracle::gl32_panel(density, k * cache_->h, x);
    return w0_ + q;
  }

  const trm::Solution& state() const { return u_; }

 private:
  trm::Solution u_;
  double w0_;
  bool tail_;
  std::shared_ptr<const NormCache> cache_;
};

}  // namespace

SeedSpec SeedSpec::bound(int n) {
  SeedSpec s;
  s.kind = trm::SeedKind::boundstate;
  s.index = n;
  return s;
}
SeedSpec SeedSpec::general(double epsilon, double lambda) {
  SeedSpec s;
  s.kind = trm::SeedKind::general;
  s.epsilon = epsilon;
  s.lambda = lambda;
  return s;
}
SeedSpec SeedSpec::left(double epsilon) {
  SeedSpec s;
  s.kind = trm::SeedKind::pure_L;
  s.epsilon = epsilon;
  return s;
}
SeedSpec SeedSpec::right(double epsilon) {
  SeedSpec s;
  s.kind = trm::SeedKind::pure_R;
  s.epsilon = epsilon;
  return s;
}

SpectralPlan validate_real_case(const trm::TrmParams& p, const SeedSpec& s1_in,
                                const SeedSpec& s2_in) {
  SpectralPlan plan;
  plan.seed1 = canonical(p, s1_in);
  plan.seed2 = canonical(p, s2_in);
  const SeedSpec& s1 = plan.seed1;
  const SeedSpec& s2 = plan.seed2;

  if (s1.epsilon == s2.epsilon)
    throw InvalidSeedCombination(
        "seed energies coincide; a doubled level is the confluent case");
  if (!(s1.epsilon > s2.epsilon))
    throw InvalidSeedCombination("seeds must be ordered by energy, first strictly above second");

  const bool b1 = s1.kind == trm::SeedKind::boundstate;
  const bool b2 = s2.kind == trm::SeedKind::boundstate;
  // gap index of each non-bound seed (throws on a spectral collision)
  const int g1 = b1 ? -2 : trm::gap_index(p, s1.epsilon);
  const int g2 = b2 ? -2 : trm::gap_index(p, s2.epsilon);

  if (b1 && b2) {
    if (s1.index != s2.index + 1)
      throw InvalidSeedCombination("two bound seeds must be consecutive levels");
    plan.action = "delete-two";
    plan.removed = {s2.index, s1.index};
    return plan;
  }

  const bool gen1 = s1.kind == trm::SeedKind::general;
  const bool gen2 = s2.kind == trm::SeedKind::general;

  if (!b1 && !b2) {
    if (g1 != g2)
      throw InvalidSeedCombination("unbound seed energies must share a spectral gap");
    if (gen1 && gen2) {
      require_node_count(p, s1, g1 + 1, "upper");
      require_node_count(p, s2, g1 + 2, "lower");
      plan.action = "add-two";
      plan.added = {s2.epsilon, s1.epsilon};
      return plan;
    }
    if (gen1 != gen2) {
      // the pure solution contributes no level; the mixture's energy enters
      require_node_count(p, s1, g1 + 1, "upper");
      require_node_count(p, s2, g1 + 2, "lower");
      plan.action = "add-one";
      plan.added = {gen1 ? s1.epsilon : s2.epsilon};
      return plan;
    }
    plan.action = "isospectral-pair";
    return plan;
  }

  // one bound seed, one running at an adjacent-gap energy
  const SeedSpec& bound_s = b1 ? s1 : s2;
  const SeedSpec& other = b1 ? s2 : s1;
  const int j = bound_s.index;
  const int g = b1 ? g2 : g1;
  const int adjacent = b1 ? j - 1 : j;  // below the level when it is seed 1
  if (g != adjacent)
    throw InvalidSeedCombination(
        "a bound seed pairs only with an energy in one of its flanking gaps");
  require_node_count(p, other, j + 1, b1 ? "lower" : "upper");

  if (other.kind == trm::SeedKind::general) {
    plan.action = "replace-level";
    plan.removed = {j};
    plan.added = {other.epsilon};
  } else {
    plan.action = "delete-one";
    plan.removed = {j};
  }
  return plan;
}

WronskianFrame wronskian_real(const trm::Solution& u1, const trm::Solution& u2, double x) {
  auto [v1, d1] = u1.eval_real(x);
  auto [v2, d2] = u2.eval_real(x);
  const double de = u1.energy.real() - u2.energy.real();
  WronskianFrame f;
  f.W = v1 * d2 - d1 * v2;
  f.Wp = 2.0 * de * v1 * v2;
  f.Wpp = 2.0 * de * (d1 * v2 + v1 * d2);
  return f;
}

SecondOrderPotential real_case_transform(const trm::TrmParams& p, const SeedSpec& s1,
                                         const SeedSpec& s2, int levels) {
  if (levels < 1) throw DomainError("levels must be positive");
  SpectralPlan plan = validate_real_case(p, s1, s2);

  SecondOrderPotential out;
  out.base = p;
  out.construction = plan.action;
  out.u1 = build_seed(p, plan.seed1);
  out.u2 = build_seed(p, plan.seed2);

  const trm::Solution& u1 = out.u1;
  const trm::Solution& u2 = out.u2;
  require_sign_definite(
      [&u1, &u2](double x) { return wronskian_real(u1, u2, x).W; },
      "the seed-pair Wronskian");

  trm::Solution c1 = out.u1, c2 = out.u2;
  out.V = [p, c1, c2](double x) {
    WronskianFrame f = wronskian_real(c1, c2, x);
    return trm::potential(p, x) - (f.Wpp / f.W - (f.Wp / f.W) * (f.Wp / f.W));
  };

  out.predicted_spectrum = edited_ladder(p, plan.removed, plan.added, levels);
  out.singular_c0 =
      paired_strength(p.a, vanishes_at_0(plan.seed1.kind), vanishes_at_0(plan.seed2.kind));
  out.singular_cpi =
      paired_strength(p.a, vanishes_at_pi(plan.seed1.kind), vanishes_at_pi(plan.seed2.kind));
  return out;
}

trm::Solution map_eigenfunction_2(const trm::Solution& u1, const trm::Solution& u2,
                                  const trm::Solution& psi, double E) {
  const double e1 = u1.energy.real();
  const double e2 = u2.energy.real();
  for (double e : {e1, e2})
    if (std::abs(E - e) <= 1e-12 * (1.0 + std::abs(E)))
      throw DegenerateEnergyError("cannot map a state at a seed energy");
  const double product = (E - e1) * (E - e2);
  if (product <= 0.0)
    throw PreconditionError("mapped energy must not lie between the seed energies");
  const double scale = 1.0 / (2.0 * std::sqrt(product));

  trm::Solution out;
  out.energy = E;
  out.kind = psi.kind;
  out.index = psi.index;
  out.square_integrable = psi.square_integrable;
  out.normalized = psi.normalized;
  trm::Solution a = u1, b = u2, s = psi;
  out.f = [a, b, s, e1, e2, E, scale](double x) -> trm::EvalPair {
    trm::EvalPair f1 = a.f(x);
    trm::EvalPair f2 = b.f(x);
    trm::EvalPair fp = s.f(x);
    trm::cval w12 = f1.value * f2.deriv - f1.deriv * f2.value;
    trm::cval w12p = 2.0 * (e1 - e2) * f1.value * f2.value;
    trm::cval w1p = f1.value * fp.deriv - f1.deriv * fp.value;
    trm::cval w3 = 2.0 * (e1 - E) * fp.value * w12 - 2.0 * (e1 - e2) * f2.value * w1p;
    // the cross terms of the product rule cancel pairwise, leaving the
    // derivative channel with the same shape as the value channel
    trm::cval w3p = 2.0 * (e1 - E) * fp.deriv * w12 - 2.0 * (e1 - e2) * f2.deriv * w1p;
    return {w3 / w12 * scale, (w3p * w12 - w3 * w12p) / (w12 * w12) * scale};
  };
  return out;
}

std::vector<trm::Solution> new_bound_states_2(const trm::Solution& u1,
                                              const trm::Solution& u2) {
  std::vector<trm::Solution> out;
  for (int which = 0; which < 2; ++which) {
    const trm::Solution& numer = (which == 0) ? u2 : u1;
    trm::Solution a = u1, b = u2, n = numer;
    const double de = u1.energy.real() - u2.energy.real();
    auto raw = [a, b, n, de](double x) -> trm::EvalPair {
      trm::EvalPair f1 = a.f(x);
      trm::EvalPair f2 = b.f(x);
      trm::EvalPair fn = n.f(x);
      trm::cval w = f1.value * f2.deriv - f1.deriv * f2.value;
      trm::cval wp = 2.0 * de * f1.value * f2.value;
      return {fn.value / w, (fn.deriv * w - fn.value * wp) / (w * w)};
    };

    trm::Solution state;
    state.energy = (which == 0) ? u1.energy : u2.energy;
    state.kind = trm::SeedKind::general;
    auto [si, norm] = probe_norm(raw);
    state.square_integrable = si ? 1 : 0;
    if (si) {
      double cn = 1.0 / std::sqrt(norm);
      state.normalized = true;
      state.f = [raw, cn](double x) -> trm::EvalPair {
        trm::EvalPair e = raw(x);
        return {cn * e.value, cn * e.deriv};
      };
    } else {
      state.normalized = false;
      state.f = raw;
    }
    out.push_back(std::move(state));
  }
  return out;
}

SecondOrderPotential complex_case_transform(const trm::TrmParams& p, trm::cval epsilon,
                                            trm::SeedKind side, int levels) {
  if (levels < 1) throw DomainError("levels must be positive");
  if (side != trm::SeedKind::pure_L && side != trm::SeedKind::pure_R)
    throw PreconditionError("complex transform takes a pure boundary solution");
  if (epsilon.imag() == 0.0)
    throw PreconditionError("complex transform needs a nonreal energy");

  SecondOrderPotential out;
  out.base = p;
  out.construction = (side == trm::SeedKind::pure_L) ? "complex-L" : "complex-R";
  out.u1 = (side == trm::SeedKind::pure_L) ? trm::psi_L(p, epsilon) : trm::psi_R(p, epsilon);

  const double im2 = 2.0 * epsilon.imag();
  trm::Solution u = out.u1;
  auto w_of = [u](double x) {
    trm::EvalPair e = u.f(x);
    return std::imag(e.value * std::conj(e.deriv));
  };
  require_sign_definite(w_of, "the complex seed's flux function");

  out.V = [p, u, im2](double x) {
    trm::EvalPair e = u.f(x);
    double w = std::imag(e.value * std::conj(e.deriv));
    double wp = im2 * std::norm(e.value);
    double wpp = 2.0 * im2 * std::real(std::conj(e.value) * e.deriv);
    return trm::potential(p, x) - (wpp / w - (wp / w) * (wp / w));
  };

  out.predicted_spectrum = edited_ladder(p, {}, {}, levels);
  const bool left = side == trm::SeedKind::pure_L;
  out.singular_c0 = strength(p.a + (left ? 2.0 : -2.0));
  out.singular_cpi = strength(p.a + (left ? -2.0 : 2.0));
  return out;
}

SecondOrderPotential confluent_transform(const trm::TrmParams& p, int j, double w0,
                                         int levels) {
  if (levels < 1) throw DomainError("levels must be positive");
  if (j < 0) throw DomainError("bound level index must be nonnegative");
  if (w0 > -1.0 && w0 < 0.0)
    throw PreconditionError(
        "w0 inside (-1, 0) puts a zero of the factorization function in the interval");

  SecondOrderPotential out;
  out.base = p;
  out.construction = "confluent";
  out.u1 = trm::bound_state(p, j);
  const bool deletes = (w0 == 0.0) || (w0 == -1.0);
  if (!deletes && (std::abs(w0) < 1e-6 || std::abs(w0 + 1.0) < 1e-6))
    out.warnings.push_back(
        "w0 is within 1e-6 of a deleting endpoint; the potential is nearly singular");

  ConfluentW W(out.u1, w0);
  trm::Solution u = out.u1;
  out.V = [p, u, W](double x) {
    auto [v, d] = u.eval_real(x);
    double Wx = W(x);
    double wp = v * v;
    double wpp = 2.0 * v * d;
    return trm::potential(p, x) - (wpp / Wx - (wp / Wx) * (wp / Wx));
  };

  out.predicted_spectrum =
      edited_ladder(p, deletes ? std::vector<int>{j} : std::vector<int>{}, {}, levels);
  out.singular_c0 = (w0 == 0.0) ? strength(p.a + 2.0) : strength(p.a);
  out.singular_cpi = (w0 == -1.0) ? strength(p.a + 2.0) : strength(p.a);
  return out;
}

trm::Solution confluent_state(const trm::TrmParams& p, int j, double w0) {
  if (j < 0) throw DomainError("bound level index must be nonnegative");
  if (!(w0 > 0.0 || w0 < -1.0))
    throw PreconditionError(
        "the replaced level exists only for w0 strictly outside [-1, 0]");

  trm::Solution u = trm::bound_state(p, j);
  ConfluentW W(u, w0);
  // integral of (psi_j / W)^2 telescopes to 1/(w0 (w0+1)) exactly
  const double cn = std::sqrt(w0 * (w0 + 1.0));

  trm::Solution out;
  out.energy = u.energy;
  out.kind = trm::SeedKind::boundstate;
  out.index = j;
  out.square_integrable = 1;
  out.normalized = true;
  out.f = [u, W, cn](double x) -> trm::EvalPair {
    trm::EvalPair e = u.f(x);
    double Wx = W(x);
    trm::cval wp = e.value * e.value;  // real seed: W' = psi^2
    return {cn * e.value / Wx, cn * (e.deriv * Wx - e.value * wp) / (Wx * Wx)};
  };
  return out;
}

}  // namespace susytrm::susy2
