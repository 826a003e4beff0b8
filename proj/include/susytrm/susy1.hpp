// First-order Darboux transforms of the base model: delete the ground
// state, create a new one below it, or map isospectrally, all driven by a
// nodeless seed solution at factorization energy epsilon <= E_0.
#pragma once

#include <string>
#include <vector>

#include "susytrm/oracle.hpp"
#include "susytrm/trm.hpp"

namespace susytrm::susy1 {

// A transformed potential with its spectral bookkeeping. The csc^2-like
// divergence at each endpoint keeps the base strength a(a+1)/2 only when
// the seed neither vanishes nor diverges there; singular_c0 / singular_cpi
// record the actual coefficients for downstream verification.
struct PartnerPotential {
  oracle::RealFn V;
  std::vector<double> predicted_spectrum;  // ascending, truncated
  std::string construction;                // which design operation built it
  double singular_c0 = 0.0;
  double singular_cpi = 0.0;
  trm::TrmParams base{};
  double epsilon = 0.0;
  trm::Solution seed;
  std::vector<std::string> warnings;
};

// Core engine: V1 = 2 epsilon - V0 + (u'/u)^2, assembled analytically (the
// seed is never differentiated numerically). The seed must be nodeless on
// a 2000-point scan, otherwise SingularTransformError. The construction
// label, predicted spectrum, and endpoint coefficients follow from the
// seed kind: bound(0) deletes E_0, a general mixture creates epsilon, a
// pure boundary solution is isospectral.
PartnerPotential first_order_potential(const trm::TrmParams& p, const trm::Solution& seed,
                                       double epsilon, int levels = 8);

// seed = normalized ground state, epsilon = E_0; partner spectrum starts
// at E_1 and the endpoint strength steps a -> a+1
PartnerPotential delete_ground(const trm::TrmParams& p, int levels = 8);

// seed = psi_L + lambda psi_R at epsilon < E_0 with lambda > 0 (nodeless);
// partner gains the level epsilon and the endpoint strength steps a -> a-1
PartnerPotential create_ground(const trm::TrmParams& p, double epsilon, double lambda,
                               int levels = 8);

// seed = psi_L or psi_R at epsilon < E_0; spectrum unchanged, endpoint
// strengths step oppositely at the two ends
PartnerPotential isospectral(const trm::TrmParams& p, trm::SeedKind side, double epsilon,
                             int levels = 8);

// psi at energy E_n > epsilon mapped onto the partner:
// [-psi' + (u'/u) psi] / sqrt(2 (E_n - epsilon)); normalization is exact
// when psi is normalized. Derivative assembled via the eigenvalue equation,
// from which the base potential cancels.
trm::Solution map_eigenfunction_1(const trm::Solution& seed, double epsilon,
                                  const trm::Solution& psi, double E_n);

// the partner state 1/u at the seed's own energy; square-integrability is
// probed by shrinking-inset quadrature and the state is normalized when it
// holds
trm::Solution missing_state(const trm::Solution& seed);

}  // namespace susytrm::susy1
