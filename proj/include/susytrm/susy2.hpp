// Second-order Darboux transforms: two real seeds (delete, add, replace, or
// isospectral edits decided by a classification of the seed pair), a single
// complex seed (isospectral smoothing), and the confluent limit (two seeds
// at one bound level, parametrized by w0).
#pragma once

#include <string>
#include <vector>

#include "susytrm/oracle.hpp"
#include "susytrm/trm.hpp"

namespace susytrm::susy2 {

// declarative description of one real seed, used for classification before
// any solution is constructed
struct SeedSpec {
  trm::SeedKind kind = trm::SeedKind::general;
  double epsilon = 0.0;  // filled from the ladder for boundstate specs
  double lambda = 0.0;   // general mixtures only
  int index = 0;         // boundstate specs only

  static SeedSpec bound(int n);
  static SeedSpec general(double epsilon, double lambda);
  static SeedSpec left(double epsilon);
  static SeedSpec right(double epsilon);
};

// what a validated seed pair will do to the spectrum
struct SpectralPlan {
  std::string action;          // delete-two | add-two | add-one | replace-level
                               // | delete-one | isospectral-pair
  std::vector<int> removed;    // ladder indices taken out
  std::vector<double> added;   // energies inserted (ascending)
  SeedSpec seed1, seed2;       // canonical specs (lambda = 0 rewritten, energies filled)
};

// Classify a seed pair into one of the admissible second-order cases.
// Requires eps1 > eps2 strictly; a general spec with lambda = 0 is
// rewritten to the left boundary solution first. Throws
// InvalidSeedCombination when the pair fits no case and PreconditionError
// when it fits one but the admixture signs give the wrong node counts.
SpectralPlan validate_real_case(const trm::TrmParams& p, const SeedSpec& s1, const SeedSpec& s2);

struct SecondOrderPotential {
  oracle::RealFn V;
  std::vector<double> predicted_spectrum;  // ascending, truncated
  std::string construction;
  double singular_c0 = 0.0;
  double singular_cpi = 0.0;
  trm::TrmParams base{};
  trm::Solution u1, u2;  // seeds (complex/confluent cases use u1 only)
  std::vector<std::string> warnings;
};

// W, W' and W'' of the seed pair at x. The derivatives come from the
// eigenvalue equation, not numerics: W' = 2 (eps1 - eps2) u1 u2 and
// W'' = 2 (eps1 - eps2) (u1' u2 + u1 u2').
struct WronskianFrame {
  double W = 0.0, Wp = 0.0, Wpp = 0.0;
};
WronskianFrame wronskian_real(const trm::Solution& u1, const trm::Solution& u2, double x);

// V2 = V0 - [W''/W - (W'/W)^2] for a validated real pair; the Wronskian is
// scanned for sign changes first (SingularTransformError if any)
SecondOrderPotential real_case_transform(const trm::TrmParams& p, const SeedSpec& s1,
                                         const SeedSpec& s2, int levels = 8);

// psi at energy E (not equal to either seed energy) mapped onto the
// second-order partner; unit norm is preserved for E above both seeds
trm::Solution map_eigenfunction_2(const trm::Solution& u1, const trm::Solution& u2,
                                  const trm::Solution& psi, double E);

// the two candidate states of the transformed problem at the seed energies,
// u2/W at eps1 and u1/W at eps2, each probed for square-integrability and
// normalized when it holds
std::vector<trm::Solution> new_bound_states_2(const trm::Solution& u1, const trm::Solution& u2);

// One seed at complex energy (Im eps != 0, side = pure_L or pure_R):
// V2 = V0 - [w''/w - (w'/w)^2] with w = Im(u conj(u')), which is monotone
// and sign-definite, so the deformation is regular and isospectral.
SecondOrderPotential complex_case_transform(const trm::TrmParams& p, trm::cval epsilon,
                                            trm::SeedKind side, int levels = 8);

// Confluent limit at bound level j: W(x) = w0 + integral of psi_j^2 from 0
// to x. Admissible w0 <= -1 or w0 >= 0; the ends w0 = 0 and w0 = -1 delete
// E_j, every other admissible w0 is isospectral. Values within 1e-6 of the
// deleting ends trigger a near-singular warning.
SecondOrderPotential confluent_transform(const trm::TrmParams& p, int j, double w0,
                                         int levels = 8);

// the level-j state of the confluent partner, psi_j / W, normalized by the
// closed form sqrt(w0 (w0 + 1)); requires w0 strictly inside the admissible
// set (at w0 = 0 or -1 the state leaves the spectrum)
trm::Solution confluent_state(const trm::TrmParams& p, int j, double w0);

}  // namespace susytrm::susy2
