#ifndef BIOT_COUNTEREXAMPLE_HPP
#define BIOT_COUNTEREXAMPLE_HPP

#include <vector>

#include <Eigen/Dense>

#include "biot/params.hpp"

namespace biot {

// One Neumann eigenmode of the pressure operator on the unit square:
// w(x,y) = scale * cos(i pi x) cos(j pi y), normalized to unit L2 norm,
// eigenvalue kappa pi^2 (i^2 + j^2). Synthetic modes carry a prescribed
// eigenvalue for formula-level tests and no spatial indices.
struct EigenMode {
  int i = 0;
  int j = 0;
  double lambda = 0.0;
  int r = 0;             // ceil(lambda), the polynomial degree of the mode in time
  double scale = 1.0;    // normalization factor of the cosine product

  static EigenMode on_unit_square(int i, int j, double kappa);
  static EigenMode synthetic(double lambda);

  double value(const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;
};

// First K modes ordered by increasing eigenvalue, ties broken
// lexicographically by (i, j); the constant mode is excluded.
std::vector<EigenMode> eigen_sequence(int K, double kappa);

// Closed-form time integrals of the rough trial function built from one
// mode: p(t) = w (t/T)^r, m(t) = -lambda w t^{r+1} / (T^r (r+1)).
struct RoughQuantities {
  double int_p_L2 = 0.0;   // time integral of the squared L2 norm of p
  double int_m_L2 = 0.0;   // same for m
  double rough = 0.0;      // time integral of the squared dual norm of dm/dt
  double trial_sq = 0.0;   // full trial norm of (0, 0, p, m)
  double quotient() const { return trial_sq > 0.0 ? rough / trial_sq : 0.0; }
};

RoughQuantities rough_quantities(const EigenMode& mode, double T, const MaterialParams& params,
                                 const SpaceConfig& spaces);

struct DivergenceRow {
  double lambda = 0.0;
  int r = 0;
  double int_p_L2 = 0.0;
  double int_m_L2 = 0.0;
  double rough = 0.0;
  double trial_sq = 0.0;
  double quotient = 0.0;
};

struct DivergenceTable {
  std::vector<DivergenceRow> rows;
  bool rough_approaches_half_T = false;   // within 1% once lambda >= 250
  bool trial_sq_decreasing = false;       // monotone beyond lambda >= 100
  bool quotient_divergent = false;        // factor >= 5 per decade from 1e2 to 1e3
};

// Evaluates the rough-trial-function sequence along the true eigenvalues
// and checks the divergence of the quotient. Requires the sequence to
// reach eigenvalues >= 1e3.
DivergenceTable verify_divergence(int K, double T, const MaterialParams& params,
                                  const SpaceConfig& spaces);

}  // namespace biot

#endif
