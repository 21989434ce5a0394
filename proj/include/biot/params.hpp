#ifndef BIOT_PARAMS_HPP
#define BIOT_PARAMS_HPP

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace biot {

// Material constants of the quasi-static poroelasticity system plus the
// final time of the evolution. All solver and norm routines read them
// from here, so a single validated instance travels through a run.
struct MaterialParams {
  double mu = 1.0;      // shear modulus
  double lambda = 1.0;  // second Lame constant
  double alpha = 1.0;   // Biot-Willis coupling
  double sigma = 0.0;   // constrained specific storage (may vanish)
  double kappa = 1.0;   // hydraulic conductivity
  double T = 1.0;       // final time [s]

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("MaterialParams: mu must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("MaterialParams: lambda must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("MaterialParams: alpha must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("MaterialParams: sigma must be >= 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("MaterialParams: kappa must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("MaterialParams: T must be > 0");
  }
};

enum class BcKind { Essential, Natural };

// Boundary tags for one labeled boundary segment: one tag for the
// displacement condition and one for the pressure condition.
struct SegmentBc {
  BcKind displacement = BcKind::Essential;
  BcKind pressure = BcKind::Natural;
};

// Per-label boundary configuration. Every boundary label of the mesh must
// appear exactly once; the essential/natural parts then partition the
// boundary by construction.
struct BoundaryConfig {
  std::map<std::string, SegmentBc> segments;

  bool displacement_all_essential() const {
    for (const auto& [name, bc] : segments)
      if (bc.displacement != BcKind::Essential) return false;
    return !segments.empty();
  }
  bool displacement_all_natural() const {
    for (const auto& [name, bc] : segments)
      if (bc.displacement != BcKind::Natural) return false;
    return !segments.empty();
  }
  bool pressure_all_natural() const {
    for (const auto& [name, bc] : segments)
      if (bc.pressure != BcKind::Natural) return false;
    return !segments.empty();
  }
  bool has_essential_pressure() const {
    for (const auto& [name, bc] : segments)
      if (bc.pressure == BcKind::Essential) return true;
    return false;
  }
  const SegmentBc& at(const std::string& label) const {
    auto it = segments.find(label);
    if (it == segments.end())
      throw std::invalid_argument("BoundaryConfig: no tags for boundary label '" + label + "'");
    return it->second;
  }
};

// Which mean-value / quotient constraints the four fields carry. Derived
// from the boundary configuration and from whether the storage
// coefficient vanishes; nothing else enters.
struct SpaceConfig {
  bool u_quotient_rigid_motions = false;  // displacement modulo rigid motions
  bool p_zero_mean = false;               // pressure space restricted to zero mean
  bool D_zero_mean = false;               // total-pressure space restricted to zero mean
  bool Pbar_zero_mean = false;            // fluid-content space restricted to zero mean

  // The pivot space sits inside the total-pressure space exactly when it
  // carries the zero-mean constraint itself or the latter does not.
  bool pbar_subset_of_D() const { return Pbar_zero_mean || !D_zero_mean; }
};

// Case table for the function-space constraints. sigma enters only through
// the exact comparison sigma == 0; no thresholding.
inline SpaceConfig select_spaces(const BoundaryConfig& bc, const MaterialParams& params) {
  const bool u_all_essential = bc.displacement_all_essential();
  const bool u_all_natural = bc.displacement_all_natural();
  const bool p_all_natural = bc.pressure_all_natural();
  const bool sigma_zero = (params.sigma == 0.0);

  SpaceConfig s;
  s.u_quotient_rigid_motions = u_all_natural;
  s.D_zero_mean = u_all_essential;
  s.Pbar_zero_mean = p_all_natural || (u_all_essential && sigma_zero);
  s.p_zero_mean = p_all_natural || (!p_all_natural && u_all_essential && sigma_zero);
  return s;
}

// Weight of the fluid-content constraint residual in the trial norm.
// Three-way case split; the first two branches meet when
// sigma ~ alpha^2/(mu+lambda) but no blending is applied.
inline double gamma_weight(const MaterialParams& params, const SpaceConfig& spaces) {
  const double elastic = (params.mu + params.lambda) / (params.alpha * params.alpha);
  if (params.sigma == 0.0) return elastic;
  if (spaces.pbar_subset_of_D()) return std::min(elastic, 1.0 / params.sigma);
  return elastic + 1.0 / params.sigma;
}

}  // namespace biot

#endif
