#include "biot/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biot {

EigenMode EigenMode::on_unit_square(int i, int j, double kappa) {
  if (i < 0 || j < 0 || (i == 0 && j == 0))
    throw std::invalid_argument("EigenMode: indices must be nonnegative and not both zero");
  EigenMode m;
  m.i = i;
  m.j = j;
  m.lambda = kappa * M_PI * M_PI * (static_cast<double>(i) * i + static_cast<double>(j) * j);
  m.r = static_cast<int>(std::ceil(m.lambda));
  // Unit L2 norm: each active cosine contributes a factor 1/2 to the
  // squared integral.
  m.scale = (i > 0 && j > 0) ? 2.0 : std::sqrt(2.0);
  return m;
}

EigenMode EigenMode::synthetic(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("EigenMode: lambda must be positive");
  EigenMode m;
  m.i = -1;
  m.j = -1;
  m.lambda = lambda;
  m.r = static_cast<int>(std::ceil(lambda));
  m.scale = 1.0;
  return m;
}

double EigenMode::value(const Eigen::Vector2d& x) const {
  if (i < 0) throw std::logic_error("EigenMode: synthetic mode has no spatial profile");
  return scale * std::cos(i * M_PI * x.x()) * std::cos(j * M_PI * x.y());
}

Eigen::Vector2d EigenMode::gradient(const Eigen::Vector2d& x) const {
  if (i < 0) throw std::logic_error("EigenMode: synthetic mode has no spatial profile");
  return {-scale * i * M_PI * std::sin(i * M_PI * x.x()) * std::cos(j * M_PI * x.y()),
          -scale * j * M_PI * std::cos(i * M_PI * x.x()) * std::sin(j * M_PI * x.y())};
}

std::vector<EigenMode> eigen_sequence(int K, double kappa) {
  if (K < 1) throw std::invalid_argument("eigen_sequence: K must be >= 1");
  // Grow the index box until at least K pairs fall inside the disk of the
  // K-th smallest i^2+j^2, so nothing outside the box is missed.
  int box = 4;
  std::vector<std::pair<long long, std::pair<int, int>>> pairs;
  while (true) {
    pairs.clear();
    for (int i = 0; i <= box; ++i)
      for (int j = 0; j <= box; ++j) {
        if (i == 0 && j == 0) continue;
        pairs.push_back({static_cast<long long>(i) * i + static_cast<long long>(j) * j, {i, j}});
      }
    std::sort(pairs.begin(), pairs.end());
    if (static_cast<int>(pairs.size()) >= K && pairs[K - 1].first <= static_cast<long long>(box) * box)
      break;
    box *= 2;
  }
  std::vector<EigenMode> modes;
  modes.reserve(K);
  for (int k = 0; k < K; ++k)
    modes.push_back(EigenMode::on_unit_square(pairs[k].second.first, pairs[k].second.second, kappa));
  return modes;
}

RoughQuantities rough_quantities(const EigenMode& mode, double T, const MaterialParams& params,
                                 const SpaceConfig& spaces) {
  if (!(T > 0.0)) throw std::invalid_argument("rough_quantities: T must be positive");
  const double lam = mode.lambda;
  const double r = static_cast<double>(mode.r);

  RoughQuantities q;
  q.int_p_L2 = T / (2.0 * r + 1.0);
  q.int_m_L2 = T * T * T * lam * lam / ((r + 1.0) * (r + 1.0) * (2.0 * r + 3.0));
  q.rough = lam * T / (2.0 * r + 1.0);

  // Trial norm of (0, 0, p, m): the evolution residual and the initial value
  // vanish identically, leaving the two constraint residuals. The modes have
  // zero mean, so the projection onto the total-pressure space acts as the
  // identity for every boundary configuration.
  const double a2_over = params.alpha * params.alpha / (params.mu + params.lambda);
  const double gamma = gamma_weight(params, spaces);
  // (sigma p - m)(t) = w (t/T)^r (sigma + b t), b = lambda/(r+1).
  const double b = lam / (r + 1.0);
  const double mixed = params.sigma * params.sigma * T / (2.0 * r + 1.0) +
                       2.0 * params.sigma * b * T * T / (2.0 * r + 2.0) +
                       b * b * T * T * T / (2.0 * r + 3.0);
  q.trial_sq = a2_over * q.int_p_L2 + gamma * mixed;
  return q;
}

DivergenceTable verify_divergence(int K, double T, const MaterialParams& params,
                                  const SpaceConfig& spaces) {
  const std::vector<EigenMode> modes = eigen_sequence(K, params.kappa);
  if (modes.back().lambda < 1e3)
    throw std::invalid_argument("verify_divergence: K too small, largest eigenvalue below 1e3");

  DivergenceTable table;
  for (const EigenMode& mode : modes) {
    const RoughQuantities q = rough_quantities(mode, T, params, spaces);
    table.rows.push_back({mode.lambda, mode.r, q.int_p_L2, q.int_m_L2, q.rough, q.trial_sq,
                          q.quotient()});
  }

  table.rough_approaches_half_T = true;
  for (const auto& row : table.rows)
    if (row.lambda >= 250.0 && std::abs(row.rough - 0.5 * T) > 0.01 * 0.5 * T)
      table.rough_approaches_half_T = false;

  table.trial_sq_decreasing = true;
  for (size_t k = 1; k < table.rows.size(); ++k) {
    if (table.rows[k - 1].lambda < 100.0) continue;
    if (table.rows[k].lambda == table.rows[k - 1].lambda) {
      if (table.rows[k].trial_sq != table.rows[k - 1].trial_sq) table.trial_sq_decreasing = false;
    } else if (!(table.rows[k].trial_sq < table.rows[k - 1].trial_sq)) {
      table.trial_sq_decreasing = false;
    }
  }

  // Quotient growth by at least a factor 5 per eigenvalue decade:
  // compare the rows closest to 1e2 and 1e3.
  auto closest = [&](double target) {
    const DivergenceRow* best = &table.rows.front();
    for (const auto& row : table.rows)
      if (std::abs(std::log10(row.lambda / target)) < std::abs(std::log10(best->lambda / target)))
        best = &row;
    return best;
  };
  const DivergenceRow* lo = closest(1e2);
  const DivergenceRow* hi = closest(1e3);
  const double decades = std::log10(hi->lambda / lo->lambda);
  table.quotient_divergent =
      decades > 0.5 && hi->quotient / lo->quotient >= std::pow(5.0, decades);
  return table;
}

}  // namespace biot
