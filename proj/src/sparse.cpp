#include "biot/sparse.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <memory>
#include <set>

namespace biot {

namespace {

void check_pattern_symmetric(const SpMat& m, bool check_values) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SparseSym: matrix must be square");
  std::set<std::pair<int, int>> entries;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0.0) entries.emplace(it.row(), it.col());
  for (const auto& [i, j] : entries)
    if (!entries.count({j, i}))
      throw std::invalid_argument("SparseSym: stored pattern not symmetric");
  if (check_values) {
    const double scale = m.coeffs().size() ? m.coeffs().cwiseAbs().maxCoeff() : 0.0;
    SpMat diff = SpMat(m.transpose()) - m;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SpMat::InnerIterator it(diff, k); it; ++it)
        if (std::abs(it.value()) > 1e-14 * std::max(scale, 1e-300))
          throw std::invalid_argument("SparseSym: values not symmetric within 1e-14 relative");
  }
}

}  // namespace

SparseSym::SparseSym(SpMat mat, bool check_value_symmetry) : mat_(std::move(mat)) {
  mat_.makeCompressed();
  check_pattern_symmetric(mat_, check_value_symmetry);
}

SparseSym SparseSym::from_triplets(int dim, const std::vector<Triplet>& triplets,
                                   bool check_value_symmetry) {
  SpMat m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSym(std::move(m), check_value_symmetry);
}

SparseSym SparseSym::from_dense(const Eigen::MatrixXd& dense, bool check_value_symmetry) {
  return SparseSym(dense.sparseView(), check_value_symmetry);
}

Eigen::VectorXd solve_spd(const SparseSym& A, const Eigen::VectorXd& b, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_spd: tol must be > 0");
  if (b.size() != A.dim()) throw std::invalid_argument("solve_spd: size mismatch");
  if (b.norm() == 0.0) return Eigen::VectorXd::Zero(A.dim());

  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setMaxIterations(10 * A.dim());
  cg.setTolerance(tol);
  cg.compute(A.matrix());
  Eigen::VectorXd x = cg.solve(b);
  const double res = (A.matrix() * x - b).norm() / b.norm();
  if (!(res <= tol))
    throw SolveError("solve_spd: conjugate gradients did not converge, residual " + std::to_string(res),
                     res);
  return x;
}

SpdFactor::SpdFactor(const SpMat& A) {
  llt_.compute(A);
  if (llt_.info() != Eigen::Success)
    throw SingularMatrixError("SpdFactor: factorization failed (matrix not SPD?)");
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

SaddleFactor::SaddleFactor(const SpMat& K) : mat_(K) {
  mat_.makeCompressed();
  lu_.compute(mat_);
  if (lu_.info() != Eigen::Success)
    throw SingularMatrixError("SaddleFactor: LU factorization failed (singular step matrix?)");
}

Eigen::VectorXd SaddleFactor::solve(const Eigen::VectorXd& b, double tol) const {
  Eigen::VectorXd x = lu_.solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(b.size());
  // Iterative refinement: a couple of rounds recover accuracy lost to the
  // wide entry scales of the parameter sweeps.
  for (int round = 0; round < 3; ++round) {
    const Eigen::VectorXd r = b - mat_ * x;
    if (r.norm() <= tol * bnorm) return x;
    x += lu_.solve(r);
  }
  const double res = (b - mat_ * x).norm() / bnorm;
  if (!(res <= tol))
    throw SolveError("SaddleFactor: residual " + std::to_string(res) + " above tolerance", res);
  return x;
}

Eigen::VectorXd solve_saddle(const SparseSym& K, const Eigen::VectorXd& b, double tol) {
  if (b.size() != K.dim()) throw std::invalid_argument("solve_saddle: size mismatch");
  SaddleFactor factor(K.matrix());
  return factor.solve(b, tol);
}

namespace {

// M-orthonormalize the columns of V against the columns of Q and among
// themselves (modified Gram-Schmidt, two passes). Columns that collapse
// are replaced by canonical directions so the Ritz mass stays regular.
void m_orthonormalize(const SpMat& M, const Eigen::MatrixXd& Q, Eigen::MatrixXd& V) {
  const int n = static_cast<int>(V.rows());
  int fallback = 0;
  for (int j = 0; j < V.cols(); ++j) {
    Eigen::VectorXd v = V.col(j);
    for (int attempt = 0; attempt < n + 2; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < Q.cols(); ++k) v -= (Q.col(k).dot(M * v)) * Q.col(k);
        for (int k = 0; k < j; ++k) v -= (V.col(k).dot(M * v)) * V.col(k);
      }
      const double nrm = std::sqrt(std::max(0.0, v.dot(M * v)));
      if (nrm > 1e-12) {
        v /= nrm;
        break;
      }
      v = Eigen::VectorXd::Unit(n, fallback % n);
      ++fallback;
    }
    V.col(j) = v;
  }
}

}  // namespace

EigPair eig_extremes(const SparseSym& A, const SparseSym& M, EigWhich which, double tol,
                     const std::vector<Eigen::VectorXd>& kernel) {
  const int n = A.dim();
  if (M.dim() != n) throw std::invalid_argument("eig_extremes: dimension mismatch");
  const int max_iter = 500;
  const int usable = n - static_cast<int>(kernel.size());
  if (usable < 1) throw std::invalid_argument("eig_extremes: kernel spans the whole space");
  const int block = std::min(usable, 6);

  SpdFactor m_factor(M.matrix());

  // M-orthonormal basis of the supplied kernel.
  Eigen::MatrixXd Q(n, 0);
  if (!kernel.empty()) {
    Eigen::MatrixXd K(n, static_cast<int>(kernel.size()));
    for (size_t j = 0; j < kernel.size(); ++j) K.col(static_cast<int>(j)) = kernel[j];
    Eigen::MatrixXd empty(n, 0);
    m_orthonormalize(M.matrix(), empty, K);
    Q = K;
  }

  // Operator applied per sweep: shift-inverted for the smallest nonzero
  // eigenvalue, M^{-1} A for the largest.
  std::unique_ptr<SpdFactor> shifted;
  double shift = 0.0;
  if (which == EigWhich::SmallestNonzero) {
    // A + shift*M is SPD once the kernel is deflated from the iterates;
    // the shift also regularizes the kernel directions themselves.
    double anorm = 0.0, mnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      anorm += std::abs(A.matrix().coeff(i, i));
      mnorm += std::abs(M.matrix().coeff(i, i));
    }
    shift = std::max(anorm / std::max(mnorm, 1e-300), 1e-12);
    SpMat As = A.matrix() + shift * M.matrix();
    shifted = std::make_unique<SpdFactor>(As);
  }

  // Deterministic start block.
  Eigen::MatrixXd V(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i)
      V(i, j) = std::cos(0.7 * (i + 1) * (j + 1)) + 1e-3 * (i % (j + 2));
  m_orthonormalize(M.matrix(), Q, V);

  EigPair best;
  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::MatrixXd W(n, block);
    for (int j = 0; j < block; ++j) {
      const Eigen::VectorXd mv = M.matrix() * V.col(j);
      W.col(j) = (which == EigWhich::SmallestNonzero) ? shifted->solve(mv)
                                                      : m_factor.solve(A.matrix() * V.col(j));
    }
    m_orthonormalize(M.matrix(), Q, W);

    // Rayleigh-Ritz in the block.
    Eigen::MatrixXd Ah = W.transpose() * (A.matrix() * W);
    Eigen::MatrixXd Mh = W.transpose() * (M.matrix() * W);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Ah, Mh);
    if (ritz.info() != Eigen::Success)
      throw SolveError("eig_extremes: Rayleigh-Ritz failure", 0.0);

    const int pick = (which == EigWhich::SmallestNonzero) ? 0 : block - 1;
    Eigen::VectorXd x = W * ritz.eigenvectors().col(pick);
    const double theta = ritz.eigenvalues()[pick];

    const Eigen::VectorXd r = A.matrix() * x - theta * (M.matrix() * x);
    const double res = std::sqrt(std::max(0.0, r.dot(m_factor.solve(r))));
    best.value = theta;
    best.vector = x;
    best.residual = res;
    best.iterations = iter;
    const double scale = std::max(std::abs(theta), 1e-30);
    if (res <= tol * std::max(1.0, scale)) return best;
    // Reorder the block by Ritz value so the iteration keeps improving the
    // wanted end of the spectrum.
    V = W * ritz.eigenvectors();
  }
  throw SolveError("eig_extremes: no convergence within 500 iterations, residual " +
                       std::to_string(best.residual),
                   best.residual);
}

}  // namespace biot
