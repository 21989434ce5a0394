#ifndef BIOT_SPARSE_HPP
#define BIOT_SPARSE_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace biot {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SolveError : std::runtime_error {
  double residual = 0.0;
  explicit SolveError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Compressed sparse matrix with a symmetric stored pattern. Value symmetry
// within 1e-14 relative is checked on construction unless the matrix is
// declared pattern-only (the per-step matrix of the evolution scheme is
// structurally but not numerically symmetric).
class SparseSym {
 public:
  SparseSym() = default;
  explicit SparseSym(SpMat mat, bool check_value_symmetry = true);
  static SparseSym from_triplets(int dim, const std::vector<Triplet>& triplets,
                                 bool check_value_symmetry = true);
  static SparseSym from_dense(const Eigen::MatrixXd& dense, bool check_value_symmetry = true);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const SpMat& matrix() const { return mat_; }

 private:
  SpMat mat_;
};

// Conjugate gradients with diagonal preconditioning; iteration cap is
// 10*dimension. Throws SolveError carrying the final residual on
// nonconvergence.
Eigen::VectorXd solve_spd(const SparseSym& A, const Eigen::VectorXd& b, double tol = 1e-10);

// Reusable factorization for repeated solves with one SPD matrix.
class SpdFactor {
 public:
  explicit SpdFactor(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::SimplicialLDLT<SpMat> llt_;
};

// Direct factorization for square sparse systems with symmetric pattern
// (values need not be symmetric); fill-reducing column ordering with
// partial pivoting, plus iterative refinement against the requested
// residual. Singularity is reported by SingularMatrixError.
class SaddleFactor {
 public:
  explicit SaddleFactor(const SpMat& K);
  Eigen::VectorXd solve(const Eigen::VectorXd& b, double tol = 1e-10) const;

 private:
  SpMat mat_;
  Eigen::SparseLU<SpMat> lu_;
};

Eigen::VectorXd solve_saddle(const SparseSym& K, const Eigen::VectorXd& b, double tol = 1e-10);

enum class EigWhich { SmallestNonzero, Largest };

struct EigPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;  // M^{-1}-norm of A x - theta M x
  int iterations = 0;
};

// Extreme generalized eigenpair A x = theta M x for A symmetric positive
// semidefinite and M SPD. A known kernel of A must be supplied for the
// smallest-nonzero mode; it is deflated in the M-inner product.
// Shift-inverted subspace iteration, cap 500 sweeps.
EigPair eig_extremes(const SparseSym& A, const SparseSym& M, EigWhich which, double tol = 1e-10,
                     const std::vector<Eigen::VectorXd>& kernel = {});

}  // namespace biot

#endif
