#pragma once

// Sparse solves behind a small config: direct Cholesky (default for SPD),
// Jacobi-preconditioned CG, sparse LU and BiCGSTAB for the nonsymmetric
// SUPG systems.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <stdexcept>
#include <string>

#include "tfem/assembly.hpp"

namespace tfem {

enum class SolverMethod { DirectCholesky, CgJacobi, DirectLU, BiCGSTAB };

struct SolverConfig {
  SolverMethod method = SolverMethod::DirectCholesky;
  double rel_tol = 1e-12;
  int max_iter = -1;  // < 0: 20 * ndof
};

struct SolveStats {
  int iterations = 0;
  double final_residual = 0.0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline SolverMethod solver_method_from_string(const std::string& s) {
  if (s == "direct-cholesky") return SolverMethod::DirectCholesky;
  if (s == "cg-jacobi") return SolverMethod::CgJacobi;
  if (s == "direct-lu") return SolverMethod::DirectLU;
  if (s == "bicgstab") return SolverMethod::BiCGSTAB;
  throw std::invalid_argument("unknown solver method: " + s);
}

// Solve the constrained system; returns the full-length vector with the
// Dirichlet values re-injected.
inline Eigen::VectorXd solve(const SparseSystem& sys, const SolverConfig& cfg = {},
                             SolveStats* stats = nullptr) {
  if (cfg.rel_tol <= 0.0 || cfg.rel_tol >= 1.0)
    throw std::invalid_argument("solve: rel_tol must lie in (0, 1)");
  const ReducedSystem red = apply_dirichlet(sys);
  const Eigen::Index m = red.matrix.rows();
  SolveStats st;
  Eigen::VectorXd x;
  if (m == 0) {
    x.resize(0);
  } else {
    Eigen::SparseMatrix<double> A = red.matrix;  // column-major copy for the solvers
    const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : int(20 * m);
    switch (cfg.method) {
      case SolverMethod::DirectCholesky: {
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
        if (llt.info() != Eigen::Success)
          throw SolverError("direct-cholesky: factorization failed (matrix not SPD?)");
        x = llt.solve(red.rhs);
        break;
      }
      case SolverMethod::DirectLU: {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success) throw SolverError("direct-lu: factorization failed");
        x = lu.solve(red.rhs);
        break;
      }
      case SolverMethod::CgJacobi: {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg(A);
        cg.setTolerance(cfg.rel_tol);
        cg.setMaxIterations(max_iter);
        x = cg.solve(red.rhs);
        st.iterations = int(cg.iterations());
        if (cg.info() != Eigen::Success)
          throw SolverError("cg-jacobi: no convergence after " + std::to_string(cg.iterations()) +
                            " iterations, residual " + std::to_string(cg.error()));
        break;
      }
      case SolverMethod::BiCGSTAB: {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> bi(A);
        bi.setTolerance(cfg.rel_tol);
        bi.setMaxIterations(max_iter);
        x = bi.solve(red.rhs);
        st.iterations = int(bi.iterations());
        if (bi.info() != Eigen::Success)
          throw SolverError("bicgstab: no convergence, residual " + std::to_string(bi.error()));
        break;
      }
    }
    const double bn = red.rhs.norm();
    st.final_residual = bn > 0 ? (red.matrix * x - red.rhs).norm() / bn : 0.0;
  }
  if (stats) *stats = st;
  return red.expand(x);
}

}  // namespace tfem
