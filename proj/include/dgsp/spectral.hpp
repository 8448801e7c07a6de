#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dgsp/errors.hpp"

namespace dgsp {

/// Eigendecomposition of a symmetric operator: nondecreasing eigenvalues
/// and an orthogonal matrix whose columns are the eigenvectors.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Symmetric eigendecomposition with a deterministic convention: within a
/// degenerate eigenvalue group, the basis is rebuilt by projecting the
/// standard basis vectors in order (Gram-Schmidt), which makes the result
/// independent of the backend's arbitrary basis choice; every eigenvector
/// then has its first non-negligible coordinate positive.
///
/// Input must be symmetric within 1e-10 (absolute, scaled by max entry);
/// it is symmetrized as (M + M^T)/2 before decomposition.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& s);

/// Matrix polynomial sum_k coeffs[k] * S^k evaluated as U diag(p(lambda)) U^T.
Eigen::MatrixXd polynomial_filter(const SpectralDecomposition& d,
                                  const std::vector<double>& coeffs);

/// Orthogonal projection onto the span of the eigenvectors in `band`.
Eigen::MatrixXd spectral_projection(const SpectralDecomposition& d,
                                    const std::vector<int>& band);

/// Analysis-direction Fourier matrix U^T.
Eigen::MatrixXd fourier_matrix(const SpectralDecomposition& d);

/// Eigen-indices with eigenvalue in [lo, hi] (endpoints included).
std::vector<int> band_from_range(const SpectralDecomposition& d, double lo, double hi);

}  // namespace dgsp
