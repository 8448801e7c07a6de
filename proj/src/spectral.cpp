#include "dgsp/spectral.hpp"

#include <cmath>
#include <string>

namespace dgsp {

namespace {

// Rebuilds the basis of the eigenspace spanned by columns [lo, hi) from
// projections of the standard basis, taken in index order. The result
// depends only on the subspace, not on the solver's basis choice.
void canonicalize_block(Eigen::MatrixXd& u, int lo, int hi) {
  const int n = static_cast<int>(u.rows());
  const int dim = hi - lo;
  if (dim <= 1) return;
  const Eigen::MatrixXd block = u.middleCols(lo, dim);
  Eigen::MatrixXd basis(n, dim);
  int found = 0;
  for (int e = 0; e < n && found < dim; ++e) {
    // projection of standard basis vector e onto the eigenspace
    Eigen::VectorXd v = block * block.row(e).transpose();
    for (int t = 0; t < found; ++t) v -= basis.col(t).dot(v) * basis.col(t);
    const double norm = v.norm();
    if (norm > 1e-6) {
      basis.col(found++) = v / norm;
    }
  }
  if (found == dim) u.middleCols(lo, dim) = basis;
  // else: pathological alignment; keep the solver basis for this block
}

void fix_signs(Eigen::MatrixXd& u) {
  const int n = static_cast<int>(u.rows());
  for (int c = 0; c < static_cast<int>(u.cols()); ++c) {
    const double scale = u.col(c).cwiseAbs().maxCoeff();
    for (int r = 0; r < n; ++r) {
      if (std::abs(u(r, c)) > 1e-9 * scale) {
        if (u(r, c) < 0.0) u.col(c) = -u.col(c);
        break;
      }
    }
  }
}

}  // namespace

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& s) {
  const auto n = s.rows();
  if (n < 1 || s.cols() != n) throw NotSymmetric("operator must be square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NotSymmetric("operator deviates from symmetry beyond tolerance");

  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw FilterEvaluationFailed("eigendecomposition did not converge");

  SpectralDecomposition d{solver.eigenvalues(), solver.eigenvectors()};

  // group (numerically) equal eigenvalues and canonicalize each block
  const double group_tol = 1e-8 * std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  int lo = 0;
  for (int i = 1; i <= d.size(); ++i) {
    if (i == d.size() || d.eigenvalues(i) - d.eigenvalues(lo) > group_tol) {
      canonicalize_block(d.eigenvectors, lo, i);
      lo = i;
    }
  }
  fix_signs(d.eigenvectors);
  return d;
}

Eigen::MatrixXd polynomial_filter(const SpectralDecomposition& d,
                                  const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw IndexOutOfRange("coefficient vector must be nonempty");
  Eigen::VectorXd p(d.size());
  for (int i = 0; i < d.size(); ++i) {
    double acc = 0.0;  // Horner
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      acc = acc * d.eigenvalues(i) + *it;
    p(i) = acc;
  }
  return d.eigenvectors * p.asDiagonal() * d.eigenvectors.transpose();
}

Eigen::MatrixXd spectral_projection(const SpectralDecomposition& d,
                                    const std::vector<int>& band) {
  const int n = d.size();
  Eigen::MatrixXd sel(n, band.size());
  int c = 0;
  for (int idx : band) {
    if (idx < 0 || idx >= n)
      throw IndexOutOfRange("band index " + std::to_string(idx) + " out of range");
    sel.col(c++) = d.eigenvectors.col(idx);
  }
  if (band.empty()) return Eigen::MatrixXd::Zero(n, n);
  return sel * sel.transpose();
}

Eigen::MatrixXd fourier_matrix(const SpectralDecomposition& d) {
  return d.eigenvectors.transpose();
}

std::vector<int> band_from_range(const SpectralDecomposition& d, double lo, double hi) {
  std::vector<int> band;
  for (int i = 0; i < d.size(); ++i)
    if (d.eigenvalues(i) >= lo && d.eigenvalues(i) <= hi) band.push_back(i);
  return band;
}

}  // namespace dgsp
