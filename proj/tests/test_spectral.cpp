#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dgsp/spectral.hpp"
#include "dgsp/graph.hpp"
#include "test_util.hpp"

using namespace dgsp;

namespace {

double reconstruction_error(const Eigen::MatrixXd& s, const SpectralDecomposition& d) {
  const Eigen::MatrixXd rebuilt =
      d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
  return (rebuilt - s).norm() / std::max(1.0, s.norm());
}

}  // namespace

TEST_CASE("path-2 laplacian spectrum") {
  const auto dec = eigendecompose(gso(build_path(2), GsoKind::Laplacian));
  CHECK(dec.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("identity decomposes to itself under the sign convention") {
  const auto dec = eigendecompose(Eigen::MatrixXd::Identity(5, 5));
  CHECK((dec.eigenvalues.array() == 1.0).all());
  CHECK((dec.eigenvectors - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("connected laplacian has constant kernel eigenvector") {
  const Graph g = test::random_graph(9, 3, 0.7);
  const auto dec = eigendecompose(gso(g, GsoKind::Laplacian));
  CHECK(std::abs(dec.eigenvalues(0)) < 1e-10);
  const Eigen::VectorXd v0 = dec.eigenvectors.col(0);
  CHECK((v0.array() - v0(0)).abs().maxCoeff() < 1e-9);
  CHECK(v0(0) > 0.0);  // sign convention
}

TEST_CASE("reconstruction and orthogonality on random symmetric matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 49);
    const Eigen::MatrixXd s = test::random_symmetric(n, seed);
    const auto dec = eigendecompose(s);
    CHECK(reconstruction_error(s, dec) < 1e-8);
    CHECK((dec.eigenvectors.transpose() * dec.eigenvectors -
           Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    for (int i = 1; i < n; ++i) CHECK(dec.eigenvalues(i) >= dec.eigenvalues(i - 1));
  }
}

TEST_CASE("decomposition is deterministic") {
  const Eigen::MatrixXd s = test::random_symmetric(12, 5);
  const auto a = eigendecompose(s);
  const auto b = eigendecompose(s);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rejects asymmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0.5, 0;
  CHECK_THROWS_AS(eigendecompose(m), NotSymmetric);
}

TEST_CASE("polynomial filter basics") {
  const Eigen::MatrixXd l = gso(build_path(2), GsoKind::Laplacian);
  const auto dec = eigendecompose(l);
  CHECK((polynomial_filter(dec, {1.0}) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((polynomial_filter(dec, {0.0, 1.0}) - l).cwiseAbs().maxCoeff() < 1e-8);
  Eigen::MatrixXd squared(2, 2);
  squared << 2, -2, -2, 2;
  CHECK((polynomial_filter(dec, {0.0, 0.0, 1.0}) - squared).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("polynomial product maps to filter product") {
  const auto s = rng::root(11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 18);
    const Graph g = test::random_graph(n, seed + 100);
    const auto dec = eigendecompose(gso(g, GsoKind::Laplacian));
    std::vector<double> p(1 + s.word(4 * seed) % 4), q(1 + s.word(4 * seed + 1) % 4);
    for (size_t i = 0; i < p.size(); ++i) p[i] = s.normal(100 * seed + i);
    for (size_t i = 0; i < q.size(); ++i) q[i] = s.normal(100 * seed + 50 + i);
    // coefficient convolution = polynomial product
    std::vector<double> pq(p.size() + q.size() - 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < q.size(); ++j) pq[i + j] += p[i] * q[j];
    const Eigen::MatrixXd lhs = polynomial_filter(dec, pq);
    const Eigen::MatrixXd rhs = polynomial_filter(dec, p) * polynomial_filter(dec, q);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("spectral projections") {
  const Graph g = test::random_graph(8, 21, 0.6);
  const auto dec = eigendecompose(gso(g, GsoKind::Laplacian));

  std::vector<int> full(8);
  for (int i = 0; i < 8; ++i) full[i] = i;
  CHECK((spectral_projection(dec, full) - Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK(spectral_projection(dec, {}).cwiseAbs().maxCoeff() == 0.0);

  // kernel projector of a connected laplacian is the averaging matrix
  const Eigen::MatrixXd p0 = spectral_projection(dec, {0});
  CHECK((p0.array() - 1.0 / 8).abs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(spectral_projection(dec, {8}), IndexOutOfRange);

  // idempotent and symmetric for random bands on random graphs
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int n = 3 + static_cast<int>(seed * 2 % 48);
    const auto d = eigendecompose(gso(test::random_graph(n, seed + 500), GsoKind::Laplacian));
    std::vector<int> band;
    const auto s = rng::root(seed);
    for (int i = 0; i < n; ++i)
      if (s.uniform01(i) < 0.4) band.push_back(i);
    const Eigen::MatrixXd p = spectral_projection(d, band);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fourier matrix") {
  const auto eye = eigendecompose(Eigen::MatrixXd::Identity(4, 4));
  CHECK((fourier_matrix(eye) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);

  const auto dec = eigendecompose(gso(build_path(2), GsoKind::Laplacian));
  Eigen::VectorXd ones(2);
  ones << 1, 1;
  const Eigen::VectorXd hat = fourier_matrix(dec) * ones;
  CHECK(std::abs(hat(0) - std::sqrt(2.0)) < 1e-12);  // all mass on the zero frequency
  CHECK(std::abs(hat(1)) < 1e-12);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = test::random_graph(10, seed + 900);
    const auto d = eigendecompose(gso(g, GsoKind::Laplacian));
    const Eigen::VectorXd x = test::random_vector(10, seed);
    CHECK(std::abs((fourier_matrix(d) * x).norm() - x.norm()) < 1e-10);
  }
}

TEST_CASE("band_from_range includes endpoints") {
  const auto dec = eigendecompose(gso(build_path(2), GsoKind::Laplacian));
  CHECK(band_from_range(dec, 0.0, 2.0).size() == 2);
  CHECK(band_from_range(dec, 0.0, 0.0) == std::vector<int>{0});
  CHECK(band_from_range(dec, 2.0, 2.0) == std::vector<int>{1});
  CHECK(band_from_range(dec, 0.5, 1.5).empty());
}

TEST_CASE("product laplacian spectrum is the sum-set of factor spectra") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = test::random_graph(5 + seed % 3, seed + 40);
    const Graph h = test::random_graph(6, seed + 80);
    const auto dg = eigendecompose(gso(g, GsoKind::Laplacian));
    const auto dh = eigendecompose(gso(h, GsoKind::Laplacian));
    const auto dp = eigendecompose(gso(cartesian_product(g, h), GsoKind::Laplacian));
    std::vector<double> sums;
    for (int i = 0; i < dg.size(); ++i)
      for (int j = 0; j < dh.size(); ++j)
        sums.push_back(dg.eigenvalues(i) + dh.eigenvalues(j));
    std::sort(sums.begin(), sums.end());
    for (int i = 0; i < dp.size(); ++i)
      CHECK(std::abs(dp.eigenvalues(i) - sums[i]) < 1e-7);
  }
}
