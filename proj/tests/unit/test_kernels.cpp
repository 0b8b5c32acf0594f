#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "infoot/error.hpp"
#include "infoot/kernels.hpp"
#include "test_support.hpp"

using namespace infoot;

namespace {

DistanceMatrix intra(const Matrix& pts) {
  return pairwise_distances(pts, pts, DistanceKind::IntraSource);
}

}  // namespace

TEST_CASE("point set validation") {
  CHECK_THROWS_AS(PointSet(Matrix(0, 2)), ValidationError);
  Matrix bad(1, 2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(PointSet{bad}, ValidationError);
  Matrix ok = Matrix::Zero(3, 2);
  CHECK_THROWS_AS(PointSet(ok, std::vector<int>{0, 1}), ValidationError);
  CHECK_THROWS_AS(PointSet(ok, std::nullopt, Vector::Constant(3, 0.5)), ValidationError);
  const PointSet s(ok);
  CHECK(s.weights().sum() == doctest::Approx(1.0));
  CHECK_FALSE(s.has_labels());
  CHECK_THROWS_AS(s.labels(), ValidationError);
}

TEST_CASE("distance matrix invariants") {
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(DistanceMatrix(asym, DistanceKind::IntraSource), ValidationError);
  Matrix diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK_THROWS_AS(DistanceMatrix(diag, DistanceKind::IntraSource), ValidationError);
  Matrix neg(1, 2);
  neg << -1, 0;
  CHECK_THROWS_AS(DistanceMatrix(neg, DistanceKind::Cross), ValidationError);
  CHECK_THROWS_AS(pairwise_distances(Matrix::Zero(2, 2), Matrix::Zero(2, 3), DistanceKind::Cross),
                  ValidationError);
}

TEST_CASE("pairwise distances match a scalar loop") {
  const Matrix a = testing::random_points(12, 3, 1);
  const Matrix b = testing::random_points(7, 3, 2);
  const DistanceMatrix d = pairwise_distances(a, b, DistanceKind::Cross);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) {
      double sq = 0;
      for (Index c = 0; c < 3; ++c) sq += (a(i, c) - b(j, c)) * (a(i, c) - b(j, c));
      CHECK(d.values()(i, j) == std::sqrt(sq));
    }
}

TEST_CASE("estimate_scale") {
  Matrix two(2, 2);
  two << 0, 1, 1, 0;
  CHECK(estimate_scale(DistanceMatrix(two, DistanceKind::IntraSource)) == 1.0);

  Matrix three(3, 3);
  three << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  CHECK(estimate_scale(DistanceMatrix(three, DistanceKind::IntraSource)) == 2.0);

  CHECK_THROWS_AS(estimate_scale(DistanceMatrix(Matrix::Zero(3, 3), DistanceKind::IntraSource)),
                  DegenerateDomainError);

  // sort-based oracle
  const DistanceMatrix d = intra(testing::random_points(20, 2, 3));
  std::vector<double> upper;
  for (Index i = 0; i < 20; ++i)
    for (Index j = i + 1; j < 20; ++j)
      if (d.values()(i, j) > 0) upper.push_back(d.values()(i, j));
  std::sort(upper.begin(), upper.end());
  const std::size_t n = upper.size();
  const double median = n % 2 ? upper[n / 2] : 0.5 * (upper[n / 2 - 1] + upper[n / 2]);
  CHECK(estimate_scale(d) == median);
}

TEST_CASE("gaussian kernel values") {
  CHECK(gaussian_kernel(0.0, 0.3, 2.0) == 1.0);
  const double h = 0.5, sigma = 1.3;
  CHECK(gaussian_kernel(h * sigma * std::sqrt(2.0), h, sigma) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_kernel_matrix(Matrix::Zero(2, 2), 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(gaussian_kernel_matrix(Matrix::Zero(2, 2), 1.0, -1.0), ValidationError);

  const DistanceMatrix d = intra(testing::random_points(10, 2, 4));
  const KernelGram g = gaussian_gram(d, h, sigma);
  for (Index i = 0; i < 10; ++i) {
    CHECK(g.values()(i, i) == 1.0);
    for (Index j = 0; j < 10; ++j) {
      const double x = d.values()(i, j);
      CHECK(std::abs(g.values()(i, j) - std::exp(-x * x / (2 * h * h * sigma * sigma))) < 1e-14);
    }
  }
  CHECK_THROWS_AS(gaussian_gram(DistanceMatrix(Matrix::Zero(2, 3), DistanceKind::Cross), h, sigma),
                  ValidationError);
}

TEST_CASE("kernel is monotone decreasing in distance") {
  double prev = 2.0;
  for (double d = 0.0; d < 5.0; d += 0.25) {
    const double k = gaussian_kernel(d, 0.4, 1.1);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("kernel gram is scale invariant") {
  const Matrix pts = testing::random_points(15, 2, 5);
  const DistanceMatrix d1 = intra(pts);
  const DistanceMatrix d2 = intra(pts * 7.5);
  const KernelGram g1 = gaussian_gram(d1, 0.4, estimate_scale(d1));
  const KernelGram g2 = gaussian_gram(d2, 0.4, estimate_scale(d2));
  CHECK((g1.values() - g2.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kde model marginals") {
  SUBCASE("single source point") {
    const DistanceMatrix dx(Matrix::Zero(1, 1), DistanceKind::IntraSource);
    const DistanceMatrix dy = intra(testing::random_points(4, 2, 6));
    const KdeModel m = build_kde_model(dx, dy, 0.5);
    CHECK(m.marginal_x.size() == 1);
    CHECK(m.marginal_x(0) == 1.0);
  }
  SUBCASE("two points at distance sigma*h*sqrt2") {
    const double h = 0.5, sigma = 2.0;
    Matrix d(2, 2);
    d << 0, sigma * h * std::sqrt(2.0), sigma * h * std::sqrt(2.0), 0;
    const DistanceMatrix dx(d, DistanceKind::IntraSource);
    const KdeModel m = build_kde_model(dx, dx, h, KernelScales{sigma, sigma});
    CHECK(m.marginal_x(0) == doctest::Approx(1 + std::exp(-1.0)).epsilon(1e-14));
    CHECK(m.marginal_x(1) == doctest::Approx(1 + std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("double loop oracle") {
    const Matrix pts = testing::random_points(30, 3, 7);
    const DistanceMatrix dx = intra(pts);
    const KdeModel m = build_kde_model(dx, dx, 0.4);
    const double s = estimate_scale(dx);
    for (Index i = 0; i < 30; ++i) {
      double sum = 0;
      for (Index k = 0; k < 30; ++k) sum += gaussian_kernel(dx.values()(i, k), 0.4, s);
      CHECK(std::abs(m.marginal_x(i) - sum) < 1e-12);
    }
  }
  SUBCASE("permutation equivariance") {
    const Matrix pts = testing::random_points(9, 2, 8);
    Matrix permuted(9, 2);
    const std::vector<Index> perm{3, 1, 8, 0, 5, 2, 7, 4, 6};
    for (Index i = 0; i < 9; ++i) permuted.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);
    const KdeModel a = build_kde_model(intra(pts), intra(pts), 0.5);
    const KdeModel b = build_kde_model(intra(permuted), intra(permuted), 0.5);
    for (Index i = 0; i < 9; ++i)
      CHECK(std::abs(b.marginal_x(i) - a.marginal_x(perm[static_cast<std::size_t>(i)])) < 1e-12);
  }
}

TEST_CASE("joint density") {
  SUBCASE("1x1") {
    const DistanceMatrix d(Matrix::Zero(1, 1), DistanceKind::IntraSource);
    const KdeModel m = build_kde_model(d, d, 0.5);
    CHECK(joint_density(m, Matrix::Ones(1, 1))(0, 0) == 1.0);
  }
  const Matrix xs = testing::random_points(8, 2, 9);
  const Matrix ys = testing::random_points(6, 2, 10);
  const KdeModel m = build_kde_model(intra(xs), intra(ys), 0.5);
  const Matrix& kx = m.gram_x.values();
  const Matrix& ky = m.gram_y.values();

  SUBCASE("product plan separates") {
    const Vector p = testing::random_simplex(8, 11);
    const Vector q = testing::random_simplex(6, 12);
    const Matrix j = joint_density(m, p * q.transpose());
    for (Index a = 0; a < 8; ++a)
      for (Index b = 0; b < 6; ++b) {
        double left = 0, right = 0;
        for (Index k = 0; k < 8; ++k) left += p(k) * kx(a, k);
        for (Index l = 0; l < 6; ++l) right += q(l) * ky(b, l);
        CHECK(std::abs(j(a, b) - left * right) < 1e-12);
      }
  }
  SUBCASE("quadruple loop oracle") {
    Matrix plan = testing::random_points(8, 6, 13).cwiseAbs();
    plan /= plan.sum();
    const Matrix j = joint_density(m, plan);
    for (Index a = 0; a < 8; ++a)
      for (Index b = 0; b < 6; ++b) {
        double sum = 0;
        for (Index k = 0; k < 8; ++k)
          for (Index l = 0; l < 6; ++l) sum += plan(k, l) * kx(a, k) * ky(b, l);
        CHECK(std::abs(j(a, b) - sum) < 1e-12);
        CHECK(j(a, b) > 0);
      }
  }
  CHECK_THROWS_AS(joint_density(m, Matrix::Ones(3, 3)), ValidationError);
}
