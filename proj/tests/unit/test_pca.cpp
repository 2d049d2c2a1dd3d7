#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "repscape/error.hpp"
#include "repscape/pca.hpp"

using namespace repscape;

namespace {

double max_orthonormal_deviation(const ProjectionModel& m) {
  const std::size_t n = m.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += m.eigenvector(r, a) * m.eigenvector(r, b);
      worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

oracle::Matrix to_oracle(const SymmetricMatrix& s) {
  oracle::Matrix m(s.n, std::vector<double>(s.n));
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) m[i][j] = s(i, j);
  return m;
}

// Correlated rows: uniform noise pushed through a random mixing matrix.
Dataset correlated(std::size_t n, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> mix(cols, std::vector<double>(cols));
  for (auto& r : mix)
    for (auto& v : r) v = g(rng);
  auto raw = fixture::random_rows(n, cols, seed + 1);
  std::vector<std::vector<double>> rows(n, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < cols; ++a)
      for (std::size_t b = 0; b < cols; ++b) rows[i][a] += mix[a][b] * raw[i][b];
  return fixture::make_dataset(rows);
}

}  // namespace

TEST_CASE("single variable: pc1 is (1) and eigenvalue is the sample variance") {
  const std::vector<double> xs = {1, 4, 2, 8, 5};
  const auto m = fit_pca(fixture::column(xs));
  REQUIRE(m.dim() == 1);
  CHECK(m.pc1[0] == 1.0);
  CHECK(m.eigenvalues[0] == doctest::Approx(oracle::variance(xs)).epsilon(1e-14));
  const auto p = project_pc1(m, fixture::column(xs));
  const double mean = 4.0;
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(p.values[i] == doctest::Approx(xs[i] - mean).epsilon(1e-14));
  CHECK(explained_variance(m) == std::vector<double>{1.0});
}

TEST_CASE("collinear 2-D points: closed form") {
  const auto d = fixture::make_dataset({{0, 0}, {1, 1}, {2, 2}});
  const auto m = fit_pca(d);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(m.pc1[0] == doctest::Approx(h).epsilon(1e-14));
  CHECK(m.pc1[1] == doctest::Approx(h).epsilon(1e-14));
  CHECK(m.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::fabs(m.eigenvalues[1]) <= 1e-14);
  const auto p = project_pc1(m, d);
  CHECK(p.values[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::fabs(p.values[1]) <= 1e-14);
  CHECK(p.values[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const auto ev = explained_variance(m);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(ev[1]) <= 1e-14);
}

TEST_CASE("axis-aligned variance picks the first axis") {
  const auto d = fixture::make_dataset({{-1, 3}, {1, 3}, {-1, 3}, {1, 3}});
  const auto m = fit_pca(d);
  CHECK(m.pc1[0] == doctest::Approx(1.0));
  CHECK(std::fabs(m.pc1[1]) <= 1e-15);
}

TEST_CASE("2x2 eigen closed form") {
  // [[a, b], [b, c]]: lambda = (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto e = jacobi_eigen({2, {a, b, b, c}});
    const double mid = 0.5 * (a + c), rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    CHECK(e.values[0] == doctest::Approx(mid + rad).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(mid - rad).epsilon(1e-12));
  }
}

TEST_CASE("explained variance of eigenvalues 3 and 1") {
  ProjectionModel m;
  m.eigenvalues = {3.0, 1.0};
  m.column_means = {0.0, 0.0};
  CHECK(explained_variance(m) == std::vector<double>{0.75, 0.25});
  m.eigenvalues = {0.0, 0.0};
  CHECK_THROWS_AS(explained_variance(m), Error);
}

TEST_CASE("errors: too few rows, dimension mismatch, non-convergence") {
  CHECK_THROWS_AS(fit_pca(fixture::column({1.0})), ComputationError);
  const auto m = fit_pca(fixture::make_dataset({{0, 1}, {1, 0}, {2, 2}}, {"a", "b"}));
  CHECK_THROWS_AS(project_pc1(m, fixture::make_dataset({{0, 1}}, {"a", "c"})), DataError);
  SymmetricMatrix hard{3, {1, 2, 3, 2, 4, 5, 3, 5, 6}};
  try {
    jacobi_eigen(hard, 1e-12, 0);
    FAIL("expected not_converged");
  } catch (const ComputationError& e) {
    CHECK(e.code() == "not_converged");
  }
}

TEST_CASE("model invariants over random datasets") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t cols = 1 + seed % 5;
    const auto d = correlated(200, cols, seed);
    const auto m = fit_pca(d);
    CHECK(max_orthonormal_deviation(m) <= 1e-9);
    for (std::size_t k = 1; k < cols; ++k) CHECK(m.eigenvalues[k - 1] >= m.eigenvalues[k]);
    for (double l : m.eigenvalues) CHECK(l >= -1e-9);
    // Largest-magnitude pc1 entry is positive.
    std::size_t arg = 0;
    for (std::size_t r = 1; r < cols; ++r)
      if (std::fabs(m.pc1[r]) > std::fabs(m.pc1[arg])) arg = r;
    CHECK(m.pc1[arg] > 0.0);
    // Score variance equals the top eigenvalue.
    const auto p = project_pc1(m, d);
    CHECK(std::fabs(oracle::variance(p.values) - m.eigenvalues[0]) <= 1e-9 * m.eigenvalues[0]);
    // Reconstruction of the covariance from eigenpairs.
    const auto cov = covariance(d);
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        double rebuilt = 0.0;
        for (std::size_t k = 0; k < cols; ++k) rebuilt += m.eigenvector(i, k) * m.eigenvalues[k] * m.eigenvector(j, k);
        CHECK(std::fabs(rebuilt - cov(i, j)) <= 1e-9);
      }
    // Shifting every row leaves scores unchanged.
    std::vector<double> shifted = d.values();
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 5.0 + static_cast<double>(i % cols);
    const Dataset moved(d.regions(), d.variables(), shifted);
    const auto mp = project_pc1(fit_pca(moved), moved);
    for (std::size_t i = 0; i < d.rows(); ++i) CHECK(std::fabs(mp.values[i] - p.values[i]) <= 1e-9);
  }
}

TEST_CASE("row equal to the column means scores zero") {
  const auto d = correlated(50, 3, 77);
  const auto m = fit_pca(d);
  CHECK(std::fabs(m.score(m.column_means)) <= 1e-15);
}

TEST_CASE("jacobi agrees with the bisection oracle on random symmetric matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 5);
    SymmetricMatrix s{n, std::vector<double>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) s(i, j) = s(j, i) = u(rng);
    const auto e = jacobi_eigen(s);
    CHECK(e.off_diagonal <= 1e-12 * 1.0 + 1e-300);
    const auto ref = oracle::eigenvalues(to_oracle(s));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::fabs(e.values[k] - ref[k]) <= 1e-8);
      const bool isolated = (k == 0 || ref[k - 1] - ref[k] > 1e-4) && (k + 1 == n || ref[k] - ref[k + 1] > 1e-4);
      if (!isolated) continue;
      const auto v = oracle::eigenvector(to_oracle(s), ref[k]);
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += v[r] * e.vectors[r * n + k];
      CHECK(std::fabs(std::fabs(dot) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("pc1 dominates random unit directions") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto d = correlated(400, 4, 31);
  const auto m = fit_pca(d);
  const auto p1 = project_pc1(m, d);
  const double top = oracle::variance(p1.values);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> u(4);
    double norm = 0.0;
    for (auto& x : u) {
      x = g(rng);
      norm += x * x;
    }
    for (auto& x : u) x /= std::sqrt(norm);
    std::vector<double> proj(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t c = 0; c < 4; ++c) proj[i] += u[c] * d.at(i, c);
    CHECK(oracle::variance(proj) <= top + 1e-9);
  }
}

TEST_CASE("parallel covariance and projection are bit-identical") {
  const auto d = correlated(3000, 5, 8);
  const auto m1 = fit_pca(d, 1);
  const auto m4 = fit_pca(d, 4);
  CHECK(m1.eigenvectors == m4.eigenvectors);
  CHECK(m1.eigenvalues == m4.eigenvalues);
  CHECK(project_pc1(m1, d, 1).values == project_pc1(m4, d, 3).values);
}

TEST_CASE("model JSON round trip") {
  const auto m = fit_pca(correlated(100, 3, 12));
  const auto back = model_from_json(nlohmann::json::parse(to_json(m).dump()));
  CHECK(back.variables == m.variables);
  CHECK(back.column_means == m.column_means);
  CHECK(back.eigenvalues == m.eigenvalues);
  CHECK(back.eigenvectors == m.eigenvectors);
  CHECK(back.pc1 == m.pc1);
}
