#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "repscape/dataset.hpp"

namespace repscape {

/// Dense symmetric matrix, row-major, n x n.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

struct EigenDecomposition {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // n x n row-major; column k pairs with values[k]
  std::size_t sweeps = 0;
  double off_diagonal = 0.0;    // max |off-diagonal| at exit
};

/// Cyclic Jacobi eigensolver. Iterates until the largest off-diagonal
/// magnitude is <= tol * max(1, max |a_ij|). Eigenvalues come back sorted
/// descending with columns of `vectors` permuted to match. Throws
/// ComputationError `not_converged` after `max_sweeps`.
EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol = 1e-12, std::size_t max_sweeps = 100);

/// Sample covariance (1/(n-1)) of the dataset columns.
SymmetricMatrix covariance(const Dataset& d, unsigned threads = 1);

/// Fitted first-principal-component projection.
struct ProjectionModel {
  std::vector<std::string> variables;
  std::vector<double> column_means;
  std::vector<double> eigenvalues;   // descending, clamped at 0 from below
  std::vector<double> eigenvectors;  // dim x dim row-major, column k <-> eigenvalues[k]
  std::vector<double> pc1;

  std::size_t dim() const noexcept { return column_means.size(); }
  double eigenvector(std::size_t row, std::size_t k) const { return eigenvectors[row * dim() + k]; }

  /// pc1 . (row - column_means)
  double score(std::span<const double> row) const;
};

struct Projection {
  std::vector<double> values;
  double p_min = 0.0;
  double p_max = 0.0;

  double range() const noexcept { return p_max - p_min; }
};

/// Fits on a normalized dataset with at least two rows. Each eigenvector
/// has its largest-magnitude entry made positive.
ProjectionModel fit_pca(const Dataset& d, unsigned threads = 1);

Projection project_pc1(const ProjectionModel& model, const Dataset& d, unsigned threads = 1);

/// Builds a Projection from raw scores, computing the extrema.
Projection make_projection(std::vector<double> scores);

/// eigenvalue / sum(eigenvalues). Throws when all eigenvalues are zero.
std::vector<double> explained_variance(const ProjectionModel& model);

nlohmann::json to_json(const ProjectionModel& model);
ProjectionModel model_from_json(const nlohmann::json& j);

}  // namespace repscape
