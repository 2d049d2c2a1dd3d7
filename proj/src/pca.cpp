#include "repscape/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repscape/error.hpp"
#include "repscape/format.hpp"
#include "repscape/parallel.hpp"

namespace repscape {

namespace {

double max_off_diagonal(const SymmetricMatrix& m) {
  double off = 0.0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j) off = std::max(off, std::abs(m(i, j)));
  return off;
}

void rotate(SymmetricMatrix& a, std::vector<double>& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.n;
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double arp = a(r, p), arq = a(r, q);
    a(r, p) = a(p, r) = c * arp - s * arq;
    a(r, q) = a(q, r) = s * arp + c * arq;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double vrp = v[r * n + p], vrq = v[r * n + q];
    v[r * n + p] = c * vrp - s * vrq;
    v[r * n + q] = s * vrp + c * vrq;
  }
}

}  // namespace

EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol, std::size_t max_sweeps) {
  const std::size_t n = m.n;
  if (m.a.size() != n * n) throw ComputationError("invalid_matrix", "matrix storage does not match its order");
  SymmetricMatrix a = m;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double scale = 1.0;
  for (double x : a.a) scale = std::max(scale, std::abs(x));
  const double threshold = tol * scale;

  EigenDecomposition out;
  double off = max_off_diagonal(a);
  while (off > threshold) {
    if (out.sweeps == max_sweeps)
      throw ComputationError("not_converged", "Jacobi eigensolver did not converge after " +
                                                  std::to_string(max_sweeps) +
                                                  " sweeps (off-diagonal residual " + format_double(off) + ")");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
    ++out.sweeps;
    off = max_off_diagonal(a);
  }
  out.off_diagonal = off;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t biggest = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (std::abs(v[r * n + src]) > std::abs(v[biggest * n + src])) biggest = r;
    const double sign = v[biggest * n + src] < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = sign * v[r * n + src];
  }
  return out;
}

SymmetricMatrix covariance(const Dataset& d, unsigned threads) {
  const std::size_t rows = d.rows(), cols = d.cols();
  if (rows < 2) throw ComputationError("insufficient_rows", "covariance needs at least 2 rows");
  std::vector<double> means(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) means[c] += d.at(i, c);
  for (auto& m : means) m /= static_cast<double>(rows);

  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i; j < cols; ++j) entries.emplace_back(i, j);

  SymmetricMatrix cov{cols, std::vector<double>(cols * cols, 0.0)};
  parallel_for(entries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const auto [i, j] = entries[e];
      double sum = 0.0;
      for (std::size_t r = 0; r < rows; ++r) sum += (d.at(r, i) - means[i]) * (d.at(r, j) - means[j]);
      cov(i, j) = cov(j, i) = sum / static_cast<double>(rows - 1);
    }
  });
  return cov;
}

double ProjectionModel::score(std::span<const double> row) const {
  if (row.size() != dim())
    throw DataError("dimension_mismatch",
                    "row has " + std::to_string(row.size()) + " values, model expects " + std::to_string(dim()));
  double s = 0.0;
  for (std::size_t c = 0; c < row.size(); ++c) s += pc1[c] * (row[c] - column_means[c]);
  return s;
}

ProjectionModel fit_pca(const Dataset& d, unsigned threads) {
  if (d.rows() < 2) throw ComputationError("insufficient_rows", "PCA needs at least 2 rows");
  const auto cov = covariance(d, threads);
  auto eig = jacobi_eigen(cov);

  ProjectionModel model;
  model.variables = d.variable_names();
  model.column_means.assign(d.cols(), 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t c = 0; c < d.cols(); ++c) model.column_means[c] += d.at(i, c);
  for (auto& m : model.column_means) m /= static_cast<double>(d.rows());
  model.eigenvalues = std::move(eig.values);
  for (auto& l : model.eigenvalues) l = std::max(l, 0.0);
  model.eigenvectors = std::move(eig.vectors);
  model.pc1.resize(d.cols());
  for (std::size_t r = 0; r < d.cols(); ++r) model.pc1[r] = model.eigenvector(r, 0);
  return model;
}

Projection make_projection(std::vector<double> scores) {
  Projection p;
  p.values = std::move(scores);
  if (!p.values.empty()) {
    const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
    p.p_min = *lo;
    p.p_max = *hi;
  }
  return p;
}

Projection project_pc1(const ProjectionModel& model, const Dataset& d, unsigned threads) {
  if (d.variable_names() != model.variables)
    throw DataError("dimension_mismatch", "dataset variables do not match the fitted model's variables");
  std::vector<double> scores(d.rows());
  parallel_for(d.rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) scores[i] = model.score(d.row(i));
  });
  return make_projection(std::move(scores));
}

std::vector<double> explained_variance(const ProjectionModel& model) {
  const double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
  if (!(total > 0.0))
    throw ComputationError("degenerate_data", "all eigenvalues are zero; the data has no variance");
  std::vector<double> out;
  out.reserve(model.eigenvalues.size());
  for (double l : model.eigenvalues) out.push_back(l / total);
  return out;
}

nlohmann::json to_json(const ProjectionModel& model) {
  const std::size_t n = model.dim();
  nlohmann::json vectors = nlohmann::json::array();
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = model.eigenvector(r, k);
    vectors.push_back(col);
  }
  return {{"variables", model.variables},
          {"column_means", model.column_means},
          {"eigenvalues", model.eigenvalues},
          {"eigenvectors", vectors}};
}

ProjectionModel model_from_json(const nlohmann::json& j) {
  ProjectionModel m;
  try {
    m.variables = j.at("variables").get<std::vector<std::string>>();
    m.column_means = j.at("column_means").get<std::vector<double>>();
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    const auto cols = j.at("eigenvectors").get<std::vector<std::vector<double>>>();
    const std::size_t n = m.column_means.size();
    if (m.variables.size() != n || m.eigenvalues.size() != n || cols.size() != n)
      throw DataError("invalid_model", "model arrays disagree on dimension");
    m.eigenvectors.assign(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (cols[k].size() != n) throw DataError("invalid_model", "eigenvector has wrong length");
      for (std::size_t r = 0; r < n; ++r) m.eigenvectors[r * n + k] = cols[k][r];
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid_model", std::string("malformed model JSON: ") + e.what());
  }
  m.pc1.resize(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r) m.pc1[r] = m.eigenvector(r, 0);
  return m;
}

}  // namespace repscape
