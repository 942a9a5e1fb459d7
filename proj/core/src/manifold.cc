#include "vizplan/manifold.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "vizplan/errors.h"
#include "vizplan/parallel.h"

namespace vizplan::manifold {

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v.size() > 0 && v[best] < 0) v = -v;
}

}  // namespace

PcaFit pca_fit(const Matrix& x, int p) {
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  if (p < 1 || p > std::min(d, n - 1)) {
    throw DomainError("PCA target dimension " + std::to_string(p) + " out of range");
  }
  PcaFit fit;
  fit.model.mean = x.rowwise().mean();
  const Matrix centered = x.colwise() - fit.model.mean;
  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  fit.model.basis = svd.matrixU().leftCols(p);
  fit.model.eigenvalues.resize(p);
  for (int c = 0; c < p; ++c) {
    fix_sign(fit.model.basis.col(c));
    const double s = svd.singularValues()[c];
    fit.model.eigenvalues[c] = s * s / static_cast<double>(n - 1);
  }
  fit.scores = fit.model.basis.transpose() * centered;
  return fit;
}

Vector pca_project(const PcaModel& model, const Vector& x) {
  if (x.size() != model.mean.size()) throw DomainError("PCA input has the wrong length");
  return model.basis.transpose() * (x - model.mean);
}

Vector pca_reconstruct(const PcaModel& model, const Vector& y) {
  if (y.size() != model.basis.cols()) throw DomainError("PCA coordinates have the wrong length");
  return model.mean + model.basis * y;
}

Vector interpolate(const Vector& y_i, const Vector& y_j, double alpha) {
  if (y_i.size() != y_j.size()) throw DomainError("interpolation endpoints differ in length");
  return alpha * y_i + (1.0 - alpha) * y_j;
}

Embedding mds(const Matrix& distances, int p) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n) throw DomainError("distance matrix is not square");
  if (p < 1 || p > n - 1) {
    throw DomainError("MDS target dimension " + std::to_string(p) + " out of range");
  }
  const Matrix sq = distances.array().square().matrix();
  // -1/2 H D^2 H with H = I - 11^T / n, applied as row/column centering.
  const Vector row_mean = sq.rowwise().mean();
  const Vector col_mean = sq.colwise().mean().transpose();
  const double total_mean = sq.mean();
  Matrix b(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      b(i, j) = -0.5 * (sq(i, j) - row_mean[i] - col_mean[j] + total_mean);
    }
  }
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) throw EmbeddingError("eigendecomposition failed");

  Embedding out;
  out.p = p;
  out.points.resize(p, n);
  out.eigenvalues.resize(p);
  for (int c = 0; c < p; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues come ascending
    const double lambda = std::max(0.0, eig.eigenvalues()[src]);
    Vector v = eig.eigenvectors().col(src);
    fix_sign(v);
    out.eigenvalues[c] = lambda;
    out.points.row(c) = std::sqrt(lambda) * v.transpose();
  }
  return out;
}

Matrix to_matrix(const graph::PairwiseDistances& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d(i, j);
  }
  return m;
}

Matrix embedding_distances(const Matrix& points, int dims) {
  if (dims < 1 || dims > points.rows()) throw DomainError("embedding dimension out of range");
  const Eigen::Index n = points.cols();
  const Matrix y = points.topRows(dims);
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = (y.col(i) - y.col(j)).norm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("correlation needs equal-length samples");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0 || sbb <= 0) throw EmbeddingError("correlation of a constant sample");
  return sab / std::sqrt(saa * sbb);
}

namespace {

std::vector<double> upper_triangle(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.rows() * (m.rows() - 1) / 2));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) out.push_back(m(i, j));
  }
  return out;
}

}  // namespace

std::vector<double> residual_variance(const Matrix& geodesic, const Embedding& embedding,
                                      std::span<const int> dims) {
  if (geodesic.rows() != embedding.points.cols()) {
    throw DomainError("geodesic matrix and embedding differ in size");
  }
  const std::vector<double> g = upper_triangle(geodesic);
  std::vector<double> out;
  out.reserve(dims.size());
  for (int d : dims) {
    if (d < 1 || d > embedding.p) throw DomainError("residual dimension out of range");
    const std::vector<double> e = upper_triangle(embedding_distances(embedding.points, d));
    const double r = pearson(g, e);
    out.push_back(std::clamp(1.0 - r * r, 0.0, 1.0));
  }
  return out;
}

IsomapResult isomap(const graph::PairwiseDistances& distances, std::size_t k, int p, int threads) {
  const std::size_t n = distances.size();
  const auto edges = graph::symmetric_knn_edges(distances, k);
  const graph::Adjacency adj = graph::make_adjacency(n, edges);

  const std::vector<int> label = graph::connected_components(adj);
  const int components = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> sizes(components, 0);
  for (int l : label) ++sizes[l];
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  IsomapResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == keep) result.kept.push_back(static_cast<graph::NodeId>(i));
  }
  result.dropped = n - result.kept.size();
  const auto m = static_cast<Eigen::Index>(result.kept.size());
  if (m < p + 1) {
    throw EmbeddingError("largest neighborhood component has " + std::to_string(m) +
                         " nodes, fewer than p + 1");
  }

  result.geodesic.resize(m, m);
  parallel_for(result.kept.size(), threads, [&](std::size_t a) {
    const std::vector<double> dist = graph::dijkstra(adj, result.kept[a]);
    for (Eigen::Index b = 0; b < m; ++b) {
      result.geodesic(b, static_cast<Eigen::Index>(a)) = dist[result.kept[b]];
    }
  });
  // Dijkstra sums in different orders from each end; make it exactly symmetric.
  result.geodesic = 0.5 * (result.geodesic + result.geodesic.transpose()).eval();
  result.geodesic.diagonal().setZero();

  result.embedding = mds(result.geodesic, p);
  std::vector<int> dims(p);
  for (int d = 1; d <= p; ++d) dims[d - 1] = d;
  result.embedding.residual_variances = residual_variance(result.geodesic, result.embedding, dims);
  return result;
}

IsomapResult isomap(std::span<const simworld::RecordPtr> records, std::size_t k, int p,
                    const metrics::Metric& metric, int threads) {
  const auto distances = graph::PairwiseDistances::compute(
      records.size(), threads,
      [&](std::size_t i, std::size_t j) { return metric.distance(*records[i], *records[j]); });
  return isomap(distances, k, p, threads);
}

}  // namespace vizplan::manifold
