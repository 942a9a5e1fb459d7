#ifndef VIZPLAN_MANIFOLD_H_
#define VIZPLAN_MANIFOLD_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vizplan/graph.h"
#include "vizplan/metrics.h"

// PCA, classical MDS and Isomap.
namespace vizplan::manifold {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct PcaModel {
  Vector mean;         // d
  Matrix basis;        // d x p, orthonormal columns
  Vector eigenvalues;  // p, descending (sample variances)
};

struct PcaFit {
  PcaModel model;
  Matrix scores;  // p x n, Y = W^T (X - mean)
};

// X holds one sample per column (d x n). Requires 1 <= p <= min(d, n - 1).
// Each basis vector is signed so that its largest-magnitude entry is
// positive.
PcaFit pca_fit(const Matrix& x, int p);

Vector pca_project(const PcaModel& model, const Vector& x);
// mean + W y.
Vector pca_reconstruct(const PcaModel& model, const Vector& y);
// alpha * y_i + (1 - alpha) * y_j.
Vector interpolate(const Vector& y_i, const Vector& y_j, double alpha);

struct Embedding {
  int p = 0;
  Matrix points;                // p x n
  Vector eigenvalues;           // p, descending, clamped at 0
  std::vector<double> residual_variances;  // filled by isomap for d = 1..p
};

// Classical MDS of a distance matrix (the distances are squared before
// double centering). Requires 1 <= p <= n - 1.
Embedding mds(const Matrix& distances, int p);

// Dense n x n matrix from condensed distances.
Matrix to_matrix(const graph::PairwiseDistances& d);

// Pairwise Euclidean distances between the columns of `points`, using only
// the first `dims` rows.
Matrix embedding_distances(const Matrix& points, int dims);

double pearson(std::span<const double> a, std::span<const double> b);

// 1 - r^2 between the upper triangles of `geodesic` and of the embedding
// distances truncated to each d in `dims`. Throws EmbeddingError when either
// side is constant.
std::vector<double> residual_variance(const Matrix& geodesic, const Embedding& embedding,
                                      std::span<const int> dims);

struct IsomapResult {
  Embedding embedding;
  Matrix geodesic;                  // over kept nodes
  std::vector<graph::NodeId> kept;  // input indices of embedding columns
  std::size_t dropped = 0;          // nodes outside the largest component
};

// k-NN graph (either-direction rule), graph geodesics, MDS on the largest
// connected component. Requires n > k >= 1; throws EmbeddingError when the
// kept component has fewer than p + 1 nodes.
IsomapResult isomap(const graph::PairwiseDistances& distances, std::size_t k, int p,
                    int threads = 1);
IsomapResult isomap(std::span<const simworld::RecordPtr> records, std::size_t k, int p,
                    const metrics::Metric& metric, int threads = 1);

}  // namespace vizplan::manifold

#endif  // VIZPLAN_MANIFOLD_H_
