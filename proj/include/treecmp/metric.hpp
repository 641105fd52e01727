#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treecmp/error.hpp"

namespace treecmp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric distance matrix on n labeled, pairwise distinct points.
///
/// Instances only exist after validation: zero diagonal, symmetry, strictly
/// positive off-diagonal entries and the triangle inequality all hold.
class FiniteMetricSpace {
 public:
  /// Validates `raw` and copies it. Throws Error / TriangleViolation.
  /// `tol` is an absolute tolerance scaled by max(1, largest entry).
  static FiniteMetricSpace validate(const Matrix& raw, std::vector<std::string> labels,
                                    double tol = 1e-12);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const Matrix& distances() const noexcept { return dist_; }

  /// Index of `name`, or size() when absent.
  std::size_t index_of(const std::string& name) const noexcept;

  FiniteMetricSpace scaled(double factor) const;

 private:
  FiniteMetricSpace(Matrix dist, std::vector<std::string> labels)
      : dist_(std::move(dist)), labels_(std::move(labels)) {}

  Matrix dist_;
  std::vector<std::string> labels_;
};

/// Default labels x0, x1, ... for generated spaces.
std::vector<std::string> default_labels(std::size_t n);

/// Reads the plain-text metric format: `n`, a line of n labels, n rows of n
/// decimals. Numbers are parsed with std::from_chars (locale independent).
FiniteMetricSpace read_metric(std::istream& in, double tol = 1e-12);
FiniteMetricSpace read_metric_file(const std::string& path, double tol = 1e-12);
void write_metric(std::ostream& out, const FiniteMetricSpace& space);

/// m[i][j] = 1/2 (d(x_i,p)^2 + d(x_j,p)^2 - d(x_i,x_j)^2) over the leaves x_i.
struct CenteredMatrix {
  std::size_t pole = 0;
  std::vector<std::size_t> leaves;
  Matrix m;
};

/// Leaves are all points other than `pole`, in index order.
CenteredMatrix centered_matrix(const FiniteMetricSpace& space, std::size_t pole);
/// Leaves given explicitly; repeated leaves are allowed.
CenteredMatrix centered_matrix(const FiniteMetricSpace& space, std::size_t pole,
                               const std::vector<std::size_t>& leaves);

enum class SimplexMethod { GridLocal, VertexMultistart };

struct MatrixInequalityResult {
  bool holds = false;
  double min_value = 0.0;
  Vector argmin;  // on the unit simplex
};

/// Minimizes s M s^T over the unit simplex. `tol` is relative to the largest
/// absolute entry of M.
MatrixInequalityResult matrix_inequality_check(const CenteredMatrix& cm,
                                               SimplexMethod method = SimplexMethod::GridLocal,
                                               double tol = 1e-12);

struct Embedding {
  bool embeddable = false;
  Matrix coords;  // n x (n-1), base point at the origin
  double min_eigenvalue = 0.0;
};

/// Classical Schoenberg test at `base`: the centered matrix must be PSD up to
/// `tol` (relative to its largest entry).
Embedding euclidean_embed(const FiniteMetricSpace& space, std::size_t base, double tol = 1e-10);

/// Pairwise distances of the rows of `coords`.
Matrix pairwise_distances(const Matrix& coords);

}  // namespace treecmp
