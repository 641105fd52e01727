#include "treecmp/metric.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "treecmp/simplex.hpp"

namespace treecmp {

FiniteMetricSpace FiniteMetricSpace::validate(const Matrix& raw, std::vector<std::string> labels,
                                              double tol) {
  const auto n = static_cast<std::size_t>(raw.rows());
  if (raw.rows() != raw.cols() || n == 0) {
    throw Error(Errc::NotSquare, "distance matrix must be square and nonempty");
  }
  if (labels.size() != n) {
    throw Error(Errc::InvalidInput, "expected " + std::to_string(n) + " labels, got " +
                                        std::to_string(labels.size()));
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty() || !seen.insert(l).second) {
      throw Error(Errc::InvalidInput, "labels must be nonempty and distinct: '" + l + "'");
    }
  }
  if (!raw.allFinite()) throw Error(Errc::NonFinite, "distance matrix has non-finite entries");

  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  const double eps = tol * scale;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(raw(i, i)) > eps) {
      throw Error(Errc::NonzeroDiagonal, "d(" + labels[i] + "," + labels[i] + ") != 0");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(raw(i, j) - raw(j, i)) > eps) {
        throw Error(Errc::AsymmetricMatrix,
                    "d(" + labels[i] + "," + labels[j] + ") != d(" + labels[j] + "," + labels[i] + ")");
      }
      if (raw(i, j) < 0) {
        throw Error(Errc::InvalidInput, "negative distance between " + labels[i] + " and " + labels[j]);
      }
      if (raw(i, j) <= eps) {
        throw Error(Errc::DuplicatePoint, labels[i] + " and " + labels[j] + " are at distance 0");
      }
    }
  }

  Matrix dist = 0.5 * (raw + raw.transpose());
  dist.diagonal().setZero();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (dist(i, j) > dist(i, k) + dist(k, j) + eps) {
          throw TriangleViolation(i, j, k,
                                  "triangle inequality fails: d(" + labels[i] + "," + labels[j] +
                                      ") > d(" + labels[i] + "," + labels[k] + ") + d(" +
                                      labels[k] + "," + labels[j] + ")");
        }
      }
    }
  }
  return FiniteMetricSpace(std::move(dist), std::move(labels));
}

std::size_t FiniteMetricSpace::index_of(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == name) return i;
  }
  return labels_.size();
}

FiniteMetricSpace FiniteMetricSpace::scaled(double factor) const {
  return FiniteMetricSpace(dist_ * factor, labels_);
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

namespace {

double parse_double(const std::string& tok) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(Errc::MalformedMetricFile, "not a decimal number: '" + tok + "'");
  }
  return value;
}

}  // namespace

FiniteMetricSpace read_metric(std::istream& in, double tol) {
  std::string tok;
  if (!(in >> tok)) throw Error(Errc::MalformedMetricFile, "missing point count");
  const double count = parse_double(tok);
  if (count < 1 || count != std::floor(count) || count > 1e6) {
    throw Error(Errc::MalformedMetricFile, "bad point count '" + tok + "'");
  }
  const auto n = static_cast<std::size_t>(count);
  std::vector<std::string> labels(n);
  for (auto& l : labels) {
    if (!(in >> l)) throw Error(Errc::MalformedMetricFile, "missing labels");
  }
  Matrix raw(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(in >> tok)) throw Error(Errc::MalformedMetricFile, "truncated distance matrix");
      raw(i, j) = parse_double(tok);
    }
  }
  if (in >> tok) throw Error(Errc::MalformedMetricFile, "trailing content '" + tok + "'");
  return FiniteMetricSpace::validate(raw, std::move(labels), tol);
}

FiniteMetricSpace read_metric_file(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open metric file '" + path + "'");
  return read_metric(in, tol);
}

void write_metric(std::ostream& out, const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << space.label(i);
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, space(i, j));
      out << (j ? " " : "") << std::string(buf, ptr);
    }
    out << '\n';
  }
}

CenteredMatrix centered_matrix(const FiniteMetricSpace& space, std::size_t pole) {
  if (pole >= space.size()) throw Error(Errc::IndexOutOfRange, "pole index out of range");
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i != pole) leaves.push_back(i);
  }
  return centered_matrix(space, pole, leaves);
}

CenteredMatrix centered_matrix(const FiniteMetricSpace& space, std::size_t pole,
                               const std::vector<std::size_t>& leaves) {
  if (pole >= space.size()) throw Error(Errc::IndexOutOfRange, "pole index out of range");
  const std::size_t k = leaves.size();
  CenteredMatrix cm{pole, leaves, Matrix(k, k)};
  for (std::size_t a = 0; a < k; ++a) {
    if (leaves[a] >= space.size()) throw Error(Errc::IndexOutOfRange, "leaf index out of range");
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double da = space(leaves[a], pole);
      const double db = space(leaves[b], pole);
      const double dab = space(leaves[a], leaves[b]);
      cm.m(a, b) = 0.5 * (da * da + db * db - dab * dab);
    }
  }
  return cm;
}

MatrixInequalityResult matrix_inequality_check(const CenteredMatrix& cm, SimplexMethod method,
                                               double tol) {
  const Matrix& m = cm.m;
  const int n = static_cast<int>(m.rows());
  MatrixInequalityResult out;
  if (n == 0) {
    out.holds = true;
    return out;
  }

  std::vector<Vector> starts;
  for (int i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));

  if (method == SimplexMethod::GridLocal) {
    const int resolution = simplex::grid_resolution(n, 2'000'000);
    for (const auto& g : simplex::grid_best(m, resolution, 10)) {
      Vector s(n);
      for (int i = 0; i < n; ++i) s(i) = double(g.counts[i]) / resolution;
      starts.push_back(std::move(s));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Vector s = Vector::Zero(n);
        s(i) = s(j) = 0.5;
        starts.push_back(std::move(s));
      }
    }
    starts.push_back(Vector::Constant(n, 1.0 / n));
    std::mt19937_64 rng(0x5eed);
    std::exponential_distribution<double> expo(1.0);
    for (int r = 0; r < 32; ++r) {
      Vector s(n);
      for (int i = 0; i < n; ++i) s(i) = expo(rng);
      starts.push_back(s / s.sum());
    }
  }

  out.min_value = std::numeric_limits<double>::infinity();
  for (auto& s : starts) {
    const double v = simplex::polish(m, s);
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin = s;
    }
  }
  const double scale = m.cwiseAbs().maxCoeff();
  out.holds = out.min_value >= -tol * scale;
  return out;
}

Embedding euclidean_embed(const FiniteMetricSpace& space, std::size_t base, double tol) {
  if (base >= space.size()) throw Error(Errc::IndexOutOfRange, "base index out of range");
  const std::size_t n = space.size();
  Embedding out;
  out.coords = Matrix::Zero(n, n > 1 ? n - 1 : 0);
  if (n == 1) {
    out.embeddable = true;
    return out;
  }
  const CenteredMatrix cm = centered_matrix(space, base);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cm.m);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  const double scale = cm.m.cwiseAbs().maxCoeff();
  if (out.min_eigenvalue < -tol * scale) return out;

  out.embeddable = true;
  Matrix vecs = eig.eigenvectors();
  // Largest eigenvalue first, sign fixed by the first nonzero entry.
  Matrix leaf_coords(n - 1, n - 1);
  for (std::size_t c = 0; c < n - 1; ++c) {
    const std::size_t src = n - 2 - c;
    Vector col = vecs.col(src);
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > 1e-12) {
        if (col(r) < 0) col = -col;
        break;
      }
    }
    leaf_coords.col(c) = col * std::sqrt(std::max(0.0, eig.eigenvalues()(src)));
  }
  for (std::size_t a = 0; a < cm.leaves.size(); ++a) out.coords.row(cm.leaves[a]) = leaf_coords.row(a);
  return out;
}

Matrix pairwise_distances(const Matrix& coords) {
  const Eigen::Index n = coords.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (coords.row(i) - coords.row(j)).norm();
    }
  }
  return d;
}

}  // namespace treecmp
