#include "treecmp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <omp.h>

namespace treecmp::simplex {
namespace {

bool better(const GridPoint& a, const GridPoint& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.counts < b.counts;
}

// Bounded list of the best grid points seen so far.
class Best {
 public:
  explicit Best(std::size_t keep) : keep_(keep) {}

  void offer(double value, const std::vector<int>& counts) {
    if (items_.size() == keep_ && !(value <= items_.back().value)) return;
    GridPoint p{value, counts};
    if (items_.size() == keep_ && !better(p, items_.back())) return;
    auto pos = std::upper_bound(items_.begin(), items_.end(), p, better);
    items_.insert(pos, std::move(p));
    if (items_.size() > keep_) items_.pop_back();
  }

  void merge(const Best& other) {
    for (const auto& p : other.items_) offer(p.value, p.counts);
  }

  std::vector<GridPoint> take() { return std::move(items_); }

 private:
  std::size_t keep_;
  std::vector<GridPoint> items_;
};

double quad_form(const Matrix& m, const std::vector<int>& c) {
  const int n = static_cast<int>(c.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (c[i] == 0) continue;
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += m(i, j) * c[j];
    acc += c[i] * row;
  }
  return acc;
}

// Enumerates all compositions with counts[0] fixed.
void enumerate_tail(const Matrix& m, int resolution, std::vector<int>& counts, int pos,
                    int remaining, Best& best) {
  const int n = static_cast<int>(counts.size());
  if (pos == n - 1) {
    counts[pos] = remaining;
    const double scale = 1.0 / (double(resolution) * resolution);
    best.offer(quad_form(m, counts) * scale, counts);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    counts[pos] = k;
    enumerate_tail(m, resolution, counts, pos + 1, remaining - k, best);
  }
  counts[pos] = 0;
}

}  // namespace

std::uint64_t grid_size(int n, int resolution) {
  // C(resolution + n - 1, n - 1)
  if (n <= 1) return 1;
  long double acc = 1.0L;
  for (int i = 1; i <= n - 1; ++i) acc = acc * (resolution + i) / i;
  return static_cast<std::uint64_t>(std::llround(acc));
}

int grid_resolution(int n, std::uint64_t budget, int max_resolution) {
  int r = max_resolution;
  while (r > 1 && grid_size(n, r) > budget) --r;
  return r;
}

std::vector<GridPoint> grid_best(const Matrix& m, int resolution, std::size_t keep,
                                 Execution exec) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return {GridPoint{m(0, 0), {resolution}}};

  Best merged(keep);
  if (exec == Execution::Serial) {
    std::vector<int> counts(n, 0);
    for (int first = resolution; first >= 0; --first) {
      counts[0] = first;
      enumerate_tail(m, resolution, counts, 1, resolution - first, merged);
    }
    return merged.take();
  }

  std::vector<Best> per_head(resolution + 1, Best(keep));
#pragma omp parallel for schedule(dynamic, 1)
  for (int head = 0; head <= resolution; ++head) {
    std::vector<int> counts(n, 0);
    counts[0] = resolution - head;
    enumerate_tail(m, resolution, counts, 1, head, per_head[head]);
  }
  for (const auto& b : per_head) merged.merge(b);
  return merged.take();
}

Vector project(const Vector& v) {
  // Sort-based projection (Held, Wolfe, Crowder).
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / double(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  Vector s = (v.array() - theta).max(0.0).matrix();
  const double total = s.sum();
  if (total > 0) s /= total;
  return s;
}

double polish(const Matrix& m, Vector& s, int max_iter) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * eig.eigenvalues().cwiseAbs().maxCoeff();
  if (lipschitz == 0.0) return 0.0;
  const double step = 1.0 / lipschitz;

  double value = s.dot(m * s);
  for (int it = 0; it < max_iter; ++it) {
    Vector next = project(s - step * 2.0 * (m * s));
    const double next_value = next.dot(m * next);
    const double moved = (next - s).lpNorm<Eigen::Infinity>();
    if (next_value > value) break;  // round-off floor
    s = std::move(next);
    value = next_value;
    if (moved < 1e-15) break;
  }
  return value;
}

}  // namespace treecmp::simplex
