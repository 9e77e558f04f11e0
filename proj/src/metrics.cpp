#include "sgla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "sgla/errors.hpp"

namespace sgla {
namespace {

std::vector<int> compact(std::span<const int> labels, int& count) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  count = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= c / n * std::log(c / n);
  }
  return h;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

// Shortest augmenting path with row/column potentials, O(size^3).
std::vector<int> hungarian_min_cost(std::span<const double> cost, int size) {
  if (size < 0 || cost.size() != static_cast<std::size_t>(size) * size) {
    throw LengthMismatch("cost matrix is not size x size");
  }
  const double inf = std::numeric_limits<double>::infinity();
  const int m = size;
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);  // match[col] = row, 1-based
  for (int row = 1; row <= m; ++row) {
    match[0] = row;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(m, -1);
  for (int j = 1; j <= m; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

ClusteringScores clustering_metrics(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatch("prediction has " + std::to_string(pred.size()) + " labels, truth has " +
                         std::to_string(truth.size()));
  }
  if (pred.empty()) throw InvalidArgument("no labels to score");
  int kp = 0, kt = 0;
  const std::vector<int> p = compact(pred, kp);
  const std::vector<int> t = compact(truth, kt);
  const double n = static_cast<double>(pred.size());

  std::vector<double> table(static_cast<std::size_t>(kp) * kt, 0.0);  // [pred][true]
  std::vector<double> rows(kp, 0.0), cols(kt, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    table[static_cast<std::size_t>(p[i]) * kt + t[i]] += 1.0;
    rows[p[i]] += 1.0;
    cols[t[i]] += 1.0;
  }
  auto cell = [&](int a, int b) { return table[static_cast<std::size_t>(a) * kt + b]; };

  ClusteringScores s;

  // Matching maximizes agreement; pad to a square problem with empty rows/cols.
  // Counts are integers, so a pair-F1 bonus scaled below 1 in total only
  // breaks ties between equally good matchings, independent of label names.
  const int m = std::max(kp, kt);
  const double tie = 1.0 / (2.0 * m);
  std::vector<double> cost(static_cast<std::size_t>(m) * m, 0.0);
  for (int a = 0; a < kp; ++a) {
    for (int b = 0; b < kt; ++b) {
      const double c = cell(a, b);
      const double pair_f1 = 2.0 * c / (rows[a] + cols[b]);
      cost[static_cast<std::size_t>(a) * m + b] = -(c + tie * pair_f1);
    }
  }
  const std::vector<int> match = hungarian_min_cost(cost, m);
  double agree = 0.0;
  std::vector<int> pred_for_true(kt, -1);
  for (int a = 0; a < kp; ++a) {
    if (match[a] < kt) {
      agree += cell(a, match[a]);
      pred_for_true[match[a]] = a;
    }
  }
  s.acc = agree / n;

  double f1 = 0.0;
  for (int b = 0; b < kt; ++b) {
    const int a = pred_for_true[b];
    if (a < 0 || cell(a, b) == 0.0) continue;
    const double precision = cell(a, b) / rows[a];
    const double recall = cell(a, b) / cols[b];
    f1 += 2.0 * precision * recall / (precision + recall);
  }
  s.f1 = f1 / kt;

  double pure = 0.0;
  for (int a = 0; a < kp; ++a) {
    double best = 0.0;
    for (int b = 0; b < kt; ++b) best = std::max(best, cell(a, b));
    pure += best;
  }
  s.purity = pure / n;

  const double hp = entropy(rows, n);
  const double ht = entropy(cols, n);
  double mi = 0.0;
  for (int a = 0; a < kp; ++a) {
    for (int b = 0; b < kt; ++b) {
      const double c = cell(a, b);
      if (c > 0.0) mi += c / n * std::log(c * n / (rows[a] * cols[b]));
    }
  }
  if (hp == 0.0 && ht == 0.0) {
    s.nmi = 1.0;
  } else {
    s.nmi = std::clamp(mi / (0.5 * (hp + ht)), 0.0, 1.0);
  }

  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (double c : table) index += choose2(c);
  for (double c : rows) sum_rows += choose2(c);
  for (double c : cols) sum_cols += choose2(c);
  const double expected = pred.size() < 2 ? 0.0 : sum_rows * sum_cols / choose2(n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (pred.size() < 2 || max_index - expected == 0.0) {
    s.ari = 1.0;
  } else {
    s.ari = (index - expected) / (max_index - expected);
  }
  return s;
}

}  // namespace sgla
