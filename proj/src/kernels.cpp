#include "dualgeo/kernels.hpp"

#include <cmath>

namespace dualgeo::kernels {

namespace {

// Strictly better in |S|; equal |S| never replaces, so the first visited
// (lexicographically smallest) cell wins.
inline bool improves(double candidate, double incumbent) { return candidate > incumbent; }

ChshCell scan_row(const Eigen::MatrixXd& e, int i) {
  const int n = static_cast<int>(e.rows());
  ChshCell best;
  best.a = i;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const double s = e(i, k) - e(i, l) + e(j, k) + e(j, l);
        const double abs_s = std::abs(s);
        if (improves(abs_s, best.abs_s)) best = {s, abs_s, i, j, k, l};
      }
    }
  return best;
}

}  // namespace

std::vector<ChshCell> chsh_scan_rows(const Eigen::MatrixXd& correlators, Policy policy) {
  const auto n = static_cast<std::size_t>(correlators.rows());
  return map_indices<ChshCell>(
      n, [&](std::size_t i) { return scan_row(correlators, static_cast<int>(i)); }, policy);
}

ChshCell chsh_scan_best(const std::vector<ChshCell>& rows) {
  ChshCell best;
  for (const ChshCell& row : rows)
    if (improves(row.abs_s, best.abs_s)) best = row;
  return best;
}

ChshCell chsh_scan_reference(const Eigen::MatrixXd& e) {
  const int n = static_cast<int>(e.rows());
  ChshCell best;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double s = e(i, k) - e(i, l) + e(j, k) + e(j, l);
          if (improves(std::abs(s), best.abs_s)) best = {s, std::abs(s), i, j, k, l};
        }
  return best;
}

}  // namespace dualgeo::kernels
