#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; both write per-element results into a buffer and all
// reductions run serially afterwards, so the two paths are bit-identical.

#include <cstddef>
#include <exception>
#include <vector>

#include <Eigen/Dense>

namespace dualgeo::kernels {

enum class Policy { Serial, Parallel };

/// out[i] = f(i) for i in [0, n). An exception thrown by f is rethrown after
/// the loop; with several failures the lowest index wins on both paths.
template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f, Policy policy = Policy::Parallel) {
  std::vector<T> out(n);
  if (policy == Policy::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> failures(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = f(k);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const std::exception_ptr& failure : failures)
    if (failure) std::rethrow_exception(failure);
  return out;
}

/// Best cell of a CHSH grid scan. Indices address the grid of angles used to
/// build the correlator table.
struct ChshCell {
  double s = 0.0;
  double abs_s = -1.0;
  int a = 0;
  int a_prime = 0;
  int b = 0;
  int b_prime = 0;
};

/// Scans every (a, a', b, b') index combination of a square correlator table
/// E(i, k) = E(a_i, b_k) and returns, per a-index, the cell maximizing |S|
/// with S = E(a,b) - E(a,b') + E(a',b) + E(a',b'). Ties keep the
/// lexicographically smallest (a', b, b').
std::vector<ChshCell> chsh_scan_rows(const Eigen::MatrixXd& correlators, Policy policy);

/// Global argmax over the per-row results; lowest a-index wins ties.
ChshCell chsh_scan_best(const std::vector<ChshCell>& rows);

/// Serial reference: straightforward four-deep loop with global argmax.
ChshCell chsh_scan_reference(const Eigen::MatrixXd& correlators);

}  // namespace dualgeo::kernels
