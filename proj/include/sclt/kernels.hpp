#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Batched Dirichlet-polynomial evaluation, the hot loop of every zeta and
// prime-sum computation:
//
//   out[q][j] = Σ_{i < counts[q]} weights[j][i] · exp(-i · t_q · log_n[i])
//
// Two implementations are kept side by side. `serial` is the plain
// single-loop reference used by tests. `parallel` partitions terms into
// fixed-size blocks and queries across OpenMP threads; block boundaries do
// not depend on the thread count, so results are bit-identical for any
// OMP_NUM_THREADS.
namespace sclt::kernels {

inline constexpr std::size_t kMaxColumns = 4;
inline constexpr std::size_t kBlockTerms = 8192;

struct DirichletBasis {
  std::vector<double> log_n;
  std::vector<std::vector<double>> weights;  // one column per coefficient set

  [[nodiscard]] std::size_t size() const noexcept { return log_n.size(); }
  [[nodiscard]] std::size_t columns() const noexcept { return weights.size(); }
};

/// Basis over n = 1..count with weights n^{-σ_j} for each requested σ_j.
DirichletBasis integer_basis(std::size_t count, std::span<const double> sigmas);

namespace serial {
void dirichlet_sum(const DirichletBasis& basis, double t, std::size_t count,
                   std::span<std::complex<double>> out);
void dirichlet_sums(const DirichletBasis& basis, std::span<const double> heights,
                    std::span<const std::size_t> counts, std::span<std::complex<double>> out);
}  // namespace serial

namespace parallel {
void dirichlet_sum(const DirichletBasis& basis, double t, std::size_t count,
                   std::span<std::complex<double>> out);
void dirichlet_sums(const DirichletBasis& basis, std::span<const double> heights,
                    std::span<const std::size_t> counts, std::span<std::complex<double>> out);
}  // namespace parallel

}  // namespace sclt::kernels
