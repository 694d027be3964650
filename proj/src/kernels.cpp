#include "sclt/kernels.hpp"

#include <omp.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "sclt/summation.hpp"

namespace sclt::kernels {

namespace {

using Partial = std::array<CompensatedComplexSum, kMaxColumns>;

void check_shape(const DirichletBasis& basis, std::size_t count, std::size_t out_size) {
  if (basis.columns() == 0 || basis.columns() > kMaxColumns) {
    throw std::invalid_argument("dirichlet kernel: basis must have 1..4 weight columns");
  }
  if (count > basis.size()) throw std::invalid_argument("dirichlet kernel: count exceeds basis size");
  if (out_size < basis.columns()) throw std::invalid_argument("dirichlet kernel: output span too small");
}

void accumulate_range(const DirichletBasis& basis, double t, std::size_t begin, std::size_t end,
                      Partial& acc) {
  const std::size_t cols = basis.columns();
  const double* logs = basis.log_n.data();
  for (std::size_t i = begin; i < end; ++i) {
    const double phase = t * logs[i];
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = basis.weights[j][i];
      acc[j].add(w * c, -w * s);
    }
  }
}

void block_sum(const DirichletBasis& basis, double t, std::size_t count,
               std::span<std::complex<double>> out) {
  const std::size_t blocks = (count + kBlockTerms - 1) / kBlockTerms;
  std::vector<Partial> partial(blocks);
#pragma omp parallel for schedule(static) if (blocks > 1 && !omp_in_parallel())
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * kBlockTerms;
    const std::size_t end = std::min(count, begin + kBlockTerms);
    accumulate_range(basis, t, begin, end, partial[b]);
  }
  Partial total;
  for (const Partial& p : partial) {
    for (std::size_t j = 0; j < basis.columns(); ++j) total[j].merge(p[j]);
  }
  for (std::size_t j = 0; j < basis.columns(); ++j) out[j] = total[j].value();
}

}  // namespace

DirichletBasis integer_basis(std::size_t count, std::span<const double> sigmas) {
  DirichletBasis basis;
  basis.log_n.resize(count);
  for (std::size_t i = 0; i < count; ++i) basis.log_n[i] = std::log(static_cast<double>(i + 1));
  for (double sigma : sigmas) {
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) w[i] = std::exp(-sigma * basis.log_n[i]);
    basis.weights.push_back(std::move(w));
  }
  return basis;
}

namespace serial {

void dirichlet_sum(const DirichletBasis& basis, double t, std::size_t count,
                   std::span<std::complex<double>> out) {
  check_shape(basis, count, out.size());
  Partial acc;
  accumulate_range(basis, t, 0, count, acc);
  for (std::size_t j = 0; j < basis.columns(); ++j) out[j] = acc[j].value();
}

void dirichlet_sums(const DirichletBasis& basis, std::span<const double> heights,
                    std::span<const std::size_t> counts, std::span<std::complex<double>> out) {
  const std::size_t cols = basis.columns();
  if (counts.size() != heights.size() || out.size() < heights.size() * cols) {
    throw std::invalid_argument("dirichlet_sums: mismatched heights/counts/output sizes");
  }
  for (std::size_t q = 0; q < heights.size(); ++q) {
    dirichlet_sum(basis, heights[q], counts[q], out.subspan(q * cols, cols));
  }
}

}  // namespace serial

namespace parallel {

void dirichlet_sum(const DirichletBasis& basis, double t, std::size_t count,
                   std::span<std::complex<double>> out) {
  check_shape(basis, count, out.size());
  block_sum(basis, t, count, out);
}

void dirichlet_sums(const DirichletBasis& basis, std::span<const double> heights,
                    std::span<const std::size_t> counts, std::span<std::complex<double>> out) {
  const std::size_t cols = basis.columns();
  if (counts.size() != heights.size() || out.size() < heights.size() * cols) {
    throw std::invalid_argument("dirichlet_sums: mismatched heights/counts/output sizes");
  }
  for (std::size_t q = 0; q < heights.size(); ++q) check_shape(basis, counts[q], cols);
  const auto n = static_cast<std::ptrdiff_t>(heights.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    block_sum(basis, heights[uq], counts[uq], out.subspan(uq * cols, cols));
  }
}

}  // namespace parallel

}  // namespace sclt::kernels
