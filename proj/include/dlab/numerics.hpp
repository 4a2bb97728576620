#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dlab {

// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> xs) noexcept;

struct MeanAndError {
    double mean = 0.0;
    double stderr_ = 0.0;  // standard error of the mean (sample variance, n-1)
};

MeanAndError mean_and_stderr(std::span<const double> xs);

// Runs body(begin, end) over [0, n) split into contiguous chunks across `workers` threads.
// Work assignment never affects results as long as body writes only to its own indices.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& body);

// Global default worker count (set from the CLI --workers flag).
int default_workers() noexcept;
void set_default_workers(int workers) noexcept;

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace dlab
