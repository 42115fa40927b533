#pragma once

// Time-series diagnostics for Markov chain output.

#include <cstddef>
#include <span>
#include <vector>

namespace beltstab::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two points.
double variance(std::span<const double> x);

/// Means of `batches` consecutive equal-length blocks (the tail that does not
/// fill a block is dropped).
std::vector<double> batch_mean_values(std::span<const double> x, std::size_t batches);

struct BatchMeans {
  double mean = 0.0;
  double se = 0.0;  // standard error of the overall mean
  std::size_t batches = 0;
};

/// Standard error from the spread of batch means. Several series may be
/// pooled: each contributes `batches` blocks.
BatchMeans batch_means(std::span<const double> x, std::size_t batches = 50);
BatchMeans pooled_batch_means(const std::vector<std::span<const double>>& series,
                              std::size_t batches = 50);

struct AutocorrTime {
  double tau = 1.0;          // 1 + 2 sum_{t=1}^{window} rho(t)
  std::size_t window = 0;
  bool window_ok = false;    // the self-consistent window c tau <= M was reached
};

/// Integrated autocorrelation time with Sokal's adaptive window: the smallest
/// M with M >= c tau(M). Autocovariances via FFT.
AutocorrTime integrated_autocorr_time(std::span<const double> x, double c = 5.0);

}  // namespace beltstab::stats
