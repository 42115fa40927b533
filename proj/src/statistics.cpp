#include "beltstab/statistics.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "beltstab/errors.hpp"

namespace beltstab::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

std::vector<double> batch_mean_values(std::span<const double> x, std::size_t batches) {
  if (batches == 0) throw DomainError("batch count must be positive");
  const std::size_t len = x.size() / batches;
  if (len == 0) throw DomainError("series shorter than the batch count");
  std::vector<double> out(batches);
  for (std::size_t b = 0; b < batches; ++b) out[b] = mean(x.subspan(b * len, len));
  return out;
}

BatchMeans batch_means(std::span<const double> x, std::size_t batches) {
  return pooled_batch_means({x}, batches);
}

BatchMeans pooled_batch_means(const std::vector<std::span<const double>>& series,
                              std::size_t batches) {
  std::vector<double> all;
  for (const auto& s : series) {
    const auto bm = batch_mean_values(s, batches);
    all.insert(all.end(), bm.begin(), bm.end());
  }
  BatchMeans out;
  out.batches = all.size();
  out.mean = mean(all);
  out.se = std::sqrt(variance(all) / static_cast<double>(all.size()));
  return out;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// Autocovariance sums c(t) = sum_i (x_i - m)(x_{i+t} - m) for t < n, via a
// zero-padded real FFT.
std::vector<double> autocovariance(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t len = 1;
  while (len < 2 * n) len <<= 1;
  const double m = mean(x);

  std::vector<double> buf(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] - m;
  std::vector<std::complex<double>> spectrum(len / 2 + 1);
  auto* cspectrum = reinterpret_cast<fftw_complex*>(spectrum.data());

  fftw_plan forward;
  fftw_plan backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(len), buf.data(), cspectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(len), cspectrum, buf.data(), FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  for (auto& z : spectrum) z = std::norm(z);
  fftw_execute(backward);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  buf.resize(n);
  for (double& v : buf) v /= static_cast<double>(len);
  return buf;
}

}  // namespace

AutocorrTime integrated_autocorr_time(std::span<const double> x, double c) {
  AutocorrTime out;
  if (x.size() < 4) return out;
  const auto acov = autocovariance(x);
  if (!(acov[0] > 0.0)) {
    out.window_ok = true;
    return out;
  }
  double tau = 1.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    tau += 2.0 * acov[t] / acov[0];
    out.window = t;
    if (static_cast<double>(t) >= c * tau) {
      out.window_ok = true;
      break;
    }
  }
  out.tau = tau;
  return out;
}

}  // namespace beltstab::stats
