#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rovf {

/// Neumaier compensated sum. Order-sensitive by design: callers fix the
/// accumulation order to keep results independent of scheduling.
class CompensatedSum {
 public:
  void add(double value) {
    double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      compensation_ += (sum_ - t) + value;
    else
      compensation_ += (value - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_total(const double* values, long count) {
  CompensatedSum acc;
  for (long i = 0; i < count; ++i) acc.add(values[i]);
  return acc.value();
}

inline double compensated_mean(const double* values, long count) {
  return compensated_total(values, count) / static_cast<double>(count);
}

/// Delete-one-block jackknife standard error of the mean, over up to 10
/// contiguous blocks taken in storage order. Zero when fewer than 2 blocks.
inline double jackknife_stderr(const double* values, long count) {
  int blocks = static_cast<int>(std::min<long>(10, count));
  if (blocks < 2) return 0.0;
  std::vector<double> block_sums(static_cast<std::size_t>(blocks));
  std::vector<long> block_counts(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) {
    long begin = static_cast<long>(b) * count / blocks;
    long end = (static_cast<long>(b) + 1) * count / blocks;
    block_sums[static_cast<std::size_t>(b)] = compensated_total(values + begin, end - begin);
    block_counts[static_cast<std::size_t>(b)] = end - begin;
  }
  double total = 0.0;
  for (double s : block_sums) total += s;
  std::vector<double> leave_out(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) {
    leave_out[static_cast<std::size_t>(b)] =
        (total - block_sums[static_cast<std::size_t>(b)]) /
        static_cast<double>(count - block_counts[static_cast<std::size_t>(b)]);
  }
  double mean = 0.0;
  for (double v : leave_out) mean += v;
  mean /= blocks;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  return std::sqrt((blocks - 1.0) / blocks * ss);
}

}  // namespace rovf
