#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace coulomb {

/// Neumaier-compensated running sum. Non-finite terms bypass the
/// compensation so that +inf stays +inf instead of turning into NaN.
class CompensatedSum {
 public:
  void add(double x) {
    if (!std::isfinite(x)) {
      nonfinite_ += x;
      return;
    }
    const double t = sum_ + x;
    carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return nonfinite_ != 0.0 ? nonfinite_ : sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
  double nonfinite_ = 0.0;
};

/// Worker count used by the pairwise reductions. Defaults to 1.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Rows per reduction block. Blocks are fixed independently of the thread
/// count, so block_sum is bit-identical for any number of workers.
inline constexpr std::size_t kReductionBlock = 32;

/// Sum of row(i) for i in [0, n); each row value should itself be a
/// compensated partial sum. Blocks are evaluated in parallel and combined in
/// block order.
template <class RowFn>
double block_sum(std::size_t n, RowFn&& row) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  auto run_block = [&](std::size_t b) {
    CompensatedSum s;
    const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
    for (std::size_t i = b * kReductionBlock; i < end; ++i) s.add(row(i));
    partial[b] = s.value();
  };
  const unsigned workers = std::min<std::size_t>(thread_count(), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

}  // namespace coulomb
