#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace confext {

/// Thread cap read from CONFEXT_THREADS (unset or invalid means the OpenMP default).
int thread_cap();

/// Runs body(i) for i in [0, count). Iterations must be independent; callers
/// write into preallocated slots and reduce serially so results do not depend
/// on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Neumaier compensated summation.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace confext
