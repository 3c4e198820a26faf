#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace gwrec {

// Neumaier compensated summation.
class CompensatedSum {
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
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct BisectionResult {
  double root;
  double residual;
  std::size_t iterations;
};

// Bisection for a root of `f` on [lo, hi] with f(lo) <= 0 <= f(hi).
// Stops when |f| < tol or the bracket width is below tol, or after
// max_iterations; throws NonConvergence if the bracket is invalid or the
// residual is still >= tol at the end.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double tol = 1e-12, std::size_t max_iterations = 200);

}  // namespace gwrec
