#include "gwrec/numeric.hpp"

#include <string>

#include "gwrec/errors.hpp"

namespace gwrec {

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double tol, std::size_t max_iterations) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (std::abs(f_lo) < tol) return {lo, std::abs(f_lo), 0};
  if (std::abs(f_hi) < tol) return {hi, std::abs(f_hi), 0};
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw NonConvergence("bisection bracket does not change sign: f(" + std::to_string(lo) +
                         ")=" + std::to_string(f_lo) + ", f(" + std::to_string(hi) +
                         ")=" + std::to_string(f_hi));
  }
  double mid = 0.5 * (lo + hi);
  double f_mid = f(mid);
  std::size_t it = 1;
  for (; it < max_iterations; ++it) {
    if (std::abs(f_mid) < tol || hi - lo < tol) break;
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == mid) break;  // bracket exhausted at double precision
    mid = next;
    f_mid = f(mid);
  }
  if (!(std::abs(f_mid) < tol)) {
    throw NonConvergence("bisection residual " + std::to_string(f_mid) + " after " +
                         std::to_string(it) + " iterations");
  }
  return {mid, std::abs(f_mid), it};
}

}  // namespace gwrec
