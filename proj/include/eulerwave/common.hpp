#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eulerwave {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat38 = Eigen::Matrix<double, 3, 8>;

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kPi = 3.1415926535897932385;

// Error raised for bad run configuration (grid sizes, unusable quadrature, ...),
// as opposed to domain/range errors on mathematical inputs.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

inline double sq(double x) { return x * x; }

// Worker count for data-parallel loops; EULERWAVE_THREADS caps it.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("EULERWAVE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Chunked parallel loop over [0, n). fn(i) must only write state owned by
// index i; the merge order is index order, so results are deterministic.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace eulerwave
