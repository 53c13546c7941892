#pragma once

#include <complex>

namespace splab {

/// Kahan-compensated accumulator; works for real, complex and multiprecision
/// value types.
template <class T>
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(T init) : sum_(init) {}

  void add(const T& x) {
    const T y = x - c_;
    const T t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  KahanSum& operator+=(const T& x) {
    add(x);
    return *this;
  }
  const T& value() const { return sum_; }

 private:
  T sum_{};
  T c_{};
};

}  // namespace splab
