#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace wwcva {

template <typename T>
struct MinimizeResult {
  T x{};
  T fx{};
  std::vector<std::pair<T, T>> evaluations;
};

// Golden-section search for a minimum of f on [a, b]; stops when the bracket
// is narrower than `tol`. Every evaluated point is returned.
template <typename T, typename F>
MinimizeResult<T> golden_section_minimize(F&& f, T a, T b, T tol, int max_iter = 200) {
  static const T inv_phi = (std::sqrt(T(5)) - T(1)) / T(2);
  MinimizeResult<T> r;
  auto eval = [&](T x) {
    const T fx = f(x);
    r.evaluations.emplace_back(x, fx);
    return fx;
  };
  T c = b - inv_phi * (b - a);
  T d = a + inv_phi * (b - a);
  T fc = eval(c);
  T fd = eval(d);
  for (int i = 0; i < max_iter && std::abs(b - a) > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  if (fc <= fd) {
    r.x = c;
    r.fx = fc;
  } else {
    r.x = d;
    r.fx = fd;
  }
  return r;
}

}  // namespace wwcva
