#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace lincae {

using Shape = std::vector<int>;

inline int64_t numel(const Shape& s) {
  int64_t n = 1;
  for (int d : s) n *= d;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::string out = "(";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

// Dense row-major nd-array of doubles. The last dimension is contiguous.
struct Array {
  Shape shape;
  std::vector<double> v;

  Array() = default;
  explicit Array(Shape s) : shape(std::move(s)), v(static_cast<size_t>(numel(shape)), 0.0) {}
  Array(Shape s, std::vector<double> values) : shape(std::move(s)), v(std::move(values)) {
    if (static_cast<int64_t>(v.size()) != numel(shape))
      throw std::invalid_argument("Array: value count does not match shape " + shape_str(shape));
  }

  static Array zeros(Shape s) { return Array(std::move(s)); }
  static Array full(Shape s, double x) {
    Array a(std::move(s));
    std::fill(a.v.begin(), a.v.end(), x);
    return a;
  }
  static Array scalar(double x) { return Array({1}, {x}); }

  int64_t size() const { return static_cast<int64_t>(v.size()); }
  double* data() { return v.data(); }
  const double* data() const { return v.data(); }

  bool same_shape(const Array& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

inline void check_same_shape(const Array& a, const Array& b, const char* op) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.shape) +
                                " vs " + shape_str(b.shape));
}

inline double dot(const Array& a, const Array& b) {
  check_same_shape(a, b, "dot");
  double s = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

inline double sum_sq(const Array& a) {
  double s = 0.0;
  for (double x : a.v) s += x * x;
  return s;
}

inline void axpy(double alpha, const Array& x, Array& y) {
  check_same_shape(x, y, "axpy");
  for (int64_t i = 0; i < x.size(); ++i) y.v[i] += alpha * x.v[i];
}

inline Array scaled(const Array& a, double s) {
  Array out = a;
  for (double& x : out.v) x *= s;
  return out;
}

inline Array added(const Array& a, const Array& b) {
  check_same_shape(a, b, "added");
  Array out = a;
  for (int64_t i = 0; i < b.size(); ++i) out.v[i] += b.v[i];
  return out;
}

}  // namespace lincae
