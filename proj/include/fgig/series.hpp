#ifndef FGIG_SERIES_HPP
#define FGIG_SERIES_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace fgig {

/// Power series sum_k c_k t^k truncated after t^order. All binary operations
/// truncate to the smaller order of their operands.
template <typename T>
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(std::size_t order) : c_(order + 1, T{}) {}
  TruncatedSeries(std::size_t order, std::initializer_list<T> leading) : c_(order + 1, T{}) {
    std::size_t k = 0;
    for (const T& v : leading) {
      if (k > order) break;
      c_[k++] = v;
    }
  }

  static TruncatedSeries constant(std::size_t order, T value) { return {order, {value}}; }
  /// The series of `t` itself.
  static TruncatedSeries variable(std::size_t order) { return {order, {T{}, T{1}}}; }

  std::size_t order() const noexcept { return c_.size() - 1; }
  const T& operator[](std::size_t k) const { return c_[k]; }
  T& operator[](std::size_t k) { return c_[k]; }
  const std::vector<T>& coefficients() const noexcept { return c_; }

  /// Horner evaluation at a (possibly complex) increment.
  template <typename U>
  auto evaluate(const U& t) const {
    decltype(T{} * t) acc{};
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
  }

  TruncatedSeries truncated(std::size_t order) const {
    TruncatedSeries out(order);
    for (std::size_t k = 0; k <= std::min(order, this->order()); ++k) out.c_[k] = c_[k];
    return out;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    resize_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    resize_to(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TruncatedSeries& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, T s) { return a *= s; }
  friend TruncatedSeries operator*(T s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator+(TruncatedSeries a, T s) {
    a.c_[0] += s;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.c_[i] == T{}) continue;
      for (std::size_t j = 0; i + j <= n; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }

  /// 1/a; requires a nonzero constant term.
  TruncatedSeries reciprocal() const {
    if (c_[0] == T{}) throw std::domain_error("series reciprocal: zero constant term");
    TruncatedSeries out(order());
    out.c_[0] = T{1} / c_[0];
    for (std::size_t n = 1; n <= order(); ++n) {
      T acc{};
      for (std::size_t k = 1; k <= n; ++k) acc += c_[k] * out.c_[n - k];
      out.c_[n] = -acc / c_[0];
    }
    return out;
  }

  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a * b.reciprocal();
  }

  /// a^p for real p; requires a nonzero constant term (principal branch of c_0^p).
  TruncatedSeries pow(double p) const {
    if (c_[0] == T{}) throw std::domain_error("series power: zero constant term");
    TruncatedSeries out(order());
    using std::pow;
    out.c_[0] = pow(c_[0], p);
    // Miller recurrence: n a_0 b_n = sum_{k=1}^n (k p - (n - k)) a_k b_{n-k}
    for (std::size_t n = 1; n <= order(); ++n) {
      T acc{};
      for (std::size_t k = 1; k <= n; ++k)
        acc += (static_cast<double>(k) * p - static_cast<double>(n - k)) * c_[k] * out.c_[n - k];
      out.c_[n] = acc / (static_cast<double>(n) * c_[0]);
    }
    return out;
  }

  /// Divides by t; the constant term is discarded (it must vanish for the result to be exact).
  TruncatedSeries shift_down() const {
    TruncatedSeries out(order() == 0 ? 0 : order() - 1);
    for (std::size_t k = 1; k <= order(); ++k) out.c_[k - 1] = c_[k];
    return out;
  }

  /// outer(inner(t)) where inner has zero constant term.
  friend TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
    assert(inner.c_[0] == T{});
    const std::size_t n = std::min(outer.order(), inner.order());
    TruncatedSeries out(n);
    TruncatedSeries power = constant(n, T{1});
    const TruncatedSeries in = inner.truncated(n);
    for (std::size_t k = 0; k <= n; ++k) {
      // power = inner^k has no terms below t^k
      for (std::size_t j = k; j <= n; ++j) out.c_[j] += outer.c_[k] * power.c_[j];
      if (k < n) power = power * in;
    }
    return out;
  }

 private:
  void resize_to(const TruncatedSeries& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<T> c_{T{}};
};

}  // namespace fgig

#endif  // FGIG_SERIES_HPP
