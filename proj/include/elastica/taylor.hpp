#ifndef ELASTICA_TAYLOR_HPP
#define ELASTICA_TAYLOR_HPP

#include <array>
#include <cstddef>

namespace elastica {

/**
 * Truncated bivariate Taylor polynomial sum c_ij dx^i dy^j, i + j <= N.
 *
 * Used to differentiate closed-form kernels (Kelvin, Navier, half-plane) exactly
 * up to fourth order without hand-expanding every partial.
 */
template <typename T, int N>
class Taylor2 {
 public:
  static constexpr int kOrder = N;
  static constexpr std::size_t kSize = (N + 1) * (N + 2) / 2;

  Taylor2() { c_.fill(T{}); }
  explicit Taylor2(T constant) : Taylor2() { c_[0] = constant; }

  /// The coordinate function x_dir expanded about value x0.
  static Taylor2 variable(T x0, int dir) {
    Taylor2 t(x0);
    t.at(dir == 0 ? 1 : 0, dir == 0 ? 0 : 1) = T{1};
    return t;
  }

  static constexpr std::size_t index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }
  T& at(int i, int j) { return c_[index(i, j)]; }
  const T& at(int i, int j) const { return c_[index(i, j)]; }
  T value() const { return c_[0]; }

  /// Partial derivative d^{i+j} / dx^i dy^j at the expansion point.
  T partial(int i, int j) const {
    double f = 1.0;
    for (int k = 2; k <= i; ++k) f *= k;
    for (int k = 2; k <= j; ++k) f *= k;
    return at(i, j) * f;
  }

  /// Exact derivative polynomial; the top degree is lost (set to zero).
  Taylor2 deriv(int dir) const {
    Taylor2 r;
    for (int d = 0; d < N; ++d) {
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        r.at(i, j) = dir == 0 ? at(i + 1, j) * T(i + 1) : at(i, j + 1) * T(j + 1);
      }
    }
    return r;
  }

  /// f(u) given f and its derivatives at u.value(): fd[k] = f^{(k)}(u0).
  template <typename F>
  Taylor2<F, N> compose(const std::array<F, N + 1>& fd) const {
    Taylor2<F, N> result(fd[0]);
    Taylor2<F, N> delta;
    for (std::size_t k = 1; k < kSize; ++k) delta.raw(k) = F(c_[k]);
    Taylor2<F, N> power(F{1});
    double fact = 1.0;
    for (int k = 1; k <= N; ++k) {
      power = power * delta;
      fact *= k;
      result += power * (fd[k] / fact);
    }
    return result;
  }

  T& raw(std::size_t k) { return c_[k]; }
  const T& raw(std::size_t k) const { return c_[k]; }

  Taylor2& operator+=(const Taylor2& o) {
    for (std::size_t k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor2& operator-=(const Taylor2& o) {
    for (std::size_t k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor2& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
  friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
  friend Taylor2 operator*(Taylor2 a, T s) { return a *= s; }
  friend Taylor2 operator*(T s, Taylor2 a) { return a *= s; }
  friend Taylor2 operator-(Taylor2 a) { return a *= T{-1}; }

  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    for (int da = 0; da <= N; ++da) {
      for (int ja = 0; ja <= da; ++ja) {
        const T& ca = a.at(da - ja, ja);
        if (ca == T{}) continue;
        for (int db = 0; da + db <= N; ++db) {
          for (int jb = 0; jb <= db; ++jb) {
            r.at(da - ja + db - jb, ja + jb) += ca * b.at(db - jb, jb);
          }
        }
      }
    }
    return r;
  }

  /// Same polynomial in the reflected variable: dx -> -dx.
  Taylor2 flip_x() const {
    Taylor2 r = *this;
    for (int d = 0; d <= N; ++d)
      for (int j = 0; j <= d; ++j)
        if ((d - j) % 2 == 1) r.at(d - j, j) = -r.at(d - j, j);
    return r;
  }

  template <typename U>
  Taylor2<U, N> cast() const {
    Taylor2<U, N> r;
    for (std::size_t k = 0; k < kSize; ++k) r.raw(k) = U(c_[k]);
    return r;
  }

 private:
  std::array<T, kSize> c_;
};

}  // namespace elastica

#endif  // ELASTICA_TAYLOR_HPP
