#pragma once

// Dense matrices over F_p with deterministic row reduction (pivot in the first
// nonzero column, lowest row index), so kernels and particular solutions are
// reproducible.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkg/error.hpp"
#include "hkg/field.hpp"

namespace hkg {

using Vec = std::vector<std::uint32_t>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::uint32_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::uint32_t p, std::size_t n) {
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::uint32_t p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<std::uint32_t>& data() const { return a_; }

  bool is_zero() const {
    for (auto x : a_)
      if (x) return false;
    return true;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.p_ == y.p_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    check_shape(x, y);
    Matrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = (r.a_[i] + y.a_[i]) % x.p_;
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    check_shape(x, y);
    Matrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = (r.a_[i] + x.p_ - y.a_[i]) % x.p_;
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require(x.cols_ == y.rows_ && x.p_ == y.p_, errc::invalid_argument, "matrix shape mismatch");
    Matrix r(x.p_, x.rows_, y.cols_);
    std::vector<std::uint64_t> acc(y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const std::uint64_t v = x(i, k);
        if (!v) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) acc[j] += v * y(k, j);
      }
      for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) = static_cast<std::uint32_t>(acc[j] % x.p_);
    }
    return r;
  }

  Vec apply(const Vec& v) const {
    require(v.size() == cols_, errc::invalid_argument, "vector length mismatch");
    Vec out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < cols_; ++j) s += static_cast<std::uint64_t>((*this)(i, j)) * v[j];
      out[i] = static_cast<std::uint32_t>(s % p_);
    }
    return out;
  }

  Matrix pow(std::uint64_t e) const {
    require(rows_ == cols_, errc::invalid_argument, "power of a non-square matrix");
    Matrix result = identity(p_, rows_), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

 private:
  static void check_shape(const Matrix& x, const Matrix& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.p_ == y.p_, errc::invalid_argument,
            "matrix shape mismatch");
  }

  std::uint32_t p_ = 0;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> a_;
};

struct Echelon {
  Matrix r;                          // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

inline Echelon rref(Matrix m) {
  const std::uint32_t p = m.p();
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    const std::uint32_t inv = inv_mod_prime(m(row, col), p);
    for (std::size_t j = col; j < m.cols(); ++j)
      m(row, j) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(m(row, j)) * inv % p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const std::uint64_t f = p - m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        m(i, j) = static_cast<std::uint32_t>((m(i, j) + f * m(row, j)) % p);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.r = std::move(m);
  return e;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

/// Basis of {x : m x = 0}, one vector per free column, in column order.
inline std::vector<Vec> kernel(const Matrix& m) {
  const Echelon e = rref(m);
  const std::uint32_t p = m.p();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = (p - e.r(i, f)) % p;
    out.push_back(std::move(v));
  }
  return out;
}

/// The solution of m x = b with all free variables zero, if one exists.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  require(b.size() == m.rows(), errc::invalid_argument, "right-hand side length mismatch");
  Matrix aug(m.p(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i] % m.p();
  }
  const Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), 0);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.r(i, m.cols());
  return x;
}

inline bool is_zero(const Vec& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

inline Vec vec_add(const Vec& a, const Vec& b, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % p;
  return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + p - b[i]) % p;
  return r;
}

inline Vec vec_scale(const Vec& a, std::uint32_t c, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) * c % p);
  return r;
}

}  // namespace hkg
