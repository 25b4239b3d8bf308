// Small dense complex matrices for one- and two-qubit operators.
//
// Only 2x2 and 4x4 are supported. Basis ordering is |00>,|01>,|10>,|11>
// with Alice as the left (most significant) tensor factor.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace nlshare {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-10;

/// Thrown when an input is outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <std::size_t N>
class SquareMatrix {
  static_assert(N == 2 || N == 4, "only 2x2 and 4x4 matrices are supported");

 public:
  static constexpr std::size_t dim = N;
  using Storage = std::array<Complex, N * N>;

  SquareMatrix() { entries_.fill(Complex{0.0, 0.0}); }

  /// Row-major entries. Throws DomainError on NaN/Inf.
  explicit SquareMatrix(const Storage& entries) : entries_(entries) {
    for (const auto& z : entries_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("SquareMatrix: non-finite entry");
      }
    }
  }

  SquareMatrix(std::initializer_list<Complex> rows_flat) {
    if (rows_flat.size() != N * N) {
      throw DomainError("SquareMatrix: wrong number of entries");
    }
    std::size_t i = 0;
    for (const auto& z : rows_flat) entries_[i++] = z;
    *this = SquareMatrix(entries_);
  }

  static SquareMatrix identity() {
    Storage e{};
    for (std::size_t i = 0; i < N; ++i) e[i * N + i] = 1.0;
    return SquareMatrix(e);
  }

  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * N + c];
  }
  const Storage& entries() const { return entries_; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  SquareMatrix& operator*=(Complex s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator-(SquareMatrix a) { return a *= -1.0; }
  friend SquareMatrix operator*(Complex s, SquareMatrix a) { return a *= s; }
  friend SquareMatrix operator*(SquareMatrix a, Complex s) { return a *= s; }
  friend SquareMatrix operator*(double s, SquareMatrix a) { return a *= Complex{s, 0.0}; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    Storage out{};
    for (std::size_t r = 0; r < N; ++r) {
      for (std::size_t k = 0; k < N; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < N; ++c) out[r * N + c] += ark * b(k, c);
      }
    }
    return SquareMatrix(out);
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Storage entries_;
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;

template <std::size_t N>
SquareMatrix<N> mat_mul(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  return a * b;
}

template <std::size_t N>
SquareMatrix<N> adjoint(const SquareMatrix<N>& a) {
  typename SquareMatrix<N>::Storage out{};
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out[c * N + r] = std::conj(a(r, c));
  return SquareMatrix<N>(out);
}

template <std::size_t N>
Complex trace(const SquareMatrix<N>& a) {
  Complex t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

/// Largest entrywise modulus of a - b.
template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N * N; ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

/// Kronecker product a ⊗ b; a acts on the left (Alice) factor.
Mat4 tensor(const Mat2& a, const Mat2& b);

/// Trace over the right (Bob) factor.
Mat2 partial_trace_bob(const Mat4& rho);

template <std::size_t N>
bool is_hermitian(const SquareMatrix<N>& a, double tol = kDefaultTolerance) {
  return max_abs_diff(a, adjoint(a)) <= tol;
}

/// Eigenvalues of the Hermitian part (a + a†)/2, ascending.
/// 2x2 uses the closed-form quadratic, 4x4 a cyclic Jacobi sweep.
template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const SquareMatrix<N>& a);
template <>
std::array<double, 2> hermitian_eigenvalues(const Mat2& a);
template <>
std::array<double, 4> hermitian_eigenvalues(const Mat4& a);

template <std::size_t N>
bool is_psd(const SquareMatrix<N>& a, double tol = kDefaultTolerance) {
  if (!is_hermitian(a, tol)) return false;
  return hermitian_eigenvalues(a).front() >= -tol;
}

namespace pauli {
Mat2 I();
Mat2 X();
Mat2 Y();
Mat2 Z();
}  // namespace pauli

}  // namespace nlshare
