#include "nlshare/qmath.hpp"

#include <algorithm>

namespace nlshare {

Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4::Storage out{};
  for (std::size_t ar = 0; ar < 2; ++ar)
    for (std::size_t ac = 0; ac < 2; ++ac)
      for (std::size_t br = 0; br < 2; ++br)
        for (std::size_t bc = 0; bc < 2; ++bc)
          out[(2 * ar + br) * 4 + (2 * ac + bc)] = a(ar, ac) * b(br, bc);
  return Mat4(out);
}

Mat2 partial_trace_bob(const Mat4& rho) {
  Mat2::Storage out{};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t j = 0; j < 2; ++j) out[r * 2 + c] += rho(2 * r + j, 2 * c + j);
  return Mat2(out);
}

namespace {

// Cyclic Jacobi on a dense real symmetric matrix stored row-major.
template <std::size_t M>
std::array<double, M> jacobi_eigenvalues(std::array<double, M * M> s) {
  auto at = [&s](std::size_t r, std::size_t c) -> double& { return s[r * M + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (std::size_t r = 0; r < M; ++r)
      for (std::size_t c = 0; c < M; ++c) {
        if (r != c) off += at(r, c) * at(r, c);
        scale += at(r, c) * at(r, c);
      }
    if (off <= 1e-32 * std::max(scale, 1e-300)) break;

    for (std::size_t p = 0; p < M - 1; ++p) {
      for (std::size_t q = p + 1; q < M; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < M; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < M; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::array<double, M> ev{};
  for (std::size_t i = 0; i < M; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

template <>
std::array<double, 2> hermitian_eigenvalues(const Mat2& a) {
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  const Complex off = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double mean = 0.5 * (p + q);
  const double radius = std::hypot(0.5 * (p - q), std::abs(off));
  return {mean - radius, mean + radius};
}

template <>
std::array<double, 4> hermitian_eigenvalues(const Mat4& a) {
  // H = X + iY is Hermitian iff [[X, -Y], [Y, X]] is real symmetric; the
  // embedding has every eigenvalue of H twice.
  constexpr std::size_t M = 8;
  std::array<double, M * M> s{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const Complex h = 0.5 * (a(r, c) + std::conj(a(c, r)));
      s[r * M + c] = h.real();
      s[(r + 4) * M + (c + 4)] = h.real();
      s[r * M + (c + 4)] = -h.imag();
      s[(r + 4) * M + c] = h.imag();
    }
  }
  const auto doubled = jacobi_eigenvalues<M>(s);
  return {0.5 * (doubled[0] + doubled[1]), 0.5 * (doubled[2] + doubled[3]),
          0.5 * (doubled[4] + doubled[5]), 0.5 * (doubled[6] + doubled[7])};
}

namespace pauli {
Mat2 I() { return Mat2::identity(); }
Mat2 X() { return Mat2{0.0, 1.0, 1.0, 0.0}; }
Mat2 Y() { return Mat2{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}; }
Mat2 Z() { return Mat2{1.0, 0.0, 0.0, -1.0}; }
}  // namespace pauli

}  // namespace nlshare
