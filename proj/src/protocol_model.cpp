#include "nlshare/protocol_model.hpp"

#include <numbers>

namespace nlshare {

namespace {

constexpr double kHermitianTol = 1e-12;

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1]");
  }
}

// sqrt of a coefficient that is nonnegative up to round-off.
double sqrt_coeff(double x) { return std::sqrt(std::max(x, 0.0)); }

}  // namespace

Observable::Observable(const Mat2& m) : matrix_(m) {
  if (!is_hermitian(m, kHermitianTol)) {
    throw DomainError("Observable: matrix is not Hermitian");
  }
}

bool Observable::is_sharp(double tol) const {
  return max_abs_diff(matrix_ * matrix_, Mat2::identity()) <= tol;
}

ObservablePair build_alice_observables(double delta) {
  if (!(delta >= 0.0 && delta <= std::numbers::pi / 2)) {
    throw DomainError("delta must lie in [0, pi/2]");
  }
  const double s = std::sin(delta);
  const double c = std::cos(delta);
  return {Observable(s * pauli::Z() + c * pauli::X()),
          Observable(-s * pauli::Z() + c * pauli::X()), delta};
}

BobObservables build_bob_observables() {
  return {Observable(pauli::X()), Observable(pauli::Z())};
}

Mat2 b0_projector(int sign) {
  return 0.5 * (Mat2::identity() + static_cast<double>(sign) * pauli::X());
}

Mat2 b1_projector(int sign) {
  return 0.5 * (Mat2::identity() + static_cast<double>(sign) * pauli::Z());
}

DensityMatrix::DensityMatrix(const Mat4& m, double tol) : matrix_(m) {
  if (!is_hermitian(m, kHermitianTol)) {
    throw DomainError("DensityMatrix: not Hermitian");
  }
  const Complex tr = trace(m);
  if (std::abs(tr - Complex{1.0, 0.0}) > tol) {
    throw DomainError("DensityMatrix: trace differs from 1");
  }
  if (hermitian_eigenvalues(m).front() < -tol) {
    throw DomainError("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix build_initial_state(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 4)) {
    throw DomainError("theta must lie in [0, pi/4]");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat4::Storage e{};
  e[0 * 4 + 0] = c * c;
  e[0 * 4 + 3] = c * s;
  e[3 * 4 + 0] = c * s;
  e[3 * 4 + 3] = s * s;
  return DensityMatrix(Mat4(e));
}

double pure_state_concurrence(double theta) { return std::sin(2.0 * theta); }

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::PPM3: return "ppm";
    case SchemeKind::FourKraus: return "four-kraus";
    case SchemeKind::TwoKraus: return "two-kraus";
  }
  return "?";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  if (name == "ppm") return SchemeKind::PPM3;
  if (name == "four-kraus") return SchemeKind::FourKraus;
  if (name == "two-kraus") return SchemeKind::TwoKraus;
  throw DomainError("unknown scheme: " + std::string(name));
}

MeasurementScheme::MeasurementScheme(SchemeKind kind, double alpha, double v)
    : kind_(kind), alpha_(alpha), v_(v) {
  require_unit_interval(alpha, "alpha");
  require_unit_interval(v, "v");
}

MeasurementScheme MeasurementScheme::ppm3(double alpha) {
  return {SchemeKind::PPM3, alpha, 1.0};
}
MeasurementScheme MeasurementScheme::four_kraus(double alpha, double v) {
  return {SchemeKind::FourKraus, alpha, v};
}
MeasurementScheme MeasurementScheme::two_kraus(double alpha, double v) {
  return {SchemeKind::TwoKraus, alpha, v};
}
MeasurementScheme MeasurementScheme::make(SchemeKind kind, double alpha, double v) {
  if (kind == SchemeKind::PPM3) return ppm3(alpha);
  return {kind, alpha, v};
}

std::vector<Mat2> build_kraus_set(const MeasurementScheme& scheme) {
  const double a = scheme.alpha();
  const double v = scheme.v();
  const Mat2 bp = b1_projector(+1);
  const Mat2 bm = b1_projector(-1);
  const Mat2 id = Mat2::identity();
  switch (scheme.kind()) {
    case SchemeKind::PPM3:
      return {std::sqrt(a) * bp, std::sqrt(a) * bm, sqrt_coeff(1.0 - a) * id};
    case SchemeKind::FourKraus:
      return {std::sqrt(a) * bp, std::sqrt(a) * bm, sqrt_coeff(v * (1.0 - a)) * id,
              sqrt_coeff((1.0 - v) * (1.0 - a)) * id};
    case SchemeKind::TwoKraus: {
      const double m1 = sqrt_coeff(v * (1.0 - a) + a);
      const double m2 = sqrt_coeff(v * (1.0 - a));
      const double n1 = sqrt_coeff((1.0 - a) * (1.0 - v));
      const double n2 = sqrt_coeff(1.0 - v * (1.0 - a));
      // ((m1+m2)/2) I + ((m1-m2)/2) Z == m1 B+ + m2 B-
      return {0.5 * (m1 + m2) * id + 0.5 * (m1 - m2) * pauli::Z(),
              0.5 * (n1 + n2) * id + 0.5 * (n1 - n2) * pauli::Z()};
    }
  }
  return {};
}

PovmPair effective_povm(const MeasurementScheme& scheme) {
  const double a = scheme.alpha();
  const double v = scheme.v();
  const Mat2 id = Mat2::identity();
  return {a * b1_projector(+1) + v * (1.0 - a) * id,
          a * b1_projector(-1) + (1.0 - v) * (1.0 - a) * id};
}

PovmPair povm_from_kraus(const MeasurementScheme& scheme) {
  const auto ks = build_kraus_set(scheme);
  auto kk = [&ks](std::size_t i) { return adjoint(ks[i]) * ks[i]; };
  switch (scheme.kind()) {
    case SchemeKind::PPM3: return {kk(0) + kk(2), kk(1)};
    case SchemeKind::FourKraus: return {kk(0) + kk(2), kk(1) + kk(3)};
    case SchemeKind::TwoKraus: return {kk(0), kk(1)};
  }
  return {Mat2{}, Mat2{}};
}

Mat2 effective_observable(const MeasurementScheme& scheme) {
  const auto povm = effective_povm(scheme);
  return povm.e_plus - povm.e_minus;
}

}  // namespace nlshare
