// Observables, the shared state, and the three Kraus realizations of Bob's
// second measurement.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nlshare/qmath.hpp"

namespace nlshare {

/// Hermitian 2x2 observable.
class Observable {
 public:
  explicit Observable(const Mat2& m);
  const Mat2& matrix() const { return matrix_; }
  /// True when the spectrum is {+1,-1}, i.e. m*m == I.
  bool is_sharp(double tol = kDefaultTolerance) const;

 private:
  Mat2 matrix_;
};

struct ObservablePair {
  Observable a0;
  Observable a1;
  double delta;
};

struct BobObservables {
  Observable b0;  // sigma_x
  Observable b1;  // sigma_z
};

/// A0 = sin(d) Z + cos(d) X, A1 = -sin(d) Z + cos(d) X, 0 <= d <= pi/2.
ObservablePair build_alice_observables(double delta);
BobObservables build_bob_observables();

/// Spectral projectors (I + sign*B)/2 of B0 = X and B1 = Z.
Mat2 b0_projector(int sign);
Mat2 b1_projector(int sign);

/// Two-qubit density matrix: Hermitian, unit trace, PSD.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat4& m, double tol = kDefaultTolerance);
  const Mat4& matrix() const { return matrix_; }

 private:
  Mat4 matrix_;
};

/// |psi> = cos(theta)|00> + sin(theta)|11>, 0 <= theta <= pi/4.
DensityMatrix build_initial_state(double theta);

/// Concurrence of build_initial_state(theta): sin(2 theta).
double pure_state_concurrence(double theta);

enum class SchemeKind { PPM3, FourKraus, TwoKraus };

std::string_view to_string(SchemeKind kind);
/// Accepts "ppm", "four-kraus", "two-kraus".
SchemeKind parse_scheme_kind(std::string_view name);

/// One Bob's realization of the (alpha, v) POVM for input y = 1.
class MeasurementScheme {
 public:
  static MeasurementScheme ppm3(double alpha);
  static MeasurementScheme four_kraus(double alpha, double v);
  static MeasurementScheme two_kraus(double alpha, double v);
  static MeasurementScheme make(SchemeKind kind, double alpha, double v);

  SchemeKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  /// 1 for PPM3.
  double v() const { return v_; }

 private:
  MeasurementScheme(SchemeKind kind, double alpha, double v);
  SchemeKind kind_;
  double alpha_;
  double v_;
};

/// Kraus operators for the y = 1 measurement. Zero operators are kept.
///   PPM3:      {sqrt(a) B+, sqrt(a) B-, sqrt(1-a) I}
///   FourKraus: {sqrt(a) B+, sqrt(a) B-, sqrt(v(1-a)) I, sqrt((1-v)(1-a)) I}
///   TwoKraus:  {m1 B+ + m2 B-, n1 B+ + n2 B-}
std::vector<Mat2> build_kraus_set(const MeasurementScheme& scheme);

struct PovmPair {
  Mat2 e_plus;
  Mat2 e_minus;
};

/// E+ = a B+ + v(1-a) I, E- = a B- + (1-v)(1-a) I.
PovmPair effective_povm(const MeasurementScheme& scheme);

/// The same effects assembled as sums of K†K over each outcome's Kraus group.
PovmPair povm_from_kraus(const MeasurementScheme& scheme);

/// E+ - E- = a Z + (2v - 1)(1 - a) I.
Mat2 effective_observable(const MeasurementScheme& scheme);

}  // namespace nlshare
