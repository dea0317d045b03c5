#pragma once

#include "spinlever/nv.hpp"
#include "spinlever/trace.hpp"

namespace spinlever::inverse {

struct FieldFitResult {
  double b0_tesla = 0.0;
  double theta_rad = 0.0;   // in [0, pi/2]; theta and pi-theta are degenerate
  double residual_hz = 0.0; // rms mismatch of the two transition frequencies
  int iterations = 0;
  bool converged = false;
};

// Recovers (B0, theta) of one class from its ODMR dip pair by damped
// Gauss-Newton on the forward eigensolver, seeded by a deterministic 20x20
// multi-start lattice over B0 in [0, 0.1] T, theta in [0, pi/2].
FieldFitResult fit_field_from_dips(double f_minus_hz, double f_plus_hz,
                                   const nv::NvParams& params,
                                   double tol_hz = 1e3, int class_index = 0);

struct SpinFitResult {
  double n_fit = 0.0;
  double residual_rms = 0.0;    // N m
  double standard_error = 0.0;  // spins
};

// Single-spin |driven torque change| model evaluated along a sweep of angle
// (fixed amplitude) or amplitude (fixed angle). The spin count is the only
// free scale.
struct TorqueCurveModel {
  enum class Sweep { angle, amplitude };

  nv::NvParams params;  // N_per_class is ignored; the scale is fitted
  int class_index = 0;
  nv::Transition transition = nv::Transition::minus;
  Sweep sweep = Sweep::amplitude;
  double fixed_value = 0.0;  // theta [rad] for amplitude sweeps, B0 [T] for angle sweeps

  double value(double abscissa) const;  // N m per spin
};

// Linear least squares through the origin for the spin count; standard error
// from the residual variance (one-sigma between data and fit).
SpinFitResult fit_polarized_spins(const SignalTrace& data,
                                  const std::string& channel,
                                  const TorqueCurveModel& model);

}  // namespace spinlever::inverse
