#pragma once

#include <complex>
#include <span>

#include "spinlever/constants.hpp"
#include "spinlever/trace.hpp"

namespace spinlever::mech {

// First flexural mode of the loaded cantilever. Geometry in meters,
// frequencies in Hz. le is the effective length L/beta converting a tip
// torque into a transverse force.
struct CantileverParams {
  double length = 350e-6;
  double width = 32.5e-6;
  double thickness = 1e-6;
  double f0 = 14480.0;         // unloaded resonance
  double fm = 2860.0;          // loaded resonance
  double Q = 160.0;
  double km = 0.03;            // stiffness, N/m
  double me = 1e-11;           // effective mass, kg
  double beta = 1.875;         // clamped-free mode shape factor
  double le = 350e-6 / 1.875;  // effective length, m
  double T_bath = 300.0;       // K

  double omega_m() const { return consts::two_pi * fm; }
  void validate() const;
};

// m_add = ((f0/fm)^2 - 1) me from the resonance shift upon loading.
double added_mass(double f0_hz, double fm_hz, double me_kg);

struct DetectionLimits {
  double f_min;    // N/sqrt(Hz)
  double tau_min;  // N m/sqrt(Hz)
};

// Thermal-noise-limited force sensitivity sqrt(4 kB T km / (pi Q fm)) and the
// torque sensitivity F_min * le.
DetectionLimits detection_limits(const CantileverParams& params);

// chi(w) = 1 / (me ((wm^2 - w^2) + i w wm / Q)), meters per Newton.
std::complex<double> mechanical_susceptibility(double omega,
                                               const CantileverParams& params);

// One-sided displacement PSD of the thermally driven mode plus a white
// detection floor, in m^2/Hz. The modal mass is taken as km/wm^2 so the
// spectrum integrates to the equipartition value kB T / km (the PSD is
// calibrated against the fitted stiffness, not the estimated me).
SignalTrace thermal_spectrum(const CantileverParams& params,
                             std::span<const double> grid_hz,
                             double noise_floor = 1e-21);

// sqrt(kB T / km), the equipartition rms displacement.
double thermal_rms(const CantileverParams& params);

double torque_to_force(double tau_y, double le);
double force_to_displacement_at_resonance(double force,
                                          const CantileverParams& params);

// tau = km le x_res / Q, inverting the resonant response.
double torque_from_displacement(double x_res, const CantileverParams& params);

// Clamped-free first mode deflection, normalized to 1 at the tip.
double mode_shape(double x, const CantileverParams& params);

}  // namespace spinlever::mech
