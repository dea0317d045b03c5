#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>

#include "spinlever/mech.hpp"
#include "spinlever/nv.hpp"
#include "spinlever/spindyn.hpp"
#include "spinlever/trace.hpp"

namespace spinlever::signal {

using nv::Transition;

// Microwave drive: carrier frequency, FM depth and rate, Rabi frequency
// (directly or through a dBm calibration Omega = kappa 10^(P/20)).
struct DriveConfig {
  double mw_center_hz = 2.87e9;
  double fm_depth_hz = 8e6;
  double mod_freq_hz = 2860.0;
  double omega_rabi = consts::two_pi * 1e6;  // rad/s
  std::optional<double> power_dbm;
  double kappa = consts::two_pi * 1e6;       // rad/s at 0 dBm
  Transition transition = Transition::minus;
  int class_index = 0;

  double resolved_omega_rabi() const;
  void validate() const;
};

struct QuadraturePair {
  double x = 0.0;  // in phase with the FM waveform, meters
  double y = 0.0;  // out of phase, meters
};

// F_y = (tau_e,y - tau_g,y)/le: transverse force contrast between full |0'>
// polarization and full excited-state population, projected on `axis`.
double transition_drive_force(const nv::NvParams& params,
                              const nv::StaticField& field, int class_index,
                              Transition transition,
                              const Eigen::Vector3d& axis, double le);

// Linear-response displacement at frequency omega:
// dx[w] = fm_population_response(w) * F_y * chi(w) * domega_mu.
std::complex<double> displacement_response(double omega,
                                           const spindyn::RateSet& rates,
                                           const DriveConfig& drive,
                                           double force_contrast,
                                           const mech::CantileverParams& cant);

// Closed-form quadratures at the mechanical resonance for a drive on the
// blue side of the transition (Delta = Gamma2*). Y/X = gamma_tot/omega_m.
QuadraturePair quadratures_at_resonance(const spindyn::RateSet& rates,
                                        const DriveConfig& drive,
                                        double force_contrast,
                                        const mech::CantileverParams& cant);

// Frequency-modulated mechanical detection sweep: X and Y displacement
// quadratures versus microwave carrier frequency, summed over the eight
// transitions of the four classes. spurious_x/spurious_y add a carrier-
// independent background (the polarization-independent microwave pickup).
SignalTrace fmmdmr_sweep(const nv::NvParams& params,
                         const nv::StaticField& field,
                         const spindyn::RateSet& rates_base,
                         const DriveConfig& drive,
                         const mech::CantileverParams& cant,
                         std::span<const double> center_grid_hz,
                         const Eigen::Vector3d& projection_axis,
                         double spurious_x = 0.0, double spurious_y = 0.0);

// Quadratures versus Rabi frequency, with the Y/X ratio as a third channel.
SignalTrace power_scan(const spindyn::RateSet& rates_base,
                       const DriveConfig& drive,
                       std::span<const double> omega_grid,
                       double force_contrast,
                       const mech::CantileverParams& cant);

// Uniformly sampled real time series starting at absolute time t0.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
};

// Software lock-in: multiply by 2cos/-2sin of the reference, single-pole
// low-pass with the given time constant, then average the settled output
// over the final full reference period.
QuadraturePair demodulate(const TimeSeries& trace, double ref_freq_hz,
                          double time_constant_s);

// Channel-wise difference of two traces on identical grids (laser-on minus
// laser-off rejection of polarization-independent backgrounds).
SignalTrace background_subtraction(const SignalTrace& trace_on,
                                   const SignalTrace& trace_off);

// Full time-domain route: Bloch equations driven by the FM waveform,
// co-integrated with the mechanical mode on one RK4 clock, then demodulated
// at the modulation frequency. Serves as the reference for the linearized
// quadrature formulas.
struct TimeDomainResult {
  QuadraturePair quadratures;
  TimeSeries displacement;
};

TimeDomainResult simulate_fm_quadratures(const spindyn::RateSet& rates_at_center,
                                         double depth_rad, double mod_freq_hz,
                                         double force_contrast,
                                         const mech::CantileverParams& cant,
                                         int settle_cycles, int measure_cycles,
                                         double dt, std::size_t store_stride);

}  // namespace spinlever::signal
