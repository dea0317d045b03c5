#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "spinlever/constants.hpp"

namespace spinlever::spindyn {

// Rates of the driven |0'> -> |+-1'> two-level reduction, all in rad/s.
// Delta is the signed detuning of the microwave from the transition.
struct RateSet {
  double Gamma1 = consts::two_pi * 1e3;
  double Gamma2star = consts::two_pi * 5e6;
  double gamma_las = consts::two_pi * 1e3;
  double Omega = 0.0;
  double Delta = 0.0;

  void validate() const;
};

struct TwoLevelState {
  double rho_ee = 0.0;                     // excited population, rho_gg = 1 - rho_ee
  std::complex<double> rho_eg{0.0, 0.0};   // coherence, rotating frame
};

// Saturation rate at the blue-side operating point: Omega^2 / (2 Gamma2*).
double gamma0(const RateSet& rates);

// Detuning-dependent pumping rate Omega^2 Gamma2* / (2 (Gamma2*^2 + Delta^2)).
// Equals gamma0/2 at Delta = Gamma2*.
double gamma0_detuned(const RateSet& rates);

// Total spin polarization rate Gamma1 + gamma_las + Omega^2/(2 Gamma2*).
double gamma_tot(const RateSet& rates);

// Generalized total rate Gamma1 + gamma_las + 2 gamma0_detuned(Delta);
// reduces to gamma_tot at Delta = Gamma2*.
double gamma_tot_detuned(const RateSet& rates);

// Stationary solution of the master equation at the RateSet's detuning:
//   rho_ee = (Gamma1/2 + G0) / (Gamma1 + gamma_las + 2 G0),  G0 = gamma0_detuned,
//   rho_eg = (Omega/2) (i Gamma2* - Delta)/(Gamma2*^2 + Delta^2) (2 rho_ee - 1).
// Throws DegenerateInputError when every relaxation pathway vanishes.
TwoLevelState steady_state(const RateSet& rates);

// Linearized transfer function d rho_ee[w] / d omega_mu[w] (units: s) for a
// small frequency modulation about the RateSet's detuning:
//   (d rho_ee^S/d Delta) * gamma_tot_detuned / (gamma_tot_detuned + i w).
std::complex<double> fm_population_response(const RateSet& rates, double omega);

// Fixed-step classical RK4 trajectory of the two coupled complex ODEs, kept
// deliberately free of the adiabatic elimination so it can cross-check the
// linearized response. States are stored every store_stride steps; the exact
// final state is kept separately in `terminal`.
struct BlochTrajectory {
  std::vector<double> times;
  std::vector<TwoLevelState> states;
  TwoLevelState terminal;
};

BlochTrajectory integrate_bloch(const RateSet& rates,
                                const std::function<double(double)>& delta_of_t,
                                double t0, double t1, double dt,
                                const TwoLevelState& initial,
                                std::size_t store_stride = 1);

// Per-sample torque terms along a moment trajectory mu(t): the static-field
// torque mu x B0, the microwave torque mu x B1(t), and the angular-momentum
// reaction -(1/gamma_e) dmu/dt, plus their pointwise sum (= dL/dt).
struct TorqueDecomposition {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> tau_static;
  std::vector<Eigen::Vector3d> tau_mw;
  std::vector<Eigen::Vector3d> tau_edh;
  std::vector<Eigen::Vector3d> tau_total;
};

TorqueDecomposition torque_decomposition(
    std::span<const double> times, std::span<const Eigen::Vector3d> moments,
    const Eigen::Vector3d& b0,
    const std::function<Eigen::Vector3d(double)>& b1_of_t, double gamma_e);

}  // namespace spinlever::spindyn
