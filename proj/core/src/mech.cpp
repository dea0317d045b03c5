#include "spinlever/mech.hpp"

#include <cmath>
#include <vector>

#include "spinlever/errors.hpp"

namespace spinlever::mech {

using std::complex;

void CantileverParams::validate() const {
  if (!(length > 0.0 && width > 0.0 && thickness > 0.0))
    throw ConfigError("CantileverParams: dimensions must be positive");
  if (!(f0 > 0.0 && fm > 0.0)) throw ConfigError("CantileverParams: f0, fm must be positive");
  if (fm > f0) throw ConfigError("CantileverParams: loaded fm must not exceed f0");
  if (!(Q > 0.0)) throw ConfigError("CantileverParams: Q must be positive");
  if (!(km > 0.0 && me > 0.0)) throw ConfigError("CantileverParams: km, me must be positive");
  if (!(beta > 0.0)) throw ConfigError("CantileverParams: beta must be positive");
  if (!(T_bath >= 0.0)) throw ConfigError("CantileverParams: T_bath must be non-negative");
  if (std::abs(le - length / beta) > 1e-6 * (length / beta))
    throw ConfigError("CantileverParams: le must equal length/beta");
}

double added_mass(double f0_hz, double fm_hz, double me_kg) {
  if (!(fm_hz > 0.0)) throw DomainError("added_mass: fm must be positive");
  if (fm_hz > f0_hz)
    throw DomainError("added_mass: fm > f0 would give negative mass");
  const double r = f0_hz / fm_hz;
  return (r * r - 1.0) * me_kg;
}

DetectionLimits detection_limits(const CantileverParams& p) {
  p.validate();
  const double f_min = std::sqrt(4.0 * consts::k_boltzmann * p.T_bath /
                                 std::numbers::pi * p.km / (p.Q * p.fm));
  return DetectionLimits{f_min, f_min * p.le};
}

complex<double> mechanical_susceptibility(double omega,
                                          const CantileverParams& p) {
  const double wm = p.omega_m();
  return 1.0 / (p.me * complex<double>(wm * wm - omega * omega, omega * wm / p.Q));
}

SignalTrace thermal_spectrum(const CantileverParams& p,
                             std::span<const double> grid_hz,
                             double noise_floor) {
  p.validate();
  if (grid_hz.empty()) throw InputError("thermal_spectrum: empty grid");
  if (noise_floor < 0.0)
    throw InputError("thermal_spectrum: noise floor must be non-negative");

  const double wm = p.omega_m();
  // S_x(w) = 4 kB T wm^3 / (Q km) / ((wm^2-w^2)^2 + (w wm/Q)^2); one-sided.
  const double amp =
      4.0 * consts::k_boltzmann * p.T_bath * wm * wm * wm / (p.Q * p.km);
  std::vector<double> psd(grid_hz.size());
  for (std::size_t i = 0; i < grid_hz.size(); ++i) {
    const double w = consts::two_pi * grid_hz[i];
    const double re = wm * wm - w * w;
    const double im = w * wm / p.Q;
    psd[i] = amp / (re * re + im * im) + noise_floor;
  }

  SignalTrace trace("frequency", "Hz",
                    std::vector<double>(grid_hz.begin(), grid_hz.end()));
  trace.add_channel("Sx", "m^2/Hz", std::move(psd));
  return trace;
}

double thermal_rms(const CantileverParams& p) {
  return std::sqrt(consts::k_boltzmann * p.T_bath / p.km);
}

double torque_to_force(double tau_y, double le) {
  if (!(le > 0.0)) throw DomainError("torque_to_force: le must be positive");
  return tau_y / le;
}

double force_to_displacement_at_resonance(double force,
                                          const CantileverParams& p) {
  return force * p.Q / p.km;
}

double torque_from_displacement(double x_res, const CantileverParams& p) {
  if (x_res < 0.0)
    throw DomainError("torque_from_displacement: x_res must be non-negative");
  return p.km * p.le * x_res / p.Q;
}

double mode_shape(double x, const CantileverParams& p) {
  if (x < 0.0 || x > p.length)
    throw DomainError("mode_shape: position outside [0, L]");
  const double b = p.beta;
  const double sigma =
      (std::cosh(b) + std::cos(b)) / (std::sinh(b) + std::sin(b));
  auto raw = [&](double xi) {
    return std::cosh(b * xi) - std::cos(b * xi) -
           sigma * (std::sinh(b * xi) - std::sin(b * xi));
  };
  return raw(x / p.length) / raw(1.0);
}

}  // namespace spinlever::mech
