#include "spinlever/spindyn.hpp"

#include <algorithm>
#include <cmath>

#include "spinlever/errors.hpp"

namespace spinlever::spindyn {

using std::complex;

void RateSet::validate() const {
  if (!(Gamma2star > 0.0))
    throw ConfigError("RateSet: Gamma2star must be positive");
  if (Gamma1 < 0.0 || gamma_las < 0.0 || Omega < 0.0)
    throw ConfigError("RateSet: Gamma1, gamma_las, Omega must be non-negative");
  if (!std::isfinite(Delta)) throw ConfigError("RateSet: Delta must be finite");
}

double gamma0(const RateSet& r) { return r.Omega * r.Omega / (2.0 * r.Gamma2star); }

double gamma0_detuned(const RateSet& r) {
  const double g2 = r.Gamma2star;
  return r.Omega * r.Omega * g2 / (2.0 * (g2 * g2 + r.Delta * r.Delta));
}

double gamma_tot(const RateSet& r) { return r.Gamma1 + r.gamma_las + gamma0(r); }

double gamma_tot_detuned(const RateSet& r) {
  return r.Gamma1 + r.gamma_las + 2.0 * gamma0_detuned(r);
}

TwoLevelState steady_state(const RateSet& rates) {
  rates.validate();
  const double g0 = gamma0_detuned(rates);
  const double denom = rates.Gamma1 + rates.gamma_las + 2.0 * g0;
  if (denom == 0.0)
    throw DegenerateInputError("steady_state: all relaxation rates are zero");

  TwoLevelState s;
  s.rho_ee = (0.5 * rates.Gamma1 + g0) / denom;
  const double w = 2.0 * s.rho_ee - 1.0;  // population inversion
  const double g2 = rates.Gamma2star;
  const double norm = g2 * g2 + rates.Delta * rates.Delta;
  s.rho_eg = 0.5 * rates.Omega * w *
             complex<double>(-rates.Delta / norm, g2 / norm);
  return s;
}

complex<double> fm_population_response(const RateSet& rates, double omega) {
  rates.validate();
  const double g2 = rates.Gamma2star;
  const double norm = g2 * g2 + rates.Delta * rates.Delta;
  const double gt = gamma_tot_detuned(rates);
  if (gt == 0.0)
    throw DegenerateInputError("fm_population_response: zero total rate");

  // d rho_ee^S / d Delta via d rho/d G0 = gamma_las/gt^2 and
  // d G0/d Delta = -Omega^2 Gamma2* Delta / (Gamma2*^2 + Delta^2)^2.
  const double dg0_ddelta =
      -rates.Omega * rates.Omega * g2 * rates.Delta / (norm * norm);
  const double drho_ddelta = rates.gamma_las / (gt * gt) * dg0_ddelta;
  return drho_ddelta * gt / complex<double>(gt, omega);
}

namespace {

struct BlochRhs {
  double Gamma1, Gamma2star, gamma_las, Omega;

  void eval(double rho_ee, const complex<double>& rho_eg, double delta,
            double& drho_ee, complex<double>& drho_eg) const {
    const double w = 2.0 * rho_ee - 1.0;
    drho_ee = -0.5 * Gamma1 * w - gamma_las * rho_ee - Omega * rho_eg.imag();
    drho_eg = complex<double>(-Gamma2star, delta) * rho_eg +
              complex<double>(0.0, 0.5 * Omega) * w;
  }
};

}  // namespace

BlochTrajectory integrate_bloch(const RateSet& rates,
                                const std::function<double(double)>& delta_of_t,
                                double t0, double t1, double dt,
                                const TwoLevelState& initial,
                                std::size_t store_stride) {
  rates.validate();
  if (!(dt > 0.0) || !(t1 > t0))
    throw InputError("integrate_bloch: need t1 > t0 and dt > 0");
  if (store_stride == 0) store_stride = 1;

  const auto n_steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));

  // Scan the waveform on all RK4 nodes first: validates finiteness and gives
  // |Delta|max for the step-size admission test before any state is touched.
  double delta_max = 0.0;
  for (std::size_t k = 0; k <= 2 * n_steps; ++k) {
    const double d = delta_of_t(t0 + 0.5 * static_cast<double>(k) * dt);
    if (!std::isfinite(d))
      throw InputError("integrate_bloch: detuning waveform is not finite");
    delta_max = std::max(delta_max, std::abs(d));
  }

  double dt_required = 1.0 / (20.0 * rates.Gamma2star);
  if (delta_max > 0.0)
    dt_required = std::min(dt_required, consts::two_pi / delta_max / 20.0);
  if (dt > dt_required)
    throw StepSizeError("integrate_bloch: dt too large, need dt <= " +
                            std::to_string(dt_required),
                        dt_required);

  const BlochRhs rhs{rates.Gamma1, rates.Gamma2star, rates.gamma_las, rates.Omega};

  BlochTrajectory out;
  out.times.reserve(n_steps / store_stride + 2);
  out.states.reserve(n_steps / store_stride + 2);

  double rho_ee = initial.rho_ee;
  complex<double> rho_eg = initial.rho_eg;
  out.times.push_back(t0);
  out.states.push_back(initial);

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = t0 + static_cast<double>(step) * dt;
    const double d0 = delta_of_t(t);
    const double dh = delta_of_t(t + 0.5 * dt);
    const double d1 = delta_of_t(t + dt);

    double k1e, k2e, k3e, k4e;
    complex<double> k1c, k2c, k3c, k4c;
    rhs.eval(rho_ee, rho_eg, d0, k1e, k1c);
    rhs.eval(rho_ee + 0.5 * dt * k1e, rho_eg + 0.5 * dt * k1c, dh, k2e, k2c);
    rhs.eval(rho_ee + 0.5 * dt * k2e, rho_eg + 0.5 * dt * k2c, dh, k3e, k3c);
    rhs.eval(rho_ee + dt * k3e, rho_eg + dt * k3c, d1, k4e, k4c);

    rho_ee += dt / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
    rho_eg += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);

    if (!std::isfinite(rho_ee) || !std::isfinite(rho_eg.real()) ||
        !std::isfinite(rho_eg.imag()))
      throw IntegrationDivergedError(
          "integrate_bloch: state became non-finite at t = " +
          std::to_string(t + dt));

    if ((step + 1) % store_stride == 0 || step + 1 == n_steps) {
      out.times.push_back(t0 + static_cast<double>(step + 1) * dt);
      out.states.push_back({rho_ee, rho_eg});
    }
  }

  out.terminal = {rho_ee, rho_eg};
  return out;
}

TorqueDecomposition torque_decomposition(
    std::span<const double> times, std::span<const Eigen::Vector3d> moments,
    const Eigen::Vector3d& b0,
    const std::function<Eigen::Vector3d(double)>& b1_of_t, double gamma_e) {
  const std::size_t n = times.size();
  if (n < 3)
    throw InputError("torque_decomposition: need at least 3 samples");
  if (moments.size() != n)
    throw InputError("torque_decomposition: times/moments size mismatch");
  if (gamma_e == 0.0)
    throw InputError("torque_decomposition: gamma_e must be nonzero");

  const double dt = times[1] - times[0];
  if (!(dt > 0.0))
    throw InputError("torque_decomposition: time grid must be ascending");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::abs((times[i + 1] - times[i]) - dt) > 1e-9 * dt)
      throw InputError("torque_decomposition: time grid must be uniform");
  }
  for (const auto& mu : moments)
    if (!mu.allFinite())
      throw InputError("torque_decomposition: non-finite moment sample");

  TorqueDecomposition out;
  out.times.assign(times.begin(), times.end());
  out.tau_static.resize(n);
  out.tau_mw.resize(n);
  out.tau_edh.resize(n);
  out.tau_total.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector3d dmu_dt;
    if (i == 0) {
      dmu_dt = (moments[1] - moments[0]) / dt;
    } else if (i == n - 1) {
      dmu_dt = (moments[n - 1] - moments[n - 2]) / dt;
    } else {
      dmu_dt = (moments[i + 1] - moments[i - 1]) / (2.0 * dt);
    }
    out.tau_static[i] = moments[i].cross(b0);
    out.tau_mw[i] = moments[i].cross(b1_of_t(times[i]));
    out.tau_edh[i] = -dmu_dt / gamma_e;
    out.tau_total[i] = out.tau_static[i] + out.tau_mw[i] + out.tau_edh[i];
  }
  return out;
}

}  // namespace spinlever::spindyn
