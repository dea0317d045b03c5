#include "spinlever/signal.hpp"

#include <cmath>

#include "spinlever/errors.hpp"

namespace spinlever::signal {

using std::complex;

double DriveConfig::resolved_omega_rabi() const {
  if (power_dbm) return kappa * std::pow(10.0, *power_dbm / 20.0);
  return omega_rabi;
}

void DriveConfig::validate() const {
  if (fm_depth_hz < 0.0)
    throw ConfigError("DriveConfig: fm_depth must be non-negative");
  if (!(mod_freq_hz > 0.0))
    throw ConfigError("DriveConfig: mod_freq must be positive");
  if (!(kappa > 0.0)) throw ConfigError("DriveConfig: kappa must be positive");
  if (omega_rabi < 0.0)
    throw ConfigError("DriveConfig: omega_rabi must be non-negative");
  if (class_index < 0 || class_index > 3)
    throw ConfigError("DriveConfig: class_index must be in 0..3");
}

double transition_drive_force(const nv::NvParams& params,
                              const nv::StaticField& field, int class_index,
                              Transition transition,
                              const Eigen::Vector3d& axis, double le) {
  if (!(le > 0.0)) throw DomainError("transition_drive_force: le must be positive");
  const nv::EigenSolution sol = nv::solve_class(params, field, class_index);
  const nv::Label excited =
      transition == Transition::minus ? nv::Label::minus : nv::Label::plus;
  const Eigen::Vector3d dtau =
      params.N_per_class *
      (sol.moment(excited) - sol.moment(nv::Label::zero)).cross(field.vector());
  return dtau.dot(axis) / le;
}

complex<double> displacement_response(double omega,
                                      const spindyn::RateSet& rates,
                                      const DriveConfig& drive,
                                      double force_contrast,
                                      const mech::CantileverParams& cant) {
  drive.validate();
  const double depth = consts::two_pi * drive.fm_depth_hz;
  return spindyn::fm_population_response(rates, omega) * force_contrast *
         mech::mechanical_susceptibility(omega, cant) * depth;
}

QuadraturePair quadratures_at_resonance(const spindyn::RateSet& rates,
                                        const DriveConfig& drive,
                                        double force_contrast,
                                        const mech::CantileverParams& cant) {
  drive.validate();
  spindyn::RateSet blue = rates;
  blue.Delta = rates.Gamma2star;  // blue-side operating point
  blue.validate();

  const double g0 = spindyn::gamma0(blue);
  const double gt = spindyn::gamma_tot(blue);
  const double wm = cant.omega_m();
  const double depth = consts::two_pi * drive.fm_depth_hz;
  const double common = force_contrast * cant.Q * blue.gamma_las * g0 * depth /
                        (2.0 * cant.me * (gt * gt + wm * wm) * blue.Gamma2star);
  return QuadraturePair{common / (wm * gt), common / (wm * wm)};
}

SignalTrace fmmdmr_sweep(const nv::NvParams& params,
                         const nv::StaticField& field,
                         const spindyn::RateSet& rates_base,
                         const DriveConfig& drive,
                         const mech::CantileverParams& cant,
                         std::span<const double> center_grid_hz,
                         const Eigen::Vector3d& projection_axis,
                         double spurious_x, double spurious_y) {
  params.validate();
  drive.validate();
  if (center_grid_hz.empty()) throw InputError("fmmdmr_sweep: empty grid");

  const double w_mod = consts::two_pi * drive.mod_freq_hz;
  const double depth = consts::two_pi * drive.fm_depth_hz;
  const complex<double> chi = mech::mechanical_susceptibility(w_mod, cant);

  // Transition frequencies and drive forces are carrier-independent.
  struct Line {
    double f_center;
    double force;
  };
  std::array<Line, 8> lines;
  for (int c = 0; c < 4; ++c) {
    const nv::EigenSolution sol = nv::solve_class(params, field, c);
    const nv::TransitionPair pair = nv::transition_frequencies(sol);
    for (int t = 0; t < 2; ++t) {
      const nv::Label excited = t == 0 ? nv::Label::minus : nv::Label::plus;
      const Eigen::Vector3d dtau =
          params.N_per_class *
          (sol.moment(excited) - sol.moment(nv::Label::zero)).cross(field.vector());
      lines[2 * c + t] = {t == 0 ? pair.f_minus : pair.f_plus,
                          dtau.dot(projection_axis) / cant.le};
    }
  }

  std::vector<double> xs(center_grid_hz.size(), spurious_x);
  std::vector<double> ys(center_grid_hz.size(), spurious_y);
  spindyn::RateSet rates = rates_base;
  rates.Omega = drive.resolved_omega_rabi();
  for (std::size_t i = 0; i < center_grid_hz.size(); ++i) {
    complex<double> dx(0.0, 0.0);
    for (const Line& line : lines) {
      rates.Delta = consts::two_pi * (center_grid_hz[i] - line.f_center);
      dx += spindyn::fm_population_response(rates, w_mod) * line.force * chi *
            depth;
    }
    xs[i] += dx.real();
    ys[i] += dx.imag();
  }

  SignalTrace trace("frequency", "Hz",
                    std::vector<double>(center_grid_hz.begin(), center_grid_hz.end()));
  trace.add_channel("X", "m", std::move(xs));
  trace.add_channel("Y", "m", std::move(ys));
  return trace;
}

SignalTrace power_scan(const spindyn::RateSet& rates_base,
                       const DriveConfig& drive,
                       std::span<const double> omega_grid,
                       double force_contrast,
                       const mech::CantileverParams& cant) {
  if (omega_grid.empty()) throw InputError("power_scan: empty grid");
  std::vector<double> xs(omega_grid.size());
  std::vector<double> ys(omega_grid.size());
  std::vector<double> ratio(omega_grid.size());
  spindyn::RateSet rates = rates_base;
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    rates.Omega = omega_grid[i];
    const QuadraturePair q = quadratures_at_resonance(rates, drive, force_contrast, cant);
    xs[i] = q.x;
    ys[i] = q.y;
    ratio[i] = q.x != 0.0 ? q.y / q.x : 0.0;
  }
  SignalTrace trace("omega_rabi", "rad/s",
                    std::vector<double>(omega_grid.begin(), omega_grid.end()));
  trace.add_channel("X", "m", std::move(xs));
  trace.add_channel("Y", "m", std::move(ys));
  trace.add_channel("ratio", "1", std::move(ratio));
  return trace;
}

QuadraturePair demodulate(const TimeSeries& trace, double ref_freq_hz,
                          double time_constant_s) {
  if (!(ref_freq_hz > 0.0)) throw InputError("demodulate: ref_freq must be positive");
  if (!(time_constant_s > 0.0))
    throw InputError("demodulate: time constant must be positive");
  if (!(trace.dt > 0.0)) throw InputError("demodulate: need dt > 0");
  const std::size_t n = trace.values.size();
  if (n < 2 || (static_cast<double>(n - 1) * trace.dt) * ref_freq_hz < 10.0)
    throw InputError("demodulate: trace shorter than 10 reference periods");

  const double alpha = 1.0 - std::exp(-trace.dt / time_constant_s);
  const double w = consts::two_pi * ref_freq_hz;
  double zx = 0.0, zy = 0.0;

  const auto n_per = static_cast<std::size_t>(
      std::llround(1.0 / (ref_freq_hz * trace.dt)));
  const std::size_t tail_start = n > n_per ? n - n_per : 0;
  double sx = 0.0, sy = 0.0;
  std::size_t tail_count = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = trace.t0 + static_cast<double>(i) * trace.dt;
    const double v = trace.values[i];
    zx += alpha * (2.0 * v * std::cos(w * t) - zx);
    zy += alpha * (-2.0 * v * std::sin(w * t) - zy);
    if (i >= tail_start) {
      sx += zx;
      sy += zy;
      ++tail_count;
    }
  }
  return QuadraturePair{sx / static_cast<double>(tail_count),
                        sy / static_cast<double>(tail_count)};
}

SignalTrace background_subtraction(const SignalTrace& trace_on,
                                   const SignalTrace& trace_off) {
  if (trace_on.abscissa() != trace_off.abscissa() ||
      trace_on.abscissa_name() != trace_off.abscissa_name())
    throw InputError("background_subtraction: abscissa grids differ");
  if (trace_on.channels().size() != trace_off.channels().size())
    throw InputError("background_subtraction: channel sets differ");

  SignalTrace out(trace_on.abscissa_name(), trace_on.abscissa_unit(),
                  trace_on.abscissa());
  for (const auto& ch : trace_on.channels()) {
    if (!trace_off.has_channel(ch.name))
      throw InputError("background_subtraction: channel '" + ch.name +
                       "' missing from the off trace");
    const std::vector<double>& off = trace_off.channel(ch.name);
    std::vector<double> diff(ch.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = ch.values[i] - off[i];
    out.add_channel(ch.name, ch.unit, std::move(diff));
  }
  out.metadata() = trace_on.metadata();
  out.metadata()["background_subtracted"] = "true";
  return out;
}

TimeDomainResult simulate_fm_quadratures(const spindyn::RateSet& rates_at_center,
                                         double depth_rad, double mod_freq_hz,
                                         double force_contrast,
                                         const mech::CantileverParams& cant,
                                         int settle_cycles, int measure_cycles,
                                         double dt, std::size_t store_stride) {
  rates_at_center.validate();
  cant.validate();
  if (!(mod_freq_hz > 0.0))
    throw InputError("simulate_fm_quadratures: mod_freq must be positive");
  if (settle_cycles < 0 || measure_cycles < 12)
    throw InputError("simulate_fm_quadratures: need >= 12 measurement cycles");
  if (store_stride == 0) store_stride = 1;

  const double delta_max = std::abs(rates_at_center.Delta) + std::abs(depth_rad);
  double dt_required = 1.0 / (20.0 * rates_at_center.Gamma2star);
  if (delta_max > 0.0)
    dt_required = std::min(dt_required, consts::two_pi / delta_max / 20.0);
  if (!(dt > 0.0) || dt > dt_required)
    throw StepSizeError("simulate_fm_quadratures: dt too large, need dt <= " +
                            std::to_string(dt_required),
                        dt_required);

  const double w_mod = consts::two_pi * mod_freq_hz;
  const double wm = cant.omega_m();
  const double gamma_m = wm / cant.Q;
  const spindyn::TwoLevelState ss = spindyn::steady_state(rates_at_center);

  const double g1 = rates_at_center.Gamma1;
  const double g2 = rates_at_center.Gamma2star;
  const double gl = rates_at_center.gamma_las;
  const double om = rates_at_center.Omega;
  const double d_c = rates_at_center.Delta;

  // State: (rho_ee, rho_eg, x, v); the force on the mode is
  // F_y (rho_ee - rho_ee^S) so the displacement oscillates about zero.
  struct State {
    double ee;
    complex<double> eg;
    double x;
    double v;
  };
  auto deriv = [&](const State& s, double t, State& d) {
    const double delta = d_c + depth_rad * std::cos(w_mod * t);
    const double w = 2.0 * s.ee - 1.0;
    d.ee = -0.5 * g1 * w - gl * s.ee - om * s.eg.imag();
    d.eg = complex<double>(-g2, delta) * s.eg + complex<double>(0.0, 0.5 * om) * w;
    d.x = s.v;
    d.v = force_contrast * (s.ee - ss.rho_ee) / cant.me - gamma_m * s.v -
          wm * wm * s.x;
  };
  auto advance = [&](State& s, double t) {
    State k1, k2, k3, k4;
    deriv(s, t, k1);
    State s2{s.ee + 0.5 * dt * k1.ee, s.eg + 0.5 * dt * k1.eg,
             s.x + 0.5 * dt * k1.x, s.v + 0.5 * dt * k1.v};
    deriv(s2, t + 0.5 * dt, k2);
    State s3{s.ee + 0.5 * dt * k2.ee, s.eg + 0.5 * dt * k2.eg,
             s.x + 0.5 * dt * k2.x, s.v + 0.5 * dt * k2.v};
    deriv(s3, t + 0.5 * dt, k3);
    State s4{s.ee + dt * k3.ee, s.eg + dt * k3.eg, s.x + dt * k3.x,
             s.v + dt * k3.v};
    deriv(s4, t + dt, k4);
    s.ee += dt / 6.0 * (k1.ee + 2.0 * k2.ee + 2.0 * k3.ee + k4.ee);
    s.eg += dt / 6.0 * (k1.eg + 2.0 * k2.eg + 2.0 * k3.eg + k4.eg);
    s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  };

  const double period = 1.0 / mod_freq_hz;
  const auto steps_per_cycle = static_cast<std::size_t>(std::ceil(period / dt));
  const std::size_t settle_steps = steps_per_cycle * static_cast<std::size_t>(settle_cycles);
  const std::size_t measure_steps = steps_per_cycle * static_cast<std::size_t>(measure_cycles);

  State s{ss.rho_ee, ss.rho_eg, 0.0, 0.0};
  std::size_t step = 0;
  for (; step < settle_steps; ++step)
    advance(s, static_cast<double>(step) * dt);

  TimeSeries stored;
  stored.t0 = static_cast<double>(step) * dt;
  stored.dt = dt * static_cast<double>(store_stride);
  stored.values.reserve(measure_steps / store_stride + 1);
  for (std::size_t k = 0; k < measure_steps; ++k, ++step) {
    if (k % store_stride == 0) stored.values.push_back(s.x);
    advance(s, static_cast<double>(step) * dt);
    if (!std::isfinite(s.x) || !std::isfinite(s.ee))
      throw IntegrationDivergedError("simulate_fm_quadratures: state diverged");
  }

  const double window = static_cast<double>(measure_cycles) * period;
  TimeDomainResult out;
  out.quadratures = demodulate(stored, mod_freq_hz, window / 6.0);
  out.displacement = std::move(stored);
  return out;
}

}  // namespace spinlever::signal
