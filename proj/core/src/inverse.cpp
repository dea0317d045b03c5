#include "spinlever/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinlever/errors.hpp"

namespace spinlever::inverse {

namespace {

constexpr double kBScale = 0.1;                     // T, coordinate scaling
constexpr double kThetaScale = std::numbers::pi / 2.0;
constexpr double kBMax = 1.0;                       // physical bound, T
constexpr int kLattice = 20;
constexpr int kMaxIterations = 100;
constexpr double kJacobianStep = 1e-5;              // in scaled coordinates

struct Residual {
  double r_minus;
  double r_plus;
  double rms() const {
    return std::sqrt(0.5 * (r_minus * r_minus + r_plus * r_plus));
  }
};

Residual forward_residual(double b0, double theta, int class_index,
                          const nv::NvParams& params, double f_minus_target,
                          double f_plus_target) {
  const nv::StaticField field =
      nv::StaticField::polar(b0, theta, class_index, params);
  const nv::TransitionPair pair =
      nv::transition_frequencies(nv::solve_class(params, field, class_index));
  return Residual{pair.f_minus - f_minus_target, pair.f_plus - f_plus_target};
}

}  // namespace

FieldFitResult fit_field_from_dips(double f_minus_hz, double f_plus_hz,
                                   const nv::NvParams& params, double tol_hz,
                                   int class_index) {
  params.validate();
  if (!(f_minus_hz > 0.0))
    throw InputError("fit_field_from_dips: f_minus must be positive");
  if (f_minus_hz > f_plus_hz)
    throw InputError("fit_field_from_dips: require f_minus <= f_plus");
  if (!(tol_hz > 0.0))
    throw InputError("fit_field_from_dips: tolerance must be positive");

  auto residual_scaled = [&](double ub, double ut) {
    return forward_residual(ub * kBScale, ut * kThetaScale, class_index, params,
                            f_minus_hz, f_plus_hz);
  };

  // Deterministic multi-start over the lattice; refine from the best seed.
  double best_ub = 0.0, best_ut = 0.0, best_rms = std::numeric_limits<double>::max();
  for (int i = 0; i < kLattice; ++i) {
    for (int j = 0; j < kLattice; ++j) {
      const double ub = static_cast<double>(i) / (kLattice - 1);
      const double ut = static_cast<double>(j) / (kLattice - 1);
      const double rms = residual_scaled(ub, ut).rms();
      if (rms < best_rms) {
        best_rms = rms;
        best_ub = ub;
        best_ut = ut;
      }
    }
  }

  double ub = best_ub, ut = best_ut;
  Residual res = residual_scaled(ub, ut);
  double lambda = 1e-6;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    if (res.rms() < 1e-2) break;  // refine well past any sensible tolerance

    // Central-difference Jacobian in scaled coordinates.
    const double h = kJacobianStep;
    const Residual rb_p = residual_scaled(ub + h, ut);
    const Residual rb_m = residual_scaled(ub - h, ut);
    const Residual rt_p = residual_scaled(ub, ut + h);
    const Residual rt_m = residual_scaled(ub, ut - h);
    const double j00 = (rb_p.r_minus - rb_m.r_minus) / (2.0 * h);
    const double j01 = (rt_p.r_minus - rt_m.r_minus) / (2.0 * h);
    const double j10 = (rb_p.r_plus - rb_m.r_plus) / (2.0 * h);
    const double j11 = (rt_p.r_plus - rt_m.r_plus) / (2.0 * h);

    // Normal equations with Levenberg damping.
    const double a00 = j00 * j00 + j10 * j10;
    const double a01 = j00 * j01 + j10 * j11;
    const double a11 = j01 * j01 + j11 * j11;
    const double g0 = j00 * res.r_minus + j10 * res.r_plus;
    const double g1 = j01 * res.r_minus + j11 * res.r_plus;

    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      const double d00 = a00 * (1.0 + lambda);
      const double d11 = a11 * (1.0 + lambda);
      const double det = d00 * d11 - a01 * a01;
      if (det == 0.0) {
        lambda = std::max(lambda * 10.0, 1e-9);
        continue;
      }
      const double step_b = -(d11 * g0 - a01 * g1) / det;
      const double step_t = -(d00 * g1 - a01 * g0) / det;
      double ub_new = std::clamp(ub + step_b, 0.0, kBMax / kBScale);
      double ut_new = std::clamp(ut + step_t, 0.0, 1.0);
      const Residual res_new = residual_scaled(ub_new, ut_new);
      if (res_new.rms() < res.rms()) {
        ub = ub_new;
        ut = ut_new;
        res = res_new;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lambda = std::max(lambda * 10.0, 1e-9);
    }
    if (!stepped) break;  // stalled; report the best point found
  }

  FieldFitResult out;
  out.b0_tesla = ub * kBScale;
  out.theta_rad = ut * kThetaScale;
  out.residual_hz = res.rms();
  out.iterations = iter;
  out.converged = res.rms() <= tol_hz && out.b0_tesla <= kBMax;
  return out;
}

double TorqueCurveModel::value(double abscissa) const {
  nv::NvParams single = params;
  single.N_per_class = 1.0;
  const double b0 = sweep == Sweep::amplitude ? abscissa : fixed_value;
  const double theta = sweep == Sweep::amplitude ? fixed_value : abscissa;
  const nv::StaticField field =
      nv::StaticField::polar(b0, theta, class_index, single);
  return nv::driven_torque_change(single, field, class_index, transition).norm();
}

SpinFitResult fit_polarized_spins(const SignalTrace& data,
                                  const std::string& channel,
                                  const TorqueCurveModel& model) {
  const std::vector<double>& grid = data.abscissa();
  const std::vector<double>& y = data.channel(channel);
  if (grid.size() < 3)
    throw InputError("fit_polarized_spins: need at least 3 data points");

  std::vector<double> m(grid.size());
  double mm = 0.0, my = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m[i] = model.value(grid[i]);
    mm += m[i] * m[i];
    my += m[i] * y[i];
  }
  if (mm == 0.0)
    throw UnidentifiableError(
        "fit_polarized_spins: model torque vanishes on the whole grid");

  SpinFitResult out;
  out.n_fit = my / mm;

  double ss = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = y[i] - out.n_fit * m[i];
    ss += r * r;
  }
  const auto n = static_cast<double>(grid.size());
  out.residual_rms = std::sqrt(ss / n);
  const double sigma2 = n > 1.0 ? ss / (n - 1.0) : 0.0;
  out.standard_error = std::sqrt(sigma2 / mm);
  return out;
}

}  // namespace spinlever::inverse
