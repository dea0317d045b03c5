#include "spinlever/nv.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "spinlever/errors.hpp"

namespace spinlever::nv {

using Eigen::Matrix3cd;
using Eigen::Vector3d;
using std::complex;

namespace {

constexpr double kUnitAxisTol = 1e-12;
constexpr double kTetrahedralTol = 1e-9;
// Transverse field below this fraction of |B| is snapped to zero so that the
// aligned-field case stays exactly diagonal.
constexpr double kAlignedTol = 1e-12;
// Relative gap below which two eigenvalues are treated as degenerate.
constexpr double kDegeneracyTol = 1e-6;

const Vector3d kLabReference = Vector3d::UnitZ();

void check_class_index(int class_index) {
  if (class_index < 0 || class_index > 3)
    throw ConfigError("class_index must be in 0..3");
}

// Transverse unit vector of the class frame for a field-free direction
// choice: the lab reference projected off the axis.
Vector3d reference_transverse(const Vector3d& axis) {
  Vector3d u = kLabReference - kLabReference.dot(axis) * axis;
  return u.normalized();
}

}  // namespace

std::array<Vector3d, 4> NvParams::default_axes() {
  const double s = 1.0 / std::sqrt(3.0);
  return {Vector3d(s, s, s), Vector3d(s, -s, -s), Vector3d(-s, s, -s),
          Vector3d(-s, -s, s)};
}

void NvParams::validate() const {
  if (!(D > 0.0)) throw ConfigError("NvParams: D must be positive");
  if (!(gamma_e < 0.0)) throw ConfigError("NvParams: gamma_e must be negative");
  if (Gamma1 < 0.0 || Gamma2star < 0.0 || gamma_las < 0.0)
    throw ConfigError("NvParams: rates must be non-negative");
  if (!(N_per_class >= 1.0))
    throw ConfigError("NvParams: N_per_class must be at least 1");
  const double tetra = std::acos(-1.0 / 3.0);
  for (int i = 0; i < 4; ++i) {
    if (std::abs(class_axes[i].norm() - 1.0) > kUnitAxisTol)
      throw ConfigError("NvParams: class axis " + std::to_string(i) +
                        " is not a unit vector");
    for (int j = i + 1; j < 4; ++j) {
      const double ang =
          std::acos(std::clamp(class_axes[i].dot(class_axes[j]), -1.0, 1.0));
      if (std::abs(ang - tetra) > kTetrahedralTol)
        throw ConfigError("NvParams: axes " + std::to_string(i) + "," +
                          std::to_string(j) + " are not at the tetrahedral angle");
    }
  }
}

StaticField StaticField::lab(const Vector3d& b_lab) {
  if (!b_lab.allFinite()) throw InputError("StaticField: non-finite field");
  return StaticField(b_lab);
}

StaticField StaticField::polar(double amplitude, double theta, int class_index,
                               const NvParams& params) {
  check_class_index(class_index);
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw InputError("StaticField: amplitude must be non-negative");
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw InputError("StaticField: theta must lie in [0, pi]");
  const Vector3d& axis = params.class_axes[static_cast<std::size_t>(class_index)];
  const Vector3d u = reference_transverse(axis);
  return StaticField(amplitude * (std::cos(theta) * axis + std::sin(theta) * u));
}

double StaticField::angle_to_axis(const NvParams& params, int class_index) const {
  check_class_index(class_index);
  const double b = b_.norm();
  if (b == 0.0) return 0.0;
  const Vector3d& axis = params.class_axes[static_cast<std::size_t>(class_index)];
  return std::acos(std::clamp(b_.dot(axis) / b, -1.0, 1.0));
}

ClassFrame class_frame(const NvParams& params, const StaticField& field,
                       int class_index) {
  check_class_index(class_index);
  const Vector3d& e3 = params.class_axes[static_cast<std::size_t>(class_index)];
  const Vector3d& b = field.vector();
  Vector3d perp = b - b.dot(e3) * e3;
  Vector3d e1;
  if (perp.norm() <= kAlignedTol * b.norm() || b.norm() == 0.0) {
    e1 = reference_transverse(e3);
  } else {
    e1 = perp.normalized();
  }
  return ClassFrame{e1, e3.cross(e1), e3};
}

const Matrix3cd& spin_x() {
  static const Matrix3cd sx = [] {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix3cd m;
    m << 0, r, 0, r, 0, r, 0, r, 0;
    return m;
  }();
  return sx;
}

const Matrix3cd& spin_y() {
  static const Matrix3cd sy = [] {
    const complex<double> i(0.0, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    Matrix3cd m;
    m << 0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0;
    return m;
  }();
  return sy;
}

const Matrix3cd& spin_z() {
  static const Matrix3cd sz = [] {
    Matrix3cd m = Matrix3cd::Zero();
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    return m;
  }();
  return sz;
}

Eigen::Matrix3cd build_hamiltonian(const NvParams& params,
                                   const StaticField& field, int class_index) {
  params.validate();
  check_class_index(class_index);
  if (!field.vector().allFinite())
    throw InputError("build_hamiltonian: non-finite field");

  const Vector3d& e3 = params.class_axes[static_cast<std::size_t>(class_index)];
  const Vector3d& b = field.vector();
  const double b_par = b.dot(e3);
  double b_perp = (b - b_par * e3).norm();
  if (b_perp <= kAlignedTol * b.norm()) b_perp = 0.0;  // keep aligned case diagonal

  // Class frame: B = (b_perp, 0, b_par), so only S_x and S_z enter.
  return params.D * (spin_z() * spin_z()) -
         params.gamma_e * (b_perp * spin_x() + b_par * spin_z());
}

EigenSolution solve_eigensystem(const Matrix3cd& hamiltonian,
                                const NvParams& params,
                                const StaticField& field, int class_index) {
  check_class_index(class_index);
  if (!(hamiltonian - hamiltonian.adjoint()).isZero(1e-10 * params.D))
    throw InputError("solve_eigensystem: Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix3cd> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw InputError("solve_eigensystem: diagonalization failed");

  Eigen::Vector3d evals = solver.eigenvalues();
  Matrix3cd evecs = solver.eigenvectors();

  EigenSolution sol;
  sol.frame = class_frame(params, field, class_index);

  // Resolve near-degenerate pairs by co-diagonalizing S_z in the subspace:
  // picks the m_s basis at zero transverse field where eigenvectors would
  // otherwise be an arbitrary mixture.
  const double gap_tol = kDegeneracyTol * params.D;
  for (int i = 0; i < 2; ++i) {
    if (evals[i + 1] - evals[i] < gap_tol) {
      sol.degenerate = true;
      Eigen::Matrix2cd sz_sub;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          sz_sub(r, c) = evecs.col(i + r).dot(spin_z() * evecs.col(i + c));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sub(sz_sub);
      const Eigen::Matrix2cd rot = sub.eigenvectors();
      const Eigen::Vector3cd v0 = evecs.col(i) * rot(0, 0) + evecs.col(i + 1) * rot(1, 0);
      const Eigen::Vector3cd v1 = evecs.col(i) * rot(0, 1) + evecs.col(i + 1) * rot(1, 1);
      evecs.col(i) = v0;
      evecs.col(i + 1) = v1;
    }
  }

  for (int i = 0; i < 3; ++i) sol.energies[i] = evals[i];
  sol.vectors = evecs;

  // |0'>: maximal overlap with |m_s = 0> (basis row 1).
  int i0 = 0;
  double best = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double w = std::norm(evecs(1, i));
    if (w > best) {
      best = w;
      i0 = i;
    }
  }
  int rest[2];
  for (int i = 0, k = 0; i < 3; ++i)
    if (i != i0) rest[k++] = i;

  int im = rest[0], ip = rest[1];
  if (evals[ip] - evals[im] < gap_tol) {
    // Energy tie (zero field): |-1'> is the lower <S_z> member, matching the
    // adiabatic order under an infinitesimal aligned field (gamma_e < 0).
    const double sz_m = std::real(evecs.col(im).dot(spin_z() * evecs.col(im)));
    const double sz_p = std::real(evecs.col(ip).dot(spin_z() * evecs.col(ip)));
    if (sz_m > sz_p) std::swap(im, ip);
  } else if (evals[im] > evals[ip]) {
    std::swap(im, ip);
  }

  sol.label_to_index[static_cast<int>(Label::zero)] = i0;
  sol.label_to_index[static_cast<int>(Label::minus)] = im;
  sol.label_to_index[static_cast<int>(Label::plus)] = ip;

  const Vector3d b_lab = field.vector();
  for (std::size_t l = 0; l < 3; ++l) {
    const int idx = sol.label_to_index[l];
    const Eigen::Vector3cd v = evecs.col(idx);
    const Vector3d s_exp(std::real(v.dot(spin_x() * v)),
                         std::real(v.dot(spin_y() * v)),
                         std::real(v.dot(spin_z() * v)));
    const Vector3d mu = consts::hbar * params.gamma_e * sol.frame.to_lab(s_exp);
    sol.moments[l] = mu;
    sol.torques[l] = mu.cross(b_lab);
  }
  return sol;
}

EigenSolution solve_class(const NvParams& params, const StaticField& field,
                          int class_index) {
  return solve_eigensystem(build_hamiltonian(params, field, class_index),
                           params, field, class_index);
}

TransitionPair transition_frequencies(const EigenSolution& sol) {
  const double e0 = sol.energy(Label::zero);
  return TransitionPair{(sol.energy(Label::minus) - e0) / consts::two_pi,
                        (sol.energy(Label::plus) - e0) / consts::two_pi};
}

EnsembleTorques eigenstate_torques(const EigenSolution& sol,
                                   const StaticField& field, double n_spins,
                                   const Vector3d& projection_axis) {
  if (!(n_spins >= 1.0))
    throw InputError("eigenstate_torques: n_spins must be at least 1");
  EnsembleTorques out;
  for (std::size_t l = 0; l < 3; ++l) {
    out.torques[l] = n_spins * sol.moments[l].cross(field.vector());
    out.norms[l] = out.torques[l].norm();
    out.projections[l] = out.torques[l].dot(projection_axis);
  }
  return out;
}

Vector3d torque_axis(const NvParams& params, const StaticField& field,
                     int class_index) {
  return class_frame(params, field, class_index).e2;
}

Vector3d driven_torque_change(const NvParams& params, const StaticField& field,
                              int class_index, Transition transition) {
  const EigenSolution sol = solve_class(params, field, class_index);
  const Label excited = transition == Transition::minus ? Label::minus : Label::plus;
  const Vector3d dmu = 0.5 * (sol.moment(excited) - sol.moment(Label::zero));
  return params.N_per_class * dmu.cross(field.vector());
}

SignalTrace odmr_spectrum(const NvParams& params, const StaticField& field,
                          std::span<const double> grid_hz, double contrast,
                          double linewidth_hz) {
  if (grid_hz.empty()) throw InputError("odmr_spectrum: empty frequency grid");
  if (!(contrast > 0.0 && contrast < 1.0))
    throw InputError("odmr_spectrum: contrast must lie in (0, 1)");
  if (!(linewidth_hz > 0.0))
    throw InputError("odmr_spectrum: linewidth must be positive");

  std::array<double, 8> centers;
  for (int c = 0; c < 4; ++c) {
    const TransitionPair pair = transition_frequencies(solve_class(params, field, c));
    centers[2 * c] = pair.f_minus;
    centers[2 * c + 1] = pair.f_plus;
  }

  const double hwhm = 0.5 * linewidth_hz;
  std::vector<double> pl(grid_hz.size(), 1.0);
  for (std::size_t i = 0; i < grid_hz.size(); ++i) {
    for (const double f0 : centers) {
      const double d = (grid_hz[i] - f0) / hwhm;
      pl[i] -= contrast / (1.0 + d * d);
    }
  }

  SignalTrace trace("frequency", "Hz",
                    std::vector<double>(grid_hz.begin(), grid_hz.end()));
  trace.add_channel("PL", "1", std::move(pl));
  return trace;
}

}  // namespace spinlever::nv
