#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>

#include "spinlever/constants.hpp"
#include "spinlever/trace.hpp"

namespace spinlever::nv {

// Eigenstate labels of the ground-state triplet in a static field.
// |0'> is the state of maximal overlap with |m_s = 0>; the remaining two are
// ordered by energy (|-1'> below |+1'>).
enum class Label : int { zero = 0, minus = 1, plus = 2 };

enum class Transition : int { minus = 0, plus = 1 };

// Ensemble constants of the NV centers glued to the lever. All angular
// frequencies are in rad/s; gamma_e is signed (negative for the electron).
struct NvParams {
  double D = consts::two_pi * 2.87e9;           // zero-field splitting
  double gamma_e = -consts::two_pi * 28.0e9;    // gyromagnetic ratio, rad/(s T)
  double Gamma1 = consts::two_pi * 1e3;         // longitudinal decay
  double Gamma2star = consts::two_pi * 5e6;     // dephasing
  double gamma_las = consts::two_pi * 1e3;      // optical polarization rate
  double N_per_class = 5e9;                     // spins per orientation class
  std::array<Eigen::Vector3d, 4> class_axes = default_axes();

  // The four <111> cube diagonals, normalized. Pairwise angle acos(-1/3).
  static std::array<Eigen::Vector3d, 4> default_axes();

  // Throws ConfigError on invariant violations (D <= 0, gamma_e >= 0,
  // non-unit axes, wrong tetrahedral angles).
  void validate() const;
};

// Static magnetic field, stored as a lab-frame vector in Tesla. The polar
// constructor places the field at angle theta from the chosen class axis, in
// the plane spanned by that axis and a fixed lab reference (z).
class StaticField {
 public:
  StaticField() = default;

  static StaticField lab(const Eigen::Vector3d& b_lab);
  static StaticField polar(double amplitude, double theta, int class_index,
                           const NvParams& params);

  const Eigen::Vector3d& vector() const { return b_; }
  double amplitude() const { return b_.norm(); }
  // Angle between the field and the given class axis, in [0, pi].
  double angle_to_axis(const NvParams& params, int class_index) const;

 private:
  explicit StaticField(const Eigen::Vector3d& b) : b_(b) {}
  Eigen::Vector3d b_ = Eigen::Vector3d::Zero();
};

// Orthonormal frame of one class: e3 = NV axis, e1 in span{e3, B} so the
// field has no e2 component and eigenstate torques lie along +-e2.
struct ClassFrame {
  Eigen::Vector3d e1, e2, e3;
  Eigen::Vector3d to_lab(const Eigen::Vector3d& v) const {
    return v.x() * e1 + v.y() * e2 + v.z() * e3;
  }
};

ClassFrame class_frame(const NvParams& params, const StaticField& field,
                       int class_index);

// Spin-1 operators in the basis {|+1>, |0>, |-1>} quantized along e3.
const Eigen::Matrix3cd& spin_x();
const Eigen::Matrix3cd& spin_y();
const Eigen::Matrix3cd& spin_z();

// H/hbar = D (S.e3)^2 - gamma_e B.S, expressed in the class frame (rad/s).
Eigen::Matrix3cd build_hamiltonian(const NvParams& params,
                                   const StaticField& field, int class_index);

// Labeled eigensystem of one class with per-state moments and torques.
// Moments use mu = hbar gamma_e <S> (single spin, lab frame, J/T); torques
// are mu x B0 (single spin, N m).
struct EigenSolution {
  std::array<double, 3> energies{};        // ascending, rad/s
  std::array<int, 3> label_to_index{};     // Label -> position in energies
  Eigen::Matrix3cd vectors;                // columns, class-frame basis
  ClassFrame frame;
  std::array<Eigen::Vector3d, 3> moments;  // indexed by Label
  std::array<Eigen::Vector3d, 3> torques;  // indexed by Label
  bool degenerate = false;                 // subspace resolved via S_z

  double energy(Label l) const { return energies[label_to_index[static_cast<int>(l)]]; }
  const Eigen::Vector3d& moment(Label l) const { return moments[static_cast<int>(l)]; }
  const Eigen::Vector3d& torque(Label l) const { return torques[static_cast<int>(l)]; }
  Eigen::Vector3cd vector_of(Label l) const {
    return vectors.col(label_to_index[static_cast<int>(l)]);
  }
};

EigenSolution solve_eigensystem(const Eigen::Matrix3cd& hamiltonian,
                                const NvParams& params,
                                const StaticField& field, int class_index);

// build + solve in one call.
EigenSolution solve_class(const NvParams& params, const StaticField& field,
                          int class_index);

struct TransitionPair {
  double f_minus;  // |0'> -> |-1'>, Hz
  double f_plus;   // |0'> -> |+1'>, Hz
};

TransitionPair transition_frequencies(const EigenSolution& sol);

// Eigenstate torques scaled to n_spins, with norms and the projection onto
// a caller-chosen axis (the lever only senses one torque component).
struct EnsembleTorques {
  std::array<Eigen::Vector3d, 3> torques;  // indexed by Label, N m
  std::array<double, 3> norms;
  std::array<double, 3> projections;
};

EnsembleTorques eigenstate_torques(const EigenSolution& sol,
                                   const StaticField& field, double n_spins,
                                   const Eigen::Vector3d& projection_axis);

// Default projection axis: e2 of the class frame (the direction the selected
// class's torque actually points along).
Eigen::Vector3d torque_axis(const NvParams& params, const StaticField& field,
                            int class_index);

// Torque change between full |0'> polarization and 50/50 saturation of the
// driven transition: N (mu_{+-1'} - mu_{0'})/2 x B0.
Eigen::Vector3d driven_torque_change(const NvParams& params,
                                     const StaticField& field, int class_index,
                                     Transition transition);

// Photoluminescence spectrum: unit baseline minus one Lorentzian dip per
// transition of every class. linewidth_hz is the FWHM; contrast is the depth
// of a single isolated dip.
SignalTrace odmr_spectrum(const NvParams& params, const StaticField& field,
                          std::span<const double> grid_hz, double contrast,
                          double linewidth_hz);

}  // namespace spinlever::nv
