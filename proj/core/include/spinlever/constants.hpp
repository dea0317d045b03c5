#pragma once

#include <numbers>

namespace spinlever::consts {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K (exact, SI 2019)
inline constexpr double hbar = 1.054571817e-34;      // J s

}  // namespace spinlever::consts
