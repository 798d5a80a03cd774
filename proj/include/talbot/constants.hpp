#ifndef TALBOT_CONSTANTS_HPP
#define TALBOT_CONSTANTS_HPP

#include <numbers>

namespace talbot::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);  // J s
inline constexpr double boltzmann = 1.380649e-23;            // J/K
inline constexpr double neutron_mass = 1.67492749804e-27;    // kg

}  // namespace talbot::constants

#endif  // TALBOT_CONSTANTS_HPP
