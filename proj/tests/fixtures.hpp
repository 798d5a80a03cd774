#ifndef TALBOT_TESTS_FIXTURES_HPP
#define TALBOT_TESTS_FIXTURES_HPP

#include <cstddef>

#include "talbot/constants.hpp"
#include "talbot/qcore.hpp"

namespace fixtures {

inline constexpr double kLambda = 5e-9;
inline constexpr double kSigma = 5e-9;
inline constexpr double kPeriod = 5e-8;

inline talbot::EvalContext neutron_ctx(std::size_t n_slits, double period = kPeriod,
                                       double sigma = kSigma, double wavelength = kLambda) {
  return talbot::EvalContext(talbot::beam_from_wavelength(talbot::constants::neutron_mass, wavelength),
                             talbot::make_grating(n_slits, period, sigma));
}

}  // namespace fixtures

#endif  // TALBOT_TESTS_FIXTURES_HPP
