#ifndef TALBOT_TALBOT_HPP
#define TALBOT_TALBOT_HPP

#include "talbot/bohm.hpp"
#include "talbot/config.hpp"
#include "talbot/constants.hpp"
#include "talbot/errors.hpp"
#include "talbot/farfield.hpp"
#include "talbot/fieldgrid.hpp"
#include "talbot/io.hpp"
#include "talbot/parallel.hpp"
#include "talbot/qcore.hpp"
#include "talbot/recipes.hpp"

#endif  // TALBOT_TALBOT_HPP
