#ifndef TALBOT_RECIPES_HPP
#define TALBOT_RECIPES_HPP

// Named reproduction setups. All use cold neutrons at lambda = 5 nm and
// Gaussian slits of sigma = lambda, which is an assumption: the slit width of
// the original figures is not known.

#include <array>
#include <string>
#include <string_view>

#include "talbot/config.hpp"

namespace talbot {

struct Recipe {
  std::string_view name;
  std::string_view summary;
  std::string_view json;
};

inline constexpr std::array<Recipe, 11> kRecipes{{
    {"fig4", "4 slits, transient region from near to far field",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 4, "period": 5e-8, "sigma": 5e-9},
         "grid": {"x_min": 0.0, "x_max": 1.4e-6, "nx": 1024, "z_min": 5e-8, "z_max": 3.8e-6, "nz": 1024}})"},
    {"fig5", "4 slits, far-field cross-section at z = 0.004 m",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 4, "period": 5e-8, "sigma": 5e-9},
         "farfield": {"z": 0.004, "x_min": -1.2e-3, "x_max": 1.2e-3, "samples": 4096}})"},
    {"fig6", "4 slits, near field at high resolution",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 4, "period": 5e-8, "sigma": 5e-9},
         "grid": {"x_min": 0.0, "x_max": 3e-7, "nx": 1024, "z_min": 8e-10, "z_max": 2e-7, "nz": 1024}})"},
    {"fig7", "4 slits, d = 10 lambda, carpet with trajectories",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 4, "period": 5e-8, "sigma": 5e-9}})"},
    {"fig8", "64 slits, d = 10 lambda, carpet with trajectories",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 5e-8, "sigma": 5e-9},
         "grid": {"nx": 2048, "nz": 1024}})"},
    {"fig9", "64 slits, far-field cross-section at z = 1.25 m",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 5e-8, "sigma": 5e-9},
         "farfield": {"z": 1.25, "samples": 8192}})"},
    {"fig10", "64 slits, Talbot carpet in the central window, d = 10 lambda",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 5e-8, "sigma": 5e-9},
         "grid": {"x_min": -1.5e-7, "x_max": 1.5e-7, "nx": 1024, "z_min": 1e-9, "z_max": 1e-6, "nz": 1024}})"},
    {"fig11", "64 slits, Talbot carpet in the central window, d = 20 lambda",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 1e-7, "sigma": 5e-9},
         "grid": {"x_min": -3e-7, "x_max": 3e-7, "nx": 1024, "z_min": 4e-9, "z_max": 4e-6, "nz": 1024}})"},
    {"fig12", "64 slits, first quarter Talbot length, d = 40 lambda",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 2e-7, "sigma": 5e-9},
         "grid": {"x_min": -6e-7, "x_max": 6e-7, "nx": 1024, "z_min": 1.6e-8, "z_max": 4e-6, "nz": 1024}})"},
    {"fig13", "64 slits, density along the inter-slit midpoint, d = 10 lambda",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 64, "period": 5e-8, "sigma": 5e-9},
         "grid": {"x_min": -1.5e-7, "x_max": 1.5e-7, "nx": 1024, "z_min": 1e-9, "z_max": 1e-6, "nz": 2048}})"},
    {"single", "1 slit, free spreading of one Gaussian packet",
     R"({"beam": {"mass": "neutron", "wavelength": 5e-9},
         "grating": {"n_slits": 1, "period": 5e-8, "sigma": 5e-9}})"},
}};

inline const Recipe* find_recipe(std::string_view name) {
  for (const auto& r : kRecipes) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

inline RunConfig recipe_config(std::string_view name) {
  const Recipe* r = find_recipe(name);
  if (r == nullptr) throw ConfigError({"unknown recipe '" + std::string(name) + "'"});
  return parse_config(r->json);
}

}  // namespace talbot

#endif  // TALBOT_RECIPES_HPP
