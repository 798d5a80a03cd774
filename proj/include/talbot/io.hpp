#ifndef TALBOT_IO_HPP
#define TALBOT_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "talbot/bohm.hpp"
#include "talbot/errors.hpp"
#include "talbot/fieldgrid.hpp"

namespace talbot {

// ---------------------------------------------------------------------------
// CSV
//
// UTF-8, LF line endings, '.' decimal separator, 17 significant digits.
// DensityField:  "x\z,z_0,...,z_{nz-1}" then one row "x_i,v_i0,...".
// CrossSection:  "x,density" (fixed-z) or "z,density" (fixed-x).
// Trajectory:    "z,x,t".
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const DensityField& f) {
  os << "x\\z";
  for (std::size_t j = 0; j < f.spec.nz; ++j) os << ',' << format_number(f.spec.z_at(j));
  os << '\n';
  for (std::size_t i = 0; i < f.spec.nx; ++i) {
    os << format_number(f.spec.x_at(i));
    for (std::size_t j = 0; j < f.spec.nz; ++j) os << ',' << format_number(f.at(i, j));
    os << '\n';
  }
}

inline void write_csv(std::ostream& os, const CrossSection& cs) {
  os << (cs.axis == SectionAxis::fixed_z ? "x" : "z") << ",density\n";
  for (std::size_t k = 0; k < cs.positions.size(); ++k) {
    os << format_number(cs.positions[k]) << ',' << format_number(cs.values[k]) << '\n';
  }
}

inline void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "z,x,t\n";
  for (const auto& p : traj.points) {
    os << format_number(p.z) << ',' << format_number(p.x) << ',' << format_number(p.t) << '\n';
  }
}

inline void write_bytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

template <class T>
void export_csv(const T& object, const std::filesystem::path& path) {
  std::ostringstream os;
  write_csv(os, object);
  write_bytes(path, os.str());
}

/// Parsed CSV: one header row of strings, numeric body rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable parse_csv(std::string_view text) {
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    auto cells = split(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      std::size_t used = 0;
      const double v = std::stod(c, &used);
      if (used != c.size()) throw IoError("malformed CSV number '" + c + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

// ---------------------------------------------------------------------------
// Carpet rendering (binary PGM, maxval 255)
// ---------------------------------------------------------------------------

enum class Palette { black_max, white_max };
enum class Normalization { global, per_column };

struct RenderOptions {
  Palette palette = Palette::black_max;
  Normalization normalization = Normalization::global;
  double gamma = 0.5;
  std::size_t width = 0;   // 0: one pixel per z sample
  std::size_t height = 0;  // 0: one pixel per x sample
  bool trajectory_overlay = true;

  void validate() const {
    if (!(gamma > 0.0)) throw DomainError("render: gamma must be positive");
  }
};

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top

  std::uint8_t& at(std::size_t col, std::size_t row) { return pixels[row * width + col]; }
  std::uint8_t at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }

  std::string to_pgm() const {
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
  }
};

/// Gray level used for overlaid trajectories; never produced by density pixels.
inline std::uint8_t trajectory_level(Palette p) { return p == Palette::white_max ? 254 : 1; }

/// Maps the field to an image with z along the horizontal axis (left = z_min)
/// and x along the vertical axis (top = x_max). Each pixel takes the nearest
/// grid sample; its level is round(255 (v / v_norm)^gamma), reversed for the
/// black-max palette.
inline GrayImage render_carpet(const DensityField& field, std::span<const Trajectory> trajectories,
                               const RenderOptions& opts) {
  opts.validate();
  const auto& spec = field.spec;
  if (spec.nx == 0 || spec.nz == 0 || field.values.empty()) {
    throw DomainError("render_carpet: empty field");
  }
  GrayImage img;
  img.width = opts.width == 0 ? spec.nz : opts.width;
  img.height = opts.height == 0 ? spec.nx : opts.height;
  img.pixels.assign(img.width * img.height, 0);

  const bool overlay = opts.trajectory_overlay && !trajectories.empty();
  const std::uint8_t reserved = trajectory_level(opts.palette);

  auto nearest = [](std::size_t pixel, std::size_t pixels, std::size_t samples) {
    if (pixels == 1 || samples == 1) return std::size_t{0};
    const double pos = static_cast<double>(pixel) * static_cast<double>(samples - 1) /
                       static_cast<double>(pixels - 1);
    return static_cast<std::size_t>(std::lround(pos));
  };

  for (std::size_t col = 0; col < img.width; ++col) {
    const std::size_t j = nearest(col, img.width, spec.nz);
    const double norm =
        opts.normalization == Normalization::global ? field.global_max : field.column_max[j];
    for (std::size_t row = 0; row < img.height; ++row) {
      const std::size_t i = spec.nx - 1 - nearest(row, img.height, spec.nx);
      const double v = field.at(i, j);
      const double frac = norm > 0.0 ? std::clamp(v / norm, 0.0, 1.0) : 0.0;
      long level = std::lround(255.0 * std::pow(frac, opts.gamma));
      if (opts.palette == Palette::black_max) level = 255 - level;
      auto px = static_cast<std::uint8_t>(level);
      if (overlay && px == reserved) px = opts.palette == Palette::white_max ? 253 : 2;
      img.at(col, row) = px;
    }
  }

  if (overlay) {
    auto to_col = [&](double z) {
      return (z - spec.z_min) / (spec.z_max - spec.z_min) * static_cast<double>(img.width - 1);
    };
    auto to_row = [&](double x) {
      return (spec.x_max - x) / (spec.x_max - spec.x_min) * static_cast<double>(img.height - 1);
    };
    auto plot = [&](long c, long r) {
      if (c >= 0 && r >= 0 && c < static_cast<long>(img.width) && r < static_cast<long>(img.height)) {
        img.at(static_cast<std::size_t>(c), static_cast<std::size_t>(r)) = reserved;
      }
    };
    for (const auto& traj : trajectories) {
      for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
        // Bresenham between consecutive points.
        long c0 = std::lround(to_col(traj.points[k].z)), r0 = std::lround(to_row(traj.points[k].x));
        const long c1 = std::lround(to_col(traj.points[k + 1].z));
        const long r1 = std::lround(to_row(traj.points[k + 1].x));
        const long dc = std::abs(c1 - c0), dr = -std::abs(r1 - r0);
        const long sc = c0 < c1 ? 1 : -1, sr = r0 < r1 ? 1 : -1;
        long err = dc + dr;
        while (true) {
          plot(c0, r0);
          if (c0 == c1 && r0 == r1) break;
          const long e2 = 2 * err;
          if (e2 >= dr) {
            err += dr;
            c0 += sc;
          }
          if (e2 <= dc) {
            err += dc;
            r0 += sr;
          }
        }
      }
      if (traj.points.size() == 1) {
        plot(std::lround(to_col(traj.points[0].z)), std::lround(to_row(traj.points[0].x)));
      }
    }
  }
  return img;
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  write_bytes(path, img.to_pgm());
}

}  // namespace talbot

#endif  // TALBOT_IO_HPP
