#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gravsim/gravity.hpp"

namespace gravsim {

// Flat key=value config. Keys: m1_kg, m2_kg, d_um, delta_x_um, tau_s,
// convention, G, hbar, shots, seed, noise. Blank lines and lines starting
// with '#' are ignored. Distances are micrometers at this surface and SI
// inside. `noise` is "off", "builtin", or a calibration CSV path.
struct FileConfig {
  PhysicalConfig physical;
  std::optional<Convention> convention;  // absent -> per-command default
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
  std::string noise = "off";
};

FileConfig parse_config(std::istream& in, const std::string& origin);
FileConfig load_config(const std::string& path);

}  // namespace gravsim
