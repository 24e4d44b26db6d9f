#include "gravsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gravsim/errors.hpp"

namespace gravsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& origin, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    std::ostringstream os;
    os << origin << ":" << line << ": not a number: '" << text << "'";
    throw ConfigError(os.str());
  }
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& origin, int line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    std::ostringstream os;
    os << origin << ":" << line << ": not a non-negative integer: '" << text << "'";
    throw ConfigError(os.str());
  }
  return std::strtoull(text.c_str(), nullptr, 10);
}

}  // namespace

FileConfig parse_config(std::istream& in, const std::string& origin) {
  FileConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": expected key=value, got '" << stripped << "'";
      throw ConfigError(os.str());
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "m1_kg") {
      cfg.physical.m1 = parse_double(value, origin, line_no);
    } else if (key == "m2_kg") {
      cfg.physical.m2 = parse_double(value, origin, line_no);
    } else if (key == "d_um") {
      cfg.physical.d = parse_double(value, origin, line_no) * 1e-6;
    } else if (key == "delta_x_um") {
      cfg.physical.delta_x = parse_double(value, origin, line_no) * 1e-6;
    } else if (key == "tau_s") {
      cfg.physical.tau = parse_double(value, origin, line_no);
    } else if (key == "G") {
      cfg.physical.G = parse_double(value, origin, line_no);
    } else if (key == "hbar") {
      cfg.physical.hbar = parse_double(value, origin, line_no);
    } else if (key == "convention") {
      cfg.convention = convention_from_string(value);
    } else if (key == "shots") {
      cfg.shots = parse_uint(value, origin, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_uint(value, origin, line_no);
    } else if (key == "noise") {
      cfg.noise = value;
    } else {
      std::ostringstream os;
      os << origin << ":" << line_no << ": unknown key '" << key << "'";
      throw ConfigError(os.str());
    }
  }
  return cfg;
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  return parse_config(in, path);
}

}  // namespace gravsim
