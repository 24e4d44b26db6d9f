#include "gravsim/gravity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gravsim/errors.hpp"

namespace gravsim {

namespace {

constexpr double kCasimirGuardM = 200e-6;
constexpr double kTrivialPhaseTol = 1e-6;

void validate_config(const PhysicalConfig& c) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(name) + " must be strictly positive");
  };
  positive(c.m1, "m1");
  positive(c.m2, "m2");
  positive(c.d, "d");
  positive(c.delta_x, "delta_x");
  positive(c.G, "G");
  positive(c.hbar, "hbar");
  if (!(c.tau >= 0.0) || !std::isfinite(c.tau))
    throw std::invalid_argument("tau must be >= 0");
  if (!(c.delta_x < c.d)) {
    std::ostringstream os;
    os << "invalid-geometry: delta_x (" << c.delta_x << " m) must be smaller than d (" << c.d
       << " m)";
    throw InvalidGeometryError(os.str());
  }
}

// 1/(d+dx) - 1/d and 1/(d-dx) - 1/d: the per-branch inverse-separation
// offsets that d_phi_lr and d_phi_rl are proportional to.
std::pair<double, double> branch_coefficients(const PhysicalConfig& c) {
  const double ka = 1.0 / (c.d + c.delta_x) - 1.0 / c.d;
  const double kb = 1.0 / (c.d - c.delta_x) - 1.0 / c.d;
  return {ka, kb};
}

}  // namespace

PhaseSet compute_phases(const PhysicalConfig& config) {
  validate_config(config);
  const double k = config.G * config.m1 * config.m2 * config.tau / config.hbar;
  PhaseSet p;
  p.phi = k / config.d;
  p.phi_lr = k / (config.d + config.delta_x);
  p.phi_rl = k / (config.d - config.delta_x);
  p.d_phi_lr = p.phi_lr - p.phi;
  p.d_phi_rl = p.phi_rl - p.phi;
  p.interaction_energy = config.G * config.m1 * config.m2 / config.d;
  return p;
}

std::pair<double, double> convention_fractions(const PhysicalConfig& config, Convention conv) {
  if (conv == Convention::SingleBranch) return {0.0, 1.0};
  validate_config(config);
  const auto [ka, kb] = branch_coefficients(config);
  if (conv == Convention::SignedPhysical) {
    const double denom = ka + kb;
    return {ka / denom, kb / denom};
  }
  const double denom = -ka + kb;
  return {-ka / denom, kb / denom};
}

double phase_sum_rate(const PhysicalConfig& config, Convention conv) {
  validate_config(config);
  const double km = config.G * config.m1 * config.m2 / config.hbar;
  const auto [ka, kb] = branch_coefficients(config);
  // single-branch shares the signed x-axis: s is still the physical sum.
  const double coeff = (conv == Convention::Magnitudes) ? (-ka + kb) : (ka + kb);
  return km * coeff;
}

double tau_from_phase_sum(const PhysicalConfig& config, double target_sum, Convention conv) {
  if (!(target_sum >= 0.0) || !std::isfinite(target_sum))
    throw std::invalid_argument("targetSum must be >= 0");
  return target_sum / phase_sum_rate(config, conv);
}

ResolvedAB resolve_ab(const PhaseSet& phases, Convention conv) {
  ResolvedAB r;
  switch (conv) {
    case Convention::SignedPhysical:
      r.a = phases.d_phi_lr;
      r.b = phases.d_phi_rl;
      break;
    case Convention::Magnitudes:
      r.a = std::abs(phases.d_phi_lr);
      r.b = phases.d_phi_rl;
      break;
    case Convention::SingleBranch:
      r.a = 0.0;
      r.b = phases.d_phi_lr + phases.d_phi_rl;
      break;
  }
  r.s = r.a + r.b;
  return r;
}

std::vector<std::string> validate_regime(const PhysicalConfig& config, const PhaseSet& phases) {
  std::vector<std::string> warnings;
  const double closest = config.d - config.delta_x;
  // inclusive threshold: exactly 200 um passes even with 1-ulp subtraction slop
  if (closest < kCasimirGuardM * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "CASIMIR: closest approach " << closest << " m is below the " << kCasimirGuardM
       << " m guard; electromagnetic forces would rival gravity there";
    warnings.push_back(os.str());
  }
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phases.sum(), two_pi);
  if (r < 0) r += two_pi;
  if (r < kTrivialPhaseTol || two_pi - r < kTrivialPhaseTol) {
    std::ostringstream os;
    os << "TRIVIAL-PHASE: phase sum " << phases.sum()
       << " rad sits within 1e-06 of a multiple of 2*pi, where the witness carries no signal";
    warnings.push_back(os.str());
  }
  return warnings;
}

Convention convention_from_string(const std::string& s) {
  if (s == "signed-physical") return Convention::SignedPhysical;
  if (s == "magnitudes") return Convention::Magnitudes;
  if (s == "single-branch") return Convention::SingleBranch;
  throw ConfigError("unknown convention '" + s +
                    "' (expected signed-physical, magnitudes or single-branch)");
}

std::string to_string(Convention conv) {
  switch (conv) {
    case Convention::SignedPhysical:
      return "signed-physical";
    case Convention::Magnitudes:
      return "magnitudes";
    case Convention::SingleBranch:
      return "single-branch";
  }
  return "?";
}

}  // namespace gravsim
