#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gravsim {

// SI units throughout. The CLI surface speaks kg / um / s and converts on the
// way in.
struct PhysicalConfig {
  double m1 = 1e-14;         // kg
  double m2 = 1e-14;         // kg
  double d = 450e-6;         // m, center separation
  double delta_x = 250e-6;   // m, superposition split
  double tau = 1.0;          // s, interaction time
  double G = 6.67430e-11;    // m^3 kg^-1 s^-2
  double hbar = 1.054571817e-34;  // J s
};

struct PhaseSet {
  double phi = 0;       // common branch phase, G m1 m2 tau / (hbar d)
  double phi_lr = 0;    // branch at separation d + delta_x
  double phi_rl = 0;    // branch at separation d - delta_x
  double d_phi_lr = 0;  // phi_lr - phi  (negative for delta_x > 0)
  double d_phi_rl = 0;  // phi_rl - phi  (positive for delta_x > 0)
  double interaction_energy = 0;  // J, G m1 m2 / d

  double sum() const { return d_phi_lr + d_phi_rl; }
};

// How the two-knob pair (d_phi_lr, d_phi_rl) is reduced to the single swept
// value s:
//   signed-physical: a = d_phi_lr (< 0), b = d_phi_rl, s = a + b
//   magnitudes:      a = |d_phi_lr|,     b = d_phi_rl, s = a + b
//   single-branch:   a = 0,              b = s
enum class Convention { SignedPhysical, Magnitudes, SingleBranch };

struct ResolvedAB {
  double a = 0;
  double b = 0;
  double s = 0;
};

PhaseSet compute_phases(const PhysicalConfig& config);

// (fa, fb) with fa + fb = 1 such that a = fa * s and b = fb * s for any tau;
// the split depends only on the geometry and the convention.
std::pair<double, double> convention_fractions(const PhysicalConfig& config, Convention conv);

// d(s)/d(tau): how fast the convention-resolved sum accumulates.
double phase_sum_rate(const PhysicalConfig& config, Convention conv);

// Inverse of the phase sum: tau such that the resolved sum equals target_sum.
double tau_from_phase_sum(const PhysicalConfig& config, double target_sum, Convention conv);

ResolvedAB resolve_ab(const PhaseSet& phases, Convention conv);

// CASIMIR warning when the closest approach d - delta_x falls below 200 um
// (threshold inclusive: exactly 200 um is fine); TRIVIAL-PHASE warning when
// the phase sum sits within 1e-6 of a multiple of 2*pi, where the witness
// carries no signal. Warnings never abort.
std::vector<std::string> validate_regime(const PhysicalConfig& config, const PhaseSet& phases);

Convention convention_from_string(const std::string& s);
std::string to_string(Convention conv);

}  // namespace gravsim
