#pragma once

namespace gspm {

/// Physical material constants and the derived dimensionless groups.
/// Internal computation is dimensionless throughout; these conversions are
/// used only when parsing configuration and labeling reports.
struct MaterialParams {
  double Ms = 8.0e5;       // saturation magnetization, A/m
  double A_ex = 1.3e-11;   // exchange constant, J/m
  double Ku = 1.0e2;       // uniaxial anisotropy constant, J/m^3
  double gamma = 1.76e11;  // gyromagnetic ratio, rad/(s*T)
  double mu0 = 1.25663706143591730e-6;  // vacuum permeability, T*m/A
  double L = 1.0e-6;       // domain diameter used for rescaling, m
  double alpha = 0.1;      // Gilbert damping, dimensionless

  double Q() const { return Ku / (mu0 * Ms * Ms); }
  double eps() const { return A_ex / (mu0 * Ms * Ms * L * L); }

  /// One dimensionless time unit in seconds: (mu0*gamma*Ms)^-1.
  double time_unit() const { return 1.0 / (mu0 * gamma * Ms); }

  double seconds_to_dimensionless(double seconds) const { return seconds / time_unit(); }
  double dimensionless_to_seconds(double tau) const { return tau * time_unit(); }

  /// Applied-field magnitude: tesla -> dimensionless |h_e| = B/(mu0*Ms).
  double tesla_to_dimensionless(double tesla) const { return tesla / (mu0 * Ms); }
  double dimensionless_to_tesla(double h) const { return h * mu0 * Ms; }
};

/// Throws ValidationError unless Q >= 0, eps > 0, alpha >= 0.
void validate(const MaterialParams& p);

}  // namespace gspm
