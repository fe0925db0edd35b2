#include "rydpol/core_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rydpol/errors.hpp"

namespace rydpol {

void AtomicParams::validate() const {
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(name, "must be finite");
  };
  finite(g_coupling, "atom.g_coupling");
  finite(rabi, "atom.rabi");
  finite(gamma_p, "atom.gamma_p");
  finite(gamma_s, "atom.gamma_s");
  finite(delta_1, "atom.delta_1");
  finite(delta_2, "atom.delta_2");
  finite(c6, "atom.c6");
  finite(light_speed, "atom.light_speed");
  if (gamma_p < 0) throw ConfigError("atom.gamma_p", "must be >= 0");
  if (gamma_s < 0) throw ConfigError("atom.gamma_s", "must be >= 0");
  if (light_speed <= 0) throw ConfigError("atom.light_speed", "must be > 0");
  if (c6 < 0) throw ConfigError("atom.c6", "must be >= 0");
}

bool AtomicParams::near_resonance() const { return std::abs(delta_1) < 3.0 * gamma_p; }

AtomicParams AtomicParams::with_blockade_radius(double r_b) const {
  AtomicParams out = *this;
  out.c6 = c6_for_blockade_radius(rabi, delta_1, r_b);
  return out;
}

AtomicParams default_atomic_params() {
  AtomicParams p;
  return p.with_blockade_radius(15.3);
}

double blockade_radius(const AtomicParams& p) {
  if (p.rabi <= 0) throw DomainError("blockade_radius: rabi frequency must be > 0");
  double arg = p.c6 * p.delta_1 / (2.0 * p.rabi * p.rabi);
  if (!(arg > 0)) throw DomainError("blockade_radius: C6*delta_1 must be > 0");
  return std::pow(arg, 1.0 / 6.0);
}

double c6_for_blockade_radius(double rabi, double delta_1, double r_b) {
  if (r_b < 0) throw DomainError("c6_for_blockade_radius: negative radius");
  if (delta_1 == 0) throw DomainError("c6_for_blockade_radius: delta_1 = 0");
  return 2.0 * rabi * rabi * std::pow(r_b, 6) / delta_1;
}

double MediumProfile::density(double x) const {
  switch (shape) {
    case DensityShape::Gaussian: {
      double u = (x - center) / sigma;
      return rho_peak * std::exp(-0.5 * u * u);
    }
    case DensityShape::Box: {
      double half = 0.5 * derived.L_eff;
      return std::abs(x - center) <= half ? rho_peak : 0.0;
    }
  }
  return 0.0;
}

double MediumProfile::coupling(double x, const AtomicParams& p) const {
  return p.g_coupling * std::sqrt(density(x));
}

bool MediumProfile::resolved() const {
  if (derived.r_b <= 0) return true;
  return grid.dx <= derived.r_b / 4.0 * (1.0 + 1e-12);
}

double MediumProfile::edge_density_ratio() const {
  if (rho_peak <= 0) return 0.0;
  return std::max(density(0.0), density(x_out)) / rho_peak;
}

MediumProfile make_profile(const AtomicParams& p, const MediumGeometry& geom, int n_points) {
  p.validate();
  if (!(geom.l_eff > 0)) throw ConfigError("medium.l_eff", "must be > 0");
  if (geom.od < 0) throw ConfigError("medium.od", "must be >= 0");
  if (n_points < 3) throw ConfigError("grid.n_points", "must be >= 3");

  MediumProfile m;
  m.sigma = geom.l_eff / std::sqrt(2.0 * std::numbers::pi);
  m.center = geom.center < 0 ? 5.0 * m.sigma : geom.center;
  m.x_out = geom.x_out < 0 ? 10.0 * m.sigma : geom.x_out;
  m.od = geom.od;
  m.shape = geom.shape;
  if (m.x_out < m.center + 5.0 * m.sigma * (1.0 - 1e-12)) {
    throw ConfigError("medium.x_out", "must be >= center + 5 sigma");
  }
  if (m.center < 5.0 * m.sigma * (1.0 - 1e-12)) {
    throw ConfigError("medium.center", "must be >= 5 sigma so that rho(0) is negligible");
  }

  m.derived.L_eff = geom.l_eff;
  if (geom.rho_peak_override > 0) {
    m.rho_peak = geom.rho_peak_override;
  } else if (geom.od == 0) {
    m.rho_peak = 0.0;
  } else {
    if (!(p.gamma_p > 0)) {
      throw ConfigError("atom.gamma_p", "optical depth needs gamma_p > 0 (or set medium.rho_peak)");
    }
    // OD = 2 g^2 ∫ρ / (Γ c)
    double integral = geom.od_scale * geom.od * p.gamma_p * p.light_speed / (2.0 * p.g_coupling * p.g_coupling);
    m.rho_peak = integral / geom.l_eff;
  }

  m.grid.n_points = n_points;
  m.grid.dx = m.x_out / (n_points - 1);

  DerivedMedium& d = m.derived;
  const double g2 = p.g_coupling * p.g_coupling;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  d.omega_d_peak = p.delta_1 != 0 ? m.rho_peak * g2 / p.delta_1 : nan;
  d.omega_d_tilde_peak = p.delta_1 != 0 ? d.omega_d_peak + p.rabi * p.rabi / p.delta_1 : nan;
  // r_b is undefined when C6·Δ <= 0 (e.g. the lossless Δ = 0 checks); report 0.
  d.r_b = p.c6 * p.delta_1 > 0 && p.rabi > 0 ? blockade_radius(p) : 0.0;
  InteractionParameters ip = interaction_parameters(m, p);
  d.U = ip.U;
  d.mass = ip.mass;
  d.lambda_param = ip.lambda;
  d.phi_param = ip.phi;
  return m;
}

double density_profile(const MediumProfile& m, double x) { return m.density(x); }

double vdw_pair(double x1, double x2, const AtomicParams& p, double dx) {
  double d = std::max(std::abs(x1 - x2), 0.5 * dx);
  if (d == 0) return p.c6 == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  double d2 = d * d;
  return p.c6 / (d2 * d2 * d2);
}

double potential_vn(std::span<const double> positions, double r_b, double omega_d) {
  const size_t n = positions.size();
  if (n < 2) throw DomainError("potential_vn: need at least two positions");
  const double rb6 = std::pow(r_b, 6);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = positions[i] - positions[j];
      double d6 = d * d * d * d * d * d;
      if (d6 == 0) {
        if (rb6 > 0) return 0.0;
        continue;
      }
      sum += rb6 / d6;
    }
  }
  return omega_d / (1.0 + (2.0 / static_cast<double>(n)) * sum);
}

double potential_vn(std::span<const double> positions, const MediumProfile& m) {
  return potential_vn(positions, m.derived.r_b, m.derived.omega_d_peak);
}

double blockade_well(double r, double U, double r_b, WellConvention conv) {
  double factor = conv == WellConvention::Factor4 ? 4.0 : 8.0;
  if (r_b == 0) return 0.0;
  double q = r / r_b;
  double q2 = q * q;
  return U / (1.0 + factor * q2 * q2 * q2);
}

InteractionParameters interaction_parameters(const MediumProfile& m, const AtomicParams& p) {
  InteractionParameters out;
  if (m.rho_peak == 0 || p.delta_1 == 0) return out;
  // ρ_eff = ∫ρ dx / L_eff, which equals rho_peak for both shapes.
  const double rho_eff = m.rho_peak;
  const double c = p.light_speed;
  out.U = std::sqrt(2.0) * rho_eff * p.g_coupling * p.g_coupling / (p.delta_1 * c);
  out.mass = -out.U / (2.0 * c);
  out.lambda = std::abs(out.U * out.mass) * c * m.derived.r_b * m.derived.r_b;
  out.phi = out.U * m.derived.L_eff / std::sqrt(2.0);
  return out;
}

LambdaPhiTarget od_and_rb_for(double lambda, double phi, const AtomicParams& p, double l_eff,
                              double od_scale) {
  if (!(phi > 0)) throw DomainError("od_and_rb_for: phi must be > 0");
  if (lambda < 0) throw DomainError("od_and_rb_for: lambda must be >= 0");
  if (!(p.gamma_p > 0) || p.delta_1 == 0) throw DomainError("od_and_rb_for: need gamma_p > 0, delta_1 != 0");
  LambdaPhiTarget t;
  double U = std::sqrt(2.0) * phi / l_eff;
  // U = √2 od_scale OD Γ / (2 L_eff Δ)
  t.od = U * 2.0 * l_eff * p.delta_1 / (std::sqrt(2.0) * od_scale * p.gamma_p);
  t.r_b = std::sqrt(2.0 * lambda) / std::abs(U);
  return t;
}

}  // namespace rydpol
