#pragma once

#include <span>
#include <vector>

#include "spinphoton/params.hpp"
#include "spinphoton/rng.hpp"

namespace spinphoton {

/// Piecewise-constant ground-manifold frequency-shift trajectory beta_g(t),
/// in rad/us. The excited manifold sees beta_e(t) = ratio_r * beta_g(t).
/// Value is 0 before the first breakpoint; the final value extends beyond
/// the last breakpoint.
class NoiseTrajectory {
public:
    NoiseTrajectory() = default;
    explicit NoiseTrajectory(double ratio_r) : ratio_r_(ratio_r) {}

    /// Appends a breakpoint; times must be strictly increasing.
    void add_segment(double start_us, double value);

    /// Adds `delta` to every segment at or after `start_us` (a persistent
    /// step, inserting a breakpoint if needed).
    void add_step(double start_us, double delta);

    double value_at(double t_us) const;

    /// Exact integral of beta_g over [t0, t1] (piecewise sums, no quadrature).
    double integrate(double t0_us, double t1_us) const;

    bool empty() const { return times_.empty(); }
    double ratio_r() const { return ratio_r_; }
    void set_ratio_r(double r) { ratio_r_ = r; }
    std::span<const double> breakpoints() const { return times_; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    double ratio_r_ = 1.0;
};

/// Optically induced spectral-diffusion kick model: random-walk growth with
/// photon number, saturating at sigma_sat, with |sin(2(phi - phi0))| angular
/// dependence of the underlying electric-field sensitivity.
struct OpticalKickModel {
    double sigma_sat = kTwoPi * 0.364;   // rad/us
    double sigma_p_ref = 0.7047134;      // rad/us at (ref_power, ref_width)
    double ref_power_nw = 65.0;
    double ref_width_ns = 200.0;
    double amp_a = kTwoPi * 0.103;       // angular-fit amplitude, rad/us
    double phi0_deg = 35.0;
};

/// Hahn-echo contrast under a quasi-static Gaussian frequency spread:
/// exp(-(sigma*tau_e)^2/2); the Gaussian decay time is T_d = sqrt(2)/sigma.
double hahn_contrast(double tau_e_us, double sigma_omega);

/// Induced spectral-diffusion magnitude for one optical pulse.
/// sigma_P = sigma_p_ref * sqrt(P*W / (P_ref*W_ref)) (random walk in photon
/// number), saturated as sigma^2 = sigma_sat^2 S^2/(S^2+1) with
/// S = sigma_P/sigma_sat, then scaled by |sin(2 phi - 2 phi0)|. The angular
/// factor multiplies sigma_sat and the pre-saturation slope jointly, so the
/// angular maximum equals the saturated value.
double kick_sigma(double power_nw, double width_ns, const OpticalKickModel& model,
                  double field_angle_deg);

/// Electric-field-induced g-shift of the ground spin splitting:
/// omega_g * (alpha * sin(2 phi - 2 phi0) / (2 g_perp^2)) * E_z.
/// phi0 = 31 deg and alpha = 11e-6 (V/cm)^-1 are the literature values.
double g_shift(double e_z_v_per_cm, double phi_deg, double omega_g_radus,
               double g_perp, double alpha_e_per_v_cm, double phi0_deg = 31.0);

/// One quasi-static draw per attempt (long-term spectral diffusion).
double sample_quasi_static(double sigma, RandomStream& rng);

/// Piecewise-constant white-noise trajectory. Segment variance 2/(t_phi*dt),
/// so var(int beta dt) grows as 2t/t_phi and the interference of two windows
/// separated in time decays as exp(-2t/t_phi). t_phi = +inf gives the zero
/// trajectory.
NoiseTrajectory sample_markovian(double t_phi_us, double dt_us, double duration_us,
                                 RandomStream& rng);

struct NoiseConfig {
    double quasistatic_sigma = kTwoPi * 0.98;  // rad/us, sqrt(2)/T2*
    double ratio_r_magnetic = 9.5 / 10.7;      // omega_e/omega_g
    double ratio_r_electric = 1.0;             // excited electro-g unmeasured
    double spin_tphi_us = 389.5;               // white bath; inf disables
    double markov_dt_us = 0.15;
    OpticalKickModel kick;
    double kick_field_angle_deg = 80.0;        // angular maximum by default
    double pulse_power_nw = 1.6;
    double pulse_width_ns = 200.0;

    // Fast optical dephasing / spectral diffusion of the optical transition.
    double optical_tphi_us = 31.5;
    double optical_sd_sigma = kTwoPi * 0.2;    // rad/us, quasi-static detuning
};

/// Per-attempt noise, split by physical channel because the excited-state
/// scaling r differs: magnetic (quasi-static + white bath, r = omega_e/omega_g)
/// and electric (optical kicks, r configurable, default 1).
struct AttemptNoise {
    NoiseTrajectory magnetic;
    NoiseTrajectory electric;
};

/// Composes the attempt noise: one quasi-static draw, the Markovian bath,
/// and a persistent kick ~ N(0, kick_sigma) added at each optical pulse time.
AttemptNoise build_attempt_noise(const NoiseConfig& config,
                                 std::span<const double> optical_pulse_times_us,
                                 double duration_us, RandomStream& rng);

}  // namespace spinphoton
