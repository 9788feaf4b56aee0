#include "spinphoton/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinphoton {

void NoiseTrajectory::add_segment(double start_us, double value) {
    if (!times_.empty() && start_us <= times_.back())
        throw std::invalid_argument("NoiseTrajectory breakpoints must be strictly increasing");
    times_.push_back(start_us);
    values_.push_back(value);
}

void NoiseTrajectory::add_step(double start_us, double delta) {
    if (times_.empty() || start_us > times_.back()) {
        const double base = times_.empty() ? 0.0 : values_.back();
        add_segment(start_us, base + delta);
        return;
    }
    auto it = std::lower_bound(times_.begin(), times_.end(), start_us);
    std::size_t idx = static_cast<std::size_t>(it - times_.begin());
    if (it == times_.end() || *it != start_us) {
        // split the segment containing start_us
        const double prev = (idx == 0) ? 0.0 : values_[idx - 1];
        times_.insert(it, start_us);
        values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(idx), prev);
    }
    for (std::size_t i = idx; i < values_.size(); ++i) values_[i] += delta;
}

double NoiseTrajectory::value_at(double t_us) const {
    if (times_.empty() || t_us < times_.front()) return 0.0;
    auto it = std::upper_bound(times_.begin(), times_.end(), t_us);
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double NoiseTrajectory::integrate(double t0_us, double t1_us) const {
    if (t1_us < t0_us) throw std::invalid_argument("integrate: t1 < t0");
    if (times_.empty() || t0_us == t1_us) return 0.0;
    double total = 0.0;
    // leading region before the first breakpoint contributes zero
    double cursor = std::max(t0_us, times_.front());
    if (cursor >= t1_us) return 0.0;
    auto it = std::upper_bound(times_.begin(), times_.end(), cursor);
    std::size_t idx = static_cast<std::size_t>(it - times_.begin()) - 1;
    while (cursor < t1_us) {
        const double seg_end =
            (idx + 1 < times_.size()) ? std::min(times_[idx + 1], t1_us) : t1_us;
        total += values_[idx] * (seg_end - cursor);
        cursor = seg_end;
        ++idx;
    }
    return total;
}

double hahn_contrast(double tau_e_us, double sigma_omega) {
    if (tau_e_us < 0 || sigma_omega < 0)
        throw std::invalid_argument("hahn_contrast: negative argument");
    const double x = sigma_omega * tau_e_us;
    return std::exp(-0.5 * x * x);
}

double kick_sigma(double power_nw, double width_ns, const OpticalKickModel& model,
                  double field_angle_deg) {
    if (power_nw < 0 || width_ns < 0)
        throw std::invalid_argument("kick_sigma: negative power or width");
    const double photons_rel =
        power_nw * width_ns / (model.ref_power_nw * model.ref_width_ns);
    const double sigma_p = model.sigma_p_ref * std::sqrt(photons_rel);
    const double s = sigma_p / model.sigma_sat;
    const double saturated = model.sigma_sat * s / std::sqrt(1.0 + s * s);
    const double rad = (field_angle_deg - model.phi0_deg) * std::numbers::pi / 180.0;
    return saturated * std::abs(std::sin(2.0 * rad));
}

double g_shift(double e_z_v_per_cm, double phi_deg, double omega_g_radus,
               double g_perp, double alpha_e_per_v_cm, double phi0_deg) {
    if (g_perp == 0.0) throw std::invalid_argument("g_shift: g_perp must be nonzero");
    const double rad = (phi_deg - phi0_deg) * std::numbers::pi / 180.0;
    return omega_g_radus * alpha_e_per_v_cm * std::sin(2.0 * rad) /
           (2.0 * g_perp * g_perp) * e_z_v_per_cm;
}

double sample_quasi_static(double sigma, RandomStream& rng) {
    if (sigma == 0.0) return 0.0;
    return rng.normal(0.0, sigma);
}

NoiseTrajectory sample_markovian(double t_phi_us, double dt_us, double duration_us,
                                 RandomStream& rng) {
    if (t_phi_us <= 0) throw std::invalid_argument("sample_markovian: t_phi must be positive");
    if (dt_us <= 0) throw std::invalid_argument("sample_markovian: dt must be positive");
    NoiseTrajectory traj;
    if (std::isinf(t_phi_us)) {
        traj.add_segment(0.0, 0.0);
        return traj;
    }
    const double sigma = std::sqrt(2.0 / (t_phi_us * dt_us));
    const auto n = static_cast<std::size_t>(std::ceil(duration_us / dt_us));
    for (std::size_t i = 0; i < n; ++i)
        traj.add_segment(static_cast<double>(i) * dt_us, rng.normal(0.0, sigma));
    return traj;
}

AttemptNoise build_attempt_noise(const NoiseConfig& config,
                                 std::span<const double> optical_pulse_times_us,
                                 double duration_us, RandomStream& rng) {
    AttemptNoise noise;
    noise.magnetic.set_ratio_r(config.ratio_r_magnetic);
    noise.electric.set_ratio_r(config.ratio_r_electric);

    const double qs = sample_quasi_static(config.quasistatic_sigma, rng);
    if (std::isinf(config.spin_tphi_us) || config.spin_tphi_us <= 0.0) {
        noise.magnetic.add_segment(0.0, qs);
    } else {
        noise.magnetic = sample_markovian(config.spin_tphi_us, config.markov_dt_us,
                                          duration_us, rng);
        noise.magnetic.set_ratio_r(config.ratio_r_magnetic);
        if (qs != 0.0) noise.magnetic.add_step(0.0, qs);
    }

    const double sigma_kick = kick_sigma(config.pulse_power_nw, config.pulse_width_ns,
                                         config.kick, config.kick_field_angle_deg);
    for (double t : optical_pulse_times_us) {
        const double kick = sigma_kick > 0.0 ? rng.normal(0.0, sigma_kick) : 0.0;
        if (noise.electric.empty() && t > 0.0) noise.electric.add_segment(0.0, 0.0);
        noise.electric.add_step(t, kick);
    }
    if (noise.electric.empty()) noise.electric.add_segment(0.0, 0.0);
    return noise;
}

}  // namespace spinphoton
