#include "spinphoton/experiments.hpp"

#include <cmath>

#include "spinphoton/analysis.hpp"
#include "spinphoton/emitter.hpp"

namespace spinphoton {

namespace {

PulseTimeline hahn_timeline(double two_tau_us) {
    SequenceOptions opts;
    opts.collect_windows_us.clear();
    opts.collect_windows_us.emplace_back(0.0, 1e-3);  // unused here
    return build_sequence(SequenceKind::hahn, two_tau_us, {0, 1}, opts);
}

}  // namespace

double hahn_kick_contrast(double two_tau_us, double kick_pos_us, double sigma_kick,
                          std::size_t n_trials, std::uint64_t seed) {
    const PulseTimeline tl = hahn_timeline(two_tau_us);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_trials; ++i) {
        RandomStream rng(seed, i);
        NoiseTrajectory traj;
        traj.add_segment(0.0, 0.0);
        traj.add_step(kick_pos_us, rng.normal(0.0, sigma_kick));
        const double phase =
            toggled_integral(tl, Manifold::ground, traj, 0.0, tl.total_us);
        sum += std::cos(phase);
    }
    return sum / static_cast<double>(n_trials);
}

std::vector<std::pair<double, double>> hahn_kick_decay_sweep(
    const std::vector<double>& tau_values_us, double sigma_kick,
    std::size_t n_trials, std::uint64_t seed) {
    std::vector<std::pair<double, double>> out;
    out.reserve(tau_values_us.size());
    std::uint64_t salt = 0;
    for (double tau : tau_values_us) {
        const double contrast =
            hahn_kick_contrast(2.0 * tau, tau, sigma_kick, n_trials, seed + salt);
        out.emplace_back(tau, contrast);
        salt += n_trials;
    }
    return out;
}

double extract_kick_sigma(double power_nw, double width_ns, const OpticalKickModel& model,
                          double field_angle_deg, std::size_t n_trials,
                          std::uint64_t seed) {
    const double sigma = kick_sigma(power_nw, width_ns, model, field_angle_deg);
    if (sigma <= 0.0) return 0.0;
    // decay sweep spanning the expected T_d = sqrt(2)/sigma
    const double t_d = std::sqrt(2.0) / sigma;
    std::vector<double> taus;
    for (int i = 1; i <= 8; ++i) taus.push_back(t_d * 0.25 * i);
    const auto samples = hahn_kick_decay_sweep(taus, sigma, n_trials, seed);
    const auto fit = fit_gaussian_decay(samples);
    return fit.flat ? 0.0 : fit.sigma_omega;
}

double spin_coherence_contrast(SequenceKind kind, double total_us, double pulse_error_sigma,
                               double spin_tphi_us, double quasistatic_sigma,
                               double markov_dt_us, std::size_t n_trials,
                               std::uint64_t seed) {
    int n_pi = 16;
    if (kind == SequenceKind::hahn) n_pi = 1;
    if (kind == SequenceKind::xy20) n_pi = 20;
    const double t_bin = total_us / n_pi;  // any odd-parity slot pair works here
    SequenceOptions opts;
    opts.collect_windows_us = {{0.0, 1e-3}};
    const PulseTimeline tl = build_sequence(kind, t_bin, {0, 1}, opts);
    const auto pattern = axis_pattern(kind, n_pi);

    double sum = 0.0;
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        RandomStream rng(seed, trial);
        NoiseTrajectory traj;
        if (std::isinf(spin_tphi_us) || spin_tphi_us <= 0.0) {
            traj.add_segment(0.0, 0.0);
        } else {
            traj = sample_markovian(spin_tphi_us, markov_dt_us, total_us, rng);
        }
        if (quasistatic_sigma > 0.0) traj.add_step(0.0, rng.normal(0.0, quasistatic_sigma));

        EmitterState state = EmitterState::basis_state(kDownG);
        auto half_pi = [&]() {
            const double eps =
                pulse_error_sigma > 0.0 ? rng.normal(0.0, pulse_error_sigma) : 0.0;
            state = apply_mw_pulse(state, Manifold::ground,
                                   0.5 * std::numbers::pi * (1.0 + eps), Axis::y);
        };
        half_pi();
        double cursor = 0.0;
        const double tau = tl.tau_us;
        for (int k = 0; k < n_pi; ++k) {
            const double t = (2.0 * k + 1.0) * tau;
            state = evolve_free(state, cursor, t, traj);
            const auto [axis, sign] = pattern[static_cast<std::size_t>(k)];
            const double eps =
                pulse_error_sigma > 0.0 ? rng.normal(0.0, pulse_error_sigma) : 0.0;
            state = apply_mw_pulse(state, Manifold::ground,
                                   sign * std::numbers::pi * (1.0 + eps), axis);
            cursor = t;
        }
        state = evolve_free(state, cursor, total_us, traj);
        half_pi();
        // ideal endpoint is |up>; contrast = 2 P(up) - 1
        sum += 2.0 * std::norm(state.amp[kUpG]) - 1.0;
    }
    return sum / static_cast<double>(n_trials);
}

}  // namespace spinphoton
