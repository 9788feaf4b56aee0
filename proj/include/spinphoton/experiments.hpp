#pragma once

#include <utility>
#include <vector>

#include "spinphoton/noise.hpp"
#include "spinphoton/sequence.hpp"

namespace spinphoton {

/// Ensemble-averaged Hahn-echo contrast with one persistent frequency kick
/// of spread sigma_kick applied at kick_pos within a 2*tau echo. The phase
/// is the exact toggled integral; contrast = <cos(phase)>.
double hahn_kick_contrast(double two_tau_us, double kick_pos_us, double sigma_kick,
                          std::size_t n_trials, std::uint64_t seed);

/// Sweeps the total echo time with the kick held at the sequence centre;
/// returns (tau_e, contrast) samples, tau_e being the kick-to-echo effective
/// time tau.
std::vector<std::pair<double, double>> hahn_kick_decay_sweep(
    const std::vector<double>& tau_values_us, double sigma_kick,
    std::size_t n_trials, std::uint64_t seed);

/// Full optically-induced-dephasing pipeline for one optical power:
/// Monte Carlo Hahn-with-kick decay sweep, Gaussian-decay fit, returns the
/// extracted sigma_omega (rad/us).
double extract_kick_sigma(double power_nw, double width_ns, const OpticalKickModel& model,
                          double field_angle_deg, std::size_t n_trials,
                          std::uint64_t seed);

/// Ground-spin coherence experiment (pi/2 - sequence - pi/2) under the white
/// spin bath, quasi-static diffusion and per-pulse MW angle errors; returns
/// the ensemble contrast. Used to calibrate the bath strength against the
/// measured decoupled coherence.
double spin_coherence_contrast(SequenceKind kind, double total_us, double pulse_error_sigma,
                               double spin_tphi_us, double quasistatic_sigma,
                               double markov_dt_us, std::size_t n_trials,
                               std::uint64_t seed);

}  // namespace spinphoton
