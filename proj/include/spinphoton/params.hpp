#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace spinphoton {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Emitter constants. Times in microseconds, angular frequencies in rad/us.
/// Rabi frequencies are retained for validation only; MW pulses are treated
/// as instantaneous (13 MHz Rabi vs microsecond-scale pulse spacing).
struct PhysicalParams {
    double tau_b_us = 18.4;    // Purcell-enhanced lifetime, B transition
    double tau_a_us = 85.2;    // A transition lifetime
    double purcell = 342.0;
    double cyclicity = 600.0;  // mean emissions before a spin-flip decay
    double omega_g_ghz = 10.7;
    double omega_e_ghz = 9.5;
    double rabi_g_mhz = 13.0;
    double rabi_e_mhz = 7.0;
    // Per-pulse fractional angle error; the default is calibrated so a
    // 16-pulse identity-composition test on the ground basis states gives
    // contrast 0.86.
    double pulse_error_sigma = 0.0438;
    double pulse_error_sigma_excited = 0.0438;
    double gamma_ratio_nominal = 4.6;        // expected Gamma_B/Gamma_A
    double gamma_ratio_tol = 0.05;

    double gamma_b() const { return 1.0 / tau_b_us; }
    double gamma_a() const { return 1.0 / tau_a_us; }
    double branch_flip_prob() const { return 1.0 / cyclicity; }

    void validate() const {
        if (tau_b_us <= 0 || tau_a_us <= 0)
            throw std::invalid_argument("lifetimes must be positive");
        if (cyclicity <= 1.0)
            throw std::invalid_argument("cyclicity must exceed 1");
        if (pulse_error_sigma < 0 || pulse_error_sigma >= 1 ||
            pulse_error_sigma_excited < 0 || pulse_error_sigma_excited >= 1)
            throw std::invalid_argument("pulse_error must be in [0,1)");
        const double ratio = tau_a_us / tau_b_us;
        if (std::abs(ratio - gamma_ratio_nominal) > gamma_ratio_tol * gamma_ratio_nominal)
            throw std::invalid_argument(
                "tau_a/tau_b = " + std::to_string(ratio) +
                " inconsistent with nominal Gamma_B/Gamma_A = " +
                std::to_string(gamma_ratio_nominal));
    }
};

}  // namespace spinphoton
