#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "spinphoton/params.hpp"
#include "spinphoton/rng.hpp"

namespace spinphoton {

/// Unbalanced Mach-Zehnder: arm delay matched to the bin separation T,
/// residual propagation mismatch delta_T, and interferometer phase phi
/// (tracked, not stabilized). Efficiencies cover the full detection chainup
/// to but excluding the collection-window gating.
struct MziConfig {
    double delay_t_us = 75.5;
    double delta_t_ns = 10.0;
    double splitter_ratio = 0.5;
    double eta_mzi = 0.28;
    double detection_eta = 1.0;  // combined chain: cavity..detector x MZI x excess
    double dark_rate_hz = 6.0;
    double scatter_rate_hz = 15.0;

    void validate() const;
};

enum class HeraldKind : std::uint8_t { early_bin, late_bin, central_bin };
enum class SpinBasis : std::uint8_t { x, y, z };
enum class SpinResult : std::uint8_t { up, down };

struct ClickRecord {
    std::uint64_t attempt_id = 0;
    HeraldKind herald = HeraldKind::central_bin;
    int detector = 0;  // 1 or 2 for central-bin clicks, 0 otherwise
    double detection_time_us = 0.0;  // MZI output clock: early t, central T+t, late 2T+t
    double phi_at_attempt = 0.0;     // tracked interferometer phase, radians
    SpinBasis spin_basis = SpinBasis::z;
    SpinResult spin_result = SpinResult::down;
    int window_index = 1;
    int photon_count = 0;
    bool spin_readout_done = false;
};

using ClickDataset = std::vector<ClickRecord>;

/// Bell phase picked up through the interferometer: phi + delta_omega * dT.
double bell_phase(double delta_omega_radus, const MziConfig& mzi);

/// Average optical coherence of photons collected in [t1, t2] under the
/// Markovian dephasing model F(t) = exp(-2 t / T_phi):
/// (T2/2T1) (e^{-2 t1/T2} - e^{-2 t2/T2}) / (e^{-t1/T1} - e^{-t2/T1}),
/// 1/T2 = 1/(2 T1) + 1/T_phi.
double f_op(double t1_us, double t2_us, double t1_lifetime_us, double t_phi_us);

/// Expected two-photon interference visibility for a detection window
/// starting at the pulse edge; equals f_op(0, window).
double hom_visibility(double window_us, double t1_lifetime_us, double t_phi_us);

/// Single-photon Bell state at the MZI input for the module-level sampler:
/// amp_early |spin_early>|E> + amp_late |spin_late>|L> plus the relative
/// interferometer phase. The runner uses the same projection arithmetic with
/// multiple frequency tags.
struct BellInput {
    cplx amp_early{0.0, 0.0};
    cplx amp_late{0.0, 0.0};
    double phi_bell = 0.0;
    double emission_delay_us = 0.0;
};

enum class DetectionWindow { z_early, z_late, central };

/// Central-bin detector probabilities: |a_E +/- e^{i phi} a_L|^2 / 4.
/// Their sum plus the two Z-window halves equals the total photon
/// probability (beamsplitter unitarity).
std::pair<double, double> central_probabilities(cplx amp_early, cplx amp_late,
                                                double phi_bell);

/// Samples one detection outcome for the requested window, including a
/// background click at the configured rate over `window_width_us`
/// (indistinguishable from signal). Detection chain efficiency applies to
/// the signal only.
std::optional<ClickRecord> sample_detection(const BellInput& bell, const MziConfig& mzi,
                                            DetectionWindow window,
                                            double window_width_us, RandomStream& rng);

enum class BasisMode { zz, xxyy };

struct BackgroundModel {
    double dark_hz = 6.0;
    double scatter_floor_hz = 15.0;  // in-window level from phase-tracking scatter
    double scatter_delay_us = 7.3;   // extra spool delay of the tracking pulses
    double scatter_bump_hz = 5000.0; // double-scatter peak, outside the gates
    double scatter_bump_width_us = 10.0;

    /// Rate (Hz) at time t after the optical pulse for the given basis mode.
    double rate(BasisMode mode, double t_since_pulse_us) const;
};

}  // namespace spinphoton
