#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinphoton/config.hpp"
#include "spinphoton/noise.hpp"
#include "spinphoton/params.hpp"
#include "spinphoton/photonics.hpp"
#include "spinphoton/sequence.hpp"

namespace spinphoton {

/// Photon detection chain, multiplicative. `excess_loss` reconciles the
/// predicted chain with the measured heralding probability; it is an
/// explicit fudge factor and overridable.
struct EfficiencyChain {
    double eta_cav = 0.24;
    double eta_gc = 0.33;
    double eta_net = 0.61;
    double eta_det = 0.85;
    double eta_mzi = 0.28;
    double eta_pc = 0.091;  // collection-window fraction (rate budget only)
    double excess_loss = 0.67;

    double device_product() const { return eta_cav * eta_gc * eta_net * eta_det; }
    double detection_eta() const { return device_product() * eta_mzi * excess_loss; }
    void validate() const;
};

struct ReadoutParams {
    int n_pulses = 432;
    double collection_window_us = 70.0;
    int threshold_photons = 1;
    double p_detect = 0.005303;   // per-excitation detection probability
    double dark_rate_hz = 12.271; // background during readout collection
    double cyclicity = 600.0;

    double dark_mean() const {
        return dark_rate_hz * n_pulses * collection_window_us * 1e-6;
    }
    /// Exact threshold-1 verdict fidelities of this model.
    double fidelity_bright() const;
    double fidelity_dark() const;
    double mean_bright() const;
};

struct ExperimentConfig {
    PhysicalParams physics;
    NoiseConfig noise;
    MziConfig mzi;
    EfficiencyChain chain;
    BackgroundModel background;

    SequenceKind seq_kind = SequenceKind::xy16;
    double t_bin_us = 75.5;
    std::pair<int, int> slots{0, 15};
    SequenceOptions seq_opts;
    std::vector<double> forbidden_tau_us;

    double init_fidelity = 0.985;
    ReadoutParams readout;

    int block_periods = 6;        // E-mode block length in 75.5 us periods
    double period_us = 75.5;
    int readout_block_repeats = 108;  // R mode: block repeated this many times

    double phase_drift_cycles = 0.004718;  // tracked-phase drift per attempt
    double phase_jitter_rad = 0.25;

    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    double attempt_time_us() const { return block_periods * period_us; }
    double attempt_rate_hz() const { return 1e6 / attempt_time_us(); }
    double readout_time_us() const {
        return readout_block_repeats * 6.0 * period_us;
    }
    void validate() const;
};

/// Parses and validates the dotted key-value config document.
ExperimentConfig load_experiment_config(const KeyValueConfig& kv);
ExperimentConfig load_experiment_config_file(const std::string& path);

enum class CpldMode : std::uint8_t { entangle, readout };
struct CpldEvent {
    bool herald = false;
    bool readout_complete = false;
};
/// Conditional-operation state machine: E by default, R on herald until the
/// readout pulse train completes.
CpldMode cpld_step(CpldMode mode, const CpldEvent& event);

/// Single-shot readout photon count: per-pulse Bernoulli detection at the
/// bright-state rate, truncated by the 1/C per-excitation spin flip; dark
/// yields background-only counts.
int simulate_readout(bool bright, int n_pulses, const ReadoutParams& params,
                     RandomStream& rng);

struct AttemptOutcome {
    std::optional<ClickRecord> herald;
    std::vector<CpldMode> mode_trace;
};

/// Precompiled per-config state shared by all attempts.
class PreparedExperiment {
public:
    explicit PreparedExperiment(ExperimentConfig cfg);

    AttemptOutcome run_attempt(std::uint64_t attempt_id) const;

    const ExperimentConfig& config() const { return cfg_; }
    const PulseTimeline& timeline() const { return timeline_; }
    double gate_mass() const { return gate_mass_; }
    double tracked_phase(std::uint64_t attempt_id, RandomStream& rng) const;
    SpinBasis basis_for(std::uint64_t attempt_id) const;

private:
    struct QSeg {
        double lo, hi;        // delay range after an optical pulse
        double gamma;         // decay rate in the segment
        double surv_lo;       // exp(-H(lo))
        double mass;          // integral of q over the segment
        double cum0;          // cumulative mass before this segment
        int window_index;     // 1-based collection window
    };
    struct BgGate {
        double width_us;
        int window_index;
        HeraldKind bin;
        double delay_lo;  // gate start as emission delay
    };

    ExperimentConfig cfg_;
    PulseTimeline timeline_;
    std::vector<QSeg> qsegs_;
    double gate_mass_ = 0.0;
    double eta_ = 0.0;
    double eta_bound_ = 0.0;
    std::vector<BgGate> bg_gates_;
    double p_bg_zz_ = 0.0, p_bg_xxyy_ = 0.0;
    std::vector<double> optical_times_;

    struct SampledDelay {
        double t;
        double q;
        int window_index;
    };
    SampledDelay sample_gate_delay(double u) const;

    friend struct AttemptEngine;
};

struct RunSummary {
    std::uint64_t n_attempts = 0;
    std::uint64_t n_heralds = 0;
    double herald_probability = 0.0;
    double wall_time_s = 0.0;           // modeled, with conditional readout
    double wall_time_no_readout_s = 0.0;
    double rate_hz = 0.0;
    double rate_no_readout_hz = 0.0;
    double readout_fidelity_bright = 0.0;
    double readout_fidelity_dark = 0.0;
    std::vector<std::uint64_t> window_counts;  // indexed by window_index-1
};

struct ExperimentResult {
    ClickDataset clicks;
    RunSummary summary;
};

struct StopRule {
    enum class Kind { attempts, heralds } kind = Kind::attempts;
    std::uint64_t count = 0;
    static StopRule attempts(std::uint64_t n) { return {Kind::attempts, n}; }
    static StopRule heralds(std::uint64_t n) { return {Kind::heralds, n}; }
};

/// Full experiment loop with conditional-readout accounting. Attempts are
/// independent trials on per-attempt RNG streams; they may be executed on
/// several threads and are merged in attempt-id order, so the output is
/// deterministic for a given seed + config regardless of parallelism.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const StopRule& stop);

}  // namespace spinphoton
