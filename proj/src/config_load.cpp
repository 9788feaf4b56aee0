#include <set>
#include <string>

#include "spinphoton/runner.hpp"

namespace spinphoton {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "physics.tau_b_us", "physics.tau_a_us", "physics.purcell",
        "physics.cyclicity", "physics.omega_g_ghz", "physics.omega_e_ghz",
        "physics.rabi_g_mhz", "physics.rabi_e_mhz", "physics.pulse_error_sigma",
        "physics.pulse_error_sigma_excited", "physics.gamma_ratio_nominal",
        "physics.gamma_ratio_tol",

        "noise.quasistatic_sigma_radus", "noise.ratio_r_magnetic",
        "noise.ratio_r_electric", "noise.spin_tphi_us", "noise.markov_dt_us",
        "noise.optical_tphi_us", "noise.optical_sd_sigma_radus",
        "noise.kick_sigma_sat_radus", "noise.kick_sigma_p_ref_radus",
        "noise.kick_ref_power_nw", "noise.kick_ref_width_ns",
        "noise.kick_amp_a_radus", "noise.kick_phi0_deg",
        "noise.kick_field_angle_deg", "noise.pulse_power_nw", "noise.pulse_width_ns",

        "mzi.delay_t_us", "mzi.delta_t_ns", "mzi.splitter_ratio",

        "efficiency.eta_cav", "efficiency.eta_gc", "efficiency.eta_net",
        "efficiency.eta_det", "efficiency.eta_mzi", "efficiency.eta_pc",
        "efficiency.excess_loss",

        "background.dark_hz", "background.scatter_hz",
        "background.scatter_delay_us", "background.scatter_bump_hz",
        "background.scatter_bump_width_us",

        "sequence.kind", "sequence.t_bin_us", "sequence.slot_first",
        "sequence.slot_second", "sequence.n_pi", "sequence.tau_us",
        "sequence.omit_final_excited_pi", "sequence.windows_us",
        "sequence.forbidden_tau_us",

        "init.fidelity",

        "readout.n_pulses", "readout.collection_window_us",
        "readout.threshold_photons", "readout.p_detect", "readout.dark_rate_hz",

        "run.block_periods", "run.period_us", "run.readout_block_repeats",
        "run.seed", "run.threads", "run.phase_drift_cycles",
        "run.phase_jitter_rad",

        "budget.f_s", "budget.f_p", "budget.f_i", "budget.f_bg_xy",
        "budget.f_bg_z", "budget.f_op", "budget.f_op_window_start_us",
        "budget.f_op_window_end_us", "budget.p_ent_measured",
        "budget.attempt_rate_hz", "budget.improvements",
    };
    return keys;
}

}  // namespace

ExperimentConfig load_experiment_config(const KeyValueConfig& kv) {
    kv.require_known_keys(known_keys());
    ExperimentConfig cfg;

    auto& ph = cfg.physics;
    ph.tau_b_us = kv.get_double("physics.tau_b_us", ph.tau_b_us);
    ph.tau_a_us = kv.get_double("physics.tau_a_us", ph.tau_a_us);
    ph.purcell = kv.get_double("physics.purcell", ph.purcell);
    ph.cyclicity = kv.get_double("physics.cyclicity", ph.cyclicity);
    ph.omega_g_ghz = kv.get_double("physics.omega_g_ghz", ph.omega_g_ghz);
    ph.omega_e_ghz = kv.get_double("physics.omega_e_ghz", ph.omega_e_ghz);
    ph.rabi_g_mhz = kv.get_double("physics.rabi_g_mhz", ph.rabi_g_mhz);
    ph.rabi_e_mhz = kv.get_double("physics.rabi_e_mhz", ph.rabi_e_mhz);
    ph.pulse_error_sigma = kv.get_double("physics.pulse_error_sigma", ph.pulse_error_sigma);
    ph.pulse_error_sigma_excited =
        kv.get_double("physics.pulse_error_sigma_excited", ph.pulse_error_sigma);
    ph.gamma_ratio_nominal = kv.get_double("physics.gamma_ratio_nominal", ph.gamma_ratio_nominal);
    ph.gamma_ratio_tol = kv.get_double("physics.gamma_ratio_tol", ph.gamma_ratio_tol);

    auto& nz = cfg.noise;
    nz.quasistatic_sigma = kv.get_double("noise.quasistatic_sigma_radus", nz.quasistatic_sigma);
    nz.ratio_r_magnetic = kv.get_double("noise.ratio_r_magnetic", nz.ratio_r_magnetic);
    nz.ratio_r_electric = kv.get_double("noise.ratio_r_electric", nz.ratio_r_electric);
    nz.spin_tphi_us = kv.get_double("noise.spin_tphi_us", nz.spin_tphi_us);
    nz.markov_dt_us = kv.get_double("noise.markov_dt_us", nz.markov_dt_us);
    nz.optical_tphi_us = kv.get_double("noise.optical_tphi_us", nz.optical_tphi_us);
    nz.optical_sd_sigma = kv.get_double("noise.optical_sd_sigma_radus", nz.optical_sd_sigma);
    nz.kick.sigma_sat = kv.get_double("noise.kick_sigma_sat_radus", nz.kick.sigma_sat);
    nz.kick.sigma_p_ref = kv.get_double("noise.kick_sigma_p_ref_radus", nz.kick.sigma_p_ref);
    nz.kick.ref_power_nw = kv.get_double("noise.kick_ref_power_nw", nz.kick.ref_power_nw);
    nz.kick.ref_width_ns = kv.get_double("noise.kick_ref_width_ns", nz.kick.ref_width_ns);
    nz.kick.amp_a = kv.get_double("noise.kick_amp_a_radus", nz.kick.amp_a);
    nz.kick.phi0_deg = kv.get_double("noise.kick_phi0_deg", nz.kick.phi0_deg);
    nz.kick_field_angle_deg = kv.get_double("noise.kick_field_angle_deg", nz.kick_field_angle_deg);
    nz.pulse_power_nw = kv.get_double("noise.pulse_power_nw", nz.pulse_power_nw);
    nz.pulse_width_ns = kv.get_double("noise.pulse_width_ns", nz.pulse_width_ns);

    cfg.mzi.delay_t_us = kv.get_double("mzi.delay_t_us", cfg.mzi.delay_t_us);
    cfg.mzi.delta_t_ns = kv.get_double("mzi.delta_t_ns", cfg.mzi.delta_t_ns);
    cfg.mzi.splitter_ratio = kv.get_double("mzi.splitter_ratio", cfg.mzi.splitter_ratio);

    auto& ch = cfg.chain;
    ch.eta_cav = kv.get_double("efficiency.eta_cav", ch.eta_cav);
    ch.eta_gc = kv.get_double("efficiency.eta_gc", ch.eta_gc);
    ch.eta_net = kv.get_double("efficiency.eta_net", ch.eta_net);
    ch.eta_det = kv.get_double("efficiency.eta_det", ch.eta_det);
    ch.eta_mzi = kv.get_double("efficiency.eta_mzi", ch.eta_mzi);
    ch.eta_pc = kv.get_double("efficiency.eta_pc", ch.eta_pc);
    ch.excess_loss = kv.get_double("efficiency.excess_loss", ch.excess_loss);
    cfg.mzi.eta_mzi = ch.eta_mzi;
    cfg.mzi.detection_eta = ch.detection_eta();

    auto& bg = cfg.background;
    bg.dark_hz = kv.get_double("background.dark_hz", bg.dark_hz);
    bg.scatter_floor_hz = kv.get_double("background.scatter_hz", bg.scatter_floor_hz);
    bg.scatter_delay_us = kv.get_double("background.scatter_delay_us", bg.scatter_delay_us);
    bg.scatter_bump_hz = kv.get_double("background.scatter_bump_hz", bg.scatter_bump_hz);
    bg.scatter_bump_width_us =
        kv.get_double("background.scatter_bump_width_us", bg.scatter_bump_width_us);
    cfg.mzi.dark_rate_hz = bg.dark_hz;
    cfg.mzi.scatter_rate_hz = bg.scatter_floor_hz;

    const std::string kind = kv.get_string("sequence.kind", "xy16");
    if (kind == "hahn") cfg.seq_kind = SequenceKind::hahn;
    else if (kind == "xy16") cfg.seq_kind = SequenceKind::xy16;
    else if (kind == "xy20") cfg.seq_kind = SequenceKind::xy20;
    else if (kind == "generalized") cfg.seq_kind = SequenceKind::generalized;
    else throw ConfigError("sequence.kind must be hahn|xy16|xy20|generalized, got '" + kind + "'");

    cfg.t_bin_us = kv.get_double("sequence.t_bin_us", cfg.t_bin_us);
    cfg.slots.first = kv.get_int("sequence.slot_first", cfg.slots.first);
    cfg.slots.second = kv.get_int("sequence.slot_second", cfg.slots.second);
    cfg.seq_opts.n_pi = kv.get_int("sequence.n_pi", cfg.seq_opts.n_pi);
    cfg.seq_opts.tau_us = kv.get_double("sequence.tau_us", cfg.seq_opts.tau_us);
    cfg.seq_opts.omit_final_excited_pi =
        kv.get_bool("sequence.omit_final_excited_pi", cfg.seq_opts.omit_final_excited_pi);
    const auto windows = kv.get_double_list("sequence.windows_us", {0.4, 2.3});
    if (windows.size() < 2 || windows.size() % 2 != 0)
        throw ConfigError("sequence.windows_us must list start,end pairs");
    cfg.seq_opts.collect_windows_us.clear();
    for (std::size_t i = 0; i + 1 < windows.size(); i += 2) {
        if (windows[i] < 0 || windows[i + 1] <= windows[i])
            throw ConfigError("sequence.windows_us: windows must satisfy 0 <= start < end");
        cfg.seq_opts.collect_windows_us.emplace_back(windows[i], windows[i + 1]);
    }
    cfg.forbidden_tau_us = kv.get_double_list("sequence.forbidden_tau_us", {});

    cfg.init_fidelity = kv.get_double("init.fidelity", cfg.init_fidelity);

    auto& ro = cfg.readout;
    ro.n_pulses = kv.get_int("readout.n_pulses", ro.n_pulses);
    ro.collection_window_us = kv.get_double("readout.collection_window_us", ro.collection_window_us);
    ro.threshold_photons = kv.get_int("readout.threshold_photons", ro.threshold_photons);
    ro.p_detect = kv.get_double("readout.p_detect", ro.p_detect);
    ro.dark_rate_hz = kv.get_double("readout.dark_rate_hz", ro.dark_rate_hz);
    ro.cyclicity = ph.cyclicity;

    cfg.block_periods = kv.get_int("run.block_periods", cfg.block_periods);
    cfg.period_us = kv.get_double("run.period_us", cfg.period_us);
    cfg.readout_block_repeats =
        kv.get_int("run.readout_block_repeats", cfg.readout_block_repeats);
    cfg.seed = kv.get_u64("run.seed", cfg.seed);
    cfg.threads = kv.get_int("run.threads", cfg.threads);
    cfg.phase_drift_cycles = kv.get_double("run.phase_drift_cycles", cfg.phase_drift_cycles);
    cfg.phase_jitter_rad = kv.get_double("run.phase_jitter_rad", cfg.phase_jitter_rad);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
    return load_experiment_config(KeyValueConfig::parse_file(path));
}

}  // namespace spinphoton
