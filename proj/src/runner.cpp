#include "spinphoton/runner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace spinphoton {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kTagB = 0;
constexpr int kTagA = 1;
constexpr int kTagCrossB = 2;
constexpr int kTagCrossA = 3;
constexpr int kNumTags = 4;

double wrap_2pi(double x) {
    const double w = std::fmod(x, kTwoPi);
    return w < 0.0 ? w + kTwoPi : w;
}

}  // namespace

void EfficiencyChain::validate() const {
    for (double eta : {eta_cav, eta_gc, eta_net, eta_det, eta_mzi, eta_pc})
        if (eta < 0.0 || eta > 1.0)
            throw std::invalid_argument("EfficiencyChain: efficiencies must be in [0,1]");
    if (excess_loss <= 0.0 || excess_loss > 1.5)
        throw std::invalid_argument("EfficiencyChain: excess_loss out of range");
}

double ReadoutParams::fidelity_dark() const { return std::exp(-dark_mean()); }

double ReadoutParams::fidelity_bright() const {
    const double q = 1.0 - 1.0 / cyclicity;
    const double x = 1.0 - p_detect;
    const double qx = q * x;
    const double pow_qx = std::pow(qx, n_pulses);
    const double p0_signal =
        (x / cyclicity) * (1.0 - pow_qx) / (1.0 - qx) + pow_qx;
    return 1.0 - p0_signal * std::exp(-dark_mean());
}

double ReadoutParams::mean_bright() const {
    const double q = 1.0 - 1.0 / cyclicity;
    const double excitations = cyclicity * (1.0 - std::pow(q, n_pulses));
    return p_detect * excitations + dark_mean();
}

void ExperimentConfig::validate() const {
    physics.validate();
    mzi.validate();
    chain.validate();
    if (init_fidelity < 0.0 || init_fidelity > 1.0)
        throw std::invalid_argument("init.fidelity must be in [0,1]");
    if (readout.n_pulses <= 0)
        throw std::invalid_argument("readout.n_pulses must be positive");
    if (block_periods <= 0 || period_us <= 0)
        throw std::invalid_argument("run block structure must be positive");
}

CpldMode cpld_step(CpldMode mode, const CpldEvent& event) {
    if (mode == CpldMode::entangle) return event.herald ? CpldMode::readout : CpldMode::entangle;
    return event.readout_complete ? CpldMode::entangle : CpldMode::readout;
}

int simulate_readout(bool bright, int n_pulses, const ReadoutParams& params,
                     RandomStream& rng) {
    if (n_pulses <= 0) throw std::invalid_argument("simulate_readout: n_pulses must be positive");
    int count = 0;
    if (bright) {
        const double flip = 1.0 / params.cyclicity;
        for (int i = 0; i < n_pulses; ++i) {
            if (rng.bernoulli(params.p_detect)) ++count;
            if (rng.bernoulli(flip)) break;  // cross decay ends the cycling
        }
    }
    const double dark = params.dark_rate_hz * n_pulses * params.collection_window_us * 1e-6;
    count += rng.poisson(dark);
    return count;
}

// ---------------------------------------------------------------------------

PreparedExperiment::PreparedExperiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    timeline_ = build_sequence(cfg_.seq_kind, cfg_.t_bin_us, cfg_.slots, cfg_.seq_opts);
    const auto diag = validate_refocusing(timeline_, cfg_.forbidden_tau_us);
    if (!diag.ok()) {
        std::string msg = "timeline validation failed:";
        for (const auto& e : diag.errors) msg += " " + e;
        throw SequenceError(msg);
    }

    optical_times_ = timeline_.optical_times();
    eta_ = cfg_.chain.detection_eta();
    eta_bound_ = std::min(1.0, eta_ * 1.10);

    // Decay-rate profile relative to an optical pulse: Gamma_B in the first
    // half-unit, then alternating with each excited-manifold pi pulse.
    const double tau = timeline_.tau_us;
    const double gb = cfg_.physics.gamma_b();
    const double ga = cfg_.physics.gamma_a();
    auto gamma_at = [&](double delay) {
        if (delay < tau) return gb;
        const int window = static_cast<int>(std::floor((delay - tau) / (2.0 * tau))) + 1;
        return (window % 2 == 1) ? ga : gb;
    };
    auto hazard_to = [&](double delay) {
        double h = 0.0;
        double cursor = 0.0;
        while (cursor < delay) {
            const double bound =
                cursor < tau ? tau
                             : tau + (std::floor((cursor - tau) / (2.0 * tau)) + 1.0) * 2.0 * tau;
            const double end = std::min(bound, delay);
            h += gamma_at(0.5 * (cursor + end)) * (end - cursor);
            cursor = end;
        }
        return h;
    };

    // Gate-restricted sampling table for the shared emission delay.
    double cum = 0.0;
    int window_index = 1;
    for (const auto& [lo, hi] : cfg_.seq_opts.collect_windows_us) {
        double cursor = lo;
        while (cursor < hi) {
            const double bound =
                cursor < tau ? tau
                             : tau + (std::floor((cursor - tau) / (2.0 * tau)) + 1.0) * 2.0 * tau;
            const double end = std::min(bound, hi);
            QSeg seg;
            seg.lo = cursor;
            seg.hi = end;
            seg.gamma = gamma_at(0.5 * (cursor + end));
            seg.surv_lo = std::exp(-hazard_to(cursor));
            seg.mass = seg.surv_lo * (1.0 - std::exp(-seg.gamma * (end - cursor)));
            seg.cum0 = cum;
            seg.window_index = window_index;
            cum += seg.mass;
            qsegs_.push_back(seg);
            cursor = end;
        }
        ++window_index;
    }
    gate_mass_ = cum;

    // Background gates: the three bin images of every collection window.
    const auto add_bg = [&](HeraldKind bin) {
        int wi = 1;
        for (const auto& [lo, hi] : cfg_.seq_opts.collect_windows_us) {
            bg_gates_.push_back({hi - lo, wi, bin, lo});
            ++wi;
        }
    };
    add_bg(HeraldKind::early_bin);
    add_bg(HeraldKind::central_bin);
    add_bg(HeraldKind::late_bin);
    for (const auto& g : bg_gates_) {
        const double mid = g.delay_lo + 0.5 * g.width_us;
        p_bg_zz_ += cfg_.background.rate(BasisMode::zz, mid) * g.width_us * 1e-6;
        p_bg_xxyy_ += cfg_.background.rate(BasisMode::xxyy, mid) * g.width_us * 1e-6;
    }
}

PreparedExperiment::SampledDelay PreparedExperiment::sample_gate_delay(double u) const {
    const double target = u * gate_mass_;
    const QSeg* seg = &qsegs_.back();
    for (const auto& s : qsegs_) {
        if (target < s.cum0 + s.mass) {
            seg = &s;
            break;
        }
    }
    const double frac = (target - seg->cum0) / seg->surv_lo;
    double t = seg->lo - std::log(1.0 - frac) / seg->gamma;
    // numeric guard: keep inside the segment
    t = std::min(std::max(t, seg->lo), seg->hi);
    const double q = seg->gamma * seg->surv_lo * std::exp(-seg->gamma * (t - seg->lo));
    return {t, q, seg->window_index};
}

double PreparedExperiment::tracked_phase(std::uint64_t attempt_id, RandomStream& rng) const {
    const double drift = static_cast<double>(attempt_id) * cfg_.phase_drift_cycles;
    const double base = kTwoPi * (drift - std::floor(drift));
    return wrap_2pi(base + cfg_.phase_jitter_rad * rng.normal());
}

SpinBasis PreparedExperiment::basis_for(std::uint64_t attempt_id) const {
    switch (attempt_id % 3) {
        case 0: return SpinBasis::x;
        case 1: return SpinBasis::y;
        default: return SpinBasis::z;
    }
}

// ---------------------------------------------------------------------------
// per-attempt engine

namespace {

struct Sector {
    std::array<cplx, 4> amp{};
    int tag = -1;   // -1 pending, else photon frequency tag
    int jump = -1;  // 0 = first-pulse photon (E bin), 1 = second (L bin)
};

struct GroundVec {
    cplx down{0.0, 0.0};
    cplx up{0.0, 0.0};
    double norm() const { return std::norm(down) + std::norm(up); }
};

}  // namespace

AttemptOutcome PreparedExperiment::run_attempt(std::uint64_t attempt_id) const {
    RandomStream rng(cfg_.seed, attempt_id);
    AttemptOutcome outcome;
    outcome.mode_trace.push_back(CpldMode::entangle);

    const SpinBasis basis = basis_for(attempt_id);
    const BasisMode mode = basis == SpinBasis::z ? BasisMode::zz : BasisMode::xxyy;
    const double p_bg_total = mode == BasisMode::zz ? p_bg_zz_ : p_bg_xxyy_;

    // cheap pre-check: does anything click this attempt?
    const double u_gate = rng.uniform();
    const bool in_gate = u_gate < gate_mass_;
    SampledDelay sd{0.0, 1.0, 1};
    if (in_gate) sd = sample_gate_delay(u_gate / gate_mass_);
    const double u_sig = rng.uniform();
    const bool sig_candidate = in_gate && u_sig < eta_bound_;
    const double u_bg = rng.uniform();
    const bool bg_candidate = u_bg < p_bg_total;
    if (!sig_candidate && !bg_candidate) return outcome;

    // --- full quantum evolution (only for the ~1e-3 of attempts that click)
    const double phi = tracked_phase(attempt_id, rng);
    const bool init_ok = rng.uniform() < cfg_.init_fidelity;

    const AttemptNoise noise = build_attempt_noise(
        cfg_.noise, optical_times_, timeline_.total_us, rng);
    const double d_omega_opt =
        cfg_.noise.optical_sd_sigma > 0.0 ? rng.normal(0.0, cfg_.noise.optical_sd_sigma) : 0.0;

    double t_em = sd.t;
    double q_em = sd.q;
    if (!sig_candidate) {
        // background herald: sample the (unobserved) emission delay from the
        // full envelope so the spin marginal is the proper mixture
        const double tau = timeline_.tau_us;
        const double horizon = timeline_.total_us - optical_times_[1];
        double cursor = 0.0, surv = 1.0;
        const double gb = cfg_.physics.gamma_b();
        const double ga = cfg_.physics.gamma_a();
        double u = rng.uniform();
        t_em = horizon;
        q_em = 1.0;
        int w = 0;
        while (cursor < horizon) {
            const double bound = (w == 0) ? tau : std::min(cursor + 2.0 * tau, horizon);
            const double g = (w % 2 == 0) ? gb : ga;
            const double mass = surv * (1.0 - std::exp(-g * (bound - cursor)));
            if (u < mass) {
                t_em = cursor - std::log(1.0 - u / surv) / g;
                q_em = g * surv * std::exp(-g * (t_em - cursor));
                break;
            }
            u -= mass;
            surv *= std::exp(-g * (bound - cursor));
            cursor = bound;
            ++w;
        }
    }

    const double tphi_opt = cfg_.noise.optical_tphi_us;
    const double theta_sigma =
        std::isinf(tphi_opt) ? 0.0 : std::sqrt(2.0 * t_em / tphi_opt);
    const double theta_opt[2] = {rng.normal(0.0, theta_sigma),
                                 rng.normal(0.0, theta_sigma)};
    const double offset_a = rng.uniform(0.0, kTwoPi);
    const double offset_xb = rng.uniform(0.0, kTwoPi);
    const double offset_xa = rng.uniform(0.0, kTwoPi);

    // sector evolution through the pulse program
    std::vector<Sector> sectors;
    sectors.reserve(9);
    Sector pending;
    pending.amp[init_ok ? kDownG : kUpG] = 1.0;
    sectors.push_back(pending);

    const double r_m = noise.magnetic.ratio_r();
    const double r_e = noise.electric.ratio_r();
    const double gamma_b = cfg_.physics.gamma_b();
    const double gamma_a = cfg_.physics.gamma_a();
    const double flip_prob = cfg_.physics.branch_flip_prob();

    double cursor = 0.0;
    auto advance_to = [&](double t1) {
        if (t1 <= cursor) return;
        const double phi_m = noise.magnetic.integrate(cursor, t1);
        const double phi_el = noise.electric.integrate(cursor, t1);
        const double g = 0.5 * (phi_m + phi_el);
        const double e = 0.5 * (r_m * phi_m + r_e * phi_el);
        const double dt = t1 - cursor;
        const cplx pg = std::exp(kI * g), pgc = std::conj(pg);
        const cplx pe = std::exp(kI * e) * std::exp(-0.5 * gamma_b * dt);
        const cplx pec = std::exp(-kI * e) * std::exp(-0.5 * gamma_a * dt);
        for (auto& s : sectors) {
            s.amp[kDownG] *= pg;
            s.amp[kUpG] *= pgc;
            s.amp[kDownE] *= pe;
            s.amp[kUpE] *= pec;
        }
        cursor = t1;
    };

    auto mw_all = [&](Manifold m, double nominal_angle, Axis axis, int sign) {
        const double sigma = m == Manifold::ground
                                 ? cfg_.physics.pulse_error_sigma
                                 : cfg_.physics.pulse_error_sigma_excited;
        const double eps = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        const double angle = sign * nominal_angle * (1.0 + eps);
        for (auto& s : sectors) mw_rotate_inplace(s.amp, m, angle, axis);
    };

    auto do_jump = [&](int jump_index) {
        const cplx a_de = sectors[0].amp[kDownE];
        const cplx a_ue = sectors[0].amp[kUpE];
        const double wb = std::sqrt(gamma_b / q_em);
        const double wa = std::sqrt(gamma_a / q_em);
        const cplx opt = std::exp(kI * theta_opt[jump_index]);
        auto spawn = [&](int tag, int level, cplx amp) {
            if (std::norm(amp) < 1e-28) return;
            Sector s;
            s.tag = tag;
            s.jump = jump_index;
            s.amp[static_cast<std::size_t>(level)] = amp * opt;
            sectors.push_back(s);
        };
        spawn(kTagB, kDownG, a_de * wb * std::sqrt(1.0 - flip_prob));
        spawn(kTagCrossB, kUpG, a_de * wb * std::sqrt(flip_prob));
        spawn(kTagA, kUpG, a_ue * wa * std::sqrt(1.0 - flip_prob));
        spawn(kTagCrossA, kDownG, a_ue * wa * std::sqrt(flip_prob));
    };

    struct Op {
        double t;
        int kind;  // 0 = timeline event index, 1 = jump
        std::size_t event;
        int jump;
    };
    std::vector<Op> ops;
    ops.reserve(timeline_.events.size() + 2);
    for (std::size_t i = 0; i < timeline_.events.size(); ++i) {
        const auto& e = timeline_.events[i];
        if (e.kind == EventKind::window_open || e.kind == EventKind::window_close)
            continue;
        ops.push_back({e.time_us, 0, i, 0});
    }
    for (int j = 0; j < 2; ++j) {
        const double tj = optical_times_[static_cast<std::size_t>(j)] + t_em;
        if (tj <= timeline_.total_us) ops.push_back({tj, 1, 0, j});
    }
    std::stable_sort(ops.begin(), ops.end(),
                     [](const Op& a, const Op& b) { return a.t < b.t; });

    for (const auto& op : ops) {
        advance_to(op.t);
        if (op.kind == 1) {
            do_jump(op.jump);
            continue;
        }
        const auto& e = timeline_.events[op.event];
        switch (e.kind) {
            case EventKind::mw_pi:
                mw_all(e.manifold, std::numbers::pi, e.axis, e.sign);
                break;
            case EventKind::mw_half_pi:
                if (!e.basis_select) {
                    mw_all(Manifold::ground, 0.5 * std::numbers::pi, e.axis, e.sign);
                } else if (basis == SpinBasis::x) {
                    mw_all(Manifold::ground, 0.5 * std::numbers::pi, Axis::y, 1);
                } else if (basis == SpinBasis::y) {
                    mw_all(Manifold::ground, 0.5 * std::numbers::pi, Axis::x, -1);
                }
                break;
            case EventKind::optical_pi:
                std::swap(sectors[0].amp[kDownG], sectors[0].amp[kDownE]);
                for (std::size_t i = 1; i < sectors.size(); ++i)
                    sectors[i].amp[kDownG] = 0.0;  // drop double-emission amplitude
                break;
            default:
                break;
        }
    }
    advance_to(timeline_.total_us);

    // ---- detection ----
    double phi_eff[kNumTags];
    phi_eff[kTagB] = phi + d_omega_opt * cfg_.mzi.delta_t_ns * 1e-3;
    phi_eff[kTagA] = phi + offset_a;
    phi_eff[kTagCrossB] = phi + offset_xb;
    phi_eff[kTagCrossA] = phi + offset_xa;

    GroundVec by_tag_jump[kNumTags][2];
    double p_early = 0.0, p_late = 0.0;
    for (const auto& s : sectors) {
        if (s.tag < 0) continue;
        const double n = std::norm(s.amp[kDownG]) + std::norm(s.amp[kUpG]);
        if (s.jump == 0)
            p_early += n;
        else
            p_late += n;
        by_tag_jump[s.tag][s.jump].down += s.amp[kDownG];
        by_tag_jump[s.tag][s.jump].up += s.amp[kUpG];
    }
    p_early *= 0.5 * eta_;
    p_late *= 0.5 * eta_;

    double p_c1 = 0.0, p_c2 = 0.0;
    GroundVec central1[kNumTags], central2[kNumTags];
    for (int tag = 0; tag < kNumTags; ++tag) {
        const cplx rot = std::exp(kI * phi_eff[tag]);
        const GroundVec& ev = by_tag_jump[tag][0];
        const GroundVec& lv = by_tag_jump[tag][1];
        central1[tag].down = 0.5 * (ev.down + rot * lv.down);
        central1[tag].up = 0.5 * (ev.up + rot * lv.up);
        central2[tag].down = 0.5 * (ev.down - rot * lv.down);
        central2[tag].up = 0.5 * (ev.up - rot * lv.up);
        p_c1 += central1[tag].norm();
        p_c2 += central2[tag].norm();
    }
    p_c1 *= eta_;
    p_c2 *= eta_;

    // resolve signal and background candidates; earliest click wins
    std::optional<ClickRecord> signal;
    if (sig_candidate) {
        ClickRecord rec;
        rec.attempt_id = attempt_id;
        rec.phi_at_attempt = phi;
        rec.spin_basis = basis;
        rec.window_index = sd.window_index;
        const double big_t = cfg_.mzi.delay_t_us;
        if (u_sig < p_early) {
            rec.herald = HeraldKind::early_bin;
            rec.detector = 0;
            rec.detection_time_us = t_em;
            signal = rec;
        } else if (u_sig < p_early + p_late) {
            rec.herald = HeraldKind::late_bin;
            rec.detector = 0;
            rec.detection_time_us = 2.0 * big_t + t_em;
            signal = rec;
        } else if (u_sig < p_early + p_late + p_c1) {
            rec.herald = HeraldKind::central_bin;
            rec.detector = 1;
            rec.detection_time_us = big_t + t_em;
            signal = rec;
        } else if (u_sig < p_early + p_late + p_c1 + p_c2) {
            rec.herald = HeraldKind::central_bin;
            rec.detector = 2;
            rec.detection_time_us = big_t + t_em;
            signal = rec;
        }
    }

    std::optional<ClickRecord> background;
    if (bg_candidate) {
        // pick the gate proportionally to its rate*width share
        double acc = 0.0;
        const BgGate* chosen = &bg_gates_.back();
        for (const auto& g : bg_gates_) {
            const double mid = g.delay_lo + 0.5 * g.width_us;
            acc += cfg_.background.rate(mode, mid) * g.width_us * 1e-6;
            if (u_bg < acc) {
                chosen = &g;
                break;
            }
        }
        ClickRecord rec;
        rec.attempt_id = attempt_id;
        rec.phi_at_attempt = phi;
        rec.spin_basis = basis;
        rec.window_index = chosen->window_index;
        rec.herald = chosen->bin;
        const double t_in = chosen->delay_lo + rng.uniform() * chosen->width_us;
        const double big_t = cfg_.mzi.delay_t_us;
        switch (chosen->bin) {
            case HeraldKind::early_bin:
                rec.detector = 0;
                rec.detection_time_us = t_in;
                break;
            case HeraldKind::central_bin:
                rec.detector = rng.bernoulli(0.5) ? 1 : 2;
                rec.detection_time_us = big_t + t_in;
                break;
            case HeraldKind::late_bin:
                rec.detector = 0;
                rec.detection_time_us = 2.0 * big_t + t_in;
                break;
        }
        background = rec;
    }

    std::optional<ClickRecord> herald = signal;
    bool herald_is_background = false;
    if (background &&
        (!herald || background->detection_time_us < herald->detection_time_us)) {
        herald = background;
        herald_is_background = true;
    }
    if (!herald) return outcome;

    // ---- conditional spin readout ----
    double p_bright = 0.5;
    if (herald_is_background) {
        // photon undetected: the spin marginal is the mixture over sectors
        double num = 0.0, den = 0.0;
        for (const auto& s : sectors) {
            num += std::norm(s.amp[kDownG]) + std::norm(s.amp[kDownE]);
            for (const auto& a : s.amp) den += std::norm(a);
        }
        if (den > 0.0) p_bright = num / den;
    } else if (herald->herald == HeraldKind::early_bin ||
               herald->herald == HeraldKind::late_bin) {
        const int j = herald->herald == HeraldKind::early_bin ? 0 : 1;
        double num = 0.0, den = 0.0;
        for (const auto& s : sectors) {
            if (s.tag < 0 || s.jump != j) continue;
            num += std::norm(s.amp[kDownG]);
            den += std::norm(s.amp[kDownG]) + std::norm(s.amp[kUpG]);
        }
        if (den > 0.0) p_bright = num / den;
    } else {
        const GroundVec* proj = herald->detector == 1 ? central1 : central2;
        double num = 0.0, den = 0.0;
        for (int tag = 0; tag < kNumTags; ++tag) {
            num += std::norm(proj[tag].down);
            den += proj[tag].norm();
        }
        if (den > 0.0) p_bright = num / den;
    }

    const bool bright = rng.bernoulli(p_bright);
    const int counts = simulate_readout(bright, cfg_.readout.n_pulses, cfg_.readout, rng);
    herald->photon_count = counts;
    herald->spin_result =
        counts >= cfg_.readout.threshold_photons ? SpinResult::down : SpinResult::up;
    herald->spin_readout_done = true;

    outcome.herald = herald;
    outcome.mode_trace.push_back(CpldMode::readout);
    outcome.mode_trace.push_back(CpldMode::entangle);
    return outcome;
}

// ---------------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& cfg, const StopRule& stop) {
    PreparedExperiment prep(cfg);
    ExperimentResult result;

    unsigned n_threads = cfg.threads > 0
                             ? static_cast<unsigned>(cfg.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    constexpr std::uint64_t kBlock = 1u << 15;

    std::uint64_t next_attempt = 0;
    std::uint64_t heralds = 0;
    bool done = false;
    const std::size_t n_windows = cfg.seq_opts.collect_windows_us.size();
    result.summary.window_counts.assign(std::max<std::size_t>(n_windows, 1), 0);

    while (!done) {
        std::uint64_t block = kBlock;
        if (stop.kind == StopRule::Kind::attempts)
            block = std::min<std::uint64_t>(block, stop.count - next_attempt);
        if (block == 0) break;

        std::vector<std::vector<ClickRecord>> partial(n_threads);
        auto worker = [&](unsigned w) {
            const std::uint64_t chunk = (block + n_threads - 1) / n_threads;
            const std::uint64_t lo = next_attempt + w * chunk;
            const std::uint64_t hi = std::min(next_attempt + block, lo + chunk);
            for (std::uint64_t id = lo; id < hi; ++id) {
                auto outcome = prep.run_attempt(id);
                if (outcome.herald) partial[w].push_back(*outcome.herald);
            }
        };
        if (n_threads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
            for (auto& th : pool) th.join();
        }
        for (auto& part : partial)
            for (auto& rec : part) result.clicks.push_back(rec);

        next_attempt += block;
        heralds = result.clicks.size();
        if (stop.kind == StopRule::Kind::attempts) {
            done = next_attempt >= stop.count;
        } else if (heralds >= stop.count) {
            result.clicks.resize(stop.count);
            next_attempt = result.clicks.back().attempt_id + 1;
            done = true;
        }
    }

    auto& s = result.summary;
    s.n_attempts = next_attempt;
    s.n_heralds = result.clicks.size();
    s.herald_probability =
        s.n_attempts ? static_cast<double>(s.n_heralds) / static_cast<double>(s.n_attempts) : 0.0;
    s.wall_time_no_readout_s = static_cast<double>(s.n_attempts) * cfg.attempt_time_us() * 1e-6;
    s.wall_time_s = s.wall_time_no_readout_s +
                    static_cast<double>(s.n_heralds) * cfg.readout_time_us() * 1e-6;
    s.rate_hz = s.wall_time_s > 0 ? static_cast<double>(s.n_heralds) / s.wall_time_s : 0.0;
    s.rate_no_readout_hz =
        s.wall_time_no_readout_s > 0
            ? static_cast<double>(s.n_heralds) / s.wall_time_no_readout_s
            : 0.0;
    s.readout_fidelity_bright = cfg.readout.fidelity_bright();
    s.readout_fidelity_dark = cfg.readout.fidelity_dark();
    for (const auto& rec : result.clicks) {
        const std::size_t w = static_cast<std::size_t>(rec.window_index - 1);
        if (w < s.window_counts.size()) ++s.window_counts[w];
    }
    return result;
}

}  // namespace spinphoton
