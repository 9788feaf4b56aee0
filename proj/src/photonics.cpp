#include "spinphoton/photonics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinphoton {

void MziConfig::validate() const {
    if (splitter_ratio < 0 || splitter_ratio > 1 || eta_mzi < 0 || eta_mzi > 1 ||
        detection_eta < 0 || detection_eta > 1)
        throw std::invalid_argument("MziConfig: ratios and efficiencies must be in [0,1]");
    if (dark_rate_hz < 0 || scatter_rate_hz < 0)
        throw std::invalid_argument("MziConfig: negative background rate");
}

double bell_phase(double delta_omega_radus, const MziConfig& mzi) {
    // phi is carried separately per attempt; this returns the detuning term
    // added to it. delta_T in us.
    return delta_omega_radus * (mzi.delta_t_ns * 1e-3);
}

double f_op(double t1_us, double t2_us, double t1_lifetime_us, double t_phi_us) {
    if (t1_us < 0 || t2_us <= t1_us) throw std::invalid_argument("f_op: need 0 <= t1 < t2");
    if (std::isinf(t_phi_us)) return 1.0;
    const double t1l = t1_lifetime_us;
    const double inv_t2 = 1.0 / (2.0 * t1l) + 1.0 / t_phi_us;
    const double t2c = 1.0 / inv_t2;
    const double num = std::exp(-2.0 * t1_us / t2c) - std::exp(-2.0 * t2_us / t2c);
    const double den = std::exp(-t1_us / t1l) - std::exp(-t2_us / t1l);
    return (t2c / (2.0 * t1l)) * num / den;
}

double hom_visibility(double window_us, double t1_lifetime_us, double t_phi_us) {
    if (window_us <= 0.0) return 1.0;
    return f_op(0.0, window_us, t1_lifetime_us, t_phi_us);
}

std::pair<double, double> central_probabilities(cplx amp_early, cplx amp_late,
                                                double phi_bell) {
    const cplx rot = std::exp(cplx(0.0, phi_bell));
    const double p1 = 0.25 * std::norm(amp_early + rot * amp_late);
    const double p2 = 0.25 * std::norm(amp_early - rot * amp_late);
    return {p1, p2};
}

std::optional<ClickRecord> sample_detection(const BellInput& bell, const MziConfig& mzi,
                                            DetectionWindow window,
                                            double window_width_us, RandomStream& rng) {
    const double eta = mzi.detection_eta;
    const double p_bg = mzi.dark_rate_hz * window_width_us * 1e-6;

    ClickRecord rec;
    rec.phi_at_attempt = bell.phi_bell;
    const double t = bell.emission_delay_us;
    const double big_t = mzi.delay_t_us;

    double p_sig1 = 0.0, p_sig2 = 0.0;
    switch (window) {
        case DetectionWindow::z_early:
            p_sig1 = 0.5 * std::norm(bell.amp_early);
            rec.herald = HeraldKind::early_bin;
            rec.detection_time_us = t;
            break;
        case DetectionWindow::z_late:
            p_sig1 = 0.5 * std::norm(bell.amp_late);
            rec.herald = HeraldKind::late_bin;
            rec.detection_time_us = 2.0 * big_t + t;
            break;
        case DetectionWindow::central: {
            auto [p1, p2] = central_probabilities(bell.amp_early, bell.amp_late,
                                                  bell.phi_bell);
            p_sig1 = p1;
            p_sig2 = p2;
            rec.herald = HeraldKind::central_bin;
            rec.detection_time_us = big_t + t;
            break;
        }
    }

    const double u = rng.uniform();
    if (u < eta * p_sig1) {
        rec.detector = window == DetectionWindow::central ? 1 : 0;
        return rec;
    }
    if (u < eta * (p_sig1 + p_sig2)) {
        rec.detector = 2;
        return rec;
    }
    if (u < eta * (p_sig1 + p_sig2) + p_bg) {
        // background: flat in the window, random detector
        rec.detector = window == DetectionWindow::central ? (rng.bernoulli(0.5) ? 1 : 2) : 0;
        rec.detection_time_us += rng.uniform() * window_width_us;
        return rec;
    }
    return std::nullopt;
}

double BackgroundModel::rate(BasisMode mode, double t_since_pulse_us) const {
    if (mode == BasisMode::zz) return dark_hz;
    if (t_since_pulse_us >= scatter_delay_us &&
        t_since_pulse_us < scatter_delay_us + scatter_bump_width_us)
        return scatter_bump_hz;
    return scatter_floor_hz;
}

}  // namespace spinphoton
