#include "spinphoton/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spinphoton {

namespace {

int parity_of(const ClickRecord& rec) {
    const int s = rec.spin_result == SpinResult::up ? 1 : -1;
    const int d = rec.detector == 1 ? 1 : -1;
    return s * d;
}

std::vector<std::pair<int, double>> central_clicks(const ClickDataset& dataset,
                                                   SpinBasis basis) {
    std::vector<std::pair<int, double>> out;
    for (const auto& rec : dataset) {
        if (rec.spin_basis != basis || rec.herald != HeraldKind::central_bin) continue;
        if (!rec.spin_readout_done) continue;
        out.emplace_back(parity_of(rec), rec.phi_at_attempt);
    }
    return out;
}

double log_likelihood(const std::vector<std::pair<int, double>>& clicks, bool use_cos,
                      double alpha) {
    double ll = 0.0;
    for (const auto& [parity, phi] : clicks) {
        const double c = use_cos ? std::cos(phi) : std::sin(phi);
        const double p = 0.5 * (1.0 + parity * alpha * c);
        ll += std::log(std::max(p, 1e-300));
    }
    return ll;
}

}  // namespace

VisibilityEstimate estimate_visibility_raw(const std::vector<std::pair<int, double>>& clicks,
                                           SpinBasis basis) {
    if (clicks.empty()) throw EmptyDataset("estimate_visibility: no central-bin clicks");
    if (basis == SpinBasis::z)
        throw AnalysisError("estimate_visibility: basis must be X or Y");
    const bool use_cos = basis == SpinBasis::x;

    double max_c2 = 0.0;
    for (const auto& [parity, phi] : clicks) {
        const double c = use_cos ? std::cos(phi) : std::sin(phi);
        max_c2 = std::max(max_c2, c * c);
    }
    VisibilityEstimate est;
    est.n_clicks = clicks.size();
    if (max_c2 < 1e-12) {
        est.unidentifiable = true;
        return est;
    }

    // golden-section maximization of the log likelihood on [-1, 1]
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = -1.0, b = 1.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = log_likelihood(clicks, use_cos, c);
    double fd = log_likelihood(clicks, use_cos, d);
    while (b - a > 1e-6) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = log_likelihood(clicks, use_cos, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = log_likelihood(clicks, use_cos, d);
        }
    }
    est.alpha = 0.5 * (a + b);
    est.boundary = std::abs(est.alpha) > 1.0 - 1e-4;

    // Gaussian width from the curvature of log L at the maximum
    double curvature = 0.0;
    for (const auto& [parity, phi] : clicks) {
        const double ci = use_cos ? std::cos(phi) : std::sin(phi);
        const double denom = 1.0 + parity * est.alpha * ci;
        curvature += ci * ci / std::max(denom * denom, 1e-12);
    }
    est.sigma_alpha = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
    return est;
}

VisibilityEstimate estimate_visibility(const ClickDataset& dataset, SpinBasis basis,
                                       double f_bright, double f_dark) {
    auto est = estimate_visibility_raw(central_clicks(dataset, basis), basis);
    const auto corr = correct_readout(est.alpha, f_bright, f_dark);
    const double scale = 1.0 / (f_bright + f_dark - 1.0);
    est.alpha = corr.value;
    est.sigma_alpha *= scale;
    return est;
}

ReadoutCorrection correct_readout(double contrast, double f_up, double f_down) {
    const double denom = f_up + f_down - 1.0;
    if (denom <= 0.0)
        throw NonInvertibleReadout("correct_readout: f_up + f_down must exceed 1");
    ReadoutCorrection out;
    out.value = contrast / denom;
    if (out.value > 1.0) {
        out.value = 1.0;
        out.clamped = true;
    } else if (out.value < -1.0) {
        out.value = -1.0;
        out.clamped = true;
    }
    return out;
}

double fidelity(double e_x, double e_y, double e_z) {
    return 0.25 * (1.0 + e_x + e_y + e_z);
}

ZCorrelation z_correlation(const ClickDataset& dataset) {
    ZCorrelation out;
    double sum = 0.0;
    for (const auto& rec : dataset) {
        if (rec.spin_basis != SpinBasis::z || !rec.spin_readout_done) continue;
        if (rec.herald != HeraldKind::early_bin && rec.herald != HeraldKind::late_bin)
            continue;
        const int zp = rec.herald == HeraldKind::early_bin ? -1 : 1;
        const int zs = rec.spin_result == SpinResult::up ? 1 : -1;
        sum += zp * zs;
        ++out.n_clicks;
    }
    if (out.n_clicks == 0) throw EmptyDataset("z_correlation: no Z-window clicks");
    out.contrast = sum / static_cast<double>(out.n_clicks);
    out.sigma = std::sqrt(std::max(1.0 - out.contrast * out.contrast, 0.0) /
                          static_cast<double>(out.n_clicks));
    return out;
}

EllipseFit fit_ellipse(const std::vector<std::pair<double, double>>& apd_pairs) {
    if (apd_pairs.size() < 10)
        throw AnalysisError("fit_ellipse: need at least 10 points");

    // per-channel affine normalization to [-1, 1] (APD gains are uncalibrated)
    double min1 = std::numeric_limits<double>::max(), max1 = -min1;
    double min2 = min1, max2 = -min1;
    for (const auto& [a, b] : apd_pairs) {
        min1 = std::min(min1, a);
        max1 = std::max(max1, a);
        min2 = std::min(min2, b);
        max2 = std::max(max2, b);
    }
    if (max1 - min1 < 1e-12 || max2 - min2 < 1e-12)
        throw DegenerateEllipse("fit_ellipse: a channel has no spread");

    std::vector<double> xs, ys;
    xs.reserve(apd_pairs.size());
    ys.reserve(apd_pairs.size());
    for (const auto& [a, b] : apd_pairs) {
        xs.push_back(2.0 * (a - min1) / (max1 - min1) - 1.0);
        ys.push_back(2.0 * (b - min2) / (max2 - min2) - 1.0);
    }

    // implicit ellipse x^2 + y^2 - 2 x y cos(d) = sin^2(d); least squares in
    // c = cos(d) via Newton on the stationarity condition
    const std::size_t n = xs.size();
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += xs[i] * ys[i];
    double c = std::clamp(2.0 * sxy / static_cast<double>(n), -0.999, 0.999);
    for (int iter = 0; iter < 50; ++iter) {
        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double resid = xs[i] * xs[i] + ys[i] * ys[i] - 2.0 * xs[i] * ys[i] * c -
                                 (1.0 - c * c);
            const double dresid = -2.0 * xs[i] * ys[i] + 2.0 * c;
            g += 2.0 * resid * dresid;
            h += 2.0 * dresid * dresid;  // Gauss-Newton
        }
        if (h <= 0.0) break;
        const double step = g / h;
        c = std::clamp(c - step, -0.9999, 0.9999);
        if (std::abs(step) < 1e-12) break;
    }

    const double sin_d = std::sqrt(std::max(1.0 - c * c, 0.0));
    if (sin_d < 0.05)
        throw DegenerateEllipse("fit_ellipse: delta_phi too close to 0 or pi");

    EllipseFit fit;
    fit.delta_phi = std::acos(c);  // in (0, pi)
    fit.phases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cos_phi = std::clamp(xs[i], -1.0, 1.0);
        const double sin_phi = (xs[i] * c - ys[i]) / sin_d;
        double phi = std::atan2(sin_phi, cos_phi);
        if (phi <= 0.0) phi += kTwoPi;
        fit.phases.push_back(phi);
    }
    return fit;
}

GaussianDecayFit fit_gaussian_decay(
    const std::vector<std::pair<double, double>>& contrast_vs_tau) {
    if (contrast_vs_tau.size() < 3)
        throw AnalysisError("fit_gaussian_decay: need at least 3 points");

    // init from a log-linear fit on the positive points: ln y = ln A - k x^2
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& [x, y] : contrast_vs_tau) {
        if (y <= 1e-6) continue;
        const double u = x * x, v = std::log(y);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        ++m;
    }
    GaussianDecayFit fit;
    if (m < 2) {
        fit.flat = true;
        return fit;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    double k = denom != 0.0 ? -(static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
    double log_a = (sy + k * sx) / static_cast<double>(m);
    double amp = std::exp(log_a);
    if (k < 1e-12) {
        fit.flat = true;
        fit.amplitude = amp;
        fit.t_d = std::numeric_limits<double>::infinity();
        fit.sigma_omega = 0.0;
        return fit;
    }

    // Gauss-Newton refinement of (A, k) on the raw residuals
    for (int iter = 0; iter < 100; ++iter) {
        double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
        for (const auto& [x, y] : contrast_vs_tau) {
            const double e = std::exp(-k * x * x);
            const double r = amp * e - y;
            const double da = e;
            const double dk = -amp * x * x * e;
            j11 += da * da;
            j12 += da * dk;
            j22 += dk * dk;
            g1 += r * da;
            g2 += r * dk;
        }
        const double det = j11 * j22 - j12 * j12;
        if (std::abs(det) < 1e-30) break;
        const double step_a = (j22 * g1 - j12 * g2) / det;
        const double step_k = (j11 * g2 - j12 * g1) / det;
        amp -= step_a;
        k -= step_k;
        if (k < 1e-12) k = 1e-12;
        if (std::abs(step_a) + std::abs(step_k) < 1e-14) break;
    }

    fit.amplitude = amp;
    fit.t_d = 1.0 / std::sqrt(k);
    fit.sigma_omega = std::sqrt(2.0) / fit.t_d;
    return fit;
}

PowerLawFit fit_power_law_saturating(
    const std::vector<std::pair<double, double>>& sigma_vs_x) {
    if (sigma_vs_x.size() < 4)
        throw AnalysisError("fit_power_law_saturating: need at least 4 points");
    PowerLawFit fit;
    double sigma_max = 0.0;
    for (const auto& [x, s] : sigma_vs_x) sigma_max = std::max(sigma_max, s);
    if (sigma_max < 1e-12) {
        fit.flat = true;
        return fit;
    }

    // pre-saturation region: points below half the maximum
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& [x, s] : sigma_vs_x) {
        if (s <= 0.0 || x <= 0.0 || s > 0.5 * sigma_max) continue;
        const double u = std::log(x), v = std::log(s);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        ++m;
    }
    if (m < 2) {
        fit.flat = true;
        return fit;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    fit.beta = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.k = std::exp((sy - fit.beta * sx) / static_cast<double>(m));

    // global saturation fit: sigma^2 = sat^2 S^2/(S^2+1), S = k x^beta / sat
    double sat = sigma_max;
    for (int iter = 0; iter < 200; ++iter) {
        double g = 0.0, h = 0.0;
        for (const auto& [x, s] : sigma_vs_x) {
            if (x <= 0.0) continue;
            const double sp = fit.k * std::pow(x, fit.beta);
            const double model = sat * sp / std::sqrt(sat * sat + sp * sp);
            const double dmodel =
                sp * sp * sp / std::pow(sat * sat + sp * sp, 1.5);
            const double r = model - s;
            g += r * dmodel;
            h += dmodel * dmodel;
        }
        if (h <= 0.0) break;
        const double step = g / h;
        sat -= step;
        if (sat < 1e-9) sat = 1e-9;
        if (std::abs(step) < 1e-12) break;
    }
    fit.sigma_sat = sat;
    return fit;
}

ErrorBudget error_budget(const ErrorBudgetInputs& in) {
    ErrorBudget out{};
    out.f_op = in.f_op > 0.0
                   ? in.f_op
                   : f_op(in.f_op_window_start_us, in.f_op_window_end_us,
                          in.optical_t1_us, in.optical_tphi_us);
    out.f_s = in.f_s;
    out.f_p = in.f_p;
    out.f_i = in.f_i;

    out.p1 = std::exp(-in.t_bin_us * (0.5 / in.tau_a_us + 0.5 / in.tau_b_us)) *
             (1.0 - std::exp(-in.window_width_us / in.tau_a_us));
    out.p2 = 1.0 - std::exp(-in.window_width_us / in.tau_b_us);
    out.f_l = out.p2 / (out.p1 + out.p2);

    const auto bg_factor = [&](double rate_hz, double n_windows) {
        const double p_false = rate_hz * n_windows * in.window_width_us * 1e-6;
        return 1.0 - p_false / (p_false + in.p_ent_measured);
    };
    out.f_bg_xy = in.f_bg_xy > 0.0 ? in.f_bg_xy : bg_factor(in.scatter_hz, 1.0);
    out.f_bg_z = in.f_bg_z > 0.0 ? in.f_bg_z : bg_factor(in.dark_hz, 2.0);

    out.e_xy_pred = out.f_op * out.f_s * out.f_l * out.f_bg_xy * out.f_i;
    out.e_z_pred = out.f_p * out.f_l * out.f_bg_z;
    out.f_pred = 0.25 * (1.0 + 2.0 * out.e_xy_pred + out.e_z_pred);
    return out;
}

RateChain rate_chain(const RateChainInputs& in) {
    RateChain out{};
    out.p_detect = in.eta_cav * in.eta_gc * in.eta_net * in.eta_det;
    out.p_ent_predicted = out.p_detect * in.eta_mzi * in.eta_pc;
    out.rate_predicted_hz = out.p_ent_predicted * in.attempt_rate_hz;
    out.rate_measured_hz = in.p_ent_measured * in.attempt_rate_hz;
    out.improvement_factor =
        std::accumulate(in.improvements.begin(), in.improvements.end(), 1.0,
                        std::multiplies<>());
    out.rate_improved_hz = out.rate_measured_hz * out.improvement_factor;
    return out;
}

ErrorBudgetInputs budget_inputs_from_config(const KeyValueConfig& kv) {
    ErrorBudgetInputs in;
    in.f_op = kv.get_double("budget.f_op", 0.0);
    in.f_op_window_start_us = kv.get_double("budget.f_op_window_start_us", 0.0);
    in.f_op_window_end_us = kv.get_double("budget.f_op_window_end_us", 2.5);
    in.optical_t1_us = kv.get_double("physics.tau_b_us", in.optical_t1_us);
    in.optical_tphi_us = kv.get_double("noise.optical_tphi_us", in.optical_tphi_us);
    in.f_s = kv.get_double("budget.f_s", in.f_s);
    in.f_p = kv.get_double("budget.f_p", in.f_p);
    in.f_i = kv.get_double("budget.f_i", in.f_i);
    in.f_bg_xy = kv.get_double("budget.f_bg_xy", 0.0);
    in.f_bg_z = kv.get_double("budget.f_bg_z", 0.0);
    in.dark_hz = kv.get_double("background.dark_hz", in.dark_hz);
    in.scatter_hz = kv.get_double("background.scatter_hz", in.scatter_hz);
    const auto windows = kv.get_double_list("sequence.windows_us", {0.4, 2.3});
    if (windows.size() >= 2) in.window_width_us = windows[1] - windows[0];
    in.t_bin_us = kv.get_double("sequence.t_bin_us", in.t_bin_us);
    in.tau_a_us = kv.get_double("physics.tau_a_us", in.tau_a_us);
    in.tau_b_us = kv.get_double("physics.tau_b_us", in.tau_b_us);
    in.p_ent_measured = kv.get_double("budget.p_ent_measured", in.p_ent_measured);
    return in;
}

RateChainInputs rate_inputs_from_config(const KeyValueConfig& kv) {
    RateChainInputs in;
    in.eta_cav = kv.get_double("efficiency.eta_cav", in.eta_cav);
    in.eta_gc = kv.get_double("efficiency.eta_gc", in.eta_gc);
    in.eta_net = kv.get_double("efficiency.eta_net", in.eta_net);
    in.eta_det = kv.get_double("efficiency.eta_det", in.eta_det);
    in.eta_mzi = kv.get_double("efficiency.eta_mzi", in.eta_mzi);
    in.eta_pc = kv.get_double("efficiency.eta_pc", in.eta_pc);
    in.attempt_rate_hz = kv.get_double("budget.attempt_rate_hz", in.attempt_rate_hz);
    in.p_ent_measured = kv.get_double("budget.p_ent_measured", in.p_ent_measured);
    in.improvements = kv.get_double_list("budget.improvements", in.improvements);
    return in;
}

ParityCurve parity_curve(const ClickDataset& dataset, SpinBasis basis, int n_bins) {
    ParityCurve curve;
    curve.bin_centers.resize(static_cast<std::size_t>(n_bins));
    curve.parity.assign(static_cast<std::size_t>(n_bins), 0.0);
    curve.sem.assign(static_cast<std::size_t>(n_bins), 0.0);
    curve.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (int b = 0; b < n_bins; ++b)
        curve.bin_centers[static_cast<std::size_t>(b)] = (b + 0.5) * kTwoPi / n_bins;
    for (const auto& rec : dataset) {
        if (rec.spin_basis != basis || rec.herald != HeraldKind::central_bin) continue;
        if (!rec.spin_readout_done) continue;
        int b = static_cast<int>(rec.phi_at_attempt / kTwoPi * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        curve.parity[static_cast<std::size_t>(b)] += parity_of(rec);
        ++curve.counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < n_bins; ++b) {
        const auto i = static_cast<std::size_t>(b);
        if (curve.counts[i] > 0) {
            curve.parity[i] /= static_cast<double>(curve.counts[i]);
            curve.sem[i] = std::sqrt(std::max(1.0 - curve.parity[i] * curve.parity[i], 0.0) /
                                     static_cast<double>(curve.counts[i]));
        }
    }
    return curve;
}

}  // namespace spinphoton
