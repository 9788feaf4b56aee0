#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spinphoton/config.hpp"
#include "spinphoton/photonics.hpp"

namespace spinphoton {

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class EmptyDataset : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};
class DegenerateEllipse : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};
class NonInvertibleReadout : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

struct VisibilityEstimate {
    double alpha = 0.0;
    double sigma_alpha = 0.0;
    std::size_t n_clicks = 0;
    bool boundary = false;        // maximum at |alpha| = 1
    bool unidentifiable = false;  // degenerate likelihood (all phases at a node)
};

/// Maximum-likelihood Bell-state visibility from central-bin clicks:
/// likelihood prod_i (1 + parity_i * alpha * c_i)/2 with c = cos(phi) for X
/// and sin(phi) for Y. Golden-section maximization on [-1, 1] (tol 1e-6);
/// sigma from the curvature of the log-likelihood at the maximum (the
/// Gaussian-fit width).
VisibilityEstimate estimate_visibility(const ClickDataset& dataset, SpinBasis basis,
                                       double f_bright = 1.0, double f_dark = 1.0);

/// Same estimator on raw (parity, phase) pairs; exposed for oracles.
VisibilityEstimate estimate_visibility_raw(const std::vector<std::pair<int, double>>& clicks,
                                           SpinBasis basis);

struct ReadoutCorrection {
    double value = 0.0;
    bool clamped = false;
};

/// Readout-corrected contrast: contrast / (f_up + f_down - 1), clamped to
/// [-1, 1]. Throws NonInvertibleReadout when f_up + f_down <= 1.
ReadoutCorrection correct_readout(double contrast, double f_up, double f_down);

/// F = (1 + E_X + E_Y + E_Z)/4.
double fidelity(double e_x, double e_y, double e_z);

struct ZCorrelation {
    double contrast = 0.0;  // raw <Z_s Z_p>
    double sigma = 0.0;
    std::size_t n_clicks = 0;
};
ZCorrelation z_correlation(const ClickDataset& dataset);

struct EllipseFit {
    double delta_phi = 0.0;            // in (0, pi)
    std::vector<double> phases;        // per point, in (0, 2pi]
};

/// Fits APD1 = cos(phi), APD2 = cos(phi + dphi) after per-channel min/max
/// affine normalization; the +/-phi ambiguity is resolved by keeping
/// delta_phi in (0, pi). Throws DegenerateEllipse for collinear data.
EllipseFit fit_ellipse(const std::vector<std::pair<double, double>>& apd_pairs);

struct GaussianDecayFit {
    double t_d = 0.0;
    double sigma_omega = 0.0;  // sqrt(2)/T_d
    double amplitude = 1.0;
    bool flat = false;         // no decay resolvable (T_d -> inf)
};

/// Least squares on A * exp(-(x/T_d)^2).
GaussianDecayFit fit_gaussian_decay(const std::vector<std::pair<double, double>>& contrast_vs_tau);

struct PowerLawFit {
    double beta = 0.0;
    double k = 0.0;        // prefactor of the pre-saturation power law
    double sigma_sat = 0.0;
    bool flat = false;
};

/// Fits sigma = k x^beta on the pre-saturation region (sigma < half the
/// running maximum) and the saturation model sigma^2 = sat^2 S^2/(S^2+1)
/// globally for sigma_sat.
PowerLawFit fit_power_law_saturating(const std::vector<std::pair<double, double>>& sigma_vs_x);

struct ErrorBudgetInputs {
    double f_op = 0.0;       // <= 0 means: compute from t_phi and the window
    double f_op_window_start_us = 0.0;
    double f_op_window_end_us = 2.5;
    double optical_t1_us = 18.4;
    double optical_tphi_us = 31.5;
    double f_s = 0.75;
    double f_p = 0.86;
    double f_i = 0.97;
    double f_bg_xy = 0.0;    // <= 0 means: compute from rates and p_ent
    double f_bg_z = 0.0;
    double dark_hz = 6.0;
    double scatter_hz = 15.0;
    double window_width_us = 1.9;  // heralding window delta
    double t_bin_us = 75.5;
    double tau_a_us = 85.2;
    double tau_b_us = 18.4;
    double p_ent_measured = 6.7e-4;
};

struct ErrorBudget {
    double f_op, f_s, f_p, f_bg_xy, f_bg_z, f_i, f_l;
    double p1, p2;
    double e_xy_pred, e_z_pred, f_pred;
};

/// Multiplicative error budget:
/// P1 = exp(-T(1/2tauA + 1/2tauB))(1 - exp(-delta/tauA)), P2 = 1 - exp(-delta/tauB),
/// f_l = P2/(P1+P2), E_xy = f_op f_s f_l f_bg_xy f_i, E_z = f_p f_l f_bg_z,
/// F = (1 + 2 E_xy + E_z)/4.
ErrorBudget error_budget(const ErrorBudgetInputs& in);

struct RateChainInputs {
    double eta_cav = 0.24, eta_gc = 0.33, eta_net = 0.61, eta_det = 0.85;
    double eta_mzi = 0.28, eta_pc = 0.091;
    double attempt_rate_hz = 2200.0;
    double p_ent_measured = 6.7e-4;
    std::vector<double> improvements = {1.5, 2.0, 3.0, 11.0};
};

struct RateChain {
    double p_detect;        // eta_cav * eta_gc * eta_net * eta_det
    double p_ent_predicted; // * eta_mzi * eta_pc
    double rate_predicted_hz;
    double rate_measured_hz;
    double rate_improved_hz;
    double improvement_factor;
};

RateChain rate_chain(const RateChainInputs& in);

ErrorBudgetInputs budget_inputs_from_config(const KeyValueConfig& kv);
RateChainInputs rate_inputs_from_config(const KeyValueConfig& kv);

/// Parity-oscillation curve for plotting: mean parity per phase bin.
struct ParityCurve {
    std::vector<double> bin_centers;
    std::vector<double> parity;
    std::vector<double> sem;
    std::vector<std::size_t> counts;
};
ParityCurve parity_curve(const ClickDataset& dataset, SpinBasis basis, int n_bins = 11);

}  // namespace spinphoton
