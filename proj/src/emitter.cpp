#include "spinphoton/emitter.hpp"

#include <cmath>
#include <stdexcept>

namespace spinphoton {

namespace {

constexpr cplx kI{0.0, 1.0};

void rotate_pair(std::array<cplx, 4>& amp, int down, int up, double angle, Axis axis) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const cplx a_down = amp[static_cast<std::size_t>(down)];
    const cplx a_up = amp[static_cast<std::size_t>(up)];
    if (axis == Axis::x) {
        amp[static_cast<std::size_t>(down)] = c * a_down - kI * s * a_up;
        amp[static_cast<std::size_t>(up)] = c * a_up - kI * s * a_down;
    } else {
        amp[static_cast<std::size_t>(down)] = c * a_down - s * a_up;
        amp[static_cast<std::size_t>(up)] = c * a_up + s * a_down;
    }
}

}  // namespace

void EmitterState::normalize() {
    const double n = std::sqrt(norm_sq());
    if (n > 0.0)
        for (auto& a : amp) a /= n;
}

EmitterState apply_mw_pulse(const EmitterState& state, Manifold manifold,
                            double angle_rad, Axis axis) {
    if (!std::isfinite(angle_rad))
        throw std::invalid_argument("apply_mw_pulse: angle must be finite");
    EmitterState out = state;
    mw_rotate_inplace(out.amp, manifold, angle_rad, axis);
    return out;
}

void mw_rotate_inplace(std::array<cplx, 4>& amp, Manifold manifold,
                       double angle_rad, Axis axis) {
    if (manifold == Manifold::ground)
        rotate_pair(amp, kDownG, kUpG, angle_rad, axis);
    else
        rotate_pair(amp, kDownE, kUpE, angle_rad, axis);
}

EmitterState apply_optical_pi(const EmitterState& state, Transition transition) {
    EmitterState out = state;
    if (transition == Transition::b)
        std::swap(out.amp[kDownG], out.amp[kDownE]);
    else
        std::swap(out.amp[kUpG], out.amp[kUpE]);
    return out;
}

EmitterState evolve_free(const EmitterState& state, double t0_us, double t1_us,
                         const NoiseTrajectory& noise) {
    if (t1_us < t0_us) throw std::invalid_argument("evolve_free: t1 < t0");
    const double phi_g = noise.integrate(t0_us, t1_us);
    const double phi_e = noise.ratio_r() * phi_g;
    EmitterState out = state;
    out.amp[kUpG] *= std::exp(-kI * (0.5 * phi_g));
    out.amp[kDownG] *= std::exp(kI * (0.5 * phi_g));
    out.amp[kUpE] *= std::exp(-kI * (0.5 * phi_e));
    out.amp[kDownE] *= std::exp(kI * (0.5 * phi_e));
    return out;
}

std::pair<EmitterState, std::optional<EmissionEvent>> sample_emission(
    const EmitterState& state, double window_us, const PhysicalParams& params,
    RandomStream& rng) {
    if (window_us <= 0) throw std::invalid_argument("sample_emission: window must be positive");
    if (std::abs(state.norm_sq() - 1.0) > 1e-9)
        throw std::invalid_argument("sample_emission: state must be normalized");

    const double pop_b = std::norm(state.amp[kDownE]);
    const double pop_a = std::norm(state.amp[kUpE]);
    const double pj_b = pop_b * (1.0 - std::exp(-window_us / params.tau_b_us));
    const double pj_a = pop_a * (1.0 - std::exp(-window_us / params.tau_a_us));

    const double u = rng.uniform();
    if (u < pj_b + pj_a) {
        const bool from_b = u < pj_b;
        const double tau = from_b ? params.tau_b_us : params.tau_a_us;
        // exponential time truncated to the window
        const double cap = 1.0 - std::exp(-window_us / tau);
        const double t = -tau * std::log(1.0 - rng.uniform() * cap);
        const bool flip = rng.bernoulli(params.branch_flip_prob());

        EmitterState out;
        if (from_b)
            out.amp[flip ? kUpG : kDownG] = 1.0;
        else
            out.amp[flip ? kDownG : kUpG] = 1.0;

        EmissionEvent ev;
        ev.time_us = t;
        ev.branch = flip ? Branch::spin_flip : (from_b ? Branch::b : Branch::a);
        return {out, ev};
    }

    // no jump: damp the excited amplitudes and renormalize
    EmitterState out = state;
    out.amp[kDownE] *= std::exp(-0.5 * window_us / params.tau_b_us);
    out.amp[kUpE] *= std::exp(-0.5 * window_us / params.tau_a_us);
    out.normalize();
    return {out, std::nullopt};
}

}  // namespace spinphoton
