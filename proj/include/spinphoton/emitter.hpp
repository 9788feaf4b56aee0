#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>

#include "spinphoton/noise.hpp"
#include "spinphoton/params.hpp"
#include "spinphoton/rng.hpp"

namespace spinphoton {

using cplx = std::complex<double>;

// Basis order is fixed project-wide: (down_g, up_g, down_e, up_e).
// All phase conventions live here: a free splitting fluctuation beta
// multiplies |up> by exp(-i*Int(beta)/2) and |down> by exp(+i*Int(beta)/2),
// per manifold, with beta_e = r * beta_g. MW rotations are
// R_n(theta) = exp(-i theta (n.sigma)/2) on the manifold's (down, up) pair.
inline constexpr int kDownG = 0;
inline constexpr int kUpG = 1;
inline constexpr int kDownE = 2;
inline constexpr int kUpE = 3;

enum class Manifold { ground, excited };
enum class Axis { x, y };
enum class Transition { a, b };

enum class Branch { b, a, spin_flip };
enum class WindowParity { even, odd };
enum class Bin { early, late };

struct EmissionEvent {
    double time_us = 0.0;  // since the most recent optical pulse
    Branch branch = Branch::b;
    WindowParity window_parity = WindowParity::even;
    Bin bin = Bin::early;
};

struct EmitterState {
    std::array<cplx, 4> amp{};

    static EmitterState basis_state(int index) {
        EmitterState s;
        s.amp[static_cast<std::size_t>(index)] = 1.0;
        return s;
    }

    double norm_sq() const {
        double n = 0.0;
        for (const auto& a : amp) n += std::norm(a);
        return n;
    }

    double excited_population() const {
        return std::norm(amp[kDownE]) + std::norm(amp[kUpE]);
    }

    void normalize();
};

/// SU(2) rotation by `angle_rad` about X or Y on one manifold's (down, up)
/// pair; identity on the other manifold. Rejects non-finite angles.
EmitterState apply_mw_pulse(const EmitterState& state, Manifold manifold,
                            double angle_rad, Axis axis);

/// In-place rotation on a raw amplitude vector (hot path in the runner).
void mw_rotate_inplace(std::array<cplx, 4>& amp, Manifold manifold,
                       double angle_rad, Axis axis);

/// Optical pi pulse: B swaps the down_g/down_e amplitudes, A swaps up_g/up_e.
/// Amplitudes are carried unchanged; laser-phase bookkeeping lives in the
/// photonics module.
EmitterState apply_optical_pi(const EmitterState& state, Transition transition);

/// Noisy free evolution over [t0, t1] under one noise channel.
/// Norm-preserving; excited decay is not applied here (see sample_emission).
EmitterState evolve_free(const EmitterState& state, double t0_us, double t1_us,
                         const NoiseTrajectory& noise);

/// One quantum-jump step over a window. With probability
/// sum_i pop_i (1 - exp(-window/tau_i)) an emission occurs at an
/// exponentially distributed time; the decaying amplitude collapses to the
/// same-spin ground level with probability 1 - 1/C, else to the cross level
/// (spin flip). Otherwise no-jump renormalization is applied.
std::pair<EmitterState, std::optional<EmissionEvent>> sample_emission(
    const EmitterState& state, double window_us, const PhysicalParams& params,
    RandomStream& rng);

}  // namespace spinphoton
