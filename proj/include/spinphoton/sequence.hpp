#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinphoton/emitter.hpp"
#include "spinphoton/noise.hpp"

namespace spinphoton {

enum class EventKind { mw_pi, mw_half_pi, optical_pi, window_open, window_close };

struct PulseEvent {
    double time_us = 0.0;
    EventKind kind = EventKind::mw_pi;
    Manifold manifold = Manifold::ground;
    Axis axis = Axis::x;
    int sign = 1;           // -1 for phase-inverted pulses (rotation about -X/-Y)
    Transition transition = Transition::b;
    int window_index = 0;   // 1-based collection window label
    int optical_index = 0;  // which optical pulse a window is tied to (0/1)
    bool basis_select = false;
};

class SequenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidSlots : public SequenceError {
public:
    using SequenceError::SequenceError;
};
class NonRefocusingSlot : public SequenceError {
public:
    using SequenceError::SequenceError;
};
class EmissionOutOfRange : public SequenceError {
public:
    using SequenceError::SequenceError;
};

/// Validated (tau - pi - tau)^N schedule with optical pulses at decoupling
/// unit boundaries and heralding windows tied to each optical pulse.
struct PulseTimeline {
    std::vector<PulseEvent> events;  // time-ordered
    double tau_us = 0.0;
    int n_pi = 0;
    double bin_separation_us = 0.0;  // T between the optical pulses
    double total_us = 0.0;           // 2 N tau
    std::array<double, 2> optical_times_us{0.0, 0.0};

    std::vector<double> pi_times(Manifold m) const;
    std::vector<double> optical_times() const {
        return {optical_times_us[0], optical_times_us[1]};
    }
};

enum class SequenceKind { hahn, xy16, xy20, generalized };

struct SequenceOptions {
    int n_pi = 0;        // generalized only
    double tau_us = 0.0; // generalized only; otherwise derived from T and slots
    bool omit_final_excited_pi = true;
    // collection windows as (start, end) delays after each optical pulse
    std::vector<std::pair<double, double>> collect_windows_us = {{0.4, 2.3}};
};

/// Per-manifold XY-style axis pattern; sign -1 marks the phase-inverted half.
std::vector<std::pair<Axis, int>> axis_pattern(SequenceKind kind, int n_pi);

/// Compiles a protocol into a validated timeline. `slots` are the decoupling
/// unit boundaries (0..N) carrying the two optical pulses; their separation
/// must be an odd number of pi pulses.
PulseTimeline build_sequence(SequenceKind kind, double t_bin_us,
                             std::pair<int, int> slots,
                             const SequenceOptions& opts = {});

/// Ground-manifold toggling function: starts at +1, flips at each ground pi.
/// Returned as (flip_times, initial_sign) evaluated via toggling_sign().
std::vector<double> toggling_flip_times(const PulseTimeline& timeline, Manifold m);

int toggling_sign(const std::vector<double>& flip_times, double t_us);

/// Exact integral of sign(s)*beta(s) over [a, b] for the given manifold's
/// toggling (piecewise, no quadrature error).
double toggled_integral(const PulseTimeline& timeline, Manifold manifold,
                        const NoiseTrajectory& noise, double a_us, double b_us);

enum class WhichPulse { first, second };

/// Full-sequence noise phase of the branch excited at the chosen optical
/// pulse, with the active manifold switching from excited back to ground at
/// the emission time. Sign convention matches evolve_free: a branch sitting
/// in an "up" level accumulates -beta/2, "down" +beta/2, scaled by r while
/// excited. The Bell-state spin phase of an attempt heralded at equal delays
/// is accumulated_phase(first) - accumulated_phase(second).
double accumulated_phase(const PulseTimeline& timeline, const NoiseTrajectory& noise,
                         double emission_delay_us, WhichPulse which);

struct TimelineDiagnostics {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Asserts timeline invariants (pi spacing, refocusing-point placement of
/// optical pulses, odd slot parity, zero-mean toggling) and checks tau
/// against a configured forbidden list (nuclear-bath resonances are data,
/// not physics).
TimelineDiagnostics validate_refocusing(const PulseTimeline& timeline,
                                        std::span<const double> forbidden_tau_us = {},
                                        double forbidden_tol_us = 0.01,
                                        double refocus_tol_us = 1e-3);

/// Ordered tabular text (time, kind, manifold, axis) for inspection and
/// golden-file tests.
std::string export_table(const PulseTimeline& timeline);

}  // namespace spinphoton
