#include "spinphoton/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace spinphoton {

namespace {

const std::vector<Axis> kXy8{Axis::x, Axis::y, Axis::x, Axis::y,
                             Axis::y, Axis::x, Axis::y, Axis::x};

}  // namespace

std::vector<std::pair<Axis, int>> axis_pattern(SequenceKind kind, int n_pi) {
    std::vector<std::pair<Axis, int>> pattern;
    switch (kind) {
        case SequenceKind::hahn:
            pattern.emplace_back(Axis::x, 1);
            break;
        case SequenceKind::xy16:
            for (Axis a : kXy8) pattern.emplace_back(a, 1);
            for (Axis a : kXy8) pattern.emplace_back(a, -1);
            break;
        case SequenceKind::xy20: {
            std::vector<Axis> half = kXy8;
            half.push_back(Axis::x);
            half.push_back(Axis::y);
            for (Axis a : half) pattern.emplace_back(a, 1);
            for (Axis a : half) pattern.emplace_back(a, -1);
            break;
        }
        case SequenceKind::generalized:
            for (int i = 0; i < n_pi; ++i)
                pattern.emplace_back(kXy8[static_cast<std::size_t>(i % 8)],
                                     (i / 8) % 2 == 0 ? 1 : -1);
            break;
    }
    return pattern;
}

std::vector<double> PulseTimeline::pi_times(Manifold m) const {
    std::vector<double> out;
    for (const auto& e : events)
        if (e.kind == EventKind::mw_pi && e.manifold == m) out.push_back(e.time_us);
    return out;
}

PulseTimeline build_sequence(SequenceKind kind, double t_bin_us,
                             std::pair<int, int> slots, const SequenceOptions& opts) {
    int n_pi = 0;
    switch (kind) {
        case SequenceKind::hahn: n_pi = 1; break;
        case SequenceKind::xy16: n_pi = 16; break;
        case SequenceKind::xy20: n_pi = 20; break;
        case SequenceKind::generalized:
            n_pi = opts.n_pi;
            if (n_pi < 1) throw SequenceError("generalized sequence needs n_pi >= 1");
            break;
    }

    const auto [s1, s2] = slots;
    if (s1 < 0 || s2 <= s1 || s2 > n_pi)
        throw InvalidSlots("optical slots must satisfy 0 <= first < second <= n_pi");
    const int spacing = s2 - s1;
    if (spacing % 2 == 0)
        throw InvalidSlots("optical pulses must be separated by an odd number of pi pulses");

    double tau = opts.tau_us;
    if (tau <= 0.0) {
        tau = t_bin_us / (2.0 * spacing);
    } else if (std::abs(2.0 * tau * spacing - t_bin_us) > 1e-3) {
        throw NonRefocusingSlot("tau inconsistent with bin separation: slots are not refocusing points");
    }

    PulseTimeline tl;
    tl.tau_us = tau;
    tl.n_pi = n_pi;
    tl.bin_separation_us = t_bin_us;
    tl.total_us = 2.0 * n_pi * tau;
    tl.optical_times_us = {2.0 * tau * s1, 2.0 * tau * s2};

    // initial pi/2 then the first optical pulse (both at the slot boundary)
    tl.events.push_back({tl.optical_times_us[0], EventKind::mw_half_pi,
                         Manifold::ground, Axis::y, 1, Transition::b, 0, 0, false});
    tl.events.push_back({tl.optical_times_us[0], EventKind::optical_pi,
                         Manifold::ground, Axis::x, 1, Transition::b, 0, 0, false});
    tl.events.push_back({tl.optical_times_us[1], EventKind::optical_pi,
                         Manifold::ground, Axis::x, 1, Transition::b, 0, 1, false});

    const auto pattern = axis_pattern(kind, n_pi);
    for (int k = 0; k < n_pi; ++k) {
        const double t = (2.0 * k + 1.0) * tau;
        const auto [axis, sign] = pattern[static_cast<std::size_t>(k)];
        tl.events.push_back({t, EventKind::mw_pi, Manifold::ground, axis, sign,
                             Transition::b, 0, 0, false});
        const bool last = (k == n_pi - 1);
        if (!(last && opts.omit_final_excited_pi))
            tl.events.push_back({t, EventKind::mw_pi, Manifold::excited, axis, sign,
                                 Transition::b, 0, 0, false});
    }

    for (int p = 0; p < 2; ++p) {
        int window_index = 1;
        for (const auto& [lo, hi] : opts.collect_windows_us) {
            const double base = tl.optical_times_us[static_cast<std::size_t>(p)];
            tl.events.push_back({base + lo, EventKind::window_open, Manifold::ground,
                                 Axis::x, 1, Transition::b, window_index, p, false});
            tl.events.push_back({base + hi, EventKind::window_close, Manifold::ground,
                                 Axis::x, 1, Transition::b, window_index, p, false});
            ++window_index;
        }
    }

    // basis-selection pi/2 at the final refocusing boundary (sequence end)
    tl.events.push_back({tl.total_us, EventKind::mw_half_pi, Manifold::ground,
                         Axis::y, 1, Transition::b, 0, 0, true});

    std::stable_sort(tl.events.begin(), tl.events.end(),
                     [](const PulseEvent& a, const PulseEvent& b) {
                         return a.time_us < b.time_us;
                     });
    return tl;
}

std::vector<double> toggling_flip_times(const PulseTimeline& timeline, Manifold m) {
    return timeline.pi_times(m);
}

int toggling_sign(const std::vector<double>& flip_times, double t_us) {
    const auto it = std::upper_bound(flip_times.begin(), flip_times.end(), t_us);
    const auto flips = static_cast<std::size_t>(it - flip_times.begin());
    return (flips % 2 == 0) ? 1 : -1;
}

double toggled_integral(const PulseTimeline& timeline, Manifold manifold,
                        const NoiseTrajectory& noise, double a_us, double b_us) {
    const auto flips = toggling_flip_times(timeline, manifold);
    double total = 0.0;
    double cursor = a_us;
    for (double f : flips) {
        if (f <= a_us) continue;
        if (f >= b_us) break;
        total += toggling_sign(flips, cursor) * noise.integrate(cursor, f);
        cursor = f;
    }
    total += toggling_sign(flips, cursor) * noise.integrate(cursor, b_us);
    return total;
}

double accumulated_phase(const PulseTimeline& timeline, const NoiseTrajectory& noise,
                         double emission_delay_us, WhichPulse which) {
    const double pulse_t =
        timeline.optical_times_us[which == WhichPulse::first ? 0 : 1];
    const double t_em = pulse_t + emission_delay_us;
    if (emission_delay_us < 0.0 || t_em > timeline.total_us + 1e-12)
        throw EmissionOutOfRange("emission time outside the sequence");

    const auto ground_flips = toggling_flip_times(timeline, Manifold::ground);
    const auto excited_flips = toggling_flip_times(timeline, Manifold::excited);
    const double r = noise.ratio_r();

    // segment boundaries: all flips of either manifold plus the window edges
    std::set<double> cuts(ground_flips.begin(), ground_flips.end());
    cuts.insert(excited_flips.begin(), excited_flips.end());
    cuts.insert(pulse_t);
    cuts.insert(t_em);
    cuts.insert(timeline.total_us);
    for (double bp : noise.breakpoints())
        if (bp > 0.0 && bp < timeline.total_us) cuts.insert(bp);

    // branch level sign at t = 0: first-pulse branch starts in down_g
    double sign = (which == WhichPulse::first) ? -1.0 : 1.0;
    double phase = 0.0;
    double cursor = 0.0;
    for (double cut : cuts) {
        if (cut <= 0.0) continue;
        if (cut > timeline.total_us) break;
        const double mid = 0.5 * (cursor + cut);
        const bool excited = (mid >= pulse_t && mid < t_em);
        const double mu = excited ? r : 1.0;
        phase += -0.5 * sign * mu * noise.integrate(cursor, cut);
        // flips at the segment's right edge, from the active manifold there
        const bool excited_at_cut = (cut > pulse_t && cut <= t_em);
        const auto& flips = excited_at_cut ? excited_flips : ground_flips;
        for (double f : flips)
            if (f == cut) sign = -sign;
        cursor = cut;
        if (cursor >= timeline.total_us) break;
    }
    return phase;
}

TimelineDiagnostics validate_refocusing(const PulseTimeline& timeline,
                                        std::span<const double> forbidden_tau_us,
                                        double forbidden_tol_us, double refocus_tol_us) {
    TimelineDiagnostics diag;
    const double tau = timeline.tau_us;

    const auto ground = timeline.pi_times(Manifold::ground);
    for (std::size_t k = 0; k < ground.size(); ++k) {
        const double expected = (2.0 * static_cast<double>(k) + 1.0) * tau;
        if (std::abs(ground[k] - expected) > refocus_tol_us)
            diag.errors.push_back("ground pi pulse " + std::to_string(k) +
                                  " off the (tau-pi-tau) grid");
    }

    for (double t_opt : timeline.optical_times()) {
        const double units = t_opt / (2.0 * tau);
        if (std::abs(units - std::round(units)) * 2.0 * tau > refocus_tol_us)
            diag.errors.push_back("optical pulse at " + std::to_string(t_opt) +
                                  " us is not at a refocusing point");
    }

    const double spacing =
        (timeline.optical_times_us[1] - timeline.optical_times_us[0]) / (2.0 * tau);
    if (static_cast<int>(std::round(spacing)) % 2 == 0)
        diag.errors.push_back("optical pulses separated by an even number of pi pulses");

    // ideal toggling must integrate to zero over the full sequence
    NoiseTrajectory unit;
    unit.add_segment(0.0, 1.0);
    const double residue =
        toggled_integral(timeline, Manifold::ground, unit, 0.0, timeline.total_us);
    if (std::abs(residue) > refocus_tol_us)
        diag.errors.push_back("ground toggling function has nonzero mean");

    for (double bad : forbidden_tau_us)
        if (std::abs(tau - bad) <= forbidden_tol_us)
            diag.warnings.push_back("ForbiddenTau: tau = " + std::to_string(tau) +
                                    " us hits a configured nuclear-bath resonance");
    return diag;
}

std::string export_table(const PulseTimeline& timeline) {
    std::string out = "time_us\tkind\tmanifold\taxis\n";
    char line[128];
    for (const auto& e : timeline.events) {
        const char* kind = nullptr;
        switch (e.kind) {
            case EventKind::mw_pi: kind = "mw_pi"; break;
            case EventKind::mw_half_pi: kind = e.basis_select ? "mw_half_pi_basis" : "mw_half_pi"; break;
            case EventKind::optical_pi: kind = "optical_pi"; break;
            case EventKind::window_open: kind = "window_open"; break;
            case EventKind::window_close: kind = "window_close"; break;
        }
        const char* manifold = "-";
        const char* axis = "-";
        if (e.kind == EventKind::mw_pi || e.kind == EventKind::mw_half_pi) {
            manifold = e.manifold == Manifold::ground ? "g" : "e";
            if (e.axis == Axis::x) axis = e.sign > 0 ? "X" : "-X";
            else axis = e.sign > 0 ? "Y" : "-Y";
        } else if (e.kind == EventKind::optical_pi) {
            manifold = e.transition == Transition::b ? "B" : "A";
        }
        std::snprintf(line, sizeof(line), "%.6f\t%s\t%s\t%s\n", e.time_us, kind,
                      manifold, axis);
        out += line;
    }
    return out;
}

}  // namespace spinphoton
