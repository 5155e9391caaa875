#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "almosc/equation.hpp"

namespace almosc {

// Evidence thresholds. A finite window can only support, never prove, an
// asymptotic claim, so every verdict below is "evidence" by construction.
inline constexpr double kDefaultClassifyTol = 0.02;

// Everything measurable about one sequence window [n_a, n_b]: where the signs
// flip, how far apart the flips are, and how the magnitude decays by quarters.
struct WindowReport {
    long n_a = 0, n_b = 0;
    std::vector<long> sign_changes; // m listed iff x_m * x_{m+1} <= 0, m < n_b
    long max_gap = 0;               // window length when fewer than two changes
    long gap_bound = 0;
    double tail_max = 0.0;          // max |x| over the final quarter
    std::vector<double> quarter_max;
    bool quarters_nonincreasing = false;
    bool evidence = false; // meaning depends on which report produced it
};

enum class VerdictTag {
    XOscillatoryEvidence,
    DeltaXOscillatoryEvidence,
    TendsToZeroEvidence,
    Inconclusive,
};
std::string to_string(VerdictTag tag);

struct Verdict {
    VerdictTag tag = VerdictTag::Inconclusive;
    WindowReport x_report, dx_report, zero_report;
};

// evidence := last sign change in the final quarter AND max_gap <= gap_bound.
// gap_bound <= 0 selects the default, (window length)/8. Window length >= 4.
WindowReport oscillation_report(const SequenceView& seq, long n_a, long n_b, long gap_bound = 0);

// evidence := tail_max < tol AND the per-quarter maxima never increase.
// Window length >= 8.
WindowReport tends_to_zero_report(const SequenceView& seq, long n_a, long n_b, double tol);

// First matching tag in the fixed order x-oscillatory, Δx-oscillatory,
// tends-to-zero, Inconclusive; all three reports are attached regardless.
// The trajectory must cover [n_a, n_b + 1] (Δx needs one extra index).
Verdict classify_almost_oscillatory(const Trajectory& traj, long n_a, long n_b,
                                    double tol = kDefaultClassifyTol);

nlohmann::ordered_json to_json(const WindowReport& report);
nlohmann::ordered_json to_json(const Verdict& verdict);

} // namespace almosc
