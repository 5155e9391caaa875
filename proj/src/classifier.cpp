#include "almosc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "almosc/errors.hpp"

namespace almosc {

std::string to_string(VerdictTag tag) {
    switch (tag) {
    case VerdictTag::XOscillatoryEvidence: return "XOscillatoryEvidence";
    case VerdictTag::DeltaXOscillatoryEvidence: return "DeltaXOscillatoryEvidence";
    case VerdictTag::TendsToZeroEvidence: return "TendsToZeroEvidence";
    case VerdictTag::Inconclusive: return "Inconclusive";
    }
    throw InputError("unknown verdict tag");
}

namespace {

void require_window(const SequenceView& seq, long n_a, long n_b, long min_len) {
    const long len = n_b - n_a + 1;
    if (len < min_len) {
        std::ostringstream msg;
        msg << "window [" << n_a << ", " << n_b << "] is too short (need length >= " << min_len
            << ")";
        throw InputError(msg.str());
    }
    if (!seq.has(n_a) || !seq.has(n_b))
        throw InputError("sequence does not cover the requested window");
}

// All descriptive fields; the two public reports differ only in the evidence
// rule they apply on top.
WindowReport window_stats(const SequenceView& seq, long n_a, long n_b) {
    WindowReport rep;
    rep.n_a = n_a;
    rep.n_b = n_b;
    const long len = n_b - n_a + 1;

    for (long m = n_a; m < n_b; ++m)
        if (seq.at(m).sign() * seq.at(m + 1).sign() <= 0)
            rep.sign_changes.push_back(m);
    if (rep.sign_changes.size() < 2) {
        rep.max_gap = len;
    } else {
        for (size_t i = 1; i < rep.sign_changes.size(); ++i)
            rep.max_gap = std::max(rep.max_gap, rep.sign_changes[i] - rep.sign_changes[i - 1]);
    }

    for (int quarter = 0; quarter < 4; ++quarter) {
        const long lo = n_a + len * quarter / 4;
        const long hi = n_a + len * (quarter + 1) / 4 - 1;
        double peak = 0.0;
        for (long m = lo; m <= hi; ++m)
            peak = std::max(peak, std::fabs(seq.at(m).to_double()));
        rep.quarter_max.push_back(peak);
    }
    rep.tail_max = rep.quarter_max.back();
    rep.quarters_nonincreasing = true;
    for (size_t i = 1; i < rep.quarter_max.size(); ++i)
        if (rep.quarter_max[i] > rep.quarter_max[i - 1])
            rep.quarters_nonincreasing = false;
    return rep;
}

} // namespace

WindowReport oscillation_report(const SequenceView& seq, long n_a, long n_b, long gap_bound) {
    require_window(seq, n_a, n_b, 4);
    WindowReport rep = window_stats(seq, n_a, n_b);
    const long len = n_b - n_a + 1;
    rep.gap_bound = gap_bound > 0 ? gap_bound : len / 8;
    const long last_quarter = n_a + len * 3 / 4;
    rep.evidence = !rep.sign_changes.empty() && rep.sign_changes.back() >= last_quarter &&
                   rep.max_gap <= rep.gap_bound;
    return rep;
}

WindowReport tends_to_zero_report(const SequenceView& seq, long n_a, long n_b, double tol) {
    require_window(seq, n_a, n_b, 8);
    WindowReport rep = window_stats(seq, n_a, n_b);
    rep.evidence = rep.tail_max < tol && rep.quarters_nonincreasing;
    return rep;
}

Verdict classify_almost_oscillatory(const Trajectory& traj, long n_a, long n_b, double tol) {
    if (n_a < traj.x_begin() || n_b + 1 >= traj.x_end())
        throw InputError("trajectory does not cover the window plus one index");

    std::vector<Value> dx;
    dx.reserve(static_cast<size_t>(n_b - n_a + 1));
    for (long m = n_a; m <= n_b; ++m)
        dx.push_back(traj.x(m + 1) - traj.x(m));
    const SequenceView dx_view{n_a, dx};
    const SequenceView x_view = traj.x_view();

    Verdict v;
    v.x_report = oscillation_report(x_view, n_a, n_b);
    v.dx_report = oscillation_report(dx_view, n_a, n_b);
    v.zero_report = tends_to_zero_report(x_view, n_a, n_b, tol);
    if (v.x_report.evidence)
        v.tag = VerdictTag::XOscillatoryEvidence;
    else if (v.dx_report.evidence)
        v.tag = VerdictTag::DeltaXOscillatoryEvidence;
    else if (v.zero_report.evidence)
        v.tag = VerdictTag::TendsToZeroEvidence;
    else
        v.tag = VerdictTag::Inconclusive;
    return v;
}

nlohmann::ordered_json to_json(const WindowReport& report) {
    nlohmann::ordered_json j;
    j["window"] = {report.n_a, report.n_b};
    j["sign_changes"] = report.sign_changes;
    j["max_gap"] = report.max_gap;
    j["gap_bound"] = report.gap_bound;
    j["tail_max"] = report.tail_max;
    j["quarter_max"] = report.quarter_max;
    j["quarters_nonincreasing"] = report.quarters_nonincreasing;
    j["evidence"] = report.evidence;
    return j;
}

nlohmann::ordered_json to_json(const Verdict& verdict) {
    nlohmann::ordered_json j;
    j["tag"] = to_string(verdict.tag);
    j["reports"]["x"] = to_json(verdict.x_report);
    j["reports"]["dx"] = to_json(verdict.dx_report);
    j["reports"]["zero"] = to_json(verdict.zero_report);
    return j;
}

} // namespace almosc
