#include "almosc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "almosc/errors.hpp"

namespace almosc {

std::string to_string(GrowthVerdict v) {
    switch (v) {
    case GrowthVerdict::DivergentEvidence: return "DivergentEvidence";
    case GrowthVerdict::BoundedEvidence: return "BoundedEvidence";
    case GrowthVerdict::Inconclusive: return "Inconclusive";
    }
    throw InputError("unknown growth verdict");
}

namespace {

void require_applicable(const EquationSpec& spec) {
    if (!spec.criteria_applicable())
        throw InputError("divergence criteria require alpha > gamma >= 1");
}

void require_positive_on(const SeqExprPtr& expr, long lo, long hi, const char* name) {
    const PositivityScan scan = scan_positive(expr, lo, hi);
    if (!scan.all_positive) {
        std::ostringstream msg;
        msg << name << " must be positive on the window; first violation at n = "
            << scan.first_violation;
        throw InputError(msg.str());
    }
}

void require_positive_const(const Value& v, const char* name) {
    if (v.sign() <= 0) {
        std::ostringstream msg;
        msg << name << " must be positive";
        throw InputError(msg.str());
    }
}

} // namespace

Value f_min(const Value& a, const Value& b, const OddRatio& alpha, const OddRatio& gamma) {
    if (!(alpha > gamma) || !(gamma >= OddRatio(1, 1)))
        throw InputError("f_min requires alpha > gamma >= 1");
    if (a.sign() < 0 || b.sign() < 0)
        throw InputError("f_min requires a, b >= 0");
    const Rational ga = gamma.to_rational() / alpha.to_rational();
    const Rational one_minus_ga = Rational(1) - ga;
    const Value numer =
        Value(alpha.to_rational()) * pos_pow(a, ga) * pos_pow(b, one_minus_ga);
    const Value denom = pos_pow(Value(gamma.to_rational()), ga) *
                        pos_pow(Value(alpha.to_rational() - gamma.to_rational()), one_minus_ga);
    return numer / denom;
}

bool power_diff_inequality_holds(const Value& x, const Value& y, const OddRatio& gamma) {
    if (y.sign() < 0 || x < y)
        throw InputError("power difference inequality requires x >= y >= 0");
    if (gamma < OddRatio(1, 1))
        throw InputError("power difference inequality requires gamma >= 1");
    return odd_ratio_pow(x, gamma) - odd_ratio_pow(y, gamma) >= odd_ratio_pow(x - y, gamma);
}

Value q_star(const EquationSpec& spec, const Value& d, long n, Mode mode) {
    require_applicable(spec);
    require_positive_const(d, "d");
    const Rational a = spec.alpha.to_rational();
    const Rational g = spec.gamma.to_rational();
    const Value qn = eval_seq(spec.q, n, mode);
    const Value en = eval_seq(spec.e, n, mode);
    const Value one_plus_c = Value(Rational(1) + spec.c);
    return pos_pow(d, a - g) * qn / pos_pow(one_plus_c, a) - pos_pow(d, -g) * en;
}

Value q_dstar(const EquationSpec& spec, long n, Mode mode) {
    require_applicable(spec);
    const Rational a = spec.alpha.to_rational();
    const Rational g = spec.gamma.to_rational();
    const Rational ga = g / a;
    const Rational one_minus_ga = Rational(1) - ga;
    const Value qn = eval_seq(spec.q, n, mode);
    const Value en = eval_seq(spec.e, n, mode);
    const Value numer = Value(a) * pos_pow(qn, ga) * pos_pow(en, one_minus_ga);
    const Value denom = pos_pow(Value(g), ga) * pos_pow(Value(a - g), one_minus_ga) *
                        pos_pow(Value(Rational(1) + spec.c), g);
    return numer / denom;
}

Value q_min(const EquationSpec& spec, const Value& d, long n, Mode mode) {
    const Value s = q_star(spec, d, n, mode);
    const Value ss = q_dstar(spec, n, mode);
    return s <= ss ? s : ss;
}

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t m = xs.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double num = 0, den = 0;
    for (size_t i = 0; i < m; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
}

CriterionReport make_report(std::vector<double> table) {
    CriterionReport rep;
    rep.N = static_cast<long>(table.size());
    rep.S = std::move(table);
    rep.last = rep.S.empty() ? 0.0 : rep.S.back();

    const long half = rep.N / 2;
    const double s_half = half >= 1 ? rep.S[static_cast<size_t>(half - 1)] : 0.0;
    std::vector<double> ns, ss, lns, lss;
    for (long n = half + 1; n <= rep.N; ++n) {
        const double s = rep.S[static_cast<size_t>(n - 1)];
        ns.push_back(static_cast<double>(n));
        ss.push_back(s);
        if (s > 0) {
            lns.push_back(std::log(static_cast<double>(n)));
            lss.push_back(std::log(s));
        }
    }
    if (ns.size() >= 2)
        rep.slope = ls_slope(ns, ss);
    if (lns.size() >= 2)
        rep.loglog_slope = ls_slope(lns, lss);

    // Divergence wins over boundedness when the scale makes both fire.
    if (rep.last > s_half + kGrowthAbsThreshold && rep.slope > kGrowthSlopeThreshold)
        rep.verdict = GrowthVerdict::DivergentEvidence;
    else if (rep.last - s_half < kBoundedRelThreshold * (1.0 + std::fabs(rep.last)))
        rep.verdict = GrowthVerdict::BoundedEvidence;
    else
        rep.verdict = GrowthVerdict::Inconclusive;
    return rep;
}

} // namespace

CriterionReport criterion1_series(const EquationSpec& spec, const CriterionParams& params,
                                  long N, Mode mode) {
    require_applicable(spec);
    if (N < 1 || N > kMaxHorizon)
        throw InputError("series length must be in [1, 10^6]");
    require_positive_on(params.p, 1, N + 1, "p");
    require_positive_on(spec.q, 1, N, "q");
    require_positive_on(spec.e, 1, N, "e");
    require_positive_const(params.d, "d");

    Value R;
    if (params.R) {
        R = *params.R;
        require_positive_const(R, "R");
    } else {
        R = eval_seq(spec.r, 1, mode);
        for (long n = 2; n <= N + 1; ++n) {
            const Value rn = eval_seq(spec.r, n, mode);
            if (rn > R)
                R = rn;
        }
    }

    std::vector<double> table;
    table.reserve(static_cast<size_t>(N));
    Value sum(0);
    Value p_cur = eval_seq(params.p, 1, mode);
    for (long i = 1; i <= N; ++i) {
        const Value p_next = eval_seq(params.p, i + 1, mode);
        const Value dp = p_next - p_cur;
        const Value term =
            p_cur * q_min(spec, params.d, i, mode) - R * dp * dp / (Value(4) * p_cur);
        sum = sum + term;
        table.push_back(sum.to_double());
        p_cur = p_next;
    }
    return make_report(std::move(table));
}

CriterionReport criterion2_series(const EquationSpec& spec, const CriterionParams& params,
                                  SumSign sign, long N, Mode mode) {
    require_applicable(spec);
    if (N < 1 || N > kMaxHorizon)
        throw InputError("series length must be in [1, 10^6]");
    if (N > 1) {
        require_positive_on(spec.q, 1, N - 1, "q");
        require_positive_on(spec.e, 1, N - 1, "e");
    }
    require_positive_const(params.M, "M");

    std::vector<double> table;
    table.reserve(static_cast<size_t>(N));
    Value outer(0), inner(0);
    for (long i = 1; i <= N; ++i) {
        // inner = sum_{j=1}^{i-1} (M q_j +/- e_j)^(1/gamma), extended by one
        // term per step.
        if (i >= 2) {
            const long j = i - 1;
            const Value qj = eval_seq(spec.q, j, mode);
            const Value ej = eval_seq(spec.e, j, mode);
            const Value base = sign == SumSign::Plus ? params.M * qj + ej : params.M * qj - ej;
            inner = inner + odd_ratio_root(base, spec.gamma);
        }
        outer = outer + inner;
        table.push_back(outer.to_double());
    }
    return make_report(std::move(table));
}

GrowthVerdict combine_verdicts(GrowthVerdict a, GrowthVerdict b) {
    if (a == GrowthVerdict::BoundedEvidence || b == GrowthVerdict::BoundedEvidence)
        return GrowthVerdict::BoundedEvidence;
    if (a == GrowthVerdict::Inconclusive || b == GrowthVerdict::Inconclusive)
        return GrowthVerdict::Inconclusive;
    return GrowthVerdict::DivergentEvidence;
}

Value riccati_w(const EquationSpec& spec, const Trajectory& traj, const SeqExprPtr& p, long n) {
    const Value& zn1 = traj.z(n + 1);
    if (zn1.sign() == 0) {
        std::ostringstream msg;
        msg << "Riccati weight undefined: z = 0 at n+1 = " << n + 1;
        throw EvalError(msg.str());
    }
    return eval_seq(p, n, traj.mode()) * traj.qd(n) / odd_ratio_pow(zn1, spec.gamma);
}

namespace {

// The positive-increasing regime the inequality's derivation assumes,
// restated as pointwise-checkable guards.
bool riccati_eligible(const EquationSpec& spec, const Trajectory& traj, const Value& d, long n,
                      Mode mode) {
    if (traj.x(n).sign() <= 0)
        return false;
    if ((traj.x(n + 1) - traj.x(n)).sign() <= 0)
        return false;
    const Value& zn1 = traj.z(n + 1);
    if (zn1 < d || traj.z(n + 2) < zn1)
        return false;
    if (Value(Rational(1) + spec.c) * traj.x(n + 1) < zn1)
        return false;
    return eval_seq(spec.q, n, mode).sign() >= 0 && eval_seq(spec.e, n, mode).sign() >= 0;
}

} // namespace

RiccatiCheck riccati_inequality_check_with(const EquationSpec& spec, const Trajectory& traj,
                                           const CriterionParams& params, long lo, long hi,
                                           const std::vector<Value>& w, long w_start,
                                           double tol) {
    require_applicable(spec);
    if (lo > hi)
        throw InputError("empty Riccati range");
    if (lo < traj.interior_begin() || hi > traj.interior_end())
        throw InputError("Riccati range outside the trajectory interior");
    if (w_start > lo || w_start + static_cast<long>(w.size()) <= hi + 1)
        throw InputError("w values do not cover the Riccati range");
    require_positive_on(params.p, lo, hi + 1, "p");

    const Mode mode = traj.mode();
    RiccatiCheck out;
    out.lo = lo;
    out.hi = hi;
    auto w_at = [&](long n) -> const Value& { return w[static_cast<size_t>(n - w_start)]; };
    for (long n = lo; n <= hi; ++n) {
        if (!riccati_eligible(spec, traj, params.d, n, mode)) {
            out.skipped.push_back(n);
            continue;
        }
        const Value pn = eval_seq(params.p, n, mode);
        const Value pn1 = eval_seq(params.p, n + 1, mode);
        const Value rn1 = eval_seq(spec.r, n + 1, mode);
        const Value& wn1 = w_at(n + 1);
        const Value lhs = wn1 - w_at(n);
        const Value rhs = Value(0) - pn * q_star(spec, params.d, n, mode) +
                          (pn1 - pn) / pn1 * wn1 - pn / (pn1 * pn1 * rn1) * wn1 * wn1;
        ++out.checked;
        const double lhs_d = lhs.to_double();
        const double rhs_d = rhs.to_double();
        if (lhs_d > rhs_d + tol)
            out.violations.push_back({n, lhs_d, rhs_d, rhs_d - lhs_d});
    }
    return out;
}

RiccatiCheck riccati_inequality_check(const EquationSpec& spec, const Trajectory& traj,
                                      const CriterionParams& params, long lo, long hi,
                                      double tol) {
    if (lo > hi || lo < traj.interior_begin() || hi > traj.interior_end())
        throw InputError("Riccati range outside the trajectory interior");
    std::vector<Value> w;
    w.reserve(static_cast<size_t>(hi + 2 - lo));
    for (long n = lo; n <= hi + 1; ++n)
        w.push_back(riccati_w(spec, traj, params.p, n));
    return riccati_inequality_check_with(spec, traj, params, lo, hi, w, lo, tol);
}

SturmLiouvilleReport sturm_liouville_specialize(const EquationSpec& spec, const Value& d,
                                                long lo, long hi) {
    if (lo > hi || lo < 1)
        throw InputError("specialization window must satisfy 1 <= lo <= hi");
    require_positive_const(d, "d");

    SturmLiouvilleReport rep;
    rep.specialized = spec;
    rep.specialized.c = Rational(0);
    rep.specialized.gamma = OddRatio(1, 1);
    rep.lo = lo;
    rep.hi = hi;
    if (!(rep.specialized.alpha > rep.specialized.gamma))
        throw InputError("specialization needs alpha > 1");

    const Rational a = rep.specialized.alpha.to_rational();
    rep.q_star_equal = true;
    rep.q_dstar_close = true;
    for (long n = lo; n <= hi; ++n) {
        const Value qn = eval_seq(rep.specialized.q, n, Mode::Exact);
        const Value en = eval_seq(rep.specialized.e, n, Mode::Exact);

        const Value star_general = q_star(rep.specialized, d, n, Mode::Exact);
        const Value star_display = (pos_pow(d, a) * qn - en) / d;
        if (rep.q_star_equal && compare(star_general, star_display) != 0) {
            rep.q_star_equal = false;
            rep.q_star_first_mismatch = n;
        }

        const Value dstar_general = q_dstar(rep.specialized, n, Mode::Exact);
        const Value dstar_display = Value(a) * pos_pow(qn, Rational(1) / a) *
                                    pos_pow(en, Rational(1) - Rational(1) / a) /
                                    pos_pow(Value(a - 1), Rational(1) - Rational(1) / a);
        const double gap = std::fabs(dstar_general.to_double() - dstar_display.to_double()) /
                           (1.0 + std::fabs(dstar_display.to_double()));
        rep.q_dstar_max_rel_gap = std::max(rep.q_dstar_max_rel_gap, gap);
    }
    rep.q_dstar_close = rep.q_dstar_max_rel_gap <= kSpecializeTol;
    return rep;
}

Value default_d(const Trajectory& traj) {
    Value m = traj.z(traj.z_begin());
    for (long n = traj.z_begin() + 1; n < traj.z_end(); ++n)
        if (traj.z(n) < m)
            m = traj.z(n);
    return m.sign() > 0 ? m : Value(1);
}

Value default_M(const EquationSpec& spec, const Trajectory& traj) {
    const long lo = traj.x_begin(), hi = traj.x_end() - 1;
    for (long n = lo; n <= hi; ++n)
        if (traj.x(n).sign() <= 0)
            return Value(1);
    const long tail = hi - (hi - lo + 1) / 4;
    Value m = traj.x(tail);
    for (long n = tail; n < hi; ++n) {
        if (traj.x(n + 1) > traj.x(n))
            return Value(1); // not settling downward; keep the neutral default
        if (traj.x(n + 1) < m)
            m = traj.x(n + 1);
    }
    return odd_ratio_pow(m, spec.alpha);
}

nlohmann::ordered_json to_json(const CriterionReport& report) {
    nlohmann::ordered_json j;
    j["N"] = report.N;
    j["last"] = report.last;
    j["slope"] = report.slope;
    if (report.loglog_slope)
        j["loglog_slope"] = *report.loglog_slope;
    else
        j["loglog_slope"] = nullptr;
    j["verdict"] = to_string(report.verdict);
    j["S"] = report.S;
    return j;
}

nlohmann::ordered_json to_json(const RiccatiCheck& check) {
    nlohmann::ordered_json j;
    j["range"] = {check.lo, check.hi};
    j["checked"] = check.checked;
    j["skipped"] = check.skipped;
    j["violations"] = nlohmann::ordered_json::array();
    for (const RiccatiViolation& v : check.violations)
        j["violations"].push_back(
            {{"n", v.n}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"margin", v.margin}});
    if (check.no_applicable_indices())
        j["note"] = "no applicable indices";
    return j;
}

void write_criterion_csv(const CriterionReport& report, std::ostream& os) {
    os << "n,S\n";
    for (long n = 1; n <= report.N; ++n)
        os << n << ',' << Value(report.S[static_cast<size_t>(n - 1)]).to_string() << '\n';
}

} // namespace almosc
