#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "almosc/equation.hpp"

namespace almosc {

// Weight sequence and constants entering the divergence criteria. d and M are
// the "suitable constants" of the criteria displays; R bounds r_n from above
// (computed as the empirical window maximum when left unset).
struct CriterionParams {
    SeqExprPtr p = seq_literal(Rational(1));
    Value d = Value(1);
    Value M = Value(1);
    std::optional<Value> R; // unset = auto
};

enum class GrowthVerdict { DivergentEvidence, BoundedEvidence, Inconclusive };
std::string to_string(GrowthVerdict v);

// Finite-horizon growth heuristics. limsup = infinity is undecidable from
// finitely many terms, so the verdict is evidence only and the raw table is
// always exposed alongside it.
inline constexpr double kGrowthAbsThreshold = 1.0;
inline constexpr double kGrowthSlopeThreshold = 1e-3;
inline constexpr double kBoundedRelThreshold = 1e-6;

struct CriterionReport {
    long N = 0;
    std::vector<double> S; // S[i-1] = S(i), i = 1..N
    double last = 0.0;
    double slope = 0.0;                 // least-squares slope of S vs n, final half
    std::optional<double> loglog_slope; // of log S vs log n where S > 0, final half
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
};

// min over x > 0 of F(x) = a*x^(alpha-gamma) + b/x^gamma, in closed form:
// alpha * a^(gamma/alpha) * b^(1-gamma/alpha) /
//   (gamma^(gamma/alpha) * (alpha-gamma)^(1-gamma/alpha)).
// Requires a, b >= 0 and alpha > gamma >= 1.
Value f_min(const Value& a, const Value& b, const OddRatio& alpha, const OddRatio& gamma);

// x^gamma - y^gamma >= (x - y)^gamma for x >= y >= 0, gamma >= 1; exposed as a
// property-test oracle, expected true on the whole stated domain.
bool power_diff_inequality_holds(const Value& x, const Value& y, const OddRatio& gamma);

// Q*_n = d^(alpha-gamma) * q_n / (1+c)^alpha - d^(-gamma) * e_n. May be negative.
Value q_star(const EquationSpec& spec, const Value& d, long n, Mode mode);

// Q**_n = alpha * q_n^(gamma/alpha) * e_n^(1-gamma/alpha) /
//   (gamma^(gamma/alpha) * (alpha-gamma)^(1-gamma/alpha) * (1+c)^gamma);
// equals f_min(q_n/(1+c)^alpha, e_n, alpha, gamma), a rearrangement the tests
// cross-check. Nonnegative for nonnegative q, e.
Value q_dstar(const EquationSpec& spec, long n, Mode mode);

// Q_n = min(Q*_n, Q**_n).
Value q_min(const EquationSpec& spec, const Value& d, long n, Mode mode);

// S1(n) = sum_{i=1}^n (p_i*Q_i - R*(Delta p_i)^2 / (4*p_i)). Requires the
// applicability flag (alpha > gamma >= 1) and positive p, q, e on the window.
CriterionReport criterion1_series(const EquationSpec& spec, const CriterionParams& params,
                                  long N, Mode mode);

enum class SumSign { Plus, Minus };

// S2(n) = sum_{i=1}^n sum_{j=1}^{i-1} (M*q_j +/- e_j)^(1/gamma), each inner
// term through the odd real root (negative values pass through, not clamped).
CriterionReport criterion2_series(const EquationSpec& spec, const CriterionParams& params,
                                  SumSign sign, long N, Mode mode);

// The divergence condition on the double series requires both sign choices to
// diverge, so the combined verdict is the weakest of the two
// (Bounded < Inconclusive < Divergent).
GrowthVerdict combine_verdicts(GrowthVerdict a, GrowthVerdict b);

// w_n = p_n * r_n * (Delta z_n)^gamma / z_{n+1}^gamma, taken from the stored
// quasidifference. Throws EvalError when z_{n+1} = 0.
Value riccati_w(const EquationSpec& spec, const Trajectory& traj, const SeqExprPtr& p, long n);

struct RiccatiViolation {
    long n = 0;
    double lhs = 0.0;    // Delta w_n
    double rhs = 0.0;    // the claimed upper bound
    double margin = 0.0; // rhs - lhs; negative beyond tolerance = violation
};

struct RiccatiCheck {
    long lo = 0, hi = 0;
    long checked = 0;
    std::vector<long> skipped; // preconditions failed there; excluded, not errors
    std::vector<RiccatiViolation> violations;
    bool no_applicable_indices() const { return checked == 0; }
};

// For each eligible n in [lo, hi] checks
//   Delta w_n <= -p_n*Q*_n + (Delta p_n / p_{n+1})*w_{n+1}
//                - (p_n / (p_{n+1}^2 * r_{n+1})) * w_{n+1}^2
// within tol. Eligible means the positive-increasing regime holds at n:
// x_n > 0, Delta x_n > 0, d <= z_{n+1} <= z_{n+2}, z_{n+1} <= (1+c)*x_{n+1},
// and q_n, e_n >= 0. Other indices land in `skipped`.
RiccatiCheck riccati_inequality_check(const EquationSpec& spec, const Trajectory& traj,
                                      const CriterionParams& params, long lo, long hi,
                                      double tol = kDefaultTol);

// Same check against caller-supplied w values covering [lo, hi+1] (w_start =
// index of w.front()); lets tests replay the check with perturbed w.
RiccatiCheck riccati_inequality_check_with(const EquationSpec& spec, const Trajectory& traj,
                                           const CriterionParams& params, long lo, long hi,
                                           const std::vector<Value>& w, long w_start,
                                           double tol = kDefaultTol);

// Specialization to the unforced-power Sturm-Liouville form: c := 0,
// gamma := 1, under which the Q displays collapse to
//   Q*_n = (d^alpha * q_n - e_n) / d,
//   Q**_n = alpha * q_n^(1/alpha) * e_n^(1-1/alpha) / (alpha-1)^(1-1/alpha).
// The report records a pointwise comparison of the general formulas against
// these collapsed displays over [lo, hi]: exact for Q*, within 1e-12 relative
// for Q** (whose fractional powers are irrational in general).
inline constexpr double kSpecializeTol = 1e-12;

struct SturmLiouvilleReport {
    EquationSpec specialized;
    long lo = 0, hi = 0;
    bool q_star_equal = false;
    long q_star_first_mismatch = 0; // meaningful when !q_star_equal
    double q_dstar_max_rel_gap = 0.0;
    bool q_dstar_close = false;
    bool ok() const { return q_star_equal && q_dstar_close; }
};

SturmLiouvilleReport sturm_liouville_specialize(const EquationSpec& spec, const Value& d,
                                                long lo, long hi);

// Trajectory-informed defaults: d = min stored z (when positive, else 1);
// M = (tail minimum of x)^alpha when x stays positive and is nonincreasing
// over the final quarter (else 1).
Value default_d(const Trajectory& traj);
Value default_M(const EquationSpec& spec, const Trajectory& traj);

nlohmann::ordered_json to_json(const CriterionReport& report);
nlohmann::ordered_json to_json(const RiccatiCheck& check);
void write_criterion_csv(const CriterionReport& report, std::ostream& os);

} // namespace almosc
