#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "almosc/seq_expr.hpp"

namespace almosc {

// One instance of the difference equation
//
//   Delta( r_n * (Delta(x_n + c*x_{n-k}))^gamma ) + q_n * x_{n+1}^alpha = e_n
//
// with r, q, e positive sequences, c >= 0, k >= 0, and gamma, alpha ratios of
// odd positive integers.
struct EquationSpec {
    SeqExprPtr r, q, e;
    Rational c;
    long k = 0;
    OddRatio gamma, alpha;

    // alpha > gamma >= 1, the hypothesis the divergence criteria require.
    bool criteria_applicable() const;

    // Throws InputError on c < 0 / k < 0 / missing expressions.
    void validate() const;
};

// A window of sequence values beginning at index `start`.
struct SequenceView {
    long start = 1;
    std::span<const Value> values;

    bool has(long n) const {
        return n >= start && n - start < static_cast<long>(values.size());
    }
    const Value& at(long n) const;
    long end() const { return start + static_cast<long>(values.size()); } // one past
};

// x_{n0}, ..., x_{n0+k+1}: the minimal data determining the recursion.
struct InitialData {
    long n0 = 1;
    std::vector<Value> x_init;
};

struct SimOptions {
    Mode mode = Mode::Exact;
    // In exact mode, a quasidifference ratio whose gamma-root is irrational
    // either degrades that value to float (true) or raises EvalError (false).
    bool allow_root_fallback = false;
    bool self_check = true;  // recompute residuals after simulating
    double tol = kDefaultTol; // float-mode self-check tolerance
};

inline constexpr long kMaxHorizon = 1000000;
inline constexpr long kDefaultHorizon = 1000;

// Computed solution arrays. x runs on [n0, N+1]; z_n = x_n + c*x_{n-k},
// dz_n = z_{n+1} - z_n and qd_n = r_n*(dz_n)^gamma run on [n0+k, ...].
// Immutable once returned by simulate().
class Trajectory {
public:
    Trajectory(long n0, long k, Mode mode, std::vector<Value> x, std::vector<Value> z,
               std::vector<Value> dz, std::vector<Value> qd);

    Mode mode() const { return mode_; }
    long n0() const { return n0_; }
    long k() const { return k_; }

    long x_begin() const { return n0_; }
    long x_end() const { return n0_ + static_cast<long>(x_.size()); } // one past
    long z_begin() const { return n0_ + k_; }
    long z_end() const { return z_begin() + static_cast<long>(z_.size()); }
    long dz_end() const { return z_begin() + static_cast<long>(dz_.size()); }
    long qd_end() const { return z_begin() + static_cast<long>(qd_.size()); }

    // Indices where the equation itself is checkable: [interior_begin, interior_end].
    long interior_begin() const { return z_begin(); }
    long interior_end() const { return qd_end() - 2; }

    const Value& x(long n) const;
    const Value& z(long n) const;
    const Value& dz(long n) const;
    const Value& qd(long n) const;

    SequenceView x_view() const { return {n0_, x_}; }

    // CSV with header n,x,z,dz,qd; cells are exact p/q strings or decimals
    // per the trajectory's mode, empty where a column is not defined.
    void write_csv(std::ostream& os) const;

private:
    long n0_, k_;
    Mode mode_;
    std::vector<Value> x_, z_, dz_, qd_;
};

// Delta(r_n*(Delta z_n)^gamma) + q_n*x_{n+1}^alpha - e_n for the given window;
// zero iff the window satisfies the equation at n. The window must supply
// x at n-k, n+1-k, n+2-k, n, n+1, n+2.
Value residual(const EquationSpec& spec, const SequenceView& x, long n, Mode mode);

// Forward recursion from the initial data up to x_{N+1}. The returned
// trajectory satisfies residual == 0 at every interior index; with
// opts.self_check this is recomputed and enforced (VerificationError).
Trajectory simulate(const EquationSpec& spec, const InitialData& init, long horizon,
                    const SimOptions& opts = {});

struct ResidualCheck {
    double max_abs = 0.0;
    long argmax = 0;
    bool exact_zero = true; // every interior residual is exactly zero (exact mode only)
    long first_nonzero = 0;
};
ResidualCheck residual_check(const EquationSpec& spec, const Trajectory& traj);

// qd_n - qd_{n2} - sum_{i=n2}^{n-1}(e_i - q_i*x_{i+1}^alpha); identically zero
// along any trajectory of the equation.
Value telescoping_gap(const EquationSpec& spec, const Trajectory& traj, long n2, long n);

} // namespace almosc
