#include "almosc/equation.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

#include "almosc/errors.hpp"

namespace almosc {

bool EquationSpec::criteria_applicable() const {
    return alpha > gamma && gamma >= OddRatio(1, 1);
}

void EquationSpec::validate() const {
    if (!r || !q || !e)
        throw InputError("equation spec: r, q and e must all be set");
    if (sgn(c) < 0)
        throw InputError("equation spec: c must be nonnegative");
    if (k < 0)
        throw InputError("equation spec: k must be nonnegative");
}

const Value& SequenceView::at(long n) const {
    if (!has(n)) {
        std::ostringstream msg;
        msg << "sequence window [" << start << ", " << end() << ") has no index " << n;
        throw InputError(msg.str());
    }
    return values[static_cast<size_t>(n - start)];
}

Trajectory::Trajectory(long n0, long k, Mode mode, std::vector<Value> x, std::vector<Value> z,
                       std::vector<Value> dz, std::vector<Value> qd)
    : n0_(n0), k_(k), mode_(mode), x_(std::move(x)), z_(std::move(z)), dz_(std::move(dz)),
      qd_(std::move(qd)) {}

namespace {

const Value& indexed(const std::vector<Value>& v, long begin, long n, const char* what) {
    const long i = n - begin;
    if (i < 0 || i >= static_cast<long>(v.size())) {
        std::ostringstream msg;
        msg << "trajectory has no " << what << " at index " << n;
        throw InputError(msg.str());
    }
    return v[static_cast<size_t>(i)];
}

} // namespace

const Value& Trajectory::x(long n) const { return indexed(x_, n0_, n, "x"); }
const Value& Trajectory::z(long n) const { return indexed(z_, z_begin(), n, "z"); }
const Value& Trajectory::dz(long n) const { return indexed(dz_, z_begin(), n, "dz"); }
const Value& Trajectory::qd(long n) const { return indexed(qd_, z_begin(), n, "qd"); }

void Trajectory::write_csv(std::ostream& os) const {
    os << "n,x,z,dz,qd\n";
    for (long n = x_begin(); n < x_end(); ++n) {
        os << n << ',' << x(n).to_string() << ',';
        if (n >= z_begin() && n < z_end())
            os << z(n).to_string();
        os << ',';
        if (n >= z_begin() && n < dz_end())
            os << dz(n).to_string();
        os << ',';
        if (n >= z_begin() && n < qd_end())
            os << qd(n).to_string();
        os << '\n';
    }
}

namespace {

// z_m = x_m + c*x_{m-k} from a raw window.
Value z_of(const EquationSpec& spec, const SequenceView& x, long m) {
    return x.at(m) + Value(spec.c) * x.at(m - spec.k);
}

} // namespace

Value residual(const EquationSpec& spec, const SequenceView& x, long n, Mode mode) {
    spec.validate();
    const Value zn = z_of(spec, x, n);
    const Value zn1 = z_of(spec, x, n + 1);
    const Value zn2 = z_of(spec, x, n + 2);
    const Value qd_n = eval_seq(spec.r, n, mode) * odd_ratio_pow(zn1 - zn, spec.gamma);
    const Value qd_n1 = eval_seq(spec.r, n + 1, mode) * odd_ratio_pow(zn2 - zn1, spec.gamma);
    return qd_n1 - qd_n + eval_seq(spec.q, n, mode) * odd_ratio_pow(x.at(n + 1), spec.alpha) -
           eval_seq(spec.e, n, mode);
}

Trajectory simulate(const EquationSpec& spec, const InitialData& init, long horizon,
                    const SimOptions& opts) {
    spec.validate();
    const long n0 = init.n0;
    const long k = spec.k;
    if (n0 < 1)
        throw InputError("initial data: start index must be >= 1");
    if (static_cast<long>(init.x_init.size()) != k + 2) {
        std::ostringstream msg;
        msg << "initial data: need exactly k+2 = " << (k + 2) << " values, got "
            << init.x_init.size();
        throw InputError(msg.str());
    }
    if (horizon <= n0 + k + 1)
        throw InputError("horizon must exceed n0+k+1");
    if (horizon > kMaxHorizon)
        throw InputError("horizon exceeds the 10^6 cap");

    const long N = horizon;
    std::vector<Value> x, z, dz, qd;
    x.reserve(static_cast<size_t>(N + 2 - n0));
    z.reserve(static_cast<size_t>(N + 2 - n0 - k));
    dz.reserve(static_cast<size_t>(N + 1 - n0 - k));
    qd.reserve(static_cast<size_t>(N + 1 - n0 - k));

    const Value c(spec.c);
    for (const Value& v : init.x_init)
        x.push_back(opts.mode == Mode::Float ? Value(v.to_double()) : v);

    auto x_at = [&](long m) -> const Value& { return x[static_cast<size_t>(m - n0)]; };
    auto r_at = [&](long m) {
        Value rv = eval_seq(spec.r, m, opts.mode);
        if (rv.sign() <= 0) {
            std::ostringstream msg;
            msg << "nonpositive r at n = " << m;
            throw EvalError(msg.str());
        }
        return rv;
    };

    // z, dz, qd at the first usable index n0+k.
    z.push_back(x_at(n0 + k) + c * x_at(n0));
    z.push_back(x_at(n0 + k + 1) + c * x_at(n0 + 1));
    dz.push_back(z[1] - z[0]);
    qd.push_back(r_at(n0 + k) * odd_ratio_pow(dz[0], spec.gamma));

    bool degraded = false; // an exact-mode root fell back to float somewhere
    for (long n = n0 + k; n <= N - 1; ++n) {
        const Value qd_next = qd.back() + eval_seq(spec.e, n, opts.mode) -
                              eval_seq(spec.q, n, opts.mode) *
                                  odd_ratio_pow(x_at(n + 1), spec.alpha);
        const Value ratio = qd_next / r_at(n + 1);
        Value dz_next = odd_ratio_root(ratio, spec.gamma);
        if (opts.mode == Mode::Exact && ratio.is_exact() && !dz_next.is_exact()) {
            if (!opts.allow_root_fallback) {
                std::ostringstream msg;
                msg << "no exact " << spec.gamma.to_string() << "-th root at n = " << n + 1
                    << " (rerun in float mode or allow fallback)";
                throw EvalError(msg.str());
            }
            degraded = true;
        }
        qd.push_back(qd_next);
        dz.push_back(dz_next);
        z.push_back(z.back() + dz_next);
        // n+2-k <= n+1, so the needed x is always already known when k >= 1.
        if (k == 0)
            x.push_back(z.back() / (Value(1) + c));
        else
            x.push_back(z.back() - c * x_at(n + 2 - k));
        if (opts.mode == Mode::Float)
            checked_finite(x.back().to_double(), "x");
    }

    Trajectory traj(n0, k, opts.mode, std::move(x), std::move(z), std::move(dz), std::move(qd));
    if (opts.self_check) {
        const ResidualCheck rc = residual_check(spec, traj);
        const bool want_exact = traj.mode() == Mode::Exact && !degraded;
        const bool ok = want_exact ? rc.exact_zero : rc.max_abs <= opts.tol;
        if (!ok) {
            std::ostringstream msg;
            msg << "simulated trajectory fails its own equation at n = "
                << (want_exact ? rc.first_nonzero : rc.argmax)
                << " (max |residual| = " << rc.max_abs << ")";
            throw VerificationError(msg.str());
        }
    }
    return traj;
}

ResidualCheck residual_check(const EquationSpec& spec, const Trajectory& traj) {
    ResidualCheck rc;
    rc.argmax = traj.interior_begin();
    const SequenceView x = traj.x_view();
    for (long n = traj.interior_begin(); n <= traj.interior_end(); ++n) {
        const Value res = residual(spec, x, n, traj.mode());
        if (res.sign() != 0 && rc.exact_zero) {
            rc.exact_zero = false;
            rc.first_nonzero = n;
        }
        const double mag = std::fabs(res.to_double());
        if (mag > rc.max_abs) {
            rc.max_abs = mag;
            rc.argmax = n;
        }
    }
    return rc;
}

Value telescoping_gap(const EquationSpec& spec, const Trajectory& traj, long n2, long n) {
    if (n2 < traj.z_begin() || n > traj.qd_end() - 1 || n2 > n)
        throw InputError("telescoping range outside the trajectory");
    Value sum(0);
    for (long i = n2; i <= n - 1; ++i)
        sum = sum + eval_seq(spec.e, i, traj.mode()) -
              eval_seq(spec.q, i, traj.mode()) * odd_ratio_pow(traj.x(i + 1), spec.alpha);
    return traj.qd(n) - traj.qd(n2) - sum;
}

} // namespace almosc
