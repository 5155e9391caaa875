#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "almosc/builtin_examples.hpp"
#include "almosc/classifier.hpp"
#include "almosc/criteria.hpp"
#include "almosc/equation.hpp"
#include "almosc/errors.hpp"
#include "almosc/spec_file.hpp"

namespace {

using namespace almosc;

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kInputError = 2;

// --out selects a file; default is standard output.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw InputError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

long pick_horizon(long cli_n, const SpecFile& file) { return cli_n > 0 ? cli_n : file.horizon; }

InitialData require_init(const SpecFile& file) {
    if (!file.init)
        throw InputError("spec file has no [init] section (key 'init' is required here)");
    return *file.init;
}

void warn_if_nonpositive(const SeqExprPtr& expr, long lo, long hi, const char* name) {
    const PositivityScan scan = scan_positive(expr, lo, hi);
    if (!scan.all_positive)
        std::cerr << "warning: " << name << " is not positive on [" << lo << ", " << hi
                  << "] (first violation at n = " << scan.first_violation
                  << "); divergence criteria would reject this instance\n";
}

int cmd_simulate(const std::string& spec_path, long cli_n, const std::string& mode_flag,
                 const std::string& out_path) {
    const SpecFile file = load_spec_file(spec_path);
    const long N = pick_horizon(cli_n, file);
    SimOptions opts;
    opts.mode = mode_flag.empty() ? file.mode : mode_from_string(mode_flag);
    const InitialData init = require_init(file);

    warn_if_nonpositive(file.equation.q, init.n0, N, "q");
    warn_if_nonpositive(file.equation.e, init.n0, N, "e");

    const Trajectory traj = simulate(file.equation, init, N, opts);
    const ResidualCheck rc = residual_check(file.equation, traj);
    if (traj.mode() == Mode::Exact && rc.exact_zero)
        std::cerr << "self-check: residuals exactly zero on [" << traj.interior_begin() << ", "
                  << traj.interior_end() << "]\n";
    else
        std::cerr << "self-check: max |residual| = " << rc.max_abs << " at n = " << rc.argmax
                  << " on [" << traj.interior_begin() << ", " << traj.interior_end() << "]\n";

    OutputTarget out(out_path);
    traj.write_csv(out.stream());
    return kOk;
}

int cmd_classify(const std::string& spec_path, long cli_n, double tol,
                 const std::string& out_path) {
    const SpecFile file = load_spec_file(spec_path);
    const long N = pick_horizon(cli_n, file);
    SimOptions opts;
    opts.mode = file.mode;
    const InitialData init = require_init(file);

    const Trajectory traj = simulate(file.equation, init, N, opts);
    const Verdict verdict = classify_almost_oscillatory(traj, init.n0, N, tol);

    OutputTarget out(out_path);
    out.stream() << to_json(verdict).dump(2) << '\n';
    return kOk;
}

int cmd_check(const std::string& spec_path, long cli_n, const std::string& d_flag,
              const std::string& m_flag, const std::string& p_flag,
              const std::string& out_path) {
    const SpecFile file = load_spec_file(spec_path);
    const long N = pick_horizon(cli_n, file);
    CriterionParams params = file.params;
    if (!d_flag.empty())
        params.d = Value(rational_from_string(d_flag));
    if (!m_flag.empty())
        params.M = Value(rational_from_string(m_flag));
    if (!p_flag.empty())
        params.p = parse_seq(p_flag);

    const CriterionReport c1 = criterion1_series(file.equation, params, N, file.mode);
    const CriterionReport c2p = criterion2_series(file.equation, params, SumSign::Plus, N, file.mode);
    const CriterionReport c2m =
        criterion2_series(file.equation, params, SumSign::Minus, N, file.mode);
    const GrowthVerdict c2 = combine_verdicts(c2p.verdict, c2m.verdict);
    const GrowthVerdict overall = combine_verdicts(c1.verdict, c2);
    const std::string answer = overall == GrowthVerdict::DivergentEvidence   ? "yes"
                               : overall == GrowthVerdict::BoundedEvidence  ? "no"
                                                                             : "inconclusive";
    const std::string summary =
        "all divergence criteria exhibit divergence evidence: " + answer;

    nlohmann::ordered_json j;
    j["criterion1"] = to_json(c1);
    j["criterion2_plus"] = to_json(c2p);
    j["criterion2_minus"] = to_json(c2m);
    j["criterion2_combined"] = to_string(c2);
    j["summary"] = summary;

    OutputTarget out(out_path);
    out.stream() << j.dump(2) << '\n';
    std::cerr << summary << '\n';
    return kOk;
}

int cmd_verify_example(const std::string& name, long cli_n) {
    const BuiltinExample* ex = find_builtin_example(name);
    if (!ex)
        throw InputError("unknown example '" + name + "' (bundled: example1, example2, example3)");
    const SpecFile file = parse_spec_file(ex->toml, std::string(ex->name));
    const long N = cli_n > 0 ? cli_n : file.horizon;
    SimOptions opts;
    opts.mode = Mode::Exact;
    opts.self_check = false; // the explicit checks below report indices themselves
    const InitialData init = require_init(file);

    const Trajectory traj = simulate(file.equation, init, N, opts);
    const ResidualCheck rc = residual_check(file.equation, traj);
    if (!rc.exact_zero) {
        std::cerr << name << ": residual not exactly zero, first at n = " << rc.first_nonzero
                  << '\n';
        return kVerificationFailure;
    }
    for (long n = traj.x_begin(); n < traj.x_end(); ++n) {
        if (compare(traj.x(n), ex->solution(n)) != 0) {
            std::cerr << name << ": simulated x diverges from the closed form first at n = " << n
                      << '\n';
            return kVerificationFailure;
        }
    }
    const Verdict verdict = classify_almost_oscillatory(traj, init.n0, N);
    if (verdict.tag != ex->expected_tag) {
        std::cerr << name << ": expected verdict " << to_string(ex->expected_tag) << ", got "
                  << to_string(verdict.tag) << '\n';
        return kVerificationFailure;
    }
    std::cout << name << ": residuals exactly zero on [" << traj.interior_begin() << ", "
              << traj.interior_end() << "]; x matches the closed form on [" << traj.x_begin()
              << ", " << traj.x_end() - 1 << "]; verdict " << to_string(verdict.tag) << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate, classify and check solutions of second-order neutral difference "
                 "equations with quasidifferences"};
    app.require_subcommand(1);

    std::string spec_path, out_path, mode_flag, d_flag, m_flag, p_flag, example_name;
    long n = 0;
    double tol = kDefaultClassifyTol;

    CLI::App* sim = app.add_subcommand("simulate", "Run the forward recursion, emit CSV");
    sim->add_option("spec", spec_path, "spec file (TOML)")->required();
    sim->add_option("--n", n, "horizon (default: spec file's, else 1000)");
    sim->add_option("--mode", mode_flag, "numeric mode override")
        ->check(CLI::IsMember({"exact", "float"}));
    sim->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* cls = app.add_subcommand("classify", "Simulate, then report the verdict as JSON");
    cls->add_option("spec", spec_path, "spec file (TOML)")->required();
    cls->add_option("--n", n, "horizon / classification window end");
    cls->add_option("--tol", tol, "tends-to-zero tolerance (default 0.02)");
    cls->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* chk = app.add_subcommand("check", "Evaluate the divergence criteria, emit JSON");
    chk->add_option("spec", spec_path, "spec file (TOML)")->required();
    chk->add_option("--n", n, "series length");
    chk->add_option("--d", d_flag, "constant d > 0 (rational)");
    chk->add_option("--m", m_flag, "constant M > 0 (rational)");
    chk->add_option("--p", p_flag, "weight sequence expression");
    chk->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* ver = app.add_subcommand("verify-example",
                                       "Re-derive a bundled example from its closed form");
    ver->add_option("name", example_name, "example1|example2|example3")->required();
    ver->add_option("--n", n, "horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kInputError;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(spec_path, n, mode_flag, out_path);
        if (cls->parsed())
            return cmd_classify(spec_path, n, tol, out_path);
        if (chk->parsed())
            return cmd_check(spec_path, n, d_flag, m_flag, p_flag, out_path);
        if (ver->parsed())
            return cmd_verify_example(example_name, n);
    } catch (const VerificationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
