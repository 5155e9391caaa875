#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <almosc/builtin_examples.hpp>
#include <almosc/classifier.hpp>
#include <almosc/criteria.hpp>
#include <almosc/equation.hpp>
#include <almosc/spec_file.hpp>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace almosc;

namespace {

Mode mode_for(const SpecFile& file, const std::optional<std::string>& override_mode) {
    return override_mode ? mode_from_string(*override_mode) : file.mode;
}

long horizon_for(const SpecFile& file, std::optional<long> n) {
    return n && *n > 0 ? *n : file.horizon;
}

InitialData init_of(const SpecFile& file) {
    if (!file.init)
        throw InputError("spec has no [init] section (key 'init' is required here)");
    return *file.init;
}

Value value_from(const py::object& obj, const char* what) {
    if (py::isinstance<py::str>(obj))
        return Value(rational_from_string(obj.cast<std::string>()));
    if (py::isinstance<py::int_>(obj))
        return Value(obj.cast<long>());
    if (py::isinstance<py::float_>(obj))
        return Value(obj.cast<double>());
    throw InputError(std::string(what) + " must be an int, float or rational string");
}

py::dict simulate_py(const std::string& toml_text, std::optional<long> n,
                     std::optional<std::string> mode) {
    const SpecFile file = parse_spec_file(toml_text, "<python>");
    SimOptions opts;
    opts.mode = mode_for(file, mode);
    const Trajectory traj = simulate(file.equation, init_of(file), horizon_for(file, n), opts);

    py::list idx, x, x_exact;
    for (long i = traj.x_begin(); i < traj.x_end(); ++i) {
        idx.append(i);
        x.append(traj.x(i).to_double());
        x_exact.append(traj.x(i).is_exact() ? py::object(py::str(traj.x(i).to_string()))
                                            : py::object(py::none()));
    }
    const ResidualCheck rc = residual_check(file.equation, traj);
    py::dict out;
    out["n0"] = traj.n0();
    out["k"] = traj.k();
    out["mode"] = to_string(traj.mode());
    out["n"] = idx;
    out["x"] = x;
    out["x_exact"] = x_exact;
    out["max_residual"] = rc.max_abs;
    out["residual_exact_zero"] = rc.exact_zero;
    return out;
}

std::string classify_py(const std::string& toml_text, std::optional<long> n, double tol) {
    const SpecFile file = parse_spec_file(toml_text, "<python>");
    SimOptions opts;
    opts.mode = file.mode;
    const long N = horizon_for(file, n);
    const InitialData init = init_of(file);
    const Trajectory traj = simulate(file.equation, init, N, opts);
    return to_json(classify_almost_oscillatory(traj, init.n0, N, tol)).dump();
}

std::string check_py(const std::string& toml_text, std::optional<long> n,
                     const py::object& d, const py::object& M,
                     const std::optional<std::string>& p) {
    const SpecFile file = parse_spec_file(toml_text, "<python>");
    CriterionParams params = file.params;
    if (!d.is_none())
        params.d = value_from(d, "d");
    if (!M.is_none())
        params.M = value_from(M, "M");
    if (p)
        params.p = parse_seq(*p);
    const long N = horizon_for(file, n);

    const CriterionReport c1 = criterion1_series(file.equation, params, N, file.mode);
    const CriterionReport c2p = criterion2_series(file.equation, params, SumSign::Plus, N, file.mode);
    const CriterionReport c2m = criterion2_series(file.equation, params, SumSign::Minus, N, file.mode);
    nlohmann::ordered_json j;
    j["criterion1"] = to_json(c1);
    j["criterion2_plus"] = to_json(c2p);
    j["criterion2_minus"] = to_json(c2m);
    j["criterion2_combined"] = to_string(combine_verdicts(c2p.verdict, c2m.verdict));
    return j.dump();
}

py::dict verify_example_py(const std::string& name, std::optional<long> n) {
    const BuiltinExample* ex = find_builtin_example(name);
    if (!ex)
        throw InputError("unknown example '" + name + "' (bundled: example1, example2, example3)");
    const SpecFile file = parse_spec_file(ex->toml, std::string(ex->name));
    const long N = n && *n > 0 ? *n : file.horizon;
    SimOptions opts;
    opts.self_check = false;
    const InitialData init = init_of(file);
    const Trajectory traj = simulate(file.equation, init, N, opts);

    const ResidualCheck rc = residual_check(file.equation, traj);
    bool matches_closed_form = true;
    for (long i = traj.x_begin(); i < traj.x_end(); ++i) {
        if (compare(traj.x(i), ex->solution(i)) != 0) {
            matches_closed_form = false;
            break;
        }
    }
    const Verdict verdict = classify_almost_oscillatory(traj, init.n0, N);

    py::dict out;
    out["name"] = std::string(ex->name);
    out["residual_exact_zero"] = rc.exact_zero;
    out["matches_closed_form"] = matches_closed_form;
    out["verdict"] = to_string(verdict.tag);
    out["expected_verdict"] = to_string(ex->expected_tag);
    out["ok"] = rc.exact_zero && matches_closed_form && verdict.tag == ex->expected_tag;
    return out;
}

std::vector<std::string> example_names() {
    std::vector<std::string> names;
    for (const BuiltinExample& ex : builtin_examples())
        names.emplace_back(ex.name);
    return names;
}

std::string example_toml(const std::string& name) {
    const BuiltinExample* ex = find_builtin_example(name);
    if (!ex)
        throw InputError("unknown example '" + name + "'");
    return std::string(ex->toml);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation, classification and divergence criteria for second-order "
              "neutral difference equations with quasidifferences";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
    py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);

    m.def("simulate", &simulate_py, py::arg("spec"), py::arg("n") = std::nullopt,
          py::arg("mode") = std::nullopt,
          "Simulate the spec (TOML text); returns indices, x values and residual info.");
    m.def("classify_json", &classify_py, py::arg("spec"), py::arg("n") = std::nullopt,
          py::arg("tol") = kDefaultClassifyTol,
          "Simulate and classify; returns the verdict report as a JSON string.");
    m.def("check_json", &check_py, py::arg("spec"), py::arg("n") = std::nullopt,
          py::arg("d") = py::none(), py::arg("M") = py::none(),
          py::arg("p") = std::nullopt,
          "Evaluate the divergence criteria; returns a JSON string.");
    m.def("verify_example", &verify_example_py, py::arg("name"), py::arg("n") = std::nullopt,
          "Re-simulate a bundled example and compare against its closed form.");
    m.def("example_names", &example_names, "Names of the bundled examples.");
    m.def("example_toml", &example_toml, py::arg("name"), "TOML text of a bundled example.");

    m.def(
        "eval_seq",
        [](const std::string& text, long n) { return eval_seq(parse_seq(text), n, Mode::Float).to_double(); },
        py::arg("expr"), py::arg("n"), "Evaluate a sequence expression at index n (float).");
    m.def(
        "eval_seq_exact",
        [](const std::string& text, long n) {
            return eval_seq(parse_seq(text), n, Mode::Exact).to_string();
        },
        py::arg("expr"), py::arg("n"),
        "Evaluate a sequence expression at index n exactly; returns a rational string.");

    m.def(
        "f_min",
        [](const py::object& a, const py::object& b, const std::string& alpha,
           const std::string& gamma) {
            return f_min(value_from(a, "a"), value_from(b, "b"), OddRatio::parse(alpha),
                         OddRatio::parse(gamma))
                .to_double();
        },
        py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("gamma"),
        "Minimum over x > 0 of a*x^(alpha-gamma) + b/x^gamma.");
    m.def(
        "power_diff_holds",
        [](const py::object& x, const py::object& y, const std::string& gamma) {
            return power_diff_inequality_holds(value_from(x, "x"), value_from(y, "y"),
                                               OddRatio::parse(gamma));
        },
        py::arg("x"), py::arg("y"), py::arg("gamma"),
        "Check x^gamma - y^gamma >= (x - y)^gamma for x >= y >= 0.");
    m.def(
        "q_star",
        [](const std::string& toml_text, const py::object& d, long n) {
            const SpecFile file = parse_spec_file(toml_text, "<python>");
            return q_star(file.equation, value_from(d, "d"), n, Mode::Exact).to_double();
        },
        py::arg("spec"), py::arg("d"), py::arg("n"));
    m.def(
        "q_dstar",
        [](const std::string& toml_text, long n) {
            const SpecFile file = parse_spec_file(toml_text, "<python>");
            return q_dstar(file.equation, n, Mode::Exact).to_double();
        },
        py::arg("spec"), py::arg("n"));
}
