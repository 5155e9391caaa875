#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "almosc/criteria.hpp"
#include "almosc/equation.hpp"

namespace almosc {

// One parsed spec document: the equation, criterion constants, optional
// initial data, and run settings. File syntax is a small TOML subset —
// `key = value` lines, one optional `[init]` section, `#` comments; values
// are quoted strings, integers, decimals, or one-line arrays. Expressions
// (r, q, e, p) are quoted strings in the sequence grammar; c, gamma, alpha,
// d, M, R accept quoted "p/q" strings or bare numbers. Unknown keys are
// rejected.
struct SpecFile {
    EquationSpec equation;
    CriterionParams params;
    std::optional<InitialData> init;
    Mode mode = Mode::Exact;
    long horizon = kDefaultHorizon;
};

// Throws InputError (with <source>:<line> positions) on any syntax or schema
// problem, including unknown or duplicate keys and missing required ones
// (r, q, e, c, k, gamma, alpha).
SpecFile parse_spec_file(std::string_view text, std::string_view source_name = "<string>");

// parse_spec_file over a file's contents; InputError if unreadable.
SpecFile load_spec_file(const std::string& path);

} // namespace almosc
