#pragma once

#include <string_view>
#include <vector>

#include "almosc/classifier.hpp"
#include "almosc/spec_file.hpp"

namespace almosc {

// The bundled instances with known closed-form solutions. `toml` is the
// byte-exact content of the matching data/<name>.toml file (spliced in at
// configure time), so the shipped files and the embedded copies cannot drift.
struct BuiltinExample {
    std::string_view name;
    std::string_view toml;
    VerdictTag expected_tag;
    Value (*solution)(long n); // closed-form x_n
};

const std::vector<BuiltinExample>& builtin_examples();

// nullptr when the name is not bundled.
const BuiltinExample* find_builtin_example(std::string_view name);

} // namespace almosc
