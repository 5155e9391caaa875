#include "almosc/spec_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "almosc/errors.hpp"

namespace almosc {

namespace {

struct TomlScalar {
    enum class Kind { String, Number } kind = Kind::Number;
    std::string text; // unquoted string content, or the literal number text
};

struct TomlEntry {
    long line = 0;
    std::vector<TomlScalar> values; // size 1 for scalars, n for arrays
    bool is_array = false;
};

struct RawDoc {
    std::map<std::string, TomlEntry> top;
    std::map<std::string, TomlEntry> init;
    bool has_init = false;
};

[[noreturn]] void fail(std::string_view source, long line, const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw InputError(msg.str());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Strip a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"')
            in_string = !in_string;
        else if (s[i] == '#' && !in_string)
            return s.substr(0, i);
    }
    return s;
}

bool valid_key(std::string_view key) {
    if (key.empty())
        return false;
    for (char ch : key)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

TomlScalar parse_scalar(std::string_view source, long line, std::string_view text) {
    text = trim(text);
    if (text.empty())
        fail(source, line, "empty value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            fail(source, line, "unterminated string");
        const std::string_view body = text.substr(1, text.size() - 2);
        if (body.find('"') != std::string_view::npos)
            fail(source, line, "embedded quotes are not supported");
        return {TomlScalar::Kind::String, std::string(body)};
    }
    for (char ch : text)
        if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '-' && ch != '+' &&
            ch != '.' && ch != '/' && ch != 'e' && ch != 'E')
            fail(source, line, "malformed value '" + std::string(text) + "'");
    return {TomlScalar::Kind::Number, std::string(text)};
}

TomlEntry parse_value(std::string_view source, long line, std::string_view text) {
    TomlEntry entry;
    entry.line = line;
    text = trim(text);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']')
            fail(source, line, "array must close on the same line");
        entry.is_array = true;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        while (!body.empty()) {
            size_t cut = std::string_view::npos;
            bool in_string = false;
            for (size_t i = 0; i < body.size(); ++i) {
                if (body[i] == '"')
                    in_string = !in_string;
                else if (body[i] == ',' && !in_string) {
                    cut = i;
                    break;
                }
            }
            const std::string_view item =
                cut == std::string_view::npos ? body : body.substr(0, cut);
            entry.values.push_back(parse_scalar(source, line, item));
            if (cut == std::string_view::npos)
                break;
            body = trim(body.substr(cut + 1));
            if (body.empty())
                fail(source, line, "trailing comma in array");
        }
        return entry;
    }
    entry.values.push_back(parse_scalar(source, line, text));
    return entry;
}

RawDoc scan_document(std::string_view text, std::string_view source) {
    RawDoc doc;
    std::map<std::string, TomlEntry>* section = &doc.top;
    long line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(strip_comment(line));
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name != "init")
                fail(source, line_no, "unknown section [" + std::string(name) + "]");
            if (doc.has_init)
                fail(source, line_no, "duplicate [init] section");
            doc.has_init = true;
            section = &doc.init;
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(source, line_no, "expected key = value");
        const std::string key{trim(line.substr(0, eq))};
        if (!valid_key(key))
            fail(source, line_no, "malformed key '" + key + "'");
        if (section->count(key))
            fail(source, line_no, "duplicate key '" + key + "'");
        (*section)[key] = parse_value(source, line_no, line.substr(eq + 1));
    }
    return doc;
}

// --- typed extraction --------------------------------------------------

class Extractor {
public:
    Extractor(std::map<std::string, TomlEntry>& entries, std::string_view source,
              std::string_view scope)
        : entries_(entries), source_(source), scope_(scope) {}

    const TomlEntry* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return nullptr;
        taken_.push_back(key);
        return &it->second;
    }

    const TomlEntry& require(const std::string& key) {
        const TomlEntry* entry = take(key);
        if (!entry)
            fail(source_, 1, "missing required key '" + scoped(key) + "'");
        return *entry;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_) {
            bool known = false;
            for (const std::string& t : taken_)
                if (t == key)
                    known = true;
            if (!known)
                fail(source_, entry.line, "unknown key '" + scoped(key) + "'");
        }
    }

    std::string scoped(const std::string& key) const {
        return scope_.empty() ? key : std::string(scope_) + "." + key;
    }

private:
    std::map<std::string, TomlEntry>& entries_;
    std::string_view source_;
    std::string_view scope_;
    std::vector<std::string> taken_;
};

const TomlScalar& scalar_of(std::string_view source, const TomlEntry& entry,
                            const std::string& key) {
    if (entry.is_array || entry.values.size() != 1)
        fail(source, entry.line, "key '" + key + "' expects a single value");
    return entry.values.front();
}

SeqExprPtr as_expr(std::string_view source, const TomlEntry& entry, const std::string& key) {
    const TomlScalar& s = scalar_of(source, entry, key);
    if (s.kind != TomlScalar::Kind::String)
        fail(source, entry.line, "key '" + key + "' expects a quoted expression string");
    try {
        return parse_seq(s.text);
    } catch (const InputError& err) {
        fail(source, entry.line, "key '" + key + "': " + err.what());
    }
}

Rational as_rational(std::string_view source, const TomlScalar& s, long line,
                     const std::string& key) {
    try {
        return rational_from_string(s.text);
    } catch (const InputError& err) {
        fail(source, line, "key '" + key + "': " + err.what());
    }
}

Rational as_rational(std::string_view source, const TomlEntry& entry, const std::string& key) {
    return as_rational(source, scalar_of(source, entry, key), entry.line, key);
}

long as_integer(std::string_view source, const TomlEntry& entry, const std::string& key) {
    const Rational q = as_rational(source, entry, key);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        fail(source, entry.line, "key '" + key + "' expects an integer");
    return q.get_num().get_si();
}

OddRatio as_odd_ratio(std::string_view source, const TomlEntry& entry, const std::string& key) {
    const TomlScalar& s = scalar_of(source, entry, key);
    try {
        return OddRatio::parse(s.text);
    } catch (const InputError& err) {
        fail(source, entry.line, "key '" + key + "': " + err.what());
    }
}

} // namespace

SpecFile parse_spec_file(std::string_view text, std::string_view source_name) {
    RawDoc doc = scan_document(text, source_name);
    SpecFile out;

    Extractor top(doc.top, source_name, "");
    out.equation.r = as_expr(source_name, top.require("r"), "r");
    out.equation.q = as_expr(source_name, top.require("q"), "q");
    out.equation.e = as_expr(source_name, top.require("e"), "e");
    out.equation.c = as_rational(source_name, top.require("c"), "c");
    out.equation.k = as_integer(source_name, top.require("k"), "k");
    out.equation.gamma = as_odd_ratio(source_name, top.require("gamma"), "gamma");
    out.equation.alpha = as_odd_ratio(source_name, top.require("alpha"), "alpha");

    if (const TomlEntry* entry = top.take("p"))
        out.params.p = as_expr(source_name, *entry, "p");
    if (const TomlEntry* entry = top.take("d"))
        out.params.d = Value(as_rational(source_name, *entry, "d"));
    if (const TomlEntry* entry = top.take("M"))
        out.params.M = Value(as_rational(source_name, *entry, "M"));
    if (const TomlEntry* entry = top.take("R"))
        out.params.R = Value(as_rational(source_name, *entry, "R"));
    if (const TomlEntry* entry = top.take("mode")) {
        const TomlScalar& s = scalar_of(source_name, *entry, "mode");
        try {
            out.mode = mode_from_string(s.text);
        } catch (const InputError& err) {
            fail(source_name, entry->line, err.what());
        }
    }
    if (const TomlEntry* entry = top.take("horizon")) {
        out.horizon = as_integer(source_name, *entry, "horizon");
        if (out.horizon < 1 || out.horizon > kMaxHorizon)
            fail(source_name, entry->line, "horizon must be in [1, 10^6]");
    }
    top.reject_unknown();

    if (doc.has_init) {
        Extractor init(doc.init, source_name, "init");
        InitialData data;
        data.n0 = as_integer(source_name, init.require("n0"), "init.n0");
        const TomlEntry& xs = init.require("x");
        if (!xs.is_array)
            fail(source_name, xs.line, "key 'init.x' expects an array");
        for (const TomlScalar& s : xs.values)
            data.x_init.push_back(Value(as_rational(source_name, s, xs.line, "init.x")));
        init.reject_unknown();
        out.init = std::move(data);
    }

    out.equation.validate();
    return out;
}

SpecFile load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_file(buf.str(), path);
}

} // namespace almosc
