#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "orbifold.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "twist.hpp"

namespace orbivert::io {

using json = nlohmann::ordered_json;

// ---- JSON ------------------------------------------------------------------

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const RationalVector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

inline json to_json(const IntMatrix& m)
{
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

inline json to_json(const FrameShape& s)
{
    json o = json::object();
    for (auto [t, bt] : s.exponents)
        o[std::to_string(t)] = bt;
    return o;
}

inline Rational rational_from_json(const json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    if (!j.is_string())
        throw Error(ErrorCode::Parse, "expected a rational string \"p/q\", got " + j.dump());
    return parse_rational(j.get<std::string>());
}

inline RationalVector rational_vector_from_json(const json& j)
{
    if (!j.is_array())
        throw Error(ErrorCode::Parse, "expected an array of rationals");
    RationalVector v;
    for (const auto& x : j)
        v.push_back(rational_from_json(x));
    return v;
}

inline IntMatrix int_matrix_from_json(const json& j)
{
    if (!j.is_array())
        throw Error(ErrorCode::Parse, "expected an array of integer arrays");
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& r : j) {
        if (!r.is_array())
            throw Error(ErrorCode::Parse, "matrix row is not an array");
        std::vector<std::int64_t> row;
        for (const auto& x : r) {
            if (!x.is_number_integer())
                throw Error(ErrorCode::Parse, "matrix entry " + x.dump() + " is not an integer");
            row.push_back(x.get<std::int64_t>());
        }
        rows.push_back(std::move(row));
    }
    return IntMatrix::from_rows(rows);
}

inline FrameShape frame_shape_from_json(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::Parse, "frame shape must be an object {\"t\": b_t}");
    FrameShape s;
    for (const auto& [k, v] : j.items()) {
        const long long t = std::stoll(k);
        if (t <= 0)
            throw Error(ErrorCode::Parse, "cycle length " + k + " must be positive");
        if (v.get<long long>() != 0)
            s.exponents[static_cast<unsigned>(t)] = v.get<long long>();
    }
    return s;
}

// {denom, terms: [[exponent "p/q", coeff "p/q" | [re, im]]...], trunc "p/q"}
inline json to_json(const PuiseuxSeries& s)
{
    json o;
    o["denom"] = s.denom();
    o["mode"] = s.exact() ? "exact" : "complex";
    json terms = json::array();
    s.visit([&](const auto& x) {
        for (const auto& [e, c] : x.terms()) {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Complex>)
                terms.push_back(json::array({to_string(e), json::array({c.real(), c.imag()})}));
            else
                terms.push_back(json::array({to_string(e), to_string(c)}));
        }
    });
    o["terms"] = std::move(terms);
    o["trunc"] = to_string(s.trunc());
    return o;
}

inline PuiseuxSeries series_from_json(const json& j)
{
    const auto denom = j.at("denom").get<std::int64_t>();
    const Rational trunc = rational_from_json(j.at("trunc"));
    bool complex = j.contains("mode") && j.at("mode") == "complex";
    for (const auto& t : j.at("terms"))
        complex = complex || t.at(1).is_array();
    if (complex) {
        ComplexSeries s(denom, trunc);
        for (const auto& t : j.at("terms")) {
            const auto& c = t.at(1);
            s.add_term(rational_from_json(t.at(0)),
                       c.is_array() ? Complex(c.at(0).get<double>(), c.at(1).get<double>())
                                    : Complex(to_double(rational_from_json(c)), 0.0));
        }
        return s;
    }
    ExactSeries s(denom, trunc);
    for (const auto& t : j.at("terms"))
        s.add_term(rational_from_json(t.at(0)), rational_from_json(t.at(1)));
    return s;
}

inline json to_json(const TraceFunction& f)
{
    json o;
    o["kind"] = std::string(to_string(f.kind));
    o["rho"] = to_string(f.rho);
    o["central_charge"] = to_string(f.central_charge);
    o["g_order"] = f.g_order;
    o["series"] = to_json(f.series);
    return o;
}

inline TraceFunction trace_function_from_json(const json& j)
{
    TraceFunction f;
    const auto kind = j.at("kind").get<std::string>();
    f.kind = kind == "id_id" ? TraceKind::id_id : kind == "id_g" ? TraceKind::id_g : TraceKind::g_id;
    if (kind != "id_id" && kind != "id_g" && kind != "g_id")
        throw Error(ErrorCode::Parse, "unknown trace kind '" + kind + "'");
    f.rho = rational_from_json(j.at("rho"));
    f.central_charge = rational_from_json(j.at("central_charge"));
    f.g_order = j.at("g_order").get<unsigned>();
    f.series = series_from_json(j.at("series"));
    return f;
}

inline json to_json(const WeightReport& r)
{
    json o;
    o["rho"] = to_string(r.rho);
    o["g_order"] = r.g_order;
    o["frame"] = to_json(r.frame);
    o["frame_term"] = to_string(r.frame_term);
    o["min_norm_half"] = to_string(r.min_norm_half);
    o["witness"] = to_json(r.witness);
    o["bottom_dimension"] = r.bottom_dimension.str();
    o["verdict"] = std::string(to_string(r.verdict));
    o["theorem_holds"] = r.theorem_holds;
    o["rationality_ok"] = r.rationality_ok;
    return o;
}

// ---- TOML subset -------------------------------------------------------------
//
// Enough TOML for lattice documents: `key = value` lines, # comments, basic
// strings, integers, and (nested, possibly multi-line) arrays.

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
    std::variant<std::string, std::int64_t, TomlArray> v;
    std::size_t line = 0;
};

class TomlParser {
public:
    TomlParser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    std::map<std::string, TomlValue> parse()
    {
        std::map<std::string, TomlValue> out;
        for (;;) {
            skip_blank(true);
            if (eof())
                break;
            if (peek() == '[')
                fail("tables are not supported");
            const std::size_t key_line = line_;
            std::string key = parse_key();
            skip_blank(false);
            expect('=');
            skip_blank(false);
            TomlValue v = parse_value();
            skip_blank(false);
            if (!eof() && peek() != '\n')
                fail("unexpected text after value of '" + key + "'");
            if (out.count(key))
                fail("duplicate key '" + key + "'", key_line);
            out.emplace(std::move(key), std::move(v));
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& what, std::size_t line = 0) const
    {
        throw Error(ErrorCode::Parse, source_ + ":" + std::to_string(line ? line : line_) + ": " + what);
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get()
    {
        const char c = text_[pos_++];
        if (c == '\n')
            ++line_;
        return c;
    }

    void expect(char c)
    {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        get();
    }

    // Skips spaces and comments; newlines too when `newlines`.
    void skip_blank(bool newlines)
    {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                get();
            } else if (c == '#') {
                while (!eof() && peek() != '\n')
                    get();
            } else {
                break;
            }
        }
    }

    std::string parse_key()
    {
        if (!eof() && peek() == '"')
            return parse_string();
        std::string key;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            key += get();
        if (key.empty())
            fail("expected a key");
        return key;
    }

    std::string parse_string()
    {
        expect('"');
        std::string s;
        while (!eof() && peek() != '"') {
            char c = get();
            if (c == '\n')
                fail("unterminated string");
            if (c == '\\') {
                if (eof())
                    fail("unterminated escape");
                c = get();
                switch (c) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case '"': s += '"'; break;
                case '\\': s += '\\'; break;
                default: fail(std::string("unsupported escape \\") + c);
                }
            } else {
                s += c;
            }
        }
        expect('"');
        return s;
    }

    TomlValue parse_value()
    {
        TomlValue v;
        v.line = line_;
        if (eof())
            fail("missing value");
        const char c = peek();
        if (c == '"') {
            v.v = parse_string();
        } else if (c == '[') {
            get();
            TomlArray a;
            for (;;) {
                skip_blank(true);
                if (eof())
                    fail("unterminated array", v.line);
                if (peek() == ']') {
                    get();
                    break;
                }
                a.push_back(parse_value());
                skip_blank(true);
                if (!eof() && peek() == ',') {
                    get();
                    continue;
                }
                skip_blank(true);
                expect(']');
                break;
            }
            v.v = std::move(a);
        } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            digits += get();
            while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_'))
                if (char d = get(); d != '_')
                    digits += d;
            if (!eof() && (peek() == '.' || peek() == 'e' || peek() == 'E' || peek() == '/'))
                fail("only integers are supported here (write rationals as strings \"p/q\")");
            try {
                v.v = static_cast<std::int64_t>(std::stoll(digits));
            } catch (const std::exception&) {
                fail("malformed integer '" + digits + "'");
            }
        } else {
            fail(std::string("unsupported value starting with '") + c + "'");
        }
        return v;
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

// Lattice document: name, gram, optional automorphism and shift.
struct LatticeDocument {
    std::string name;
    IntMatrix gram;
    std::optional<IntMatrix> automorphism;
    std::optional<RationalVector> shift;
};

namespace detail {

inline std::string where(const std::string& source, const std::string& field, const TomlValue& v)
{
    return source + ":" + std::to_string(v.line) + ": field '" + field + "'";
}

inline IntMatrix toml_matrix(const std::string& source, const std::string& field, const TomlValue& v)
{
    const auto* rows = std::get_if<TomlArray>(&v.v);
    if (!rows)
        throw Error(ErrorCode::Parse, where(source, field, v) + " must be an array of integer arrays");
    std::vector<std::vector<std::int64_t>> m;
    for (const auto& r : *rows) {
        const auto* row = std::get_if<TomlArray>(&r.v);
        if (!row)
            throw Error(ErrorCode::Parse, where(source, field, r) + ": row is not an array");
        std::vector<std::int64_t> out;
        for (const auto& x : *row) {
            const auto* i = std::get_if<std::int64_t>(&x.v);
            if (!i)
                throw Error(ErrorCode::Parse, where(source, field, x) + ": entries must be integers");
            out.push_back(*i);
        }
        if (!m.empty() && out.size() != m.front().size())
            throw Error(ErrorCode::DimensionMismatch, where(source, field, r) + ": ragged rows");
        m.push_back(std::move(out));
    }
    return IntMatrix::from_rows(m);
}

} // namespace detail

inline LatticeDocument parse_lattice_toml(std::string_view text, const std::string& source = "<input>")
{
    TomlParser p(text, source);
    auto doc = p.parse();
    for (const auto& [k, v] : doc)
        if (k != "name" && k != "gram" && k != "automorphism" && k != "shift")
            throw Error(ErrorCode::Parse, detail::where(source, k, v) + " is not recognised");
    LatticeDocument out;
    if (auto it = doc.find("name"); it != doc.end()) {
        const auto* s = std::get_if<std::string>(&it->second.v);
        if (!s)
            throw Error(ErrorCode::Parse, detail::where(source, "name", it->second) + " must be a string");
        out.name = *s;
    }
    auto g = doc.find("gram");
    if (g == doc.end())
        throw Error(ErrorCode::Parse, source + ": missing field 'gram'");
    out.gram = detail::toml_matrix(source, "gram", g->second);
    if (auto it = doc.find("automorphism"); it != doc.end())
        out.automorphism = detail::toml_matrix(source, "automorphism", it->second);
    if (auto it = doc.find("shift"); it != doc.end()) {
        const auto* a = std::get_if<TomlArray>(&it->second.v);
        if (!a)
            throw Error(ErrorCode::Parse, detail::where(source, "shift", it->second) + " must be an array of strings");
        RationalVector h;
        for (const auto& x : *a) {
            if (const auto* s = std::get_if<std::string>(&x.v))
                h.push_back(parse_rational(*s));
            else if (const auto* i = std::get_if<std::int64_t>(&x.v))
                h.push_back(Rational(*i));
            else
                throw Error(ErrorCode::Parse, detail::where(source, "shift", x) + ": entries must be \"p/q\" strings");
        }
        out.shift = std::move(h);
    }
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LatticeDocument load_lattice_toml(const std::string& path) { return parse_lattice_toml(read_file(path), path); }

inline std::string to_toml(const LatticeDocument& doc)
{
    auto matrix = [](const IntMatrix& m) {
        std::string s = "[\n";
        for (std::size_t i = 0; i < m.rows(); ++i) {
            s += "  [";
            for (std::size_t j = 0; j < m.cols(); ++j)
                s += (j ? ", " : "") + std::to_string(m(i, j));
            s += "],\n";
        }
        return s + "]";
    };
    std::string out = "name = \"" + doc.name + "\"\n";
    out += "gram = " + matrix(doc.gram) + "\n";
    if (doc.automorphism)
        out += "automorphism = " + matrix(*doc.automorphism) + "\n";
    if (doc.shift) {
        out += "shift = [";
        for (std::size_t i = 0; i < doc.shift->size(); ++i)
            out += (i ? ", \"" : "\"") + to_string((*doc.shift)[i]) + "\"";
        out += "]\n";
    }
    return out;
}

} // namespace orbivert::io
