// orbivert: command-line front-end. Reports go to stdout (JSON with --json),
// diagnostics to stderr. Exit codes: 0 ok, 1 validation, 2 numeric,
// 3 conjecture violated.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <orbivert/orbivert.hpp>
#include <orbivert/suite.hpp>

namespace ov = orbivert;
using ov::io::json;

namespace {

enum Exit { ok = 0, validation = 1, numeric = 2, violated = 3 };

struct Options {
    std::string lattice = "e8";
    std::string aut;
    std::string shift;
    int trunc = ov::default_levels;
    bool trunc_given = false;
    std::vector<double> points;
    bool json = false;
    std::string kind = "id_g";
    unsigned order = 2;
    std::string rho_v = "0";
    std::string c = "8";
    std::string shape = "2:1";
    unsigned k = 2;
};

// Resolved lattice, automorphism and shift.
struct JobSpec {
    ov::IntegralLattice lattice;
    std::optional<ov::IntMatrix> automorphism;
    std::optional<ov::RationalVector> shift;
    int trunc = ov::default_levels;

    ov::TwistDatum twist() const
    {
        const auto m = automorphism.value_or(ov::IntMatrix::identity(lattice.rank()));
        return ov::TwistDatum::make(lattice, m, shift.value_or(ov::RationalVector(lattice.rank(), ov::Rational(0))));
    }

    json input() const
    {
        json in;
        in["lattice"] = {{"name", lattice.name()}, {"gram", ov::io::to_json(lattice.gram())}};
        in["automorphism"] = automorphism ? ov::io::to_json(*automorphism) : json(nullptr);
        in["shift"] = shift ? ov::io::to_json(*shift) : json(nullptr);
        in["trunc"] = trunc;
        return in;
    }
};

bool is_json_text(const std::string& text)
{
    auto it = std::find_if(text.begin(), text.end(), [](unsigned char ch) { return !std::isspace(ch); });
    return it != text.end() && *it == '{';
}

// A document read from a TOML lattice file or a JSON report.
ov::io::LatticeDocument load_document(const std::string& path)
{
    const std::string text = ov::io::read_file(path);
    if (!is_json_text(text))
        return ov::io::parse_lattice_toml(text, path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ov::Error(ov::ErrorCode::Parse, path + ": " + e.what());
    }
    const json& in = j.contains("input") ? j.at("input") : j;
    ov::io::LatticeDocument doc;
    try {
        const json& l = in.contains("lattice") && in.at("lattice").is_object() ? in.at("lattice") : in;
        doc.name = l.value("name", "");
        doc.gram = ov::io::int_matrix_from_json(l.at("gram"));
        if (in.contains("automorphism") && !in.at("automorphism").is_null())
            doc.automorphism = ov::io::int_matrix_from_json(in.at("automorphism"));
        if (in.contains("shift") && !in.at("shift").is_null())
            doc.shift = ov::io::rational_vector_from_json(in.at("shift"));
    } catch (const json::exception& e) {
        throw ov::Error(ov::ErrorCode::Parse, path + ": " + e.what());
    }
    return doc;
}

bool contains(const std::vector<std::string>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

JobSpec resolve(const Options& o)
{
    std::optional<ov::io::LatticeDocument> doc;
    if (!contains(ov::catalog::lattice_names(), o.lattice))
        doc = load_document(o.lattice);
    JobSpec spec{doc ? ov::IntegralLattice::validate(doc->gram, doc->name.empty() ? o.lattice : doc->name)
                     : ov::catalog::lattice(o.lattice)};
    if (doc) {
        spec.automorphism = doc->automorphism;
        spec.shift = doc->shift;
        if (is_json_text(ov::io::read_file(o.lattice)) && !o.trunc_given) {
            const json j = json::parse(ov::io::read_file(o.lattice));
            if (j.contains("input") && j.at("input").contains("trunc"))
                spec.trunc = j.at("input").at("trunc").get<int>();
        }
    }
    if (o.trunc_given || !doc)
        spec.trunc = o.trunc;
    if (spec.trunc <= 0)
        throw ov::Error(ov::ErrorCode::Parse, "--trunc must be positive");

    if (!o.aut.empty()) {
        if (contains(ov::catalog::automorphism_names(), o.aut)) {
            spec.automorphism = ov::catalog::automorphism(o.aut, spec.lattice);
        } else {
            auto d = load_document(o.aut);
            if (!d.automorphism)
                throw ov::Error(ov::ErrorCode::Parse, o.aut + ": missing field 'automorphism'");
            spec.automorphism = d.automorphism;
        }
    }
    if (!o.shift.empty()) {
        if (contains(ov::catalog::shift_names(), o.shift)) {
            spec.shift = ov::catalog::shift(o.shift, spec.lattice);
        } else if (std::filesystem::is_regular_file(o.shift)) {
            auto d = load_document(o.shift);
            if (!d.shift)
                throw ov::Error(ov::ErrorCode::Parse, o.shift + ": missing field 'shift'");
            spec.shift = d.shift;
        } else {
            ov::RationalVector h;
            std::stringstream ss(o.shift);
            for (std::string item; std::getline(ss, item, ',');)
                h.push_back(ov::parse_rational(item));
            spec.shift = std::move(h);
        }
        if (spec.shift->size() != spec.lattice.rank())
            throw ov::Error(ov::ErrorCode::DimensionMismatch, "--shift has " + std::to_string(spec.shift->size()) +
                                                                  " entries for a rank " +
                                                                  std::to_string(spec.lattice.rank()) + " lattice");
    }
    return spec;
}

std::string frame_string(const ov::FrameShape& s)
{
    std::string out;
    for (auto [t, b] : s.exponents)
        out += (out.empty() ? "" : " ") + std::to_string(t) + "^" + std::to_string(b);
    return out.empty() ? "1" : out;
}

ov::FrameShape parse_shape(const std::string& text)
{
    ov::FrameShape s;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ov::Error(ov::ErrorCode::Parse, "shape entry '" + item + "' is not t:b_t");
        try {
            const long long t = std::stoll(item.substr(0, colon));
            const long long b = std::stoll(item.substr(colon + 1));
            if (t <= 0)
                throw ov::Error(ov::ErrorCode::Parse, "cycle length must be positive in '" + item + "'");
            if (b != 0)
                s.exponents[static_cast<unsigned>(t)] += b;
        } catch (const std::logic_error&) {
            throw ov::Error(ov::ErrorCode::Parse, "shape entry '" + item + "' is not t:b_t");
        }
    }
    return s;
}

json complex_json(const ov::Complex& z) { return json::array({z.real(), z.imag()}); }

// ---- commands ---------------------------------------------------------------

json cmd_info(const JobSpec& s)
{
    json r;
    r["input"] = s.input();
    r["name"] = s.lattice.name();
    r["rank"] = s.lattice.rank();
    r["det"] = s.lattice.det().str();
    r["even"] = true;
    r["unimodular"] = s.lattice.unimodular();
    return r;
}

json cmd_aut(const JobSpec& s)
{
    const ov::TwistDatum tw = s.twist();
    json r;
    r["input"] = s.input();
    r["order"] = tw.nu().order();
    r["frame"] = ov::io::to_json(tw.shape());
    r["frame_string"] = frame_string(tw.shape());
    r["doubling"] = tw.doubling();
    r["lift_order"] = tw.lift_order();
    r["fixed_rank"] = tw.fixed().fixed_gram.rows();
    r["fixed_gram"] = ov::io::to_json(tw.fixed().fixed_gram);
    if (s.lattice.unimodular())
        r["defect_dimension"] = tw.defect_dimension().str();
    return r;
}

json cmd_twist(const JobSpec& s, bool full)
{
    const ov::WeightReport w = ov::rho_lattice(s.twist());
    json r;
    r["input"] = s.input();
    if (full) {
        r.update(ov::io::to_json(w));
    } else {
        r["rho"] = ov::to_string(w.rho);
        r["witness"] = ov::io::to_json(w.witness);
        r["g_order"] = w.g_order;
        r["verdict"] = std::string(ov::to_string(w.verdict));
    }
    return r;
}

ov::TraceFunction trace(const JobSpec& s, const std::string& kind)
{
    if (kind == "id_id")
        return ov::char_v(s.lattice, s.trunc);
    if (kind == "id_g")
        return ov::z_id_g(s.twist(), s.trunc);
    if (kind == "g_id")
        return ov::z_g_id(s.twist(), s.trunc);
    throw ov::Error(ov::ErrorCode::Parse, "--kind must be id_id, id_g or g_id");
}

json cmd_char(const JobSpec& s, const std::string& kind)
{
    json r;
    r["input"] = s.input();
    r.update(ov::io::to_json(trace(s, kind)));
    return r;
}

json cmd_scheck(const JobSpec& s, const std::vector<double>& points)
{
    const ov::TwistDatum tw = s.twist();
    ov::SCheckOptions opt;
    if (!points.empty())
        opt.points = points;
    const ov::SCheckResult c = ov::s_check(ov::z_id_g(tw, s.trunc), ov::z_g_id(tw, s.trunc), opt);
    json r;
    r["input"] = s.input();
    r["lambda_est"] = complex_json(c.lambda_est);
    r["lambda_ok"] = c.lambda_ok;
    r["max_residual"] = c.max_residual;
    r["points"] = c.points;
    r["residuals"] = c.residuals;
    r["max_tail"] = c.max_tail;
    r["trunc"] = s.trunc;
    return r;
}

json cmd_fusion(unsigned n)
{
    if (n < 2)
        throw ov::Error(ov::ErrorCode::Parse, "--order must be at least 2");
    json r;
    r["order"] = n;
    r["extrapolation"] = n != 2;
    json names = json::array();
    for (const auto& l : ov::labels(n))
        names.push_back(ov::to_string(l));
    r["labels"] = names;
    json rows = json::array();
    bool verlinde_ok = false;
    if (n == 2) {
        const ov::SMatrix s;
        for (std::size_t i = 0; i < 4; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < 4; ++j)
                row.push_back(ov::to_string(s.matrix()(i, j)));
            rows.push_back(row);
        }
        verlinde_ok = ov::fusion_matches_verlinde(s, ov::cyclic_fusion_table(2));
    } else {
        const auto s = ov::cyclic_s_matrix(n);
        for (std::size_t i = 0; i < s.rows(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < s.cols(); ++j)
                row.push_back(complex_json(s(i, j)));
            rows.push_back(row);
        }
        verlinde_ok = ov::fusion_matches_verlinde(s, ov::cyclic_fusion_table(n));
    }
    r["s_matrix"] = rows;
    const ov::FusionTable table = ov::cyclic_fusion_table(n);
    json products = json::array();
    for (const auto& a : ov::labels(n)) {
        json row = json::array();
        for (const auto& b : ov::labels(n))
            row.push_back(ov::to_string(table(a, b)));
        products.push_back(row);
    }
    r["fusion"] = products;
    r["simple_currents"] = ov::all_simple_currents(table);
    r["verlinde_ok"] = verlinde_ok;
    return r;
}

json cmd_qdim(const std::optional<JobSpec>& s)
{
    json r;
    json exact = json::array();
    for (const auto& l : ov::labels()) {
        exact.push_back({{"label", ov::to_string(l)},
                         {"positivity", ov::to_string(ov::qdim_smatrix(l, ov::QdimScenario::positivity))},
                         {"degenerate", ov::to_string(ov::qdim_smatrix(l, ov::QdimScenario::degenerate))}});
    }
    r["exact"] = exact;
    if (s) {
        r["input"] = s->input();
        const auto q = ov::orbifold_qdims(s->twist(), ov::default_y_grid(), std::max(s->trunc, 30));
        json numeric = json::array();
        for (std::size_t k = 0; k < 4; ++k)
            numeric.push_back({{"label", ov::to_string(ov::labels()[k])},
                               {"y", q[k].y},
                               {"ratios", q[k].ratios},
                               {"estimate", q[k].estimate},
                               {"correction", q[k].correction}});
        r["numeric"] = numeric;
    }
    return r;
}

json cmd_perm(const Options& o)
{
    const ov::PermutationWeight w =
        ov::rho_permutation(ov::parse_rational(o.rho_v), ov::parse_rational(o.c), parse_shape(o.shape), o.k);
    json r;
    r["rho_v"] = ov::to_string(ov::parse_rational(o.rho_v));
    r["c"] = ov::to_string(ov::parse_rational(o.c));
    r["shape"] = ov::io::to_json(parse_shape(o.shape));
    r["k"] = o.k;
    r["rho"] = ov::to_string(w.rho);
    r["rho_tensor"] = ov::to_string(w.rho_tensor);
    r["margin"] = ov::to_string(w.margin);
    r["g_order"] = w.g_order;
    return r;
}

// Human-readable rendering: one "key: value" line per field; matrices of
// scalars print one row per line.
void print_human(const json& r, std::ostream& out)
{
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (const auto& [key, value] : r.items()) {
        if (key == "input")
            continue;
        const bool matrix = value.is_array() && !value.empty() && value.front().is_array() &&
                            std::all_of(value.begin(), value.end(), [](const json& row) {
                                return row.is_array() &&
                                       std::all_of(row.begin(), row.end(), [](const json& x) { return !x.is_structured(); });
                            });
        if (matrix) {
            out << key << ":\n";
            for (const auto& row : value) {
                out << "  ";
                for (std::size_t i = 0; i < row.size(); ++i)
                    out << (i ? " " : "") << scalar(row[i]);
                out << "\n";
            }
        } else {
            out << key << ": " << scalar(value) << "\n";
        }
    }
}

int run_suite(bool as_json)
{
    const auto results = ov::suite::run_all();
    bool all = true;
    json r;
    json list = json::array();
    for (const auto& c : results) {
        all = all && c.pass;
        list.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
        if (!as_json)
            std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << c.detail
                      << ")\n";
    }
    r["criteria"] = list;
    r["all_pass"] = all;
    if (as_json)
        std::cout << r.dump(2) << "\n";
    return all ? Exit::ok : Exit::validation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Twisted modules of lattice vertex operator algebras: weights, characters, S-checks, fusion"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool twist_flags) {
        sub->add_option("--lattice", o.lattice, "built-in lattice (e8, e8e8), TOML file, or JSON report");
        if (twist_flags) {
            sub->add_option("--aut", o.aut, "built-in automorphism name or file");
            sub->add_option("--shift", o.shift, "built-in shift name, \"p/q,...\" list, or file");
            sub->add_option("--trunc", o.trunc, "integer levels above the leading exponent")
                ->each([&](const std::string&) { o.trunc_given = true; });
        }
        sub->add_flag("--json", o.json, "emit JSON");
    };

    auto* info = app.add_subcommand("info", "validate a lattice");
    common(info, false);
    auto* aut = app.add_subcommand("aut", "order, frame shape, doubling, fixed lattice");
    common(aut, true);
    auto* twist = app.add_subcommand("twist", "conformal weight and witness");
    common(twist, true);
    auto* chr = app.add_subcommand("char", "trace function as a q-series");
    common(chr, true);
    chr->add_option("--kind", o.kind, "id_id, id_g or g_id")->check(CLI::IsMember({"id_id", "id_g", "g_id"}));
    auto* scheck = app.add_subcommand("scheck", "S-transformation residual");
    common(scheck, true);
    scheck->add_option("--points", o.points, "evaluation points t");
    auto* positivity = app.add_subcommand("positivity", "weight report and verdict");
    common(positivity, true);
    auto* fusion = app.add_subcommand("fusion", "orbifold S-matrix, fusion table, Verlinde check");
    fusion->add_option("--order", o.order, "cyclic order n (n > 2 is an extrapolation)");
    fusion->add_flag("--json", o.json, "emit JSON");
    auto* qdim = app.add_subcommand("qdim", "quantum dimensions");
    common(qdim, true);
    auto* perm = app.add_subcommand("perm", "weight of a permutation-orbifold twisted module");
    perm->add_option("--rho-v", o.rho_v, "rho(V) as p/q");
    perm->add_option("--c", o.c, "central charge as p/q");
    perm->add_option("--shape", o.shape, "cycle type as t:b_t,...");
    perm->add_option("--k", o.k, "number of tensor factors");
    perm->add_flag("--json", o.json, "emit JSON");
    auto* suite = app.add_subcommand("suite", "run the acceptance set");
    suite->add_flag("--json", o.json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::validation;
    }

    try {
        json report;
        int status = Exit::ok;
        if (*info) {
            report = cmd_info(resolve(o));
        } else if (*aut) {
            report = cmd_aut(resolve(o));
        } else if (*twist || *positivity) {
            report = cmd_twist(resolve(o), positivity->parsed());
            if (report.value("verdict", "") == "conjecture_violated")
                status = Exit::violated;
        } else if (*chr) {
            report = cmd_char(resolve(o), o.kind);
        } else if (*scheck) {
            report = cmd_scheck(resolve(o), o.points);
        } else if (*fusion) {
            report = cmd_fusion(o.order);
        } else if (*qdim) {
            const bool with_twist = qdim->count("--lattice") + qdim->count("--aut") + qdim->count("--shift") > 0;
            report = cmd_qdim(with_twist ? std::optional<JobSpec>(resolve(o)) : std::nullopt);
        } else if (*perm) {
            report = cmd_perm(o);
        } else if (*suite) {
            return run_suite(o.json);
        }
        if (o.json)
            std::cout << report.dump(2) << "\n";
        else
            print_human(report, std::cout);
        return status;
    } catch (const ov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_numeric() ? Exit::numeric : Exit::validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::validation;
    }
}
