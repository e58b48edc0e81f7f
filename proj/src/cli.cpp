#include "hermdense/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "hermdense/json_io.hpp"

namespace hermdense {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SplitClass: return kExitSplitClass;
        case ErrorKind::NotStabilized:
        case ErrorKind::FitNotStabilized: return kExitNotStabilized;
        case ErrorKind::CountInfeasible: return kExitBudget;
        case ErrorKind::Internal: return kExitIdentityFailure;
        default: return kExitInput;
    }
}

namespace {

struct Config {
    std::string input;
    std::string target;
    std::string manifest;
    std::optional<long> p;
    int d_max = 4;
    std::optional<int> d_min;
    std::optional<int> k_max;
    double budget = default_budget();
    int workers = 0;
    std::string output = "json";
    std::string strategy = "auto";
    std::vector<long> s{0};
    std::string emit;
};

DensityOptions density_options(const Config& c) {
    DensityOptions o;
    o.d_max = c.d_max;
    o.d_min = c.d_min;
    o.k_max = c.k_max;
    o.count.budget = c.budget;
    o.count.workers = c.workers;
    o.count.strategy = parse_strategy(c.strategy);
    return o;
}

HermLattice load(const std::string& path, const Config& c) {
    if (path.empty()) throw Error(ErrorKind::MalformedInput, "--input is required for this command");
    if (!c.p) return read_lattice_file(path);
    Json j = to_json(read_lattice_file(path));
    j["p"] = *c.p;
    return lattice_from_json(j);
}

void emit(std::ostream& out, const Json& j, const Config& c) {
    if (c.output == "table") {
        for (const auto& [key, value] : j.items())
            out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    } else {
        out << j.dump(2) << "\n";
    }
}

Json grid_json(const DensityPolynomial& poly) {
    Json grid = Json::array();
    for (const auto& [k, v] : poly.grid) grid.push_back(Json{{"k", k}, {"value", to_string(v)}});
    return grid;
}

Json counts_json(const DensityEngine& engine) {
    Json out = Json::array();
    for (const auto& rec : engine.log())
        out.push_back(Json{{"d", rec.d}, {"count", rec.count.get_str()}, {"strategy", std::string(to_string(rec.strategy))}});
    return out;
}

Json series_json(const DensitySeries& s) {
    Json out = Json::array();
    for (std::size_t i = 0; i < s.ratios.size(); ++i)
        out.push_back(Json{{"d", s.ratios[i].first},
                           {"count", s.counts[i].second.get_str()},
                           {"ratio", to_string(s.ratios[i].second)},
                           {"strategy", std::string(to_string(s.strategies[i]))}});
    return out;
}

int cmd_info(const Config& c, std::ostream& out) {
    const HermLattice l = load(c.input, c);
    Json j;
    j["p"] = l.p();
    j["rank"] = l.rank();
    j["det"] = to_string(l.det());
    j["integral"] = is_integral(l);
    const NormalForm nf = normal_form(l);
    Json blocks = Json::array();
    for (const auto& b : nf.blocks) {
        if (b.kind == NormalBlock::Kind::Unit)
            blocks.push_back(Json{{"kind", "unit"}, {"beta", to_string(b.beta)}, {"b", b.b}});
        else
            blocks.push_back(Json{{"kind", "hyperbolic"}, {"c", b.c}, {"standard", b.is_standard()}});
    }
    j["normal_form"] = blocks;
    if (is_integral(l)) {
        j["fundamental_invariants"] = fundamental_invariants(l);
        j["val"] = val_lattice(l);
    } else {
        j["fundamental_invariants"] = nullptr;
        j["val"] = nullptr;
    }
    j["class"] = same_isometry_class_as_Mn(l) ? "split" : "nonsplit";
    emit(out, j, c);
    return kExitOk;
}

HermLattice target_or_mn(const Config& c, const HermLattice& source) {
    return c.target.empty() ? standard_Mn(static_cast<long>(source.rank()), source.params()) : load(c.target, c);
}

int cmd_density(const Config& c, std::ostream& out) {
    const HermLattice l = load(c.input, c);
    const HermLattice m = target_or_mn(c, l);
    DensityEngine engine(density_options(c));
    const DensitySeries s = engine.series(m, l);
    emit(out, Json{{"density", to_string(s.value())}, {"stabilized_at", *s.stabilized_at}, {"series", series_json(s)}}, c);
    return kExitOk;
}

int cmd_denpoly(const Config& c, std::ostream& out) {
    const HermLattice l = load(c.input, c);
    const HermLattice m = target_or_mn(c, l);
    DensityEngine engine(density_options(c));
    const DensityPolynomial poly = engine.density_polynomial(m, l);
    emit(out,
         Json{{"poly", to_json(poly.poly)},
              {"poly_text", poly.poly.to_string()},
              {"fit_order", poly.fit_order},
              {"grid", grid_json(poly)}},
         c);
    return kExitOk;
}

int cmd_pden(const Config& c, std::ostream& out, const char* label) {
    const HermLattice l = load(c.input, c);
    DensityEngine engine(density_options(c));
    const DerivedDensity dd = engine.derived_density(l);
    emit(out,
         Json{{label, to_string(dd.value)},
              {"series", grid_json(dd.poly)},
              {"poly", to_json(dd.poly.poly)},
              {"poly_text", dd.poly.poly.to_string()},
              {"fit_order", dd.poly.fit_order},
              {"counts", counts_json(engine)}},
         c);
    return kExitOk;
}

int cmd_int_z(const Config& c, std::ostream& out) {
    const HermLattice l = load(c.input, c);
    DensityEngine engine(density_options(c));
    emit(out, Json{{"int_z", to_string(int_z_even(l, engine))}}, c);
    return kExitOk;
}

int cmd_whittaker(const Config& c, std::ostream& out) {
    const HermLattice l = load(c.input, c);
    DensityEngine engine(density_options(c));
    std::vector<std::pair<long, Rational>> values;
    for (long s : c.s) values.emplace_back(s, engine.whittaker_value(l, s));
    if (c.emit == "csv") {
        out << "s,value_num,value_den\n";
        for (const auto& [s, v] : values) out << s << "," << v.get_num().get_str() << "," << v.get_den().get_str() << "\n";
        return kExitOk;
    }
    Json arr = Json::array();
    for (const auto& [s, v] : values) arr.push_back(Json{{"s", s}, {"value", to_string(v)}});
    emit(out, Json{{"whittaker", arr}}, c);
    return kExitOk;
}

int cmd_verify(const Config& c, std::ostream& out) {
    const long p = c.p.value_or(3);
    PrimeParams::make(p);
    const auto reports = run_suite(p, c.manifest.empty() ? default_manifest_path() : c.manifest, density_options(c));
    bool fail = false, infeasible = false, unstable = false;
    for (const auto& r : reports) {
        fail = fail || r.status == ReportStatus::Fail || r.status == ReportStatus::Error;
        infeasible = infeasible || r.status == ReportStatus::Infeasible;
        unstable = unstable || r.error == ErrorKind::NotStabilized || r.error == ErrorKind::FitNotStabilized;
    }
    if (c.output == "table") {
        for (const auto& r : reports) {
            out << to_string(r.status) << "  " << r.id << "  " << r.identity;
            if (!r.lhs.empty()) out << "  lhs=" << r.lhs << "  rhs=" << r.rhs;
            if (!r.message.empty()) out << "  (" << r.message << ")";
            out << "\n";
        }
    } else {
        for (const auto& r : reports) out << to_json(r).dump() << "\n";
    }
    if (fail && !unstable) return kExitIdentityFailure;
    if (unstable) return kExitNotStabilized;
    if (infeasible) return kExitBudget;
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local densities and derived densities of hermitian lattices over Q_p(sqrt p)", "hermdense"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;
    app.add_option("--input", c.input, "lattice JSON file");
    app.add_option("--p", c.p, "prime (verify) or prime override for the input file");
    app.add_option("--d-max", c.d_max, "largest counting precision")->check(CLI::PositiveNumber);
    app.add_option("--d-min", c.d_min, "first precision of the stabilization check")->check(CLI::PositiveNumber);
    app.add_option("--k-max", c.k_max, "largest density-polynomial fit order")->check(CLI::NonNegativeNumber);
    app.add_option("--budget", c.budget, "work budget in elementary steps")->check(CLI::PositiveNumber);
    app.add_option("--workers", c.workers, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
    app.add_option("--output", c.output, "json or table")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--strategy", c.strategy, "auto, brute, backtrack, histogram or charsum")
        ->check(CLI::IsMember({"auto", "brute", "backtrack", "histogram", "charsum"}));

    auto* info = app.add_subcommand("info", "rank, normal form, invariants, isometry class");
    auto* density = app.add_subcommand("density", "Den(M, L) with its precision series");
    density->add_option("--target", c.target, "target lattice M (default M_n)");
    auto* denpoly = app.add_subcommand("denpoly", "density polynomial Den(M, L, X)");
    denpoly->add_option("--target", c.target, "target lattice M (default M_n)");
    auto* pden = app.add_subcommand("pden", "derived density of a nonsplit lattice");
    auto* inty = app.add_subcommand("int-y", "Int_Y(L), equal to the derived density");
    auto* intz = app.add_subcommand("int-z", "Int_Z(L) for even rank: derived density of p^-1 h");
    auto* whit = app.add_subcommand("whittaker", "Whittaker values Den(M_n + H^s, L)");
    whit->add_option("--s", c.s, "one or more s >= 0")->delimiter(',')->check(CLI::NonNegativeNumber);
    whit->add_option("--emit", c.emit, "csv for a table s,value_num,value_den")->check(CLI::IsMember({"csv"}));
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--manifest", c.manifest, "suite manifest (default: shipped manifest)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*info) return cmd_info(c, out);
        if (*density) return cmd_density(c, out);
        if (*denpoly) return cmd_denpoly(c, out);
        if (*pden) return cmd_pden(c, out, "partial_den");
        if (*inty) return cmd_pden(c, out, "int_y");
        if (*intz) return cmd_int_z(c, out);
        if (*whit) return cmd_whittaker(c, out);
        if (*verify) return cmd_verify(c, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return kExitInput;
}

}  // namespace hermdense
