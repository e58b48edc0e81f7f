#include "hermdense/identities.hpp"

#include <fstream>

#include "hermdense/json_io.hpp"

#ifndef HERMDENSE_DATA_DIR
#define HERMDENSE_DATA_DIR "data"
#endif

namespace hermdense {

namespace {

std::string gram_string(const HermLattice& l) { return to_json(l)["gram"].dump(); }

std::string grid_string(const DensityPolynomial& poly) {
    std::string out;
    for (const auto& [k, v] : poly.grid) out += (out.empty() ? "" : "; ") + std::to_string(k) + ": " + to_string(v);
    return out;
}

void add_derived(VerificationReport& r, const std::string& label, const DerivedDensity& dd) {
    r.diagnostics.emplace_back(label + ".poly", dd.poly.poly.to_string());
    r.diagnostics.emplace_back(label + ".fit_order", std::to_string(dd.poly.fit_order));
    r.diagnostics.emplace_back(label + ".grid", grid_string(dd.poly));
}

VerificationReport finish(VerificationReport r, const Rational& lhs, const Rational& rhs) {
    r.lhs = to_string(lhs);
    r.rhs = to_string(rhs);
    r.pass = lhs == rhs;
    r.status = r.pass ? ReportStatus::Pass : ReportStatus::Fail;
    return r;
}

HermLattice negate_one(const PrimeParams& params) { return diagonal_lattice({Rational(-1)}, params); }

}  // namespace

std::string_view to_string(ReportStatus s) {
    switch (s) {
        case ReportStatus::Pass: return "pass";
        case ReportStatus::Fail: return "fail";
        case ReportStatus::Skipped: return "skipped";
        case ReportStatus::Infeasible: return "infeasible";
        case ReportStatus::Error: return "error";
    }
    return "?";
}

Rational int_y(const HermLattice& lattice, DensityEngine& engine) { return engine.derived_density(lattice).value; }

Rational int_z_even(const HermLattice& lattice, DensityEngine& engine) {
    if (lattice.rank() % 2 != 0) throw Error(ErrorKind::OddRank, "int_z_even needs an even-rank lattice");
    HermLattice rescaled = scale_form(lattice, Rational(1, lattice.p()));
    if (!is_integral(rescaled))
        throw Error(ErrorKind::NotIntegral, "the p^-1 rescaled form is not integral");
    return engine.derived_density(rescaled).value;
}

VerificationReport check_analytic_reduction(const HermLattice& lattice, DensityEngine& engine) {
    VerificationReport r;
    r.identity = "analytic_reduction";
    r.inputs.emplace_back("L", gram_string(lattice));
    r.inputs.emplace_back("p", std::to_string(lattice.p()));
    const HermLattice sharp = orthogonal_direct_sum(lattice, negate_one(lattice.params()));
    DerivedDensity lhs = engine.derived_density(lattice);
    DerivedDensity rhs = engine.derived_density(sharp);
    add_derived(r, "L", lhs);
    add_derived(r, "L_sharp", rhs);
    r.diagnostics.emplace_back("partial_den(L_sharp)", to_string(rhs.value));
    return finish(std::move(r), lhs.value, rhs.value / 2);
}

VerificationReport check_factorization(const HermLattice& lattice, const std::vector<long>& ks, DensityEngine& engine) {
    VerificationReport r;
    r.identity = "factorization";
    r.inputs.emplace_back("L", gram_string(lattice));
    r.inputs.emplace_back("p", std::to_string(lattice.p()));
    const auto n = static_cast<long>(lattice.rank());
    const PrimeParams& params = lattice.params();
    const HermLattice sharp = orthogonal_direct_sum(lattice, negate_one(params));
    std::string ks_text, lhs_text, rhs_text;
    bool all_pass = true, infeasible = false;
    for (long k : ks) {
        ks_text += (ks_text.empty() ? "" : ",") + std::to_string(k);
        const std::string tag = "k=" + std::to_string(k);
        try {
            auto target_big = standard_Mn(n + 1, params), target = standard_Mn(n, params);
            if (k > 0) {
                target_big = orthogonal_direct_sum(target_big, standard_H(k, params));
                target = orthogonal_direct_sum(target, standard_H(k, params));
            }
            const Rational big = engine.local_density(target_big, sharp);
            const Rational small = engine.local_density(target, lattice);
            const Rational factor = 1 - 1 / rational_pow(Rational(params.q()), static_cast<int>(1 + n + 2 * k));
            const Rational rhs = small * factor;
            r.diagnostics.emplace_back(tag + ".Den(M_n+1 + H^k, L#)", to_string(big));
            r.diagnostics.emplace_back(tag + ".Den(M_n + H^k, L)", to_string(small));
            r.diagnostics.emplace_back(tag + ".factor", to_string(factor));
            lhs_text += (lhs_text.empty() ? "" : "; ") + to_string(big);
            rhs_text += (rhs_text.empty() ? "" : "; ") + to_string(rhs);
            all_pass = all_pass && big == rhs;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CountInfeasible) throw;
            infeasible = true;
            r.diagnostics.emplace_back(tag, std::string("infeasible: ") + e.what());
            lhs_text += (lhs_text.empty() ? "" : "; ") + std::string("?");
            rhs_text += (rhs_text.empty() ? "" : "; ") + std::string("?");
        }
    }
    r.inputs.emplace_back("k", ks_text);
    r.lhs = lhs_text;
    r.rhs = rhs_text;
    r.pass = all_pass && !infeasible;
    r.status = !all_pass ? ReportStatus::Fail : infeasible ? ReportStatus::Infeasible : ReportStatus::Pass;
    return r;
}

VerificationReport check_rank1(long a, const Rational& unit, const PrimeParams& params, DensityEngine& engine) {
    if (a < 0) throw Error(ErrorKind::InvalidArgument, "exponent a must be >= 0");
    if (sgn(unit) == 0 || p_valuation(unit, params.p) != 0)
        throw Error(ErrorKind::InvalidArgument, "unit must be a p-adic unit");
    VerificationReport r;
    r.identity = "rank1";
    r.inputs.emplace_back("a", std::to_string(a));
    r.inputs.emplace_back("unit", to_string(unit));
    r.inputs.emplace_back("p", std::to_string(params.p));
    const HermLattice l = diagonal_lattice({unit * rational_pow(Rational(params.p), static_cast<int>(a))}, params);
    DerivedDensity dd = engine.derived_density(l);
    add_derived(r, "L", dd);
    return finish(std::move(r), dd.value, Rational(a + 1));
}

VerificationReport check_sign_invariance(const HermLattice& lattice, DensityEngine& engine) {
    if (lattice.rank() % 2 != 0) throw Error(ErrorKind::OddRank, "sign invariance is stated for even rank");
    VerificationReport r;
    r.identity = "sign_invariance";
    r.inputs.emplace_back("L", gram_string(lattice));
    r.inputs.emplace_back("p", std::to_string(lattice.p()));
    DerivedDensity lhs = engine.derived_density(lattice);
    DerivedDensity rhs = engine.derived_density(scale_form(lattice, Rational(-1)));
    add_derived(r, "L", lhs);
    add_derived(r, "minus_L", rhs);
    return finish(std::move(r), lhs.value, rhs.value);
}

VerificationReport check_y_pi_z(const HermLattice& lattice, DensityEngine& engine) {
    VerificationReport r;
    r.identity = "y_equals_pi_z";
    r.inputs.emplace_back("L", gram_string(lattice));
    r.inputs.emplace_back("p", std::to_string(lattice.p()));
    const Rational lhs = int_y(lattice, engine);
    const HermLattice pi_l = rescale_basis(lattice, FScalar::pi(lattice.p()));
    r.diagnostics.emplace_back("pi_L", gram_string(pi_l));
    return finish(std::move(r), lhs, int_z_even(pi_l, engine));
}

VerificationReport check_value(const std::string& identity, const Rational& computed, const Rational& expected) {
    VerificationReport r;
    r.identity = identity;
    return finish(std::move(r), computed, expected);
}

std::string default_manifest_path() { return std::string(HERMDENSE_DATA_DIR) + "/suite_manifest.json"; }

namespace {

Rational auto_unit(long a, const PrimeParams& params) {
    const Rational pa = rational_pow(Rational(params.p), static_cast<int>(a));
    return is_norm(pa, params) ? Rational(smallest_nonresidue(params.p)) : Rational(1);
}

std::vector<long> long_list(const Json& j) {
    std::vector<long> out;
    for (const auto& x : j) out.push_back(x.get<long>());
    return out;
}

VerificationReport run_item(const Json& item, const PrimeParams& params, DensityEngine& engine) {
    const std::string identity = item.at("identity").get<std::string>();
    auto lattice = [&](const char* key) { return parse_lattice_spec(item.at(key).get<std::string>(), params); };
    auto expected = [&] { return evaluate_expression(item.at("expected").get<std::string>(), params); };
    VerificationReport r;

    if (identity == "local_density") {
        const HermLattice target = lattice("target"), source = lattice("source");
        DensitySeries s = engine.series(target, source);
        r = check_value(identity, s.value(), expected());
        r.inputs = {{"M", item.at("target").get<std::string>()}, {"L", item.at("source").get<std::string>()}};
        r.diagnostics.emplace_back("stabilized_at", std::to_string(*s.stabilized_at));
        for (const auto& [d, ratio] : s.ratios) r.diagnostics.emplace_back("ratio.d=" + std::to_string(d), to_string(ratio));
    } else if (identity == "whittaker") {
        const HermLattice source = lattice("source");
        const long s = item.at("s").get<long>();
        r = check_value(identity, engine.whittaker_value(source, s), expected());
        r.inputs = {{"L", item.at("source").get<std::string>()}, {"s", std::to_string(s)}};
    } else if (identity == "derived_density") {
        DerivedDensity dd = engine.derived_density(lattice("source"));
        r = check_value(identity, dd.value, expected());
        r.inputs = {{"L", item.at("source").get<std::string>()}};
        add_derived(r, "L", dd);
    } else if (identity == "analytic_reduction") {
        r = check_analytic_reduction(lattice("source"), engine);
    } else if (identity == "factorization") {
        r = check_factorization(lattice("source"), long_list(item.at("k")), engine);
    } else if (identity == "rank1") {
        const long a = item.at("a").get<long>();
        const std::string unit = item.value("unit", std::string("auto"));
        r = check_rank1(a, unit == "auto" ? auto_unit(a, params) : evaluate_expression(unit, params), params, engine);
    } else if (identity == "sign_invariance") {
        r = check_sign_invariance(lattice("source"), engine);
    } else if (identity == "y_equals_pi_z") {
        r = check_y_pi_z(lattice("source"), engine);
    } else {
        throw Error(ErrorKind::MalformedInput, "unknown identity '" + identity + "' in manifest");
    }
    r.inputs.emplace_back("p", std::to_string(params.p));
    return r;
}

bool prime_allowed(const Json& item, long p) {
    if (!item.contains("primes")) return true;
    for (const auto& x : item["primes"])
        if (x.get<long>() == p) return true;
    return false;
}

}  // namespace

std::vector<VerificationReport> run_suite(long p, const std::string& manifest_path, const DensityOptions& options) {
    DensityEngine engine(options);
    return run_suite(p, manifest_path, engine);
}

std::vector<VerificationReport> run_suite(long p, const std::string& manifest_path, DensityEngine& engine) {
    const PrimeParams params = PrimeParams::make(p);
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot open manifest '" + manifest_path + "'");
    Json manifest;
    try {
        manifest = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedInput, std::string("invalid manifest JSON: ") + e.what());
    }
    if (!manifest.contains("version") || manifest["version"].get<int>() != 1)
        throw Error(ErrorKind::MalformedInput, "field 'version': unsupported manifest version");
    if (!manifest.contains("items") || !manifest["items"].is_array())
        throw Error(ErrorKind::MalformedInput, "field 'items': expected an array");

    std::vector<VerificationReport> out;
    for (const auto& item : manifest["items"]) {
        VerificationReport r;
        const std::string id = item.value("id", std::string());
        const std::string identity = item.value("identity", std::string());
        if (!prime_allowed(item, p)) {
            r.identity = identity;
            r.status = ReportStatus::Skipped;
            r.message = "not listed for p = " + std::to_string(p);
        } else {
            try {
                r = run_item(item, params, engine);
            } catch (const Error& e) {
                r = VerificationReport{};
                r.identity = identity;
                r.message = std::string(to_string(e.kind())) + ": " + e.what();
                r.error = e.kind();
                r.status = e.kind() == ErrorKind::SplitClass       ? ReportStatus::Skipped
                           : e.kind() == ErrorKind::CountInfeasible ? ReportStatus::Infeasible
                                                                   : ReportStatus::Error;
            } catch (const nlohmann::json::exception& e) {
                r = VerificationReport{};
                r.identity = identity;
                r.status = ReportStatus::Error;
                r.error = ErrorKind::MalformedInput;
                r.message = std::string("MalformedInput: manifest item: ") + e.what();
            }
        }
        r.id = id;
        if (item.contains("origin")) r.diagnostics.emplace_back("expected_origin", item["origin"].get<std::string>());
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hermdense
