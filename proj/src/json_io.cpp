#include "hermdense/json_io.hpp"

#include <cctype>
#include <fstream>
#include <regex>

namespace hermdense {

namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::MalformedInput, "field '" + field + "': " + what);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Splits on `sep` outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

Rational scalar_field(const Json& v, const std::string& field) {
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const Error&) {
            malformed(field, "expected a rational string \"num/den\", got \"" + v.get<std::string>() + "\"");
        }
    }
    if (v.is_number_integer()) return Rational(v.get<long>());
    malformed(field, "expected a rational string");
}

// Recursive-descent evaluator for small rational expressions.
class ExprParser {
public:
    ExprParser(const std::string& text, const PrimeParams& params) : s_(text), params_(params) {}

    Rational parse() {
        Rational v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::MalformedInput, "expression \"" + s_ + "\": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Rational expr() {
        Rational v = eat('-') ? Rational(-term()) : (eat('+'), term());
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    Rational term() {
        Rational v = power();
        for (;;) {
            if (eat('*')) v *= power();
            else if (eat('/')) {
                Rational d = power();
                if (sgn(d) == 0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    Rational power() {
        Rational base = atom();
        if (!eat('^')) return base;
        bool neg = eat('-');
        skip();
        long e = integer();
        if (sgn(base) == 0 && neg) fail("zero to a negative power");
        return rational_pow(base, static_cast<int>(neg ? -e : e));
    }

    Rational atom() {
        skip();
        if (eat('(')) {
            Rational v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return Rational(integer());
        std::string name;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
        if (name == "q" || name == "p") return Rational(params_.p);
        if (name == "eps") return Rational(smallest_nonresidue(params_.p));
        fail(name.empty() ? "expected a number or name" : "unknown name '" + name + "'");
    }

    long integer() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 15) fail("expected an integer");
        return std::stol(s_.substr(start, pos_ - start));
    }

    std::string s_;
    std::size_t pos_ = 0;
    const PrimeParams& params_;
};

}  // namespace

Rational parse_rational(const std::string& text) {
    static const std::regex pattern(R"(^\s*[+-]?\d+(/\d+)?\s*$)");
    if (!std::regex_match(text, pattern)) throw Error(ErrorKind::MalformedInput, "not a rational: \"" + text + "\"");
    std::string t = trim(text);
    if (t.front() == '+') t.erase(0, 1);
    const auto slash = t.find('/');
    Integer num(t.substr(0, slash));
    Integer den = slash == std::string::npos ? Integer(1) : Integer(t.substr(slash + 1));
    if (sgn(den) == 0) throw Error(ErrorKind::MalformedInput, "zero denominator in \"" + text + "\"");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const FScalar& x) { return Json::array({to_string(x.a()), to_string(x.b())}); }

Json to_json(const HermLattice& lattice) {
    Json rows = Json::array();
    const auto& g = lattice.gram();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(to_json(g(i, j)));
        rows.push_back(row);
    }
    return Json{{"p", lattice.p()}, {"gram", rows}};
}

Json to_json(const Polynomial& poly) {
    Json c = Json::array();
    for (const auto& x : poly.coeffs()) c.push_back(to_json(x));
    return c;
}

Json to_json(const VerificationReport& report) {
    Json inputs = Json::object(), diag = Json::object();
    for (const auto& [k, v] : report.inputs) inputs[k] = v;
    for (const auto& [k, v] : report.diagnostics) diag[k] = v;
    Json j{{"identity", report.identity}, {"inputs", inputs}, {"lhs", report.lhs}, {"rhs", report.rhs},
           {"pass", report.pass},         {"diagnostics", diag}};
    if (!report.id.empty()) j["id"] = report.id;
    j["status"] = std::string(to_string(report.status));
    if (!report.message.empty()) j["message"] = report.message;
    return j;
}

HermLattice lattice_from_json(const Json& j) {
    if (!j.is_object()) malformed("<root>", "expected an object with \"p\" and \"gram\"");
    if (!j.contains("p")) malformed("p", "missing");
    if (!j["p"].is_number_integer()) malformed("p", "expected an integer");
    const PrimeParams params = PrimeParams::make(j["p"].get<long>());
    if (!j.contains("gram")) malformed("gram", "missing");
    const Json& g = j["gram"];
    if (!g.is_array() || g.empty()) malformed("gram", "expected a nonempty array of rows");
    const std::size_t n = g.size();
    FMatrix t(n, n, params.p);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rf = "gram[" + std::to_string(i) + "]";
        if (!g[i].is_array() || g[i].size() != n) malformed(rf, "expected a row of length " + std::to_string(n));
        for (std::size_t k = 0; k < n; ++k) {
            const std::string ef = rf + "[" + std::to_string(k) + "]";
            const Json& e = g[i][k];
            if (!e.is_array() || e.size() != 2) malformed(ef, "expected [\"a\", \"b\"] for a + b*pi");
            t(i, k) = FScalar(scalar_field(e[0], ef + "[0]"), scalar_field(e[1], ef + "[1]"), params.p);
        }
    }
    return HermLattice(params, t);
}

HermLattice read_lattice_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot open input file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedInput, "invalid JSON in '" + path + "': " + e.what());
    }
    return lattice_from_json(j);
}

Rational evaluate_expression(const std::string& text, const PrimeParams& params) {
    return ExprParser(text, params).parse();
}

HermLattice parse_lattice_spec(const std::string& spec, const PrimeParams& params) {
    static const std::regex h_re(R"(^H(\^(\d+))?$)"), m_re(R"(^M(\d+)$)"), diag_re(R"(^diag\((.*)\)$)");
    std::optional<HermLattice> out;
    for (const auto& term : split_top(spec, '+')) {
        std::smatch mt;
        std::optional<HermLattice> part;
        if (std::regex_match(term, mt, h_re)) {
            part = standard_H(mt[2].matched ? std::stol(mt[2]) : 1, params);
        } else if (std::regex_match(term, mt, m_re)) {
            part = standard_Mn(std::stol(mt[1]), params);
        } else if (term == "I1") {
            part = standard_I1(Rational(1), params);
        } else if (std::regex_match(term, mt, diag_re)) {
            std::vector<Rational> entries;
            for (const auto& x : split_top(mt[1], ',')) entries.push_back(evaluate_expression(x, params));
            part = diagonal_lattice(entries, params);
        } else {
            throw Error(ErrorKind::MalformedInput, "unknown lattice term \"" + term + "\" in \"" + spec + "\"");
        }
        out = out ? orthogonal_direct_sum(*out, *part) : *part;
    }
    return *out;
}

}  // namespace hermdense
