#include "bosonic/serialize.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bosonic {

namespace {

template <int Blocks>
json poly_to_json(const Polynomial<Blocks>& p, const std::array<const char*, Blocks>& names) {
    const int m = p.dim();
    json j;
    j["m"] = m;
    if (Blocks != 2) {
        json b = json::array();
        for (const char* n : names) b.push_back(n);
        j["blocks"] = b;
    }
    json terms = json::array();
    for (const auto& [k, c] : p.terms()) {
        json t;
        for (int b = 0; b < Blocks; ++b)
            t[names[b]] = std::vector<int>(k.begin() + b * m, k.begin() + (b + 1) * m);
        t["num"] = c.num().get_str();
        t["den"] = c.den().get_str();
        t["omega"] = c.omega_pow();
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

std::string json_rational_field(const json& t, const char* key, const char* fallback) {
    if (!t.contains(key)) return fallback;
    const auto& v = t.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw std::invalid_argument(std::string("field ") + key + " must be a string or integer");
}

template <int Blocks>
Polynomial<Blocks> poly_from_json_impl(const json& j, const std::array<const char*, Blocks>& names) {
    const int m = j.at("m").get<int>();
    if (m < 1) throw std::invalid_argument("m must be positive");
    Polynomial<Blocks> p(m);
    for (const auto& t : j.at("terms")) {
        typename Polynomial<Blocks>::Key k;
        for (int b = 0; b < Blocks; ++b) {
            auto e = t.contains(names[b]) ? t.at(names[b]).template get<std::vector<int>>()
                                          : std::vector<int>(m, 0);
            if (static_cast<int>(e.size()) != m)
                throw std::invalid_argument("exponent array length does not match m");
            k.insert(k.end(), e.begin(), e.end());
        }
        int om = t.contains("omega") ? t.at("omega").get<int>() : 0;
        p.add_term(k, ScaledRational::parse(json_rational_field(t, "num", "1"),
                                            json_rational_field(t, "den", "1"), om));
    }
    return p;
}

class Parser {
public:
    Parser(const std::string& s, int m) : s_(s), m_(m) {}

    PolyXU parse() {
        PolyXU p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression parse error at " + std::to_string(pos_) + ": " + msg);
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

    bool eat(const std::string& word) {
        skip();
        if (s_.compare(pos_, word.size(), word) == 0) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    mpz_class integer() {
        skip();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return mpz_class(s_.substr(start, pos_ - start));
    }

    int small_int() {
        mpz_class z = integer();
        if (!z.fits_sint_p() || z > 1000) fail("exponent too large");
        return static_cast<int>(z.get_si());
    }

    PolyXU expr() {
        PolyXU acc(m_);
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        PolyXU t = term();
        acc += neg ? -t : t;
        while (true) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else break;
        }
        return acc;
    }

    PolyXU term() {
        PolyXU t = factor();
        while (eat('*') || starts_primary()) t = t * factor();
        return t;
    }

    bool starts_primary() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == 'x' || c == 'u' || c == 'w' || c == '|' || c == '(' ||
               s_.compare(pos_, 5, "<x,u>") == 0;
    }

    PolyXU factor() {
        skip();
        bool is_w = pos_ < s_.size() && s_[pos_] == 'w';
        bool is_norm = pos_ < s_.size() && s_[pos_] == '|';
        PolyXU base = primary();
        if (!eat('^')) {
            if (is_norm) fail("|x| and |u| need an even power");
            return base;
        }
        bool neg = eat('-');
        int e = small_int();
        if (is_w) {
            int pw = neg ? -e : e;
            return poly_constant(m_, ScaledRational(mpq_class(1), pw));
        }
        if (neg) fail("negative power of a polynomial");
        if (is_norm) {
            if (e % 2) fail("|x| and |u| need an even power");
            PolyXU r = poly_constant(m_, ScaledRational(1));
            for (int i = 0; i < e / 2; ++i) r = r * base;
            return r;
        }
        PolyXU r = poly_constant(m_, ScaledRational(1));
        for (int i = 0; i < e; ++i) r = r * base;
        return r;
    }

    PolyXU variable(Block b) {
        int i = small_int();
        if (i < 1 || i > m_) fail("variable index out of range");
        return poly_var(m_, b, i - 1);
    }

    PolyXU primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class n = integer();
            mpz_class d = 1;
            if (eat('/')) d = integer();
            if (d == 0) fail("zero denominator");
            return poly_constant(m_, ScaledRational(mpq_class(n, d)));
        }
        if (eat("|x|")) return norm_sq(m_, X);
        if (eat("|u|")) return norm_sq(m_, U);
        if (eat("<x,u>")) return dot_xu(m_);
        if (eat('(')) {
            PolyXU p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        ++pos_;
        if (c == 'x') return variable(X);
        if (c == 'u') return variable(U);
        if (c == 'w') return poly_constant(m_, ScaledRational(mpq_class(1), 1));
        --pos_;
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    size_t pos_ = 0;
    int m_;
};

}  // namespace

json to_json(const PolyXU& p) { return poly_to_json<2>(p, {"x", "u"}); }

PolyXU poly_from_json(const json& j) { return poly_from_json_impl<2>(j, {"x", "u"}); }

json to_json(const Polynomial<4>& p) { return poly_to_json<4>(p, {"zeta", "x", "u", "v"}); }

Polynomial<4> poly4_from_json(const json& j) {
    return poly_from_json_impl<4>(j, {"zeta", "x", "u", "v"});
}

PolyXU parse_expression(const std::string& text, int m) { return Parser(text, m).parse(); }

std::string to_expression(const PolyXU& p) {
    if (p.is_zero()) return "0";
    const int m = p.dim();
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        mpq_class v = c.value();
        bool neg = sgn(v) < 0;
        if (neg) v = -v;
        if (first) out << (neg ? "-" : "");
        else out << (neg ? " - " : " + ");
        first = false;

        std::vector<std::string> factors;
        bool has_mono = false;
        for (int e : k) has_mono |= e != 0;
        if (v != 1 || (!has_mono && c.omega_pow() == 0)) factors.push_back(v.get_str());
        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < m; ++i) {
                int e = k[b * m + i];
                if (!e) continue;
                std::string f = (b == 0 ? "x" : "u") + std::to_string(i + 1);
                if (e > 1) f += "^" + std::to_string(e);
                factors.push_back(f);
            }
        if (c.omega_pow() == 1) factors.push_back("w");
        else if (c.omega_pow() != 0) factors.push_back("w^" + std::to_string(c.omega_pow()));
        for (size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
    }
    return out.str();
}

std::string normalize_unicode(const std::string& text) {
    static const std::pair<const char*, const char*> table[] = {
        {"\u00b2", "^2"}, {"\u2070", "0"}, {"\u00b9", "1"}, {"\u00b3", "^3"},
        {"\u2080", "0"}, {"\u2081", "1"}, {"\u2082", "2"}, {"\u2083", "3"}, {"\u2084", "4"},
        {"\u2085", "5"}, {"\u2086", "6"}, {"\u2087", "7"}, {"\u2088", "8"}, {"\u2089", "9"},
        {"\u27e8", "<"}, {"\u27e9", ">"}, {"\u03c9", "w"}, {"\u2212", "-"}, {"\u00b7", "*"}};
    std::string s = text;
    for (const auto& [from, to] : table) {
        std::string f = from;
        for (size_t at = s.find(f); at != std::string::npos; at = s.find(f, at + 1))
            s.replace(at, f.size(), to);
    }
    return s;
}

PolyXU load_poly(const std::string& source, int m) {
    std::ifstream in(source);
    if (in) {
        json j = json::parse(in);
        return poly_from_json(j);
    }
    std::string s = normalize_unicode(source);
    size_t a = s.find_first_not_of(" \t\n");
    if (a != std::string::npos && s[a] == '{') return poly_from_json(json::parse(s));
    if (a != std::string::npos && s[a] == '<' && s.back() == '>' && s.rfind("<x,u>", a) != a)
        s = s.substr(a + 1, s.size() - a - 2);
    return parse_expression(s, m);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace bosonic
