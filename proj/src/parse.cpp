#include "semiwave/parse.hpp"

#include <cctype>
#include <charconv>

namespace semiwave {

namespace {

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opt) : s_(text), opt_(opt) {}

    Expr run()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    const ParseOptions& opt_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) terms.push_back(term());
            else if (accept('-')) terms.push_back(-term());
            else break;
        }
        return Expr::sum(std::move(terms));
    }

    Expr term()
    {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) acc = acc * unary();
            else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                NormalForm dn = normalize(d);
                if (dn.is_zero()) {
                    pos_ = at;
                    fail("division by zero");
                }
                acc = acc / d;
            } else break;
        }
        return acc;
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Coeff exponent_of(const Expr& e, std::size_t at)
    {
        NormalForm n = normalize(e);
        if (!n.is_constant()) {
            pos_ = at;
            fail("exponent must not depend on t, r or jet variables");
        }
        return n.constant_value();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            Expr ex = unary();
            return Expr::power(base, exponent_of(ex, at));
        }
        return base;
    }

    std::string ident()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Expr primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int v = 0;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc{}) fail("bad integer literal");
            pos_ = static_cast<std::size_t>(ptr - s_.data());
            return Expr(Coeff(v));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t at = pos_;
            std::string id = ident();
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(') return call(id, at);
            return identifier(id, at);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr identifier(const std::string& id, std::size_t at)
    {
        if (id == "t") return Expr::t();
        if (id == "r") return Expr::r();
        if (id == "p") return Expr(Coeff::var(Var::P));
        if (id == "m") return Expr(Coeff::var(Var::M));
        if (id == "a") return Expr(Coeff::var(Var::A));
        if (id == "b") return Expr(Coeff::var(Var::B));
        if (id == "c") return Expr(Coeff::var(Var::C));
        if (id == "s") return Expr(Coeff::var(Var::S));
        if (id == "sigma") return Expr(Coeff::var(Var::Sigma));
        if (id == "i") return Expr(Coeff::var(Var::I));
        if (id == "eps") return Expr(Coeff::var(Var::Eps));
        if (id == "sqrt2") return Expr(Coeff::var(Var::Sqrt2));
        if (auto it = opt_.unknowns.find(id); it != opt_.unknowns.end())
            return Expr::function(FunSpec{id, it->second, std::vector<int>(it->second.size(), 0)});
        auto us = id.find('_');
        auto dep = dep_from_name(id.substr(0, us));
        if (!dep) {
            pos_ = at;
            fail("unknown identifier '" + id + "'");
        }
        int nt = 0, nr = 0;
        if (us != std::string::npos) {
            std::string suf = id.substr(us + 1);
            std::size_t k = 0;
            while (k < suf.size() && suf[k] == 't') ++nt, ++k;
            while (k < suf.size() && suf[k] == 'r') ++nr, ++k;
            if (k != suf.size() || suf.empty()) {
                pos_ = at;
                fail("malformed derivative suffix in '" + id + "'");
            }
        }
        return Expr::jet(*dep, nt, nr);
    }

    Expr diff_call(std::size_t at)
    {
        expect('(');
        skip_ws();
        std::string fn = ident();
        auto it = opt_.unknowns.find(fn);
        if (it == opt_.unknowns.end()) {
            pos_ = at;
            fail("diff expects a declared unknown function");
        }
        FunSpec f{fn, it->second, std::vector<int>(it->second.size(), 0)};
        while (accept(',')) {
            skip_ws();
            std::size_t xat = pos_;
            Expr x = identifier(ident(), xat);
            NormalForm xn = normalize(x);
            bool found = false;
            for (std::size_t k = 0; k < f.args.size(); ++k)
                if (NormalForm::atom(f.args[k]) == xn) {
                    ++f.orders[k];
                    found = true;
                }
            if (!found) {
                pos_ = xat;
                fail("not an argument of " + fn);
            }
        }
        expect(')');
        return Expr::function(f);
    }

    Expr call(const std::string& name, std::size_t at)
    {
        if (name == "diff") return diff_call(at);
        expect('(');
        Expr a = expr();
        std::optional<Expr> b;
        std::size_t second_at = pos_;
        if (accept(',')) {
            skip_ws();
            second_at = pos_;
            b = expr();
        }
        expect(')');
        if (name == "F") {
            if (!b) fail("F expects two arguments");
            Coeff q = exponent_of(*b, second_at);
            if (q.is_zero()) {
                if (!opt_.allow_ln_branch) {
                    pos_ = second_at;
                    fail("F(x, q) with q = 0 requires the logarithmic branch");
                }
                return Expr::ln(a);
            }
            return Expr::product({Expr(q.inverse()), Expr::power(a, q)});
        }
        if (b) {
            pos_ = at;
            fail(name + " expects one argument");
        }
        if (name == "ln") return Expr::ln(a);
        if (name == "exp") return Expr::exp(a);
        if (name == "abs") return Expr::power(Expr::product({a, conjugate(a)}), Coeff(1, 2));
        pos_ = at;
        fail("unknown function '" + name + "'");
    }
};

// ---------------------------------------------------------------------------
// Printing

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string coeff_text(const Coeff& c, int& prec)
{
    std::string s = c.str();
    if (c.is_rational()) {
        auto [n, d] = c.rational();
        prec = (n < 0) ? kUnary : (d == 1 ? kAtom : kProduct);
        return s;
    }
    const auto& num = c.num();
    if (c.den().is_one() && num.terms().size() == 1) prec = num.leading().coeff < 0 ? kUnary : kProduct;
    else if (c.den().is_one()) prec = kSum;
    else prec = kProduct;
    if (!c.den().is_one() && num.terms().size() == 1 && num.leading().coeff < 0) prec = kUnary;
    return s;
}

std::string wrap(const std::string& s, int have, int need)
{
    return have < need ? "(" + s + ")" : s;
}

std::string print_impl(const Expr& e, int& prec)
{
    switch (e.kind()) {
        case Expr::Kind::Const: return coeff_text(e.value(), prec);
        case Expr::Kind::T: prec = kAtom; return "t";
        case Expr::Kind::R: prec = kAtom; return "r";
        case Expr::Kind::Jet: prec = kAtom; return e.jet_var().name();
        case Expr::Kind::Fun: prec = kAtom; return e.fun().text();
        case Expr::Kind::Ln:
        case Expr::Kind::Exp: {
            int p;
            std::string in = print_impl(e.children()[0], p);
            prec = kAtom;
            return std::string(e.kind() == Expr::Kind::Ln ? "ln(" : "exp(") + in + ")";
        }
        case Expr::Kind::Power: {
            int p;
            std::string base = print_impl(e.children()[0], p);
            int pe;
            std::string ex = coeff_text(e.exponent(), pe);
            prec = kPower;
            return wrap(base, p, kAtom) + "^" + wrap(ex, pe, kAtom);
        }
        case Expr::Kind::Product: {
            std::string out;
            bool first = true;
            for (const auto& f : e.children()) {
                int p;
                std::string s = print_impl(f, p);
                if (first) {
                    // A leading -1 coefficient prints as unary minus.
                    if (f.kind() == Expr::Kind::Const && f.value() == Coeff(-1) && e.children().size() > 1) {
                        out = "-";
                        continue;
                    }
                    out += wrap(s, p, out == "-" ? kPower : kUnary);
                } else {
                    out += "*" + wrap(s, p, kPower);
                }
                first = false;
                if (out == "-") first = true;
            }
            prec = out.rfind('-', 0) == 0 ? kUnary : kProduct;
            return out;
        }
        case Expr::Kind::Sum: {
            std::string out;
            bool first = true;
            for (const auto& t : e.children()) {
                int p;
                std::string s = print_impl(t, p);
                if (first) out = s;
                else if (!s.empty() && s[0] == '-' && p >= kUnary) out += " - " + s.substr(1);
                else out += " + " + wrap(s, p, kProduct);
                first = false;
            }
            prec = kSum;
            return out;
        }
    }
    prec = kAtom;
    return "";
}

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options)
{
    return Parser(text, options).run();
}

NormalForm parse_nf(std::string_view text, const ParseOptions& options)
{
    return normalize(parse(text, options));
}

std::string print(const Expr& e)
{
    int p;
    return print_impl(e, p);
}

std::string print(const NormalForm& e)
{
    return print(Expr::from(e));
}

}  // namespace semiwave
