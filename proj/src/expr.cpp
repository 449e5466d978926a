#include "superalg/expr.hpp"

#include <cctype>

#include "superalg/berezin.hpp"
#include "superalg/superhilbert.hpp"
#include "superalg/supermatrix.hpp"

namespace superalg {

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Number: return a.value == b.value && a.scale == b.scale;
    case Expr::Kind::Imag: return true;
    case Expr::Kind::Gen: return a.gen == b.gen;
    case Expr::Kind::Call: return a.fn == b.fn && a.args == b.args;
    default: return a.args == b.args;
    }
}

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

const char* const kMinusUtf8 = "\xE2\x88\x92";

bool known_call(const std::string& f) {
    return f == "ber" || f == "piber" || f == "integrate" || f == "fourier" || f == "conj" || f == "C";
}

std::size_t arity(const std::string& f) { return f == "ber" || f == "piber" ? 4 : 1; }

class Parser {
public:
    Parser(const std::string& s, int n) : s_(s), n_(n) {}

    Expr run() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    int n_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

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
    bool eat_minus() {
        skip();
        if (eat('-')) return true;
        if (s_.compare(pos_, 3, kMinusUtf8) == 0) {
            pos_ += 3;
            return true;
        }
        return false;
    }
    std::string digits() {
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(b, pos_ - b);
    }

    Expr expr() {
        auto lhs = term();
        for (;;) {
            Expr::Kind k;
            if (eat('+')) k = Expr::Kind::Add;
            else if (eat_minus()) k = Expr::Kind::Sub;
            else return lhs;
            Expr node;
            node.kind = k;
            node.args = {std::move(lhs), term()};
            lhs = std::move(node);
        }
    }

    Expr term() {
        auto lhs = factor();
        while (eat('*')) {
            Expr node;
            node.kind = Expr::Kind::Mul;
            node.args = {std::move(lhs), factor()};
            lhs = std::move(node);
        }
        return lhs;
    }

    Expr factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (eat_minus()) {
            Expr node;
            node.kind = Expr::Kind::Neg;
            node.args = {factor()};
            return node;
        }
        if (eat('(')) {
            auto e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return word();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        std::size_t start = pos_;
        Expr e;
        auto whole = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            auto frac = digits();
            if (frac.empty()) fail("expected digits after '.'");
            e.scale = int(frac.size());
            e.value = q_from_string(whole + "." + frac);
        } else if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            auto den = digits();
            if (den.empty()) fail("expected a denominator");
            if (Q(den) == 0) fail_at("zero denominator", start);
            e.value = q_from_string(whole + "/" + den);
        } else {
            e.value = q_from_string(whole);
        }
        return e;
    }

    Expr word() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string w = s_.substr(start, pos_ - start);
        Expr e;
        if (w == "th") {
            auto d = digits();
            if (d.empty()) fail("expected a generator index after 'th'");
            if (d.size() > 3) fail_at("generator index out of range", start);
            e.kind = Expr::Kind::Gen;
            e.gen = std::stoi(d);
            if (e.gen < 1 || e.gen > n_)
                fail_at("generator th" + d + " not declared (n = " + std::to_string(n_) + ")", start);
            return e;
        }
        if (w == "i") {
            e.kind = Expr::Kind::Imag;
            return e;
        }
        if (!known_call(w)) fail_at("unknown name '" + w + "'", start);
        if (!eat('(')) fail("expected '(' after " + w);
        e.kind = Expr::Kind::Call;
        e.fn = w;
        e.args.push_back(expr());
        while (eat(',')) e.args.push_back(expr());
        if (!eat(')')) fail("expected ')'");
        if (e.args.size() != arity(w))
            fail_at(w + " takes " + std::to_string(arity(w)) + " argument(s)", start);
        return e;
    }
};

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    default: return 4;
    }
}

std::string number_string(const Expr& e) {
    if (e.scale < 0) return q_to_string(e.value);
    mpz_class ten = 1;
    for (int k = 0; k < e.scale; ++k) ten *= 10;
    Q t = e.value * Q(ten);
    t.canonicalize();
    std::string s = mpz_class(t.get_num()).get_str();
    while (int(s.size()) <= e.scale) s.insert(0, "0");
    s.insert(s.size() - std::size_t(e.scale), ".");
    return s;
}

std::string wrap(const Expr& e, bool paren) {
    auto s = print_expr(e);
    return paren ? "(" + s + ")" : s;
}

}  // namespace

Expr parse_expr(const std::string& source, int n) {
    if (n < 0 || n > 16) throw std::invalid_argument("parse_expr: n must be in 0..16");
    return Parser(source, n).run();
}

std::string print_expr(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Number: return number_string(e);
    case Expr::Kind::Imag: return "i";
    case Expr::Kind::Gen: return "th" + std::to_string(e.gen);
    case Expr::Kind::Neg: return "-" + wrap(e.args[0], precedence(e.args[0]) < 3);
    case Expr::Kind::Call: {
        std::string s = e.fn + "(";
        for (std::size_t a = 0; a < e.args.size(); ++a) s += (a ? ", " : "") + print_expr(e.args[a]);
        return s + ")";
    }
    default: {
        int p = precedence(e);
        const char* op = e.kind == Expr::Kind::Add ? " + " : e.kind == Expr::Kind::Sub ? " - " : "*";
        return wrap(e.args[0], precedence(e.args[0]) < p) + op + wrap(e.args[1], precedence(e.args[1]) <= p);
    }
    }
}

template <class S>
Grassmann<S> evaluate_expr(const Expr& e, int n) {
    using R = Ring<S>;
    auto ev = [n](const Expr& x) { return evaluate_expr<S>(x, n); };
    switch (e.kind) {
    case Expr::Kind::Number: return Grassmann<S>::constant(n, R::from_q(e.value));
    case Expr::Kind::Imag: return Grassmann<S>::constant(n, R::imag_unit());
    case Expr::Kind::Gen: return Grassmann<S>::generator(n, e.gen);
    case Expr::Kind::Add: return ev(e.args[0]) + ev(e.args[1]);
    case Expr::Kind::Sub: return ev(e.args[0]) - ev(e.args[1]);
    case Expr::Kind::Mul: return ev(e.args[0]) * ev(e.args[1]);
    case Expr::Kind::Neg: return -ev(e.args[0]);
    case Expr::Kind::Call: break;
    }
    if (e.fn == "conj") return ev(e.args[0]).complex_conjugate();
    if (e.fn == "C") return ev(e.args[0]).conj_C();
    if (e.fn == "integrate") return berezin_integral(ev(e.args[0]));
    if (e.fn == "fourier") {
        if constexpr (!R::complex) {
            throw RingError("fourier needs a complex coefficient ring");
        } else {
            auto f = ev(e.args[0]);
            FnSpace<S> V(ProtoSuperHilbert<S>::scalars(), n);
            auto out = V.fourier_direct().apply(f.coeffs());
            Grassmann<S> g(n);
            for (Mask I = 0; I < g.size(); ++I) g[I] = out[I];
            return g;
        }
    }
    SuperMatrix<S> M(1, 1, n);
    for (int k = 0; k < 4; ++k) M(k / 2, k % 2) = ev(e.args[std::size_t(k)]);
    return e.fn == "ber" ? berezinian(M) : pi_berezinian(M);
}

template Grassmann<Q> evaluate_expr<Q>(const Expr&, int);
template Grassmann<CQ> evaluate_expr<CQ>(const Expr&, int);
template Grassmann<F64> evaluate_expr<F64>(const Expr&, int);
template Grassmann<CF64> evaluate_expr<CF64>(const Expr&, int);

}  // namespace superalg
