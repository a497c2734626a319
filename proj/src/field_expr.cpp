#include "crsch/field_expr.hpp"

#include <cctype>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <cstdlib>

namespace crsch {

namespace {

FieldExprPtr make(FieldExpr e) { return std::make_shared<const FieldExpr>(std::move(e)); }

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

FieldExprPtr fe_lit(cplx v) {
    FieldExpr e;
    e.kind = FieldExpr::Kind::Lit;
    e.lit = v;
    return make(std::move(e));
}

FieldExprPtr fe_z(int k) {
    FieldExpr e;
    e.kind = FieldExpr::Kind::Z;
    e.index = k;
    return make(std::move(e));
}

FieldExprPtr fe_zbar(int k) {
    FieldExpr e;
    e.kind = FieldExpr::Kind::Zbar;
    e.index = k;
    return make(std::move(e));
}

FieldExprPtr fe_t() {
    FieldExpr e;
    e.kind = FieldExpr::Kind::T;
    return make(std::move(e));
}

static FieldExprPtr fe_bin(FieldExpr::Kind k, FieldExprPtr a, FieldExprPtr b) {
    FieldExpr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return make(std::move(e));
}

FieldExprPtr fe_add(FieldExprPtr a, FieldExprPtr b) { return fe_bin(FieldExpr::Kind::Add, std::move(a), std::move(b)); }
FieldExprPtr fe_sub(FieldExprPtr a, FieldExprPtr b) { return fe_bin(FieldExpr::Kind::Sub, std::move(a), std::move(b)); }
FieldExprPtr fe_mul(FieldExprPtr a, FieldExprPtr b) { return fe_bin(FieldExpr::Kind::Mul, std::move(a), std::move(b)); }
FieldExprPtr fe_div(FieldExprPtr a, FieldExprPtr b) { return fe_bin(FieldExpr::Kind::Div, std::move(a), std::move(b)); }

FieldExprPtr fe_neg(FieldExprPtr a) {
    // Fold negation of literals so that print/parse agree on a canonical form.
    if (a->kind == FieldExpr::Kind::Lit) return fe_lit(-a->lit);
    FieldExpr e;
    e.kind = FieldExpr::Kind::Neg;
    e.a = std::move(a);
    return make(std::move(e));
}

FieldExprPtr fe_pow(FieldExprPtr a, int p) {
    FieldExpr e;
    e.kind = FieldExpr::Kind::Pow;
    e.a = std::move(a);
    e.expo = p;
    return make(std::move(e));
}

FieldExprPtr fe_fn(FnKind fn, FieldExprPtr a) {
    FieldExpr e;
    e.kind = FieldExpr::Kind::Fn;
    e.fn = fn;
    e.a = std::move(a);
    return make(std::move(e));
}

// ---------------------------------------------------------------------------
// Evaluation

static constexpr double kSingularValueTol = 1e-12;

Jet eval_field(const FieldExpr& e, const JetPoint& jp) {
    using K = FieldExpr::Kind;
    switch (e.kind) {
        case K::Lit:
            return jp.constant(e.lit);
        case K::Z:
            if (e.index < 0 || e.index >= jp.n)
                throw ConfigError("coordinate index out of range: z" + std::to_string(e.index + 1));
            return jp.z(e.index);
        case K::Zbar:
            if (e.index < 0 || e.index >= jp.n)
                throw ConfigError("coordinate index out of range: zbar" + std::to_string(e.index + 1));
            return jp.zbar(e.index);
        case K::T:
            return jp.t();
        case K::Add:
            return eval_field(*e.a, jp) + eval_field(*e.b, jp);
        case K::Sub:
            return eval_field(*e.a, jp) - eval_field(*e.b, jp);
        case K::Mul:
            return eval_field(*e.a, jp) * eval_field(*e.b, jp);
        case K::Div: {
            Jet num = eval_field(*e.a, jp);
            Jet den = eval_field(*e.b, jp);
            if (std::abs(den.value()) < kSingularValueTol)
                throw DomainError("division by zero at base point", print_field_expr(e));
            return num / den;
        }
        case K::Neg:
            return -eval_field(*e.a, jp);
        case K::Pow: {
            Jet base = eval_field(*e.a, jp);
            if (e.expo < 0 && std::abs(base.value()) < kSingularValueTol)
                throw DomainError("negative power of zero at base point", print_field_expr(e));
            return pow_int(base, e.expo);
        }
        case K::Fn: {
            Jet u = eval_field(*e.a, jp);
            switch (e.fn) {
                case FnKind::Log:
                    if (std::abs(u.value()) < kSingularValueTol)
                        throw DomainError("log of zero at base point", print_field_expr(e));
                    return log(u);
                case FnKind::Exp:
                    return exp(u);
                case FnKind::Re:
                    return real_part(u);
                case FnKind::Im:
                    return imag_part(u);
                case FnKind::Abs2:
                    return abs2(u);
                case FnKind::Conj:
                    return u.conjugated();
            }
            break;
        }
    }
    throw std::logic_error("eval_field: unreachable");
}

// ---------------------------------------------------------------------------
// Parser: recursive descent matching the documented grammar, byte offsets in
// errors. Unary minus applied to a literal is folded into the literal.

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    FieldExprPtr run() {
        FieldExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    FieldExprPtr expr() {
        FieldExprPtr e = term();
        for (;;) {
            if (eat('+'))
                e = fe_add(e, term());
            else if (eat('-'))
                e = fe_sub(e, term());
            else
                return e;
        }
    }

    FieldExprPtr term() {
        FieldExprPtr e = factor();
        for (;;) {
            if (eat('*'))
                e = fe_mul(e, factor());
            else if (eat('/'))
                e = fe_div(e, factor());
            else
                return e;
        }
    }

    FieldExprPtr factor() {
        if (eat('-')) return fe_neg(factor());
        FieldExprPtr e = atom();
        if (eat('^')) return fe_pow(e, parse_int());
        return e;
    }

    int parse_int() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits) throw ParseError("expected integer exponent", start);
        return std::atoi(s_.substr(start, pos_ - start).c_str());
    }

    // Unsigned decimal starting at pos_ (digits or leading '.'); advances pos_.
    bool try_decimal(double& out) {
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return false;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) return false;
        pos_ += static_cast<size_t>(end - begin);
        out = v;
        return true;
    }

    FieldExprPtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];

        if (c == '(') {
            size_t save = pos_;
            ++pos_;
            if (FieldExprPtr lit = try_complex_literal()) return lit;
            pos_ = save + 1;
            FieldExprPtr e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0;
            try_decimal(v);
            if (pos_ < s_.size() && s_[pos_] == 'i') {
                ++pos_;
                return fe_lit(cplx(0, v));
            }
            return fe_lit(cplx(v, 0));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return ident_or_func();
        throw ParseError("unexpected character", pos_);
    }

    // Body of "(a+bi)" after the '('; nullptr (without consuming) on mismatch.
    FieldExprPtr try_complex_literal() {
        size_t save = pos_;
        skip_ws();
        double re = 0, im = 0;
        bool neg_re = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            neg_re = true;
            ++pos_;
            skip_ws();
        }
        if (!try_decimal(re)) {
            pos_ = save;
            return nullptr;
        }
        if (neg_re) re = -re;
        skip_ws();
        if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) {
            pos_ = save;
            return nullptr;
        }
        bool neg_im = s_[pos_] == '-';
        ++pos_;
        skip_ws();
        if (!try_decimal(im)) {
            pos_ = save;
            return nullptr;
        }
        if (neg_im) im = -im;
        if (pos_ >= s_.size() || s_[pos_] != 'i') {
            pos_ = save;
            return nullptr;
        }
        ++pos_;
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ')') {
            pos_ = save;
            return nullptr;
        }
        ++pos_;
        return fe_lit(cplx(re, im));
    }

    FieldExprPtr ident_or_func() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);

        if (name == "t") return fe_t();
        for (const char* prefix : {"zbar", "z"}) {
            size_t plen = std::string(prefix).size();
            if (name.size() > plen && name.compare(0, plen, prefix) == 0 &&
                std::all_of(name.begin() + plen, name.end(),
                            [](unsigned char ch) { return std::isdigit(ch); })) {
                int k = std::atoi(name.c_str() + plen);
                if (k < 1) throw ParseError("coordinate index must be >= 1", start + plen);
                return plen == 1 ? fe_z(k - 1) : fe_zbar(k - 1);
            }
        }

        FnKind fn;
        if (name == "log")
            fn = FnKind::Log;
        else if (name == "exp")
            fn = FnKind::Exp;
        else if (name == "re")
            fn = FnKind::Re;
        else if (name == "im")
            fn = FnKind::Im;
        else if (name == "abs2")
            fn = FnKind::Abs2;
        else if (name == "conj")
            fn = FnKind::Conj;
        else
            throw ParseError("unknown identifier '" + name + "'", start);

        if (!eat('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
        FieldExprPtr arg = expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return fe_fn(fn, arg);
    }
};

std::string print_lit(cplx v) {
    if (v.imag() == 0) {
        if (v.real() < 0) return "-" + fmt_double(-v.real());
        return fmt_double(v.real());
    }
    if (v.real() == 0) {
        if (v.imag() < 0) return "-" + fmt_double(-v.imag()) + "i";
        return fmt_double(v.imag()) + "i";
    }
    std::string out = "(";
    out += v.real() < 0 ? "-" + fmt_double(-v.real()) : fmt_double(v.real());
    out += v.imag() < 0 ? "-" + fmt_double(-v.imag()) : "+" + fmt_double(v.imag());
    out += "i)";
    return out;
}

const char* fn_name(FnKind fn) {
    switch (fn) {
        case FnKind::Log: return "log";
        case FnKind::Exp: return "exp";
        case FnKind::Re: return "re";
        case FnKind::Im: return "im";
        case FnKind::Abs2: return "abs2";
        case FnKind::Conj: return "conj";
    }
    return "?";
}

}  // namespace

FieldExprPtr parse_field_expr(const std::string& text) { return Parser(text).run(); }

std::string print_field_expr(const FieldExpr& e) {
    using K = FieldExpr::Kind;
    switch (e.kind) {
        case K::Lit:
            return print_lit(e.lit);
        case K::Z:
            return "z" + std::to_string(e.index + 1);
        case K::Zbar:
            return "zbar" + std::to_string(e.index + 1);
        case K::T:
            return "t";
        case K::Add:
            return "(" + print_field_expr(*e.a) + ")+(" + print_field_expr(*e.b) + ")";
        case K::Sub:
            return "(" + print_field_expr(*e.a) + ")-(" + print_field_expr(*e.b) + ")";
        case K::Mul:
            return "(" + print_field_expr(*e.a) + ")*(" + print_field_expr(*e.b) + ")";
        case K::Div:
            return "(" + print_field_expr(*e.a) + ")/(" + print_field_expr(*e.b) + ")";
        case K::Neg:
            return "-(" + print_field_expr(*e.a) + ")";
        case K::Pow:
            return "(" + print_field_expr(*e.a) + ")^" + std::to_string(e.expo);
        case K::Fn:
            return std::string(fn_name(e.fn)) + "(" + print_field_expr(*e.a) + ")";
    }
    return "?";
}

double fd_crosscheck(const FieldExpr& e, const std::vector<double>& p, int coordinate, int order) {
    if (order != 1 && order != 2) throw ConfigError("fd_crosscheck: order must be 1 or 2");
    auto value_at = [&](const std::vector<double>& q) {
        return eval_field(e, seed_jet(q, 1)).value();
    };
    const double h = order == 1 ? 1e-5 : 1e-4;
    std::vector<double> hi = p, lo = p;
    hi[coordinate] += h;
    lo[coordinate] -= h;
    cplx fd;
    if (order == 1) {
        fd = (value_at(hi) - value_at(lo)) / (2 * h);
    } else {
        fd = (value_at(hi) - 2.0 * value_at(p) + value_at(lo)) / (h * h);
    }
    Jet j = eval_field(e, seed_jet(p, order));
    Jet d = j.derivative(coordinate);
    if (order == 2) d = d.derivative(coordinate);
    return std::abs(fd - d.value());
}

bool structurally_equal(const FieldExpr& a, const FieldExpr& b) {
    if (a.kind != b.kind) return false;
    using K = FieldExpr::Kind;
    switch (a.kind) {
        case K::Lit:
            return a.lit == b.lit;
        case K::Z:
        case K::Zbar:
            return a.index == b.index;
        case K::T:
            return true;
        case K::Pow:
            return a.expo == b.expo && structurally_equal(*a.a, *b.a);
        case K::Neg:
            return structurally_equal(*a.a, *b.a);
        case K::Fn:
            return a.fn == b.fn && structurally_equal(*a.a, *b.a);
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div:
            return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    }
    return false;
}

bool is_holomorphic(const FieldExpr& e) {
    using K = FieldExpr::Kind;
    switch (e.kind) {
        case K::Lit:
        case K::Z:
            return true;
        case K::Zbar:
        case K::T:
            return false;
        case K::Neg:
            return is_holomorphic(*e.a);
        case K::Pow:
            return is_holomorphic(*e.a);
        case K::Fn:
            return (e.fn == FnKind::Log || e.fn == FnKind::Exp) && is_holomorphic(*e.a);
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div:
            return is_holomorphic(*e.a) && is_holomorphic(*e.b);
    }
    return false;
}

}  // namespace crsch
