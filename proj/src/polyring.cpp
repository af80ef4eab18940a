#include "grotto/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "grotto/upoly.hpp"

namespace grotto {

bool valid_variable_name(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

MultiPoly MultiPoly::var(const Variable& name) {
    if (!valid_variable_name(name)) throw ParseError("invalid variable name: " + name);
    MultiPoly m;
    m.vars_ = {name};
    m.p_ = Poly::var(0);
    return m;
}

MultiPoly MultiPoly::from_engine(const Poly& p, const std::vector<Variable>& names) {
    if (names.size() > static_cast<size_t>(kMaxVars)) throw std::length_error("too many variables");
    MultiPoly m;
    m.vars_ = names;
    m.p_ = p;
    m.canonicalize();
    return m;
}

void MultiPoly::canonicalize() {
    VarMask used = p_.var_mask();
    if (used == (vars_.size() >= 64 ? ~VarMask(0) : (VarMask(1) << vars_.size()) - 1)) return;
    std::array<int8_t, kMaxVars> to;
    to.fill(-1);
    std::vector<Variable> kept;
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (used >> i & 1) {
            to[i] = static_cast<int8_t>(kept.size());
            kept.push_back(vars_[i]);
        }
    }
    p_ = p_.rename(to);
    vars_ = std::move(kept);
}

Poly MultiPoly::engine_in(const std::vector<Variable>& names) const {
    if (names == vars_) return p_;
    std::array<int8_t, kMaxVars> to;
    to.fill(-1);
    size_t j = 0;
    for (size_t i = 0; i < vars_.size(); ++i) {
        while (j < names.size() && names[j] != vars_[i]) ++j;
        if (j == names.size()) throw std::logic_error("engine_in: variable missing from target list");
        to[i] = static_cast<int8_t>(j);
    }
    return p_.rename(to);
}

bool MultiPoly::has_var(const Variable& x) const {
    return std::binary_search(vars_.begin(), vars_.end(), x);
}

unsigned MultiPoly::degree(const Variable& x) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), x);
    if (it == vars_.end() || *it != x) return 0;
    return p_.degree(static_cast<int>(it - vars_.begin()));
}

std::vector<Variable> union_vars(const std::vector<const MultiPoly*>& ps) {
    std::vector<Variable> out;
    for (const auto* p : ps) out.insert(out.end(), p->vars().begin(), p->vars().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > static_cast<size_t>(kMaxVars)) throw std::length_error("too many variables");
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(*this);
    r.p_ = -p_;
    return r;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    auto names = union_vars({&a, &b});
    return MultiPoly::from_engine(a.engine_in(names) + b.engine_in(names), names);
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    auto names = union_vars({&a, &b});
    return MultiPoly::from_engine(a.engine_in(names) - b.engine_in(names), names);
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    auto names = union_vars({&a, &b});
    return MultiPoly::from_engine(a.engine_in(names) * b.engine_in(names), names);
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r(*this);
    r.p_ = p_.pow(e);
    if (e == 0) r.vars_.clear();
    return r;
}

Rational MultiPoly::evaluate(const std::map<Variable, Rational>& point) const {
    std::vector<Rational> vals;
    for (const auto& v : vars_) {
        auto it = point.find(v);
        if (it == point.end()) throw std::invalid_argument("no value for variable " + v);
        vals.push_back(it->second);
    }
    Rational acc = 0;
    for (const auto& t : p_.terms()) {
        Rational term(t.c.to_mpz());
        for (size_t i = 0; i < vals.size(); ++i)
            for (unsigned k = 0; k < t.m.e[i]; ++k) term *= vals[i];
        acc += term;
    }
    acc.canonicalize();
    return acc;
}

std::string MultiPoly::str() const {
    if (p_.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p_.terms()) {
        Int c = t.c;
        bool neg = c.sign() < 0;
        if (neg) c = -c;
        if (first) os << (neg ? "-" : "");
        else os << (neg ? " - " : " + ");
        first = false;
        bool wrote = false;
        if (!c.is_one() || t.m.deg == 0) {
            os << c;
            wrote = true;
        }
        for (size_t i = 0; i < vars_.size(); ++i) {
            unsigned e = t.m.e[i];
            if (!e) continue;
            if (wrote) os << '*';
            os << vars_[i];
            if (e > 1) os << '^' << e;
            wrote = true;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    MultiPoly parse_all() {
        MultiPoly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("polynomial parse error at column " + std::to_string(i_ + 1) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    MultiPoly expr() {
        MultiPoly r = term();
        while (true) {
            if (eat('+')) r = r + term();
            else if (eat('-')) r = r - term();
            else return r;
        }
    }
    MultiPoly term() {
        MultiPoly r = unary();
        while (eat('*')) r = r * unary();
        return r;
    }
    MultiPoly unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    MultiPoly power() {
        MultiPoly base = atom();
        if (eat('^')) {
            skip();
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (start == i_) fail("exponent must be a nonnegative integer literal");
            unsigned long e = std::stoul(s_.substr(start, i_ - start));
            if (e > 255) fail("exponent too large");
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }
    MultiPoly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            MultiPoly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return MultiPoly(Int::parse(s_.substr(start, i_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return MultiPoly::var(s_.substr(start, i_ - start));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    size_t i_ = 0;
};

}  // namespace

MultiPoly MultiPoly::parse(const std::string& text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// operations

MultiPoly poly_arith(PolyOp op, const MultiPoly& a, const MultiPoly& b) {
    switch (op) {
        case PolyOp::Add: return a + b;
        case PolyOp::Sub: return a - b;
        case PolyOp::Mul: return a * b;
        case PolyOp::Neg: return -a;
        case PolyOp::Pow: {
            if (!b.is_constant()) throw std::invalid_argument("pow exponent must be an integer");
            Int e = b.is_zero() ? Int(0) : b.engine().constant_value();
            if (e.sign() < 0 || !e.fits_int64() || e.small() > 255) throw std::invalid_argument("bad exponent");
            return a.pow(static_cast<unsigned>(e.small()));
        }
    }
    throw std::logic_error("unknown op");
}

MultiPoly poly_arith(PolyOp op, const MultiPoly& a, unsigned exponent) {
    if (op != PolyOp::Pow) throw std::invalid_argument("integer operand only valid for pow");
    return a.pow(exponent);
}

namespace {

int index_of(const std::vector<Variable>& names, const Variable& x) {
    return static_cast<int>(std::lower_bound(names.begin(), names.end(), x) - names.begin());
}

}  // namespace

MultiPoly substitute(const MultiPoly& f, const Variable& x, const MultiPoly& u) {
    if (!f.has_var(x)) return f;
    MultiPoly xv = MultiPoly::var(x);
    auto names = union_vars({&f, &u, &xv});
    int xi = index_of(names, x);
    return MultiPoly::from_engine(f.engine_in(names).substitute(xi, u.engine_in(names)), names);
}

MultiPoly substitute_cleared(const MultiPoly& f, const Variable& x, const MultiPoly& u, const MultiPoly& v) {
    MultiPoly xv = MultiPoly::var(x);
    auto names = union_vars({&f, &u, &v, &xv});
    int xi = index_of(names, x);
    return MultiPoly::from_engine(
        f.engine_in(names).substitute_cleared(xi, u.engine_in(names), v.engine_in(names)), names);
}

std::optional<std::pair<MultiPoly, unsigned>> perfect_power(const MultiPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("perfect_power of zero");
    auto r = perfect_power(f.engine());
    if (!r) return std::nullopt;
    return std::make_pair(MultiPoly::from_engine(r->first, f.vars()), r->second);
}

std::optional<MultiPoly> perfect_square_root(const MultiPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("perfect_square_root of zero");
    auto r = perfect_square_root(f.engine());
    if (!r) return std::nullopt;
    return MultiPoly::from_engine(*r, f.vars());
}

std::optional<std::pair<MultiPoly, MultiPoly>> split_product(const MultiPoly& f, unsigned degree_bound) {
    if (f.is_zero()) throw std::invalid_argument("split_product of zero");
    auto r = split_product(f.engine(), SplitConfig{degree_bound});
    if (!r) return std::nullopt;
    return std::make_pair(MultiPoly::from_engine(r->first, f.vars()), MultiPoly::from_engine(r->second, f.vars()));
}

std::pair<unsigned, std::vector<MultiPoly>> decompose_in(const MultiPoly& f, const Variable& x) {
    if (!f.has_var(x)) return {0, {f}};
    int xi = index_of(f.vars(), x);
    auto cs = f.engine().coeffs_in(xi);
    std::vector<MultiPoly> out;
    for (const auto& c : cs) out.push_back(MultiPoly::from_engine(c, f.vars()));
    return {static_cast<unsigned>(cs.size() - 1), out};
}

std::vector<RootMult> univariate_linear_roots(const MultiPoly& f, const Variable& x) {
    if (f.is_zero()) throw std::invalid_argument("roots of zero polynomial");
    if (f.vars().size() != 1 || f.vars()[0] != x) throw std::invalid_argument("polynomial is not univariate in " + x);
    auto cs = f.engine().coeffs_in(0);
    upoly::UPoly u;
    for (const auto& c : cs) u.push_back(c.is_zero() ? Int(0) : c.constant_value());
    upoly::UPoly rest;
    auto roots = upoly::rational_roots(u, rest);
    if (upoly::degree(rest) >= 1)
        throw NonLinearFactorization("polynomial " + f.str() + " has an irreducible factor of degree >= 2");
    std::vector<RootMult> out;
    for (const auto& r : roots) out.push_back({r.value, r.multiplicity});
    return out;
}

}  // namespace grotto
