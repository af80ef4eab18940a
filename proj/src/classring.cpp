#include "grotto/classring.hpp"

#include <ostream>
#include <sstream>

namespace grotto {

ClassPoly::ClassPoly(long long c) {
    if (c) c_.push_back(Int(c));
}

ClassPoly::ClassPoly(const Int& c) {
    if (!c.is_zero()) c_.push_back(c);
}

ClassPoly::ClassPoly(upoly::UPoly coeffs) : c_(std::move(coeffs)) { upoly::trim(c_); }

ClassPoly ClassPoly::q() { return ClassPoly(upoly::UPoly{Int(0), Int(1)}); }

ClassPoly ClassPoly::q_pow(unsigned k) {
    upoly::UPoly c(k + 1);
    c[k] = Int(1);
    return ClassPoly(std::move(c));
}

ClassPoly ClassPoly::from_multipoly(const MultiPoly& m) {
    if (m.vars().size() > 1 || (m.vars().size() == 1 && m.vars()[0] != "q"))
        throw ParseError("class polynomial may only use the variable q: " + m.str());
    if (m.vars().empty()) return m.is_zero() ? ClassPoly() : ClassPoly(m.engine().constant_value());
    auto cs = m.engine().coeffs_in(0);
    upoly::UPoly u;
    for (const auto& c : cs) u.push_back(c.is_zero() ? Int(0) : c.constant_value());
    return ClassPoly(std::move(u));
}

ClassPoly ClassPoly::parse(const std::string& text) { return from_multipoly(MultiPoly::parse(text)); }

namespace {

std::string render(const upoly::UPoly& c, bool spaced) {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = c.size(); k-- > 0;) {
        if (c[k].is_zero()) continue;
        Int v = c[k];
        bool neg = v.sign() < 0;
        if (neg) v = -v;
        if (first) os << (neg ? "-" : "");
        else if (spaced) os << (neg ? " - " : " + ");
        else os << (neg ? "-" : "+");
        first = false;
        if (k == 0) {
            os << v;
            continue;
        }
        if (!v.is_one()) os << v << '*';
        os << 'q';
        if (k > 1) os << '^' << k;
    }
    return os.str();
}

unsigned strip_root(upoly::UPoly& c, long long root) {
    unsigned k = 0;
    const upoly::UPoly lin{Int(-root), Int(1)};
    while (upoly::degree(c) >= 1 && upoly::eval(c, Int(root)).is_zero()) {
        c = *upoly::divexact(c, lin);
        ++k;
    }
    return k;
}

}  // namespace

std::string ClassPoly::str() const { return render(c_, true); }
std::string ClassPoly::compact() const { return render(c_, false); }

std::string ClassPoly::factored() const {
    if (c_.empty()) return "0";
    upoly::UPoly r = c_;
    unsigned a = strip_root(r, 0), b = strip_root(r, 1), c = strip_root(r, 2);
    std::string sign;
    if (r.back().sign() < 0) {
        sign = "-";
        r = upoly::neg(r);
    }
    std::vector<std::string> parts;
    Int cont = upoly::content(r);
    if (!cont.is_one()) {
        parts.push_back(cont.str());
        r = upoly::primitive(r);
    }
    if (a) parts.push_back(a == 1 ? "q" : "q^" + std::to_string(a));
    if (b) parts.push_back(b == 1 ? "(q-1)" : "(q-1)^" + std::to_string(b));
    if (c) parts.push_back(c == 1 ? "(q-2)" : "(q-2)^" + std::to_string(c));
    if (upoly::degree(r) >= 1) {
        std::string body = render(r, false);
        parts.push_back(parts.empty() && sign.empty() ? body : "(" + body + ")");
    }
    if (parts.empty()) return sign + "1";
    std::string out = sign;
    for (size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    return out;
}

std::ostream& operator<<(std::ostream& os, const ClassPoly& p) { return os << p.str(); }

// ---------------------------------------------------------------------------

ClassExpr::ClassExpr(const ClassPoly& num, const ClassPoly& den) : num_(num), den_(den) {
    if (den.is_zero()) throw DivisionByZero("zero denominator");
    canonicalize();
}

void ClassExpr::canonicalize() {
    if (num_.is_zero()) {
        den_ = ClassPoly(1);
        return;
    }
    if (den_ == ClassPoly(1)) return;
    auto g = upoly::gcd(num_.coeffs(), den_.coeffs());
    upoly::UPoly n = num_.coeffs(), d = den_.coeffs();
    if (upoly::degree(g) >= 1) {
        n = *upoly::divexact(n, g);
        d = *upoly::divexact(d, g);
    }
    Int c = Int::gcd(upoly::content(n), upoly::content(d));
    if (d.back().sign() < 0) c = -c;
    if (!c.is_one()) {
        for (auto& x : n) x = Int::divexact(x, c);
        for (auto& x : d) x = Int::divexact(x, c);
    }
    num_ = ClassPoly(std::move(n));
    den_ = ClassPoly(std::move(d));
}

bool ClassExpr::is_localized() const {
    upoly::UPoly r = den_.coeffs();
    strip_root(r, 0);
    strip_root(r, 1);
    return r.size() == 1 && r[0].is_one();
}

ClassExpr operator+(const ClassExpr& a, const ClassExpr& b) {
    if (a.is_polynomial() && b.is_polynomial()) return ClassExpr(a.num_ + b.num_);
    if (a.den_ == b.den_) return ClassExpr(a.num_ + b.num_, a.den_);
    return ClassExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

ClassExpr operator-(const ClassExpr& a, const ClassExpr& b) { return a + (-b); }

ClassExpr ClassExpr::operator-() const {
    ClassExpr r(*this);
    r.num_ = -num_;
    return r;
}

ClassExpr operator*(const ClassExpr& a, const ClassExpr& b) {
    if (a.is_polynomial() && b.is_polynomial()) return ClassExpr(a.num_ * b.num_);
    return ClassExpr(a.num_ * b.num_, a.den_ * b.den_);
}

ClassExpr operator/(const ClassExpr& a, const ClassExpr& b) {
    if (b.is_zero()) throw DivisionByZero("division by the zero class");
    return ClassExpr(a.num_ * b.den_, a.den_ * b.num_);
}

std::string ClassExpr::str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::string ClassExpr::factored() const {
    if (is_polynomial()) return num_.factored();
    return "(" + num_.factored() + ")/(" + den_.factored() + ")";
}

std::ostream& operator<<(std::ostream& os, const ClassExpr& e) { return os << e.str(); }

ClassExpr cls_arith(ClsOp op, const ClassExpr& a, const ClassExpr& b) {
    switch (op) {
        case ClsOp::Add: return a + b;
        case ClsOp::Sub: return a - b;
        case ClsOp::Mul: return a * b;
        case ClsOp::Div: return a / b;
    }
    throw std::logic_error("unknown op");
}

ClassPoly as_polynomial(const ClassExpr& a) {
    if (!a.is_polynomial()) throw NotPolynomial("class " + a.str() + " is not a polynomial in q");
    return a.num();
}

Rational evaluate_at(const ClassExpr& a, const Rational& p) {
    Rational d = a.den().evaluate(p);
    if (d == 0) throw PoleAtPoint("denominator vanishes at q = " + p.get_str());
    Rational r = a.num().evaluate(p) / d;
    r.canonicalize();
    return r;
}

EPoly e_polynomial(const ClassPoly& a) {
    MultiPoly uv = MultiPoly::var("u") * MultiPoly::var("v");
    MultiPoly r, pw(1);
    for (const auto& c : a.coeffs()) {
        if (!c.is_zero()) r = r + pw * MultiPoly(c);
        pw = pw * uv;
    }
    return r;
}

}  // namespace grotto
