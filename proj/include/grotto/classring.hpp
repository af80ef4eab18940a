#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "grotto/polyring.hpp"
#include "grotto/upoly.hpp"

namespace grotto {

class NotPolynomial : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class PoleAtPoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DivisionByZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Element of Z[q], dense.
class ClassPoly {
public:
    ClassPoly() = default;
    ClassPoly(long long c);
    explicit ClassPoly(const Int& c);
    explicit ClassPoly(upoly::UPoly coeffs);
    static ClassPoly q();
    static ClassPoly q_pow(unsigned k);
    // Accepts any polynomial expression in the single variable q.
    static ClassPoly parse(const std::string& text);
    static ClassPoly from_multipoly(const MultiPoly& m);

    const upoly::UPoly& coeffs() const { return c_; }
    int degree() const { return upoly::degree(c_); }
    bool is_zero() const { return c_.empty(); }
    Int coeff(size_t i) const { return i < c_.size() ? c_[i] : Int(0); }

    ClassPoly operator-() const { return ClassPoly(upoly::neg(c_)); }
    friend ClassPoly operator+(const ClassPoly& a, const ClassPoly& b) { return ClassPoly(upoly::add(a.c_, b.c_)); }
    friend ClassPoly operator-(const ClassPoly& a, const ClassPoly& b) { return ClassPoly(upoly::sub(a.c_, b.c_)); }
    friend ClassPoly operator*(const ClassPoly& a, const ClassPoly& b) { return ClassPoly(upoly::mul(a.c_, b.c_)); }
    ClassPoly& operator+=(const ClassPoly& o) { *this = *this + o; return *this; }
    ClassPoly& operator-=(const ClassPoly& o) { *this = *this - o; return *this; }
    ClassPoly& operator*=(const ClassPoly& o) { *this = *this * o; return *this; }
    ClassPoly pow(unsigned e) const { return ClassPoly(upoly::pow(c_, e)); }
    friend bool operator==(const ClassPoly& a, const ClassPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const ClassPoly& a, const ClassPoly& b) { return !(a == b); }

    Rational evaluate(const Rational& x) const { return upoly::eval(c_, x); }
    // Expanded, descending powers: "q^4 - q^3 - q^2 + q".
    std::string str() const;
    // Same without spaces.
    std::string compact() const;
    // Powers of q, q-1, q-2 pulled out: "q^3*(q-1)^4*(q^2+q-1)".
    std::string factored() const;

private:
    upoly::UPoly c_;
};

std::ostream& operator<<(std::ostream& os, const ClassPoly& p);

// Element of Q(q) as a reduced fraction of integer polynomials.
class ClassExpr {
public:
    ClassExpr() = default;
    ClassExpr(long long c) : num_(c), den_(1) {}
    ClassExpr(const ClassPoly& p) : num_(p), den_(1) {}
    ClassExpr(const ClassPoly& num, const ClassPoly& den);

    const ClassPoly& num() const { return num_; }
    const ClassPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == ClassPoly(1); }
    // Denominator is q^a (q-1)^b.
    bool is_localized() const;

    friend ClassExpr operator+(const ClassExpr& a, const ClassExpr& b);
    friend ClassExpr operator-(const ClassExpr& a, const ClassExpr& b);
    friend ClassExpr operator*(const ClassExpr& a, const ClassExpr& b);
    friend ClassExpr operator/(const ClassExpr& a, const ClassExpr& b);
    ClassExpr operator-() const;
    ClassExpr& operator+=(const ClassExpr& o) { *this = *this + o; return *this; }
    ClassExpr& operator*=(const ClassExpr& o) { *this = *this * o; return *this; }
    friend bool operator==(const ClassExpr& a, const ClassExpr& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const ClassExpr& a, const ClassExpr& b) { return !(a == b); }

    std::string str() const;
    std::string factored() const;

private:
    void canonicalize();

    ClassPoly num_;
    ClassPoly den_{1};
};

std::ostream& operator<<(std::ostream& os, const ClassExpr& e);

enum class ClsOp { Add, Sub, Mul, Div };
ClassExpr cls_arith(ClsOp op, const ClassExpr& a, const ClassExpr& b);
ClassPoly as_polynomial(const ClassExpr& a);
Rational evaluate_at(const ClassExpr& a, const Rational& p);

// Bivariate polynomial in u, v.
using EPoly = MultiPoly;
EPoly e_polynomial(const ClassPoly& a);

}  // namespace grotto
