#pragma once

#include <cstdint>
#include <functional>
#include <gmpxx.h>
#include <memory>
#include <string>

namespace grotto {

// Arbitrary-precision integer. Values that fit in int64 stay inline; anything
// larger spills to a GMP integer.
class Int {
public:
    Int() = default;
    Int(long long v) : s_(v) {}
    Int(int v) : s_(v) {}
    Int(long v) : s_(v) {}
    explicit Int(const mpz_class& z) { set_big(z); }

    Int(const Int& o) : s_(o.s_), b_(o.b_ ? std::make_unique<mpz_class>(*o.b_) : nullptr) {}
    Int(Int&&) noexcept = default;
    Int& operator=(const Int& o) {
        if (this != &o) {
            s_ = o.s_;
            b_ = o.b_ ? std::make_unique<mpz_class>(*o.b_) : nullptr;
        }
        return *this;
    }
    Int& operator=(Int&&) noexcept = default;

    static Int parse(const std::string& s);

    bool is_small() const { return !b_; }
    int64_t small() const { return s_; }
    mpz_class to_mpz() const { return b_ ? *b_ : mpz_class(static_cast<long>(s_)); }
    bool fits_int64() const { return !b_; }
    double to_double() const { return b_ ? b_->get_d() : static_cast<double>(s_); }

    bool is_zero() const { return !b_ && s_ == 0; }
    bool is_one() const { return !b_ && s_ == 1; }
    int sign() const { return b_ ? sgn(*b_) : (s_ > 0) - (s_ < 0); }

    std::string str() const { return b_ ? b_->get_str() : std::to_string(s_); }
    size_t hash() const;

    Int& operator+=(const Int& o);
    Int& operator-=(const Int& o);
    Int& operator*=(const Int& o);
    Int operator-() const;

    friend Int operator+(Int a, const Int& b) { a += b; return a; }
    friend Int operator-(Int a, const Int& b) { a -= b; return a; }
    friend Int operator*(Int a, const Int& b) { a *= b; return a; }

    friend bool operator==(const Int& a, const Int& b) {
        if (!a.b_ && !b.b_) return a.s_ == b.s_;
        return cmp(a, b) == 0;
    }
    friend bool operator!=(const Int& a, const Int& b) { return !(a == b); }
    friend bool operator<(const Int& a, const Int& b) { return cmp(a, b) < 0; }
    friend bool operator>(const Int& a, const Int& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const Int& a, const Int& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const Int& a, const Int& b) { return cmp(a, b) >= 0; }
    static int cmp(const Int& a, const Int& b);

    // Truncating division; divexact requires b | a.
    static Int divexact(const Int& a, const Int& b);
    static Int tdiv(const Int& a, const Int& b);
    static Int rem(const Int& a, const Int& b);
    static bool divisible(const Int& a, const Int& b);
    static Int gcd(const Int& a, const Int& b);
    static Int pow(const Int& a, unsigned e);
    Int abs() const { return sign() < 0 ? -*this : *this; }
    // Nonnegative residue modulo m (m > 0, m small).
    int64_t mod_small(int64_t m) const;
    // Exact integer n-th root if one exists.
    static bool root_exact(const Int& a, unsigned n, Int& out);

private:
    void set_big(const mpz_class& z);
    void normalize();

    int64_t s_ = 0;
    std::unique_ptr<mpz_class> b_;
};

inline Int& Int::operator+=(const Int& o) {
    if (!b_ && !o.b_) {
        int64_t r;
        if (!__builtin_add_overflow(s_, o.s_, &r)) { s_ = r; return *this; }
    }
    set_big(to_mpz() + o.to_mpz());
    return *this;
}

inline Int& Int::operator-=(const Int& o) {
    if (!b_ && !o.b_) {
        int64_t r;
        if (!__builtin_sub_overflow(s_, o.s_, &r)) { s_ = r; return *this; }
    }
    set_big(to_mpz() - o.to_mpz());
    return *this;
}

inline Int& Int::operator*=(const Int& o) {
    if (!b_ && !o.b_) {
        int64_t r;
        if (!__builtin_mul_overflow(s_, o.s_, &r)) { s_ = r; return *this; }
    }
    set_big(to_mpz() * o.to_mpz());
    return *this;
}

inline Int Int::operator-() const {
    if (!b_ && s_ != INT64_MIN) return Int(static_cast<long long>(-s_));
    Int r;
    r.set_big(-to_mpz());
    return r;
}

std::ostream& operator<<(std::ostream& os, const Int& v);

}  // namespace grotto

template <>
struct std::hash<grotto::Int> {
    size_t operator()(const grotto::Int& v) const { return v.hash(); }
};
