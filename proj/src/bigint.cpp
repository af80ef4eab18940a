#include "grotto/bigint.hpp"

#include <ostream>
#include <stdexcept>

namespace grotto {

void Int::set_big(const mpz_class& z) {
    if (z.fits_slong_p()) {
        s_ = z.get_si();
        b_.reset();
    } else {
        if (b_) *b_ = z;
        else b_ = std::make_unique<mpz_class>(z);
        s_ = 0;
    }
}

void Int::normalize() {
    if (b_ && b_->fits_slong_p()) {
        s_ = b_->get_si();
        b_.reset();
    }
}

Int Int::parse(const std::string& s) {
    mpz_class z;
    if (z.set_str(s, 10) != 0) throw std::invalid_argument("bad integer literal: " + s);
    return Int(z);
}

size_t Int::hash() const {
    if (!b_) return std::hash<int64_t>{}(s_);
    return std::hash<std::string>{}(b_->get_str(16));
}

int Int::cmp(const Int& a, const Int& b) {
    if (!a.b_ && !b.b_) return (a.s_ > b.s_) - (a.s_ < b.s_);
    int c = ::cmp(a.to_mpz(), b.to_mpz());
    return (c > 0) - (c < 0);
}

Int Int::divexact(const Int& a, const Int& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.b_ && !b.b_ && !(a.s_ == INT64_MIN && b.s_ == -1)) return Int(static_cast<long long>(a.s_ / b.s_));
    mpz_class r;
    mpz_class x = a.to_mpz(), y = b.to_mpz();
    mpz_divexact(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return Int(r);
}

Int Int::tdiv(const Int& a, const Int& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.b_ && !b.b_ && !(a.s_ == INT64_MIN && b.s_ == -1)) return Int(static_cast<long long>(a.s_ / b.s_));
    mpz_class r;
    mpz_class x = a.to_mpz(), y = b.to_mpz();
    mpz_tdiv_q(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return Int(r);
}

Int Int::rem(const Int& a, const Int& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.b_ && !b.b_ && b.s_ != -1) return Int(static_cast<long long>(a.s_ % b.s_));
    mpz_class r;
    mpz_class x = a.to_mpz(), y = b.to_mpz();
    mpz_tdiv_r(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return Int(r);
}

bool Int::divisible(const Int& a, const Int& b) {
    if (b.is_zero()) return a.is_zero();
    if (!a.b_ && !b.b_) return b.s_ == -1 || a.s_ % b.s_ == 0;
    mpz_class x = a.to_mpz(), y = b.to_mpz();
    return mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t()) != 0;
}

Int Int::gcd(const Int& a, const Int& b) {
    if (!a.b_ && !b.b_ && a.s_ != INT64_MIN && b.s_ != INT64_MIN) {
        uint64_t x = a.s_ < 0 ? -a.s_ : a.s_;
        uint64_t y = b.s_ < 0 ? -b.s_ : b.s_;
        while (y) {
            uint64_t t = x % y;
            x = y;
            y = t;
        }
        return Int(static_cast<long long>(x));
    }
    mpz_class r;
    mpz_class x = a.to_mpz(), y = b.to_mpz();
    mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return Int(r);
}

Int Int::pow(const Int& a, unsigned e) {
    Int r(1), base(a);
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

int64_t Int::mod_small(int64_t m) const {
    if (!b_) {
        int64_t r = s_ % m;
        return r < 0 ? r + m : r;
    }
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), b_->get_mpz_t(), static_cast<unsigned long>(m));
    return r.get_si();
}

bool Int::root_exact(const Int& a, unsigned n, Int& out) {
    if (n == 0) return false;
    if (a.sign() < 0 && n % 2 == 0) return false;
    mpz_class x = a.to_mpz(), r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
    if (!exact) return false;
    out = Int(r);
    return true;
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

}  // namespace grotto
