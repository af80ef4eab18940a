#pragma once

// Index-based sparse multivariate polynomials over Z. This is the engine
// representation; variable names live in MultiPoly (polyring.hpp).

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grotto/bigint.hpp"

namespace grotto {

constexpr int kMaxVars = 32;
using VarMask = uint64_t;

struct Mono {
    uint32_t deg = 0;
    std::array<uint8_t, kMaxVars> e{};

    static Mono var(int i, unsigned k = 1);
    Mono operator*(const Mono& o) const;
    bool divides(const Mono& o) const;
    // Requires divides(o) to hold for the receiver dividing o: returns o / this.
    Mono quotient_of(const Mono& o) const;
    VarMask mask() const;
    size_t hash() const;

    friend bool operator==(const Mono& a, const Mono& b) {
        return a.deg == b.deg && std::memcmp(a.e.data(), b.e.data(), kMaxVars) == 0;
    }
    friend bool operator!=(const Mono& a, const Mono& b) { return !(a == b); }
};

// Graded lexicographic, variable 0 largest. Returns <0, 0, >0.
inline int mono_cmp(const Mono& a, const Mono& b) {
    if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
    return std::memcmp(a.e.data(), b.e.data(), kMaxVars);
}

struct Term {
    Mono m;
    Int c;
};

class Poly {
public:
    Poly() = default;
    Poly(long long c);
    explicit Poly(const Int& c);
    static Poly var(int i);
    static Poly monomial(const Mono& m, const Int& c);
    // Takes arbitrary terms, sorts and combines them.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return t_; }
    size_t size() const { return t_.size(); }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.deg == 0); }
    Int constant_value() const;
    Int constant_term() const;
    const Term& lead() const { return t_.front(); }
    uint32_t total_degree() const { return t_.empty() ? 0 : t_.front().m.deg; }
    VarMask var_mask() const;
    int num_vars() const { return __builtin_popcountll(var_mask()); }
    unsigned degree(int x) const;
    // Lowest variable index present, or -1.
    int single_var() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly scale(const Int& c) const;
    Poly mul_mono(const Mono& m, const Int& c) const;
    Poly divexact(const Int& c) const;
    Poly pow(unsigned e) const;

    Int content() const;
    // Divides by the integer content and makes the leading coefficient positive.
    Poly primitive() const;
    Poly primitive(Int& removed) const;
    Mono monomial_content() const;
    Poly div_mono(const Mono& m) const;

    std::vector<Poly> coeffs_in(int x) const;
    static Poly from_coeffs(int x, const std::vector<Poly>& c);
    Poly derivative(int x) const;
    Poly substitute(int x, const Poly& u) const;
    // v^deg_x(f) * f(x := u/v)
    Poly substitute_cleared(int x, const Poly& u, const Poly& v) const;
    Poly rename(const std::array<int8_t, kMaxVars>& to) const;

    // Exact division; returns false when b does not divide *this.
    bool divide(const Poly& b, Poly& q) const;

    int64_t eval_mod(const std::vector<int64_t>& point, int64_t p) const;

    size_t hash() const;
    std::string key() const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    // Deterministic total order: total degree, then term count, then terms.
    static int compare(const Poly& a, const Poly& b);

private:
    std::vector<Term> t_;
};

// Multivariate gcd over Z, normalized to positive leading coefficient.
Poly gcd(const Poly& a, const Poly& b);
// gcd of the coefficients of a as a polynomial in x.
Poly content_in(const Poly& a, int x);
// Pseudo-remainder of a by b with respect to x.
Poly prem(const Poly& a, const Poly& b, int x);

std::optional<std::pair<Poly, unsigned>> perfect_power(const Poly& f);
std::optional<Poly> nth_root(const Poly& f, unsigned n);
std::optional<Poly> perfect_square_root(const Poly& f);

struct SplitConfig {
    unsigned degree_bound = 6;
};

// One nontrivial split f = u*v, or nothing if none is found.
std::optional<std::pair<Poly, Poly>> split_product(const Poly& f, const SplitConfig& cfg = {});

// Factorization into nonconstant primitive factors with multiplicities.
// The integer content and sign are returned separately in unit.
struct Factorization {
    Int unit{1};
    std::vector<std::pair<Poly, unsigned>> factors;
};
Factorization factor(const Poly& f, const SplitConfig& cfg = {});

}  // namespace grotto

template <>
struct std::hash<grotto::Poly> {
    size_t operator()(const grotto::Poly& p) const { return p.hash(); }
};
