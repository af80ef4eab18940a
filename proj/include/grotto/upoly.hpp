#pragma once

// Dense univariate polynomials over Z, coefficient i holds x^i.

#include <optional>
#include <vector>

#include "grotto/bigint.hpp"

namespace grotto::upoly {

using UPoly = std::vector<Int>;

void trim(UPoly& a);
int degree(const UPoly& a);  // -1 for zero
bool is_zero(const UPoly& a);
UPoly add(const UPoly& a, const UPoly& b);
UPoly sub(const UPoly& a, const UPoly& b);
UPoly mul(const UPoly& a, const UPoly& b);
UPoly scale(const UPoly& a, const Int& c);
UPoly neg(const UPoly& a);
UPoly pow(const UPoly& a, unsigned e);
Int content(const UPoly& a);
// Content removed, leading coefficient positive.
UPoly primitive(const UPoly& a);
UPoly derivative(const UPoly& a);
// lc(b)^k * a mod b for the minimal k
UPoly prem(const UPoly& a, const UPoly& b);
// gcd over Q, returned primitive with positive leading coefficient.
UPoly gcd(const UPoly& a, const UPoly& b);
// Exact division over Z; nullopt if b does not divide a.
std::optional<UPoly> divexact(const UPoly& a, const UPoly& b);
Int eval(const UPoly& a, const Int& x);
mpq_class eval(const UPoly& a, const mpq_class& x);

struct RationalRoot {
    mpq_class value;
    unsigned multiplicity;
};
// Strips every rational root; rest receives the remaining cofactor (primitive).
std::vector<RationalRoot> rational_roots(const UPoly& a, UPoly& rest);

// Search for a factor of degree in [2, max_degree] by Kronecker's method.
std::optional<UPoly> kronecker_factor(const UPoly& a, unsigned max_degree);

}  // namespace grotto::upoly
