#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grotto/poly.hpp"

namespace grotto {

using Rational = mpq_class;
using Variable = std::string;

bool valid_variable_name(const std::string& s);

class NonLinearFactorization : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Polynomial over Z with named variables. The variable list is always exactly
// the set of variables that occur, sorted by name, so structural equality is
// polynomial equality.
class MultiPoly {
public:
    MultiPoly() = default;
    MultiPoly(long long c) : p_(c) {}
    explicit MultiPoly(const Int& c) : p_(c) {}
    static MultiPoly var(const Variable& name);
    // Builds from an engine polynomial whose index i means names[i].
    static MultiPoly from_engine(const Poly& p, const std::vector<Variable>& names);
    static MultiPoly parse(const std::string& text);

    const std::vector<Variable>& vars() const { return vars_; }
    const Poly& engine() const { return p_; }
    // Engine polynomial re-indexed into the given sorted name list (a superset of vars()).
    Poly engine_in(const std::vector<Variable>& names) const;

    bool is_zero() const { return p_.is_zero(); }
    bool is_constant() const { return p_.is_constant(); }
    size_t num_terms() const { return p_.size(); }
    bool has_var(const Variable& x) const;
    unsigned degree(const Variable& x) const;
    unsigned total_degree() const { return p_.total_degree(); }
    Int content() const { return p_.content(); }

    MultiPoly operator-() const;
    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly pow(unsigned e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.vars_ == b.vars_ && a.p_ == b.p_; }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    Rational evaluate(const std::map<Variable, Rational>& point) const;
    std::string str() const;

private:
    void canonicalize();

    std::vector<Variable> vars_;
    Poly p_;
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

// Merged, sorted variable list of several polynomials.
std::vector<Variable> union_vars(const std::vector<const MultiPoly*>& ps);

enum class PolyOp { Add, Sub, Mul, Neg, Pow };
MultiPoly poly_arith(PolyOp op, const MultiPoly& a, const MultiPoly& b);
MultiPoly poly_arith(PolyOp op, const MultiPoly& a, unsigned exponent);

MultiPoly substitute(const MultiPoly& f, const Variable& x, const MultiPoly& u);
MultiPoly substitute_cleared(const MultiPoly& f, const Variable& x, const MultiPoly& u, const MultiPoly& v);
std::optional<std::pair<MultiPoly, unsigned>> perfect_power(const MultiPoly& f);
std::optional<MultiPoly> perfect_square_root(const MultiPoly& f);
std::optional<std::pair<MultiPoly, MultiPoly>> split_product(const MultiPoly& f, unsigned degree_bound = 6);
std::pair<unsigned, std::vector<MultiPoly>> decompose_in(const MultiPoly& f, const Variable& x);

struct RootMult {
    Rational root;
    unsigned multiplicity;
};
// Throws NonLinearFactorization when an irreducible factor of degree >= 2 remains.
std::vector<RootMult> univariate_linear_roots(const MultiPoly& f, const Variable& x);

}  // namespace grotto
