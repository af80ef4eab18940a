#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "grotto/classring.hpp"
#include "grotto/polyring.hpp"
#include "grotto/variety.hpp"

namespace grotto {

class StrataClassMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GroupId { U2, U3, U4 };

struct GroupSpec {
    GroupId id;
    int n;

    static GroupSpec get(GroupId id);
    // "u2", "u3", "u4"
    static GroupSpec parse(const std::string& name);
    std::string name() const;
    // q^{n(n-1)/2} (q-1)^n
    ClassPoly group_class() const;
    // Entry variable for position (i, j) of the index-th generic element: a_1, b_1, ... row-major.
    Variable entry_name(int i, int j, int index) const;
};

// num / den with den a monomial in unit variables.
struct Frac {
    MultiPoly num;
    std::map<Variable, unsigned> den;

    Frac() = default;
    Frac(const MultiPoly& p) : num(p) {}
    Frac(long long c) : num(c) {}
    Frac(const MultiPoly& n, std::map<Variable, unsigned> d) : num(n), den(std::move(d)) {}

    MultiPoly den_poly() const;
    bool is_zero() const { return num.is_zero(); }
    std::string str() const;
    friend Frac operator+(const Frac& a, const Frac& b);
    friend Frac operator-(const Frac& a, const Frac& b);
    friend Frac operator*(const Frac& a, const Frac& b);
    Frac operator-() const;
    friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
};

// 1 / v for a single variable.
Frac reciprocal_var(const Variable& v);

class SymbolicMatrix {
public:
    explicit SymbolicMatrix(int n = 0) : n_(n), e_(static_cast<size_t>(n) * n) {}
    static SymbolicMatrix identity(int n);
    static SymbolicMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    int n() const { return n_; }
    const Frac& at(int i, int j) const { return e_[i * n_ + j]; }
    Frac& at(int i, int j) { return e_[i * n_ + j]; }
    bool is_upper_triangular() const;
    friend bool operator==(const SymbolicMatrix& a, const SymbolicMatrix& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
    std::string str() const;

private:
    int n_;
    std::vector<Frac> e_;
};

struct GenericElement {
    SymbolicMatrix m;
    std::vector<Variable> vars;
    std::vector<Variable> units;
};

// Fresh generic element; unipotent=true fixes the diagonal to 1.
GenericElement generic_element(const GroupSpec& g, int index, bool unipotent = false);
SymbolicMatrix mat_mul(const SymbolicMatrix& a, const SymbolicMatrix& b);
SymbolicMatrix mat_inv(const SymbolicMatrix& a);
SymbolicMatrix commutator(const SymbolicMatrix& g1, const SymbolicMatrix& g2);

struct StratumSpec {
    std::string label;
    // Predicate in the entry coordinates a_i_j (0-based, i <= j).
    std::vector<MultiPoly> eqs;
    std::vector<MultiPoly> neqs;
    // Empty (size 0) for U2 strata with fractional eigenvalue tags.
    SymbolicMatrix representative;
    ClassPoly stratum_class;
    ClassPoly orbit_space_class;
    // Eigenvalue labels for the 2x2 strata: {lambda} or {lambda, mu}.
    std::vector<Rational> tags;
};

enum class U2Kind { S, J, M };
StratumSpec u2_stratum(U2Kind kind, const Rational& lambda, const Rational& mu = 0);

struct Constraints {
    std::vector<MultiPoly> eqs;
    std::vector<MultiPoly> neqs;
};

// Constraints expressing m in s, denominators cleared. Constant constraints that hold are dropped;
// violated ones are kept so that the resulting variety is empty.
Constraints membership_constraints(const SymbolicMatrix& m, const StratumSpec& s);

// 2x2: the lambda = 1 fiber {S_1, J_1, M_{1,2}}. 3x3 and 4x4: the unipotent strata.
// Stratum classes are checked by class_of on first use.
const std::vector<StratumSpec>& strata(const GroupSpec& g);

// Predicate of s over the group coordinates, with nonzero diagonal.
ConstraintVariety stratum_variety(const GroupSpec& g, const StratumSpec& s);

// Runs the load-time checks against the given list; throws StrataClassMismatch.
void verify_strata(const GroupSpec& g, const std::vector<StratumSpec>& list);

}  // namespace grotto
