#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "grotto/classring.hpp"
#include "grotto/polyring.hpp"

namespace grotto {

class Unresolvable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DepthExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// X(S, F, G): points of affine space on vars where every eq vanishes and no neq does.
struct ConstraintVariety {
    std::vector<Variable> vars;
    std::vector<MultiPoly> eqs;
    std::vector<MultiPoly> neqs;

    // Sorts and deduplicates vars, eqs and neqs; throws if a polynomial uses an undeclared variable.
    void normalize();
    ConstraintVariety with_eq(const MultiPoly& f) const;
    ConstraintVariety with_neq(const MultiPoly& g) const;
    ConstraintVariety renamed(const std::vector<std::pair<Variable, Variable>>& mapping) const;

    // Line format: "vars: a, b", "eq: ...", "neq: ...", '#' comments.
    static ConstraintVariety parse(const std::string& text);
    static ConstraintVariety load(const std::string& path);
    std::string str() const;
};

struct ClassConfig {
    unsigned split_degree_bound = 6;
    unsigned max_depth = 10000;
    // Try the quadratic rule on quadratic equations before splitting products.
    bool quadratic_first = false;
    // Keep a memo table of solved subproblems.
    bool memoize = true;
};

struct ClassStats {
    std::array<uint64_t, 10> rule{};  // index = rule number, 0 unused
    uint64_t nodes = 0;
    uint64_t max_depth = 0;
    uint64_t memo_hits = 0;
    uint64_t memo_size = 0;
    uint64_t components = 0;
};

struct ClassResult {
    ClassPoly value;
    ClassStats stats;
    // Small primes dividing some integer the computation had to treat as a unit.
    // Point counts modulo these primes may legitimately disagree with the class.
    std::vector<unsigned> bad_primes;

    bool good_reduction(unsigned p) const;
};

ClassResult class_of(const ConstraintVariety& X, const ClassConfig& config = {});

// Exact number of F_p points by enumeration. Throws BudgetExceeded above budget points.
Int count_points(const ConstraintVariety& X, unsigned p, uint64_t budget = 200000000ull);

// ([X and h = 0], [X and h != 0], [X]), each computed independently.
std::tuple<ClassPoly, ClassPoly, ClassPoly> stratify_check(const ConstraintVariety& X, const MultiPoly& h,
                                                           const ClassConfig& config = {});

namespace kernels {

// Number of x in [0, p) where every eq polynomial evaluates to 0 mod p and every
// neq polynomial to nonzero. coeffs holds npoly rows of stride (deg + 1), constant
// term first, entries already reduced into [0, p).
using CountFn = uint32_t (*)(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p);

uint32_t count_roots_scalar(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p);
uint32_t count_roots_avx2(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p);
uint32_t count_roots_neon(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p);
bool have_avx2();
bool have_neon();
// Selected once at startup from CPU features; GROTTO_SIMD=scalar forces the reference path.
CountFn active();
const char* active_name();

}  // namespace kernels

}  // namespace grotto
