#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "grotto/classring.hpp"
#include "grotto/groups.hpp"
#include "grotto/variety.hpp"

namespace grotto {

class NotLocalized : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TqftMatrix {
public:
    TqftMatrix() = default;
    explicit TqftMatrix(std::vector<std::string> basis);
    static TqftMatrix identity(std::vector<std::string> basis);
    static TqftMatrix diagonal(std::vector<std::string> basis, const std::vector<ClassExpr>& d);

    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::string>& basis() const { return basis_; }
    // Row i is the target T_i, column j the source T_j.
    const ClassExpr& at(int i, int j) const { return e_[i * dim() + j]; }
    ClassExpr& at(int i, int j) { return e_[i * dim() + j]; }

    friend TqftMatrix operator*(const TqftMatrix& a, const TqftMatrix& b);
    friend TqftMatrix operator*(const ClassExpr& s, const TqftMatrix& m);
    friend bool operator==(const TqftMatrix& a, const TqftMatrix& b) { return a.basis_ == b.basis_ && a.e_ == b.e_; }
    friend bool operator!=(const TqftMatrix& a, const TqftMatrix& b) { return !(a == b); }

    bool is_symmetric() const;
    // Throws NotLocalized naming the first offending entry.
    void require_localized(const std::string& what) const;
    // One entry per line: "T_i T_j <factored entry>".
    std::string golden() const;
    static TqftMatrix parse_golden(const std::string& text);

private:
    std::vector<std::string> basis_;
    std::vector<ClassExpr> e_;
};

struct TqftVector {
    std::vector<std::string> basis;
    std::vector<ClassPoly> entries;

    std::string golden() const;
    static TqftVector parse_golden(const std::string& text);
    friend bool operator==(const TqftVector& a, const TqftVector& b) {
        return a.basis == b.basis && a.entries == b.entries;
    }
};

struct FTensor {
    int d = 0;
    std::vector<ClassPoly> v;
    // i target stratum, j source stratum, k translating representative; all 0-based.
    const ClassPoly& at(int i, int j, int k) const { return v[(static_cast<size_t>(j) * d + i) * d + k]; }
    ClassPoly& at(int i, int j, int k) { return v[(static_cast<size_t>(j) * d + i) * d + k]; }
    // The d x d slice F_{i,j,k} for fixed j, rows i and columns k.
    std::string golden_slice(int j) const;
};

struct TqftOptions {
    // 0 means GROTTO_THREADS, falling back to the hardware concurrency.
    unsigned threads = 0;
    ClassConfig engine;
    // Results are kept per group and engine config; false recomputes.
    bool cache = true;
};

unsigned resolve_threads(unsigned requested);

TqftVector first_column(const GroupSpec& g, const TqftOptions& opt = {});
FTensor f_tensor(const GroupSpec& g, const TqftOptions& opt = {});
TqftMatrix z_pi_L(const GroupSpec& g, const TqftOptions& opt = {});
TqftMatrix eta(const GroupSpec& g);
TqftMatrix reduced_L(const GroupSpec& g, const TqftOptions& opt = {});
TqftMatrix matrix_power(const TqftMatrix& m, unsigned e);
ClassPoly rep_variety_class(const GroupSpec& g, unsigned genus, const TqftOptions& opt = {});

// The printed closed forms, transcribed.
ClassPoly closed_form(const GroupSpec& g, unsigned genus);
// U3 only: the closed form read off the diagonalization data.
ClassPoly closed_form_from_eigendata(const GroupSpec& g, unsigned genus);

struct DiagData {
    TqftMatrix A, D, A_inv;
    ClassExpr prefactor;
    bool has_inverse = false;
};
DiagData reference_diag_data(const GroupSpec& g);
// Checks M A = prefactor A D, and A A_inv = I when given.
bool diag_check(const TqftMatrix& m, const DiagData& d);
bool diag_check(const GroupSpec& g, const TqftOptions& opt = {});

// U2 parabolic state space.
struct ParabolicLabel {
    U2Kind kind;
    Rational a, b;  // b only for M

    std::string str() const;
    friend bool operator<(const ParabolicLabel& x, const ParabolicLabel& y);
    friend bool operator==(const ParabolicLabel& x, const ParabolicLabel& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
};

class ParabolicState {
public:
    static ParabolicState delta(const ParabolicLabel& l);
    const std::map<ParabolicLabel, ClassExpr>& terms() const { return t_; }
    ClassExpr coeff(const ParabolicLabel& l) const;
    void add(const ParabolicLabel& l, const ClassExpr& c);
    std::string str() const;

private:
    std::map<ParabolicLabel, ClassExpr> t_;
};

struct Puncture {
    U2Kind kind;
    Rational a, b;
};
struct GenusHandle {};
using ParabolicStep = std::variant<Puncture, GenusHandle>;

ParabolicState u2_parabolic_apply(const ParabolicState& s, const ParabolicStep& step);
ClassPoly u2_parabolic_class(unsigned genus, const std::vector<Rational>& jordan_tags,
                             const std::vector<std::pair<Rational, Rational>>& m_tags);
// Closed formula, cases (i)-(iii), for cross-checking.
ClassPoly u2_parabolic_formula(unsigned genus, const std::vector<Rational>& jordan_tags,
                               const std::vector<std::pair<Rational, Rational>>& m_tags);

Rational parse_rational(const std::string& s);

}  // namespace grotto
