#include "grotto/groups.hpp"

#include <mutex>
#include <sstream>

namespace grotto {

GroupSpec GroupSpec::get(GroupId id) {
    switch (id) {
        case GroupId::U2: return {id, 2};
        case GroupId::U3: return {id, 3};
        case GroupId::U4: return {id, 4};
    }
    throw std::logic_error("unknown group");
}

GroupSpec GroupSpec::parse(const std::string& name) {
    if (name == "u2") return get(GroupId::U2);
    if (name == "u3") return get(GroupId::U3);
    if (name == "u4") return get(GroupId::U4);
    throw std::invalid_argument("unknown group '" + name + "' (expected u2, u3 or u4)");
}

std::string GroupSpec::name() const { return "u" + std::to_string(n); }

ClassPoly GroupSpec::group_class() const {
    return ClassPoly::q_pow(n * (n - 1) / 2) * ClassPoly::parse("q-1").pow(n);
}

Variable GroupSpec::entry_name(int i, int j, int index) const {
    int k = 0;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c, ++k)
            if (r == i && c == j) return std::string(1, static_cast<char>('a' + k)) + "_" + std::to_string(index);
    throw std::out_of_range("entry below the diagonal");
}

// ---------------------------------------------------------------------------

namespace {

MultiPoly monomial(const std::map<Variable, unsigned>& e) {
    MultiPoly r(1);
    for (const auto& [v, k] : e) r = r * MultiPoly::var(v).pow(k);
    return r;
}

// Cancels unit variables common to numerator and denominator.
Frac reduce(Frac f) {
    if (f.num.is_zero()) {
        f.den.clear();
        return f;
    }
    if (f.den.empty()) return f;
    Mono mc = f.num.engine().monomial_content();
    const auto& names = f.num.vars();
    std::map<Variable, unsigned> cancel;
    for (size_t i = 0; i < names.size(); ++i) {
        auto it = f.den.find(names[i]);
        if (it == f.den.end() || mc.e[i] == 0) continue;
        cancel[names[i]] = std::min<unsigned>(mc.e[i], it->second);
    }
    if (cancel.empty()) return f;
    Mono m{};
    for (size_t i = 0; i < names.size(); ++i) {
        auto it = cancel.find(names[i]);
        if (it == cancel.end()) continue;
        m.e[i] = static_cast<uint8_t>(it->second);
        m.deg += it->second;
    }
    f.num = MultiPoly::from_engine(f.num.engine().div_mono(m), names);
    for (const auto& [v, k] : cancel) {
        f.den[v] -= k;
        if (f.den[v] == 0) f.den.erase(v);
    }
    return f;
}

}  // namespace

MultiPoly Frac::den_poly() const { return monomial(den); }

std::string Frac::str() const {
    if (den.empty()) return num.str();
    return "(" + num.str() + ")/(" + den_poly().str() + ")";
}

Frac operator+(const Frac& a, const Frac& b) {
    if (a.den == b.den) return reduce(Frac{a.num + b.num, a.den});
    std::map<Variable, unsigned> l = a.den, ra, rb;
    for (const auto& [v, k] : b.den) l[v] = std::max(l[v], k);
    for (const auto& [v, k] : l) {
        auto ia = a.den.find(v), ib = b.den.find(v);
        unsigned ka = ia == a.den.end() ? 0 : ia->second, kb = ib == b.den.end() ? 0 : ib->second;
        if (k > ka) ra[v] = k - ka;
        if (k > kb) rb[v] = k - kb;
    }
    Frac r;
    r.num = a.num * monomial(ra) + b.num * monomial(rb);
    r.den = l;
    return reduce(r);
}

Frac operator-(const Frac& a, const Frac& b) { return a + (-b); }

Frac Frac::operator-() const {
    Frac r = *this;
    r.num = -num;
    return r;
}

Frac operator*(const Frac& a, const Frac& b) {
    Frac r;
    r.num = a.num * b.num;
    if (r.num.is_zero()) return r;
    r.den = a.den;
    for (const auto& [v, k] : b.den) r.den[v] += k;
    return reduce(r);
}

Frac reciprocal_var(const Variable& v) {
    Frac r(1);
    r.den[v] = 1;
    return r;
}

SymbolicMatrix SymbolicMatrix::identity(int n) {
    SymbolicMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Frac(1);
    return m;
}

SymbolicMatrix SymbolicMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    SymbolicMatrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) m.at(i, j) = Frac(rows[i][j]);
    return m;
}

bool SymbolicMatrix::is_upper_triangular() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < i; ++j)
            if (!at(i, j).is_zero()) return false;
    return true;
}

std::string SymbolicMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) {
        os << '[';
        for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << at(i, j).str();
        os << "]\n";
    }
    return os.str();
}

GenericElement generic_element(const GroupSpec& g, int index, bool unipotent) {
    if (index < 1) throw std::invalid_argument("generic element index must be positive");
    GenericElement r{SymbolicMatrix(g.n), {}, {}};
    for (int i = 0; i < g.n; ++i)
        for (int j = i; j < g.n; ++j) {
            if (i == j && unipotent) {
                r.m.at(i, j) = Frac(1);
                continue;
            }
            Variable v = g.entry_name(i, j, index);
            r.m.at(i, j) = Frac(MultiPoly::var(v));
            r.vars.push_back(v);
            if (i == j) r.units.push_back(v);
        }
    return r;
}

SymbolicMatrix mat_mul(const SymbolicMatrix& a, const SymbolicMatrix& b) {
    if (a.n() != b.n()) throw std::invalid_argument("matrix size mismatch");
    int n = a.n();
    SymbolicMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Frac s;
            for (int k = 0; k < n; ++k) {
                if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                s = s + a.at(i, k) * b.at(k, j);
            }
            c.at(i, j) = s;
        }
    return c;
}

namespace {

// Inverse of a diagonal entry: must be a constant +-1 or a single unit variable power.
Frac invert_diagonal(const Frac& d) {
    if (d.num.is_constant()) {
        Int c = d.num.engine().constant_value();
        if (!c.is_one() && !(-c).is_one())
            throw std::invalid_argument("diagonal constant " + c.str() + " is not invertible over Z");
        Frac r(d.den_poly());
        if (!c.is_one()) r = -r;
        return r;
    }
    const auto& t = d.num.engine().terms();
    if (t.size() != 1 || !(t[0].c.is_one() || (-t[0].c).is_one()))
        throw std::invalid_argument("diagonal entry " + d.str() + " is not a monomial unit");
    Frac r(d.den_poly());
    if (!t[0].c.is_one()) r = -r;
    for (size_t i = 0; i < d.num.vars().size(); ++i) r.den[d.num.vars()[i]] += t[0].m.e[i];
    return reduce(r);
}

}  // namespace

SymbolicMatrix mat_inv(const SymbolicMatrix& a) {
    if (!a.is_upper_triangular()) throw std::invalid_argument("mat_inv expects an upper triangular matrix");
    int n = a.n();
    SymbolicMatrix r(n);
    std::vector<Frac> dinv(n);
    for (int i = 0; i < n; ++i) dinv[i] = r.at(i, i) = invert_diagonal(a.at(i, i));
    for (int d = 1; d < n; ++d)
        for (int i = 0; i + d < n; ++i) {
            int j = i + d;
            Frac s;
            for (int k = i + 1; k <= j; ++k) {
                if (a.at(i, k).is_zero() || r.at(k, j).is_zero()) continue;
                s = s + a.at(i, k) * r.at(k, j);
            }
            r.at(i, j) = -(s * dinv[i]);
        }
    return r;
}

SymbolicMatrix commutator(const SymbolicMatrix& g1, const SymbolicMatrix& g2) {
    SymbolicMatrix c = mat_mul(mat_mul(g1, g2), mat_mul(mat_inv(g1), mat_inv(g2)));
    for (int i = 0; i < c.n(); ++i)
        if (c.at(i, i) != Frac(1)) throw std::logic_error("commutator diagonal is not 1");
    return c;
}

// ---------------------------------------------------------------------------

namespace {

MultiPoly A(int i, int j) { return MultiPoly::var("a_" + std::to_string(i) + "_" + std::to_string(j)); }
ClassPoly C(const char* s) { return ClassPoly::parse(s); }

// Integer polynomial for t * den(t), so that x - t becomes den*x - num.
MultiPoly entry_minus(int i, int j, const Rational& t) {
    Rational c = t;
    c.canonicalize();
    MultiPoly den(Int::parse(c.get_den().get_str())), num(Int::parse(c.get_num().get_str()));
    return den * A(i, j) - num;
}

StratumSpec unipotent(const std::string& label, int n, std::vector<MultiPoly> eqs, std::vector<MultiPoly> neqs,
                      const std::vector<std::pair<int, int>>& ones, const char* cls) {
    StratumSpec s;
    s.label = label;
    for (int i = 0; i < n; ++i) eqs.push_back(A(i, i) - MultiPoly(1));
    s.eqs = std::move(eqs);
    s.neqs = std::move(neqs);
    s.representative = SymbolicMatrix::identity(n);
    for (auto [i, j] : ones) s.representative.at(i, j) = Frac(1);
    s.stratum_class = C(cls);
    s.orbit_space_class = ClassPoly(1);
    return s;
}

std::vector<StratumSpec> build_u3() {
    auto a01 = A(0, 1), a02 = A(0, 2), a12 = A(1, 2);
    return {
        unipotent("u3:C1", 3, {a01, a02, a12}, {}, {}, "1"),
        unipotent("u3:C2", 3, {}, {a01, a12}, {{0, 1}, {1, 2}}, "q*(q-1)^2"),
        unipotent("u3:C3", 3, {a12}, {a01}, {{0, 1}}, "q*(q-1)"),
        unipotent("u3:C4", 3, {a01}, {a12}, {{1, 2}}, "q*(q-1)"),
        unipotent("u3:C5", 3, {a01, a12}, {a02}, {{0, 2}}, "q-1"),
    };
}

std::vector<StratumSpec> build_u4() {
    auto a01 = A(0, 1), a02 = A(0, 2), a03 = A(0, 3), a12 = A(1, 2), a13 = A(1, 3), a23 = A(2, 3);
    auto m5 = a03 * a12 - a02 * a13, m10 = a02 * a23 + a01 * a13;
    return {
        unipotent("u4:C1", 4, {a01, a02, a03, a12, a13, a23}, {}, {}, "1"),
        unipotent("u4:C2", 4, {a12, a13, a23}, {a01}, {{0, 1}}, "q^2*(q-1)"),
        unipotent("u4:C3", 4, {a01, a12, a13, a23}, {a02}, {{0, 2}}, "q*(q-1)"),
        unipotent("u4:C4", 4, {a01, a02, a12, a13, a23}, {a03}, {{0, 3}}, "q-1"),
        unipotent("u4:C5", 4, {a01, a23, m5}, {a12}, {{1, 2}}, "q^2*(q-1)"),
        unipotent("u4:C6", 4, {a01, a02, a12, a23}, {a13}, {{1, 3}}, "q*(q-1)"),
        unipotent("u4:C7", 4, {a01, a02, a12}, {a23}, {{2, 3}}, "q^2*(q-1)"),
        unipotent("u4:C8", 4, {a23}, {a01, a12}, {{0, 1}, {1, 2}}, "q^3*(q-1)^2"),
        unipotent("u4:C9", 4, {a12, a23}, {a01, a13}, {{0, 1}, {1, 3}}, "q^2*(q-1)^2"),
        unipotent("u4:C10", 4, {a12, m10}, {a01, a23}, {{0, 1}, {2, 3}}, "q^2*(q-1)^2"),
        unipotent("u4:C11", 4, {a01, a12, a23}, {a02, a13}, {{0, 2}, {1, 3}}, "q*(q-1)^2"),
        unipotent("u4:C12", 4, {a01, a12}, {a02, a23}, {{0, 2}, {2, 3}}, "q^2*(q-1)^2"),
        unipotent("u4:C13", 4, {a01}, {a12, a23}, {{1, 2}, {2, 3}}, "q^3*(q-1)^2"),
        unipotent("u4:C14", 4, {a01, a23}, {a12, m5}, {{0, 3}, {1, 2}}, "q^2*(q-1)^2"),
        unipotent("u4:C15", 4, {}, {a01, a12, a23}, {{0, 1}, {1, 2}, {2, 3}}, "q^3*(q-1)^3"),
        unipotent("u4:C16", 4, {a12}, {a01, a23, m10}, {{0, 1}, {0, 2}, {2, 3}}, "q^2*(q-1)^3"),
    };
}

Frac rational_frac(const Rational& t) {
    Rational c = t;
    c.canonicalize();
    if (c.get_den() != 1) throw std::invalid_argument("representative entries must be integers");
    return Frac(MultiPoly(Int::parse(c.get_num().get_str())));
}

// Substitutes matrix entries into a predicate polynomial in the a_i_j coordinates.
Frac evaluate_on(const MultiPoly& f, const SymbolicMatrix& m) {
    const auto& names = f.vars();
    std::vector<Frac> vals;
    for (const auto& v : names) {
        int i = -1, j = -1;
        if (std::sscanf(v.c_str(), "a_%d_%d", &i, &j) != 2 || i < 0 || j < i || j >= m.n())
            throw std::invalid_argument("predicate variable " + v + " is not a matrix coordinate");
        vals.push_back(m.at(i, j));
    }
    Frac acc;
    for (const auto& t : f.engine().terms()) {
        Frac term(MultiPoly(t.c));
        for (size_t i = 0; i < names.size(); ++i)
            for (unsigned k = 0; k < t.m.e[i]; ++k) term = term * vals[i];
        acc = acc + term;
    }
    return acc;
}

}  // namespace

StratumSpec u2_stratum(U2Kind kind, const Rational& lambda, const Rational& mu) {
    if (lambda == 0) throw std::invalid_argument("eigenvalue tags must be nonzero");
    StratumSpec s;
    s.orbit_space_class = ClassPoly(1);
    auto tag = [](const Rational& r) {
        Rational c = r;
        c.canonicalize();
        return c.get_str();
    };
    auto integral = [](const Rational& r) {
        Rational c = r;
        c.canonicalize();
        return c.get_den() == 1;
    };
    // Integer matrices only; fractional tags leave the representative empty.
    bool rep = integral(lambda) && integral(mu);
    s.representative = SymbolicMatrix(rep ? 2 : 0);
    if (rep) s.representative.at(0, 0) = rational_frac(lambda);
    switch (kind) {
        case U2Kind::S:
            s.label = "u2:S[" + tag(lambda) + "]";
            s.eqs = {entry_minus(0, 0, lambda), entry_minus(1, 1, lambda), A(0, 1)};
            if (rep) s.representative.at(1, 1) = rational_frac(lambda);
            s.stratum_class = ClassPoly(1);
            s.tags = {lambda};
            break;
        case U2Kind::J:
            s.label = "u2:J[" + tag(lambda) + "]";
            s.eqs = {entry_minus(0, 0, lambda), entry_minus(1, 1, lambda)};
            s.neqs = {A(0, 1)};
            if (rep) {
                s.representative.at(1, 1) = rational_frac(lambda);
                s.representative.at(0, 1) = Frac(1);
            }
            s.stratum_class = C("q-1");
            s.tags = {lambda};
            break;
        case U2Kind::M:
            if (mu == 0 || mu == lambda) throw std::invalid_argument("M strata need distinct nonzero eigenvalues");
            s.label = "u2:M[" + tag(lambda) + "," + tag(mu) + "]";
            s.eqs = {entry_minus(0, 0, lambda), entry_minus(1, 1, mu)};
            if (rep) s.representative.at(1, 1) = rational_frac(mu);
            s.stratum_class = ClassPoly::q();
            s.tags = {lambda, mu};
            break;
    }
    return s;
}

Constraints membership_constraints(const SymbolicMatrix& m, const StratumSpec& s) {
    Constraints c;
    for (const auto& f : s.eqs) {
        MultiPoly num = evaluate_on(f, m).num;
        if (!num.is_zero()) c.eqs.push_back(num);
    }
    for (const auto& g : s.neqs) {
        MultiPoly num = evaluate_on(g, m).num;
        if (num.is_zero() || !num.is_constant()) c.neqs.push_back(num);
    }
    return c;
}

ConstraintVariety stratum_variety(const GroupSpec& g, const StratumSpec& s) {
    ConstraintVariety X;
    SymbolicMatrix m(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = i; j < g.n; ++j) {
            X.vars.push_back("a_" + std::to_string(i) + "_" + std::to_string(j));
            m.at(i, j) = Frac(MultiPoly::var(X.vars.back()));
            if (i == j) X.neqs.push_back(MultiPoly::var(X.vars.back()));
        }
    auto c = membership_constraints(m, s);
    X.eqs.insert(X.eqs.end(), c.eqs.begin(), c.eqs.end());
    X.neqs.insert(X.neqs.end(), c.neqs.begin(), c.neqs.end());
    X.normalize();
    return X;
}

void verify_strata(const GroupSpec& g, const std::vector<StratumSpec>& list) {
    for (size_t i = 0; i < list.size(); ++i) {
        const auto& s = list[i];
        ClassPoly got = class_of(stratum_variety(g, s)).value;
        if (got != s.stratum_class)
            throw StrataClassMismatch(s.label + ": stored class " + s.stratum_class.factored() + ", computed " +
                                      got.factored());
        for (size_t j = 0; j < list.size(); ++j) {
            auto c = membership_constraints(list[j].representative, s);
            bool inside = c.eqs.empty() && c.neqs.empty();
            if (inside != (i == j))
                throw StrataClassMismatch("representative of " + list[j].label +
                                          (inside ? " lies in " : " does not lie in ") + s.label);
        }
    }
}

const std::vector<StratumSpec>& strata(const GroupSpec& g) {
    static std::once_flag flags[3];
    static std::vector<StratumSpec> lists[3];
    int k = g.n - 2;
    std::call_once(flags[k], [&] {
        std::vector<StratumSpec> l;
        switch (g.id) {
            case GroupId::U2:
                l = {u2_stratum(U2Kind::S, 1), u2_stratum(U2Kind::J, 1), u2_stratum(U2Kind::M, 1, 2)};
                break;
            case GroupId::U3: l = build_u3(); break;
            case GroupId::U4: l = build_u4(); break;
        }
        verify_strata(g, l);
        lists[k] = std::move(l);
    });
    return lists[k];
}

}  // namespace grotto
