#include "grotto/tqft.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace grotto {

namespace {

ClassPoly P(const char* s) { return ClassPoly::parse(s); }

// Runs fn(0..n-1) over a small pool; the first exception is rethrown.
template <class Fn>
void parallel_for(size_t n, unsigned threads, Fn fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<std::string> labels(const GroupSpec& g) {
    std::vector<std::string> r;
    for (const auto& s : strata(g)) r.push_back(s.label);
    return r;
}

void append(ConstraintVariety& X, const Constraints& c) {
    X.eqs.insert(X.eqs.end(), c.eqs.begin(), c.eqs.end());
    X.neqs.insert(X.neqs.end(), c.neqs.begin(), c.neqs.end());
}

void add_element(ConstraintVariety& X, const GenericElement& e) {
    X.vars.insert(X.vars.end(), e.vars.begin(), e.vars.end());
    for (const auto& u : e.units) X.neqs.push_back(MultiPoly::var(u));
}

std::string cache_key(const GroupSpec& g, const TqftOptions& opt) {
    const auto& c = opt.engine;
    return g.name() + "/" + std::to_string(c.split_degree_bound) + "/" + std::to_string(c.max_depth) + "/" +
           std::to_string(c.quadratic_first) + "/" + std::to_string(c.memoize);
}

// Compute-once cache; values are immutable once stored.
template <class T, class Fn>
T cached(std::map<std::string, T>& store, std::mutex& mu, const std::string& key, bool use, Fn compute) {
    if (!use) return compute();
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = store.find(key);
        if (it != store.end()) return it->second;
    }
    T v = compute();
    std::lock_guard<std::mutex> lk(mu);
    return store.emplace(key, std::move(v)).first->second;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> r;
    std::string w;
    while (in >> w) r.push_back(w);
    return r;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("GROTTO_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

TqftMatrix::TqftMatrix(std::vector<std::string> basis)
    : basis_(std::move(basis)), e_(basis_.size() * basis_.size(), ClassExpr(0)) {}

TqftMatrix TqftMatrix::identity(std::vector<std::string> basis) {
    TqftMatrix m(std::move(basis));
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = 1;
    return m;
}

TqftMatrix TqftMatrix::diagonal(std::vector<std::string> basis, const std::vector<ClassExpr>& d) {
    TqftMatrix m(std::move(basis));
    if (d.size() != static_cast<size_t>(m.dim())) throw std::invalid_argument("diagonal size mismatch");
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[i];
    return m;
}

TqftMatrix operator*(const TqftMatrix& a, const TqftMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix size mismatch");
    TqftMatrix c(a.basis_);
    int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ClassExpr s;
            for (int k = 0; k < n; ++k)
                if (!a.at(i, k).is_zero() && !b.at(k, j).is_zero()) s += a.at(i, k) * b.at(k, j);
            c.at(i, j) = s;
        }
    return c;
}

TqftMatrix operator*(const ClassExpr& s, const TqftMatrix& m) {
    TqftMatrix r = m;
    for (auto& x : r.e_) x = s * x;
    return r;
}

bool TqftMatrix::is_symmetric() const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < i; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

void TqftMatrix::require_localized(const std::string& what) const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            if (!at(i, j).is_localized())
                throw NotLocalized(what + ": entry (" + basis_[i] + ", " + basis_[j] + ") = " + at(i, j).str() +
                                   " leaves the localized ring");
}

std::string TqftMatrix::golden() const {
    std::ostringstream os;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) os << basis_[i] << ' ' << basis_[j] << ' ' << at(i, j).factored() << '\n';
    return os.str();
}

TqftMatrix TqftMatrix::parse_golden(const std::string& text) {
    std::vector<std::string> basis;
    std::vector<std::tuple<std::string, std::string, ClassPoly>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto w = split_ws(line);
        if (w.empty() || w[0][0] == '#') continue;
        if (w.size() != 3) throw ParseError("golden matrix line needs 'row col entry': " + line);
        rows.emplace_back(w[0], w[1], ClassPoly::parse(w[2]));
        if (std::find(basis.begin(), basis.end(), w[0]) == basis.end()) basis.push_back(w[0]);
    }
    TqftMatrix m(basis);
    auto idx = [&](const std::string& l) {
        auto it = std::find(basis.begin(), basis.end(), l);
        if (it == basis.end()) throw ParseError("unknown basis label " + l);
        return static_cast<int>(it - basis.begin());
    };
    for (const auto& [r, c, v] : rows) m.at(idx(r), idx(c)) = v;
    return m;
}

std::string TqftVector::golden() const {
    std::ostringstream os;
    for (size_t i = 0; i < basis.size(); ++i) os << basis[i] << ' ' << entries[i].factored() << '\n';
    return os.str();
}

TqftVector TqftVector::parse_golden(const std::string& text) {
    TqftVector v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto w = split_ws(line);
        if (w.empty() || w[0][0] == '#') continue;
        if (w.size() != 2) throw ParseError("golden vector line needs 'label entry': " + line);
        v.basis.push_back(w[0]);
        v.entries.push_back(ClassPoly::parse(w[1]));
    }
    return v;
}

std::string FTensor::golden_slice(int j) const {
    std::ostringstream os;
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) os << (k ? " " : "") << at(i, j, k).factored();
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

TqftVector compute_first_column(const GroupSpec& g, const TqftOptions& opt) {
    const auto& st = strata(g);
    auto e1 = generic_element(g, 1), e2 = generic_element(g, 2);
    SymbolicMatrix c = commutator(e1.m, e2.m);
    TqftVector out{labels(g), std::vector<ClassPoly>(st.size())};
    ClassPoly G = g.group_class();
    parallel_for(st.size(), resolve_threads(opt.threads), [&](size_t i) {
        ConstraintVariety X;
        add_element(X, e1);
        add_element(X, e2);
        append(X, membership_constraints(c, st[i]));
        X.normalize();
        out.entries[i] = class_of(X, opt.engine).value * G;
    });
    return out;
}

FTensor compute_f_tensor(const GroupSpec& g, const TqftOptions& opt) {
    if (g.id == GroupId::U2) throw std::invalid_argument("the F tensor is defined for the unipotent strata of u3 and u4");
    const auto& st = strata(g);
    const int d = static_cast<int>(st.size());
    auto x = generic_element(g, 1, true);
    std::vector<Constraints> in_j(d);
    std::vector<std::vector<Constraints>> moved(d, std::vector<Constraints>(d));
    for (int j = 0; j < d; ++j) in_j[j] = membership_constraints(x.m, st[j]);
    for (int k = 0; k < d; ++k) {
        SymbolicMatrix y = mat_mul(x.m, st[k].representative);
        for (int i = 0; i < d; ++i) moved[i][k] = membership_constraints(y, st[i]);
    }
    FTensor F;
    F.d = d;
    F.v.assign(static_cast<size_t>(d) * d * d, ClassPoly(0));
    parallel_for(static_cast<size_t>(d) * d * d, resolve_threads(opt.threads), [&](size_t t) {
        int j = static_cast<int>(t / (d * d)), i = static_cast<int>(t / d % d), k = static_cast<int>(t % d);
        ConstraintVariety X;
        X.vars = x.vars;
        append(X, in_j[j]);
        append(X, moved[i][k]);
        X.normalize();
        F.at(i, j, k) = class_of(X, opt.engine).value;
    });
    return F;
}

// U2 on the lambda = 1 fiber: Z(T_j)|_{T_i} = [G] [{(h, g1, g2) : h in C_j, h [g1, g2] in C_i}].
TqftMatrix compute_u2_z_pi(const GroupSpec& g, const TqftOptions& opt) {
    const auto& st = strata(g);
    const int d = static_cast<int>(st.size());
    auto e1 = generic_element(g, 1), e2 = generic_element(g, 2), h = generic_element(g, 3);
    SymbolicMatrix prod = mat_mul(h.m, commutator(e1.m, e2.m));
    TqftMatrix Z(labels(g));
    ClassPoly G = g.group_class();
    parallel_for(static_cast<size_t>(d) * d, resolve_threads(opt.threads), [&](size_t t) {
        int i = static_cast<int>(t / d), j = static_cast<int>(t % d);
        ConstraintVariety X;
        add_element(X, e1);
        add_element(X, e2);
        add_element(X, h);
        append(X, membership_constraints(h.m, st[j]));
        append(X, membership_constraints(prod, st[i]));
        X.normalize();
        Z.at(i, j) = class_of(X, opt.engine).value * G;
    });
    return Z;
}

std::mutex cache_mu;
std::map<std::string, TqftVector> column_cache;
std::map<std::string, FTensor> f_cache;
std::map<std::string, TqftMatrix> z_cache;

}  // namespace

TqftVector first_column(const GroupSpec& g, const TqftOptions& opt) {
    return cached(column_cache, cache_mu, cache_key(g, opt), opt.cache, [&] { return compute_first_column(g, opt); });
}

FTensor f_tensor(const GroupSpec& g, const TqftOptions& opt) {
    return cached(f_cache, cache_mu, cache_key(g, opt), opt.cache, [&] { return compute_f_tensor(g, opt); });
}

TqftMatrix z_pi_L(const GroupSpec& g, const TqftOptions& opt) {
    return cached(z_cache, cache_mu, cache_key(g, opt), opt.cache, [&] {
        if (g.id == GroupId::U2) return compute_u2_z_pi(g, opt);
        TqftVector col = first_column(g, opt);
        FTensor F = f_tensor(g, opt);
        TqftMatrix Z(col.basis);
        for (int i = 0; i < F.d; ++i)
            for (int j = 0; j < F.d; ++j) {
                ClassPoly s;
                for (int k = 0; k < F.d; ++k) s += F.at(i, j, k) * col.entries[k];
                Z.at(i, j) = s;
            }
        return Z;
    });
}

TqftMatrix eta(const GroupSpec& g) {
    std::vector<ClassExpr> d;
    for (const auto& s : strata(g)) d.push_back(s.stratum_class);
    return TqftMatrix::diagonal(labels(g), d);
}

TqftMatrix reduced_L(const GroupSpec& g, const TqftOptions& opt) {
    TqftMatrix Z = z_pi_L(g, opt), E = eta(g);
    Z.require_localized("Z_pi(L)");
    for (int j = 0; j < Z.dim(); ++j) {
        ClassExpr inv = ClassExpr(1) / E.at(j, j);
        for (int i = 0; i < Z.dim(); ++i) Z.at(i, j) = Z.at(i, j) * inv;
    }
    Z.require_localized("reduced Z(L)");
    return Z;
}

TqftMatrix matrix_power(const TqftMatrix& m, unsigned e) {
    TqftMatrix r = TqftMatrix::identity(m.basis()), b = m;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    r.require_localized("matrix power");
    return r;
}

ClassPoly rep_variety_class(const GroupSpec& g, unsigned genus, const TqftOptions& opt) {
    if (genus < 1) throw std::invalid_argument("genus must be at least 1");
    TqftMatrix M = matrix_power(reduced_L(g, opt), genus);
    return as_polynomial(M.at(0, 0) / ClassExpr(g.group_class().pow(genus)));
}

ClassPoly closed_form(const GroupSpec& grp, unsigned g) {
    if (g < 1) throw std::invalid_argument("genus must be at least 1");
    const ClassPoly q = ClassPoly::q(), q1 = P("q-1");
    auto Q = [](unsigned k) { return ClassPoly::q_pow(k); };
    auto Q1 = [&](unsigned k) { return q1.pow(k); };
    switch (grp.id) {
        case GroupId::U2: return Q(2 * g - 1) * Q1(2 * g + 1) * (Q1(2 * g - 1) + 1);
        case GroupId::U3:
            return Q(3 * g - 3) * Q1(2 * g) *
                   (Q(2) * Q1(2 * g + 1) + Q(3 * g) * Q1(2) + Q(3 * g) * Q1(4 * g) + 2 * Q(3 * g) * Q1(2 * g + 1));
        case GroupId::U4:
            return Q(8 * g - 2) * Q1(4 * g + 2) + Q(8 * g - 2) * Q1(6 * g + 1) + Q(10 * g - 4) * Q1(2 * g + 3) +
                   Q(10 * g - 4) * Q1(4 * g + 1) * P("2*q^2 - 6*q + 5").pow(g) + 3 * Q(10 * g - 4) * Q1(4 * g + 2) +
                   Q(10 * g - 4) * Q1(6 * g + 1) + Q(12 * g - 6) * Q1(8 * g) + Q(12 * g - 6) * Q1(2 * g + 3) +
                   3 * Q(12 * g - 6) * Q1(4 * g + 2) + 3 * Q(12 * g - 6) * Q1(6 * g + 1);
    }
    throw std::logic_error("unknown group");
}

ClassPoly closed_form_from_eigendata(const GroupSpec& grp, unsigned g) {
    if (g < 1) throw std::invalid_argument("genus must be at least 1");
    const ClassPoly q1 = P("q-1");
    auto Q = [](unsigned k) { return ClassPoly::q_pow(k); };
    auto Q1 = [&](unsigned k) { return q1.pow(k); };
    switch (grp.id) {
        case GroupId::U2: return closed_form(grp, g);
        case GroupId::U3:
            return Q(6 * g - 3) * Q1(2 * g + 2) + Q(4 * g - 1) * Q1(4 * g + 1) + 2 * Q(6 * g - 3) * Q1(4 * g + 1) +
                   Q(6 * g - 3) * Q1(6 * g);
        case GroupId::U4: break;
    }
    throw std::invalid_argument("no diagonalization data for " + grp.name());
}

// ---------------------------------------------------------------------------

namespace {

TqftMatrix from_strings(const std::vector<std::string>& basis, const std::vector<std::vector<const char*>>& rows) {
    TqftMatrix m(basis);
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) m.at(i, j) = ClassPoly::parse(rows[i][j]);
    return m;
}

}  // namespace

DiagData reference_diag_data(const GroupSpec& g) {
    DiagData d;
    auto basis = labels(g);
    switch (g.id) {
        case GroupId::U2:
            d.prefactor = P("q^3*(q-1)^4");
            d.A = from_strings(basis, {{"1", "1", "0"}, {"-1", "q-1", "0"}, {"0", "0", "1"}});
            d.D = TqftMatrix::diagonal(basis, {ClassExpr(1), P("(q-1)^2"), P("(q-1)^2")});
            return d;
        case GroupId::U3:
            d.prefactor = P("q^6*(q-1)^5");
            d.A = from_strings(basis, {{"1", "1", "0", "1", "1"},
                                       {"q", "0", "0", "-q*(q-1)", "q*(q-1)^2"},
                                       {"-q", "0", "1", "0", "q*(q-1)"},
                                       {"-q", "0", "-1", "q*(q-2)", "q*(q-1)"},
                                       {"q-1", "-1", "0", "q-1", "q-1"}});
            d.D = TqftMatrix::diagonal(
                basis, {P("q^3"), P("q*(q-1)^2"), P("q^3*(q-1)^2"), P("q^3*(q-1)^2"), P("q^3*(q-1)^4")});
            d.A_inv = ClassExpr(1, P("q^3")) *
                      from_strings(basis, {{"(q-1)^2", "1", "1-q", "1-q", "(q-1)^2"},
                                           {"q^2*(q-1)", "0", "0", "0", "-q^2"},
                                           {"q*(q-2)*(q-1)", "-q*(q-2)", "q^3-2*q^2+2*q", "-2*q*(q-1)",
                                            "q^3-3*q^2+2*q"},
                                           {"2*q-2", "-2", "q-2", "q-2", "2*q-2"},
                                           {"1", "1", "1", "1", "1"}});
            d.has_inverse = true;
            return d;
        case GroupId::U4: break;
    }
    throw std::invalid_argument("no diagonalization data for " + g.name());
}

bool diag_check(const TqftMatrix& m, const DiagData& d) {
    if (m * d.A != d.prefactor * (d.A * d.D)) return false;
    if (d.has_inverse && d.A * d.A_inv != TqftMatrix::identity(m.basis())) return false;
    return true;
}

bool diag_check(const GroupSpec& g, const TqftOptions& opt) { return diag_check(reduced_L(g, opt), reference_diag_data(g)); }

Rational parse_rational(const std::string& s) {
    if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
        throw ParseError("bad rational '" + s + "'");
    Rational r;
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos && (slash == 0 || slash + 1 == s.size() || s.find('/', slash + 1) != std::string::npos))
            throw std::invalid_argument(s);
        if (slash != std::string::npos && mpz_class(s.substr(slash + 1)) == 0) throw ParseError("zero denominator in '" + s + "'");
        r = Rational(s);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + s + "'");
    }
    r.canonicalize();
    return r;
}

}  // namespace grotto
