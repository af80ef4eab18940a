#include "grotto/poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "grotto/upoly.hpp"

namespace grotto {

Mono Mono::var(int i, unsigned k) {
    if (i < 0 || i >= kMaxVars) throw std::out_of_range("variable index out of range");
    if (k > 255) throw std::overflow_error("exponent overflow");
    Mono m;
    m.e[i] = static_cast<uint8_t>(k);
    m.deg = k;
    return m;
}

Mono Mono::operator*(const Mono& o) const {
    Mono r;
    r.deg = deg + o.deg;
    unsigned over = 0;
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned s = static_cast<unsigned>(e[i]) + o.e[i];
        over |= s;
        r.e[i] = static_cast<uint8_t>(s);
    }
    if (over > 255) throw std::overflow_error("exponent overflow");
    return r;
}

bool Mono::divides(const Mono& o) const {
    if (deg > o.deg) return false;
    for (int i = 0; i < kMaxVars; ++i)
        if (e[i] > o.e[i]) return false;
    return true;
}

Mono Mono::quotient_of(const Mono& o) const {
    Mono r;
    r.deg = o.deg - deg;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = o.e[i] - e[i];
    return r;
}

VarMask Mono::mask() const {
    VarMask m = 0;
    for (int i = 0; i < kMaxVars; ++i)
        if (e[i]) m |= VarMask(1) << i;
    return m;
}

size_t Mono::hash() const {
    uint64_t h = 1469598103934665603ull ^ deg;
    for (int i = 0; i < kMaxVars; ++i) h = (h ^ e[i]) * 1099511628211ull;
    return h;
}

namespace {

bool term_greater(const Term& a, const Term& b) { return mono_cmp(a.m, b.m) > 0; }

}  // namespace

Poly::Poly(long long c) {
    if (c != 0) t_.push_back({Mono{}, Int(c)});
}

Poly::Poly(const Int& c) {
    if (!c.is_zero()) t_.push_back({Mono{}, c});
}

Poly Poly::var(int i) { return monomial(Mono::var(i), Int(1)); }

Poly Poly::monomial(const Mono& m, const Int& c) {
    Poly p;
    if (!c.is_zero()) p.t_.push_back({m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_greater);
    Poly p;
    p.t_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.t_.empty() && p.t_.back().m == t.m) {
            p.t_.back().c += t.c;
        } else {
            if (!p.t_.empty() && p.t_.back().c.is_zero()) p.t_.pop_back();
            p.t_.push_back(std::move(t));
        }
    }
    if (!p.t_.empty() && p.t_.back().c.is_zero()) p.t_.pop_back();
    return p;
}

Int Poly::constant_value() const {
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return t_.empty() ? Int(0) : t_[0].c;
}

Int Poly::constant_term() const {
    if (!t_.empty() && t_.back().m.deg == 0) return t_.back().c;
    return Int(0);
}

VarMask Poly::var_mask() const {
    VarMask m = 0;
    for (const auto& t : t_) m |= t.m.mask();
    return m;
}

unsigned Poly::degree(int x) const {
    unsigned d = 0;
    for (const auto& t : t_) d = std::max<unsigned>(d, t.m.e[x]);
    return d;
}

int Poly::single_var() const {
    VarMask m = var_mask();
    return m ? __builtin_ctzll(m) : -1;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = mono_cmp(a[i].m, b[j].m);
        if (c > 0) {
            r.push_back(a[i++]);
        } else if (c < 0) {
            r.push_back(b[j++]);
            if (subtract) r.back().c = -r.back().c;
        } else {
            Int s = subtract ? a[i].c - b[j].c : a[i].c + b[j].c;
            if (!s.is_zero()) r.push_back({a[i].m, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) {
        r.push_back(b[j]);
        if (subtract) r.back().c = -r.back().c;
    }
    return r;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (o.t_.empty()) return *this;
    t_ = merge(t_, o.t_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.t_.empty()) return *this;
    t_ = merge(t_, o.t_, true);
    return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.t_ = merge(a.t_, b.t_, false);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r;
    r.t_ = merge(a.t_, b.t_, true);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.t_.empty() || b.t_.empty()) return Poly();
    if (a.t_.size() == 1) return b.mul_mono(a.t_[0].m, a.t_[0].c);
    if (b.t_.size() == 1) return a.mul_mono(b.t_[0].m, b.t_[0].c);
    std::vector<Term> prod;
    prod.reserve(a.t_.size() * b.t_.size());
    for (const auto& x : a.t_)
        for (const auto& y : b.t_) prod.push_back({x.m * y.m, x.c * y.c});
    return Poly::from_terms(std::move(prod));
}

Poly Poly::scale(const Int& c) const {
    if (c.is_zero()) return Poly();
    Poly r(*this);
    if (!c.is_one())
        for (auto& t : r.t_) t.c *= c;
    return r;
}

Poly Poly::mul_mono(const Mono& m, const Int& c) const {
    if (c.is_zero()) return Poly();
    Poly r(*this);
    for (auto& t : r.t_) {
        t.m = t.m * m;
        if (!c.is_one()) t.c *= c;
    }
    return r;
}

Poly Poly::divexact(const Int& c) const {
    Poly r(*this);
    if (!c.is_one())
        for (auto& t : r.t_) t.c = Int::divexact(t.c, c);
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r(1), base(*this);
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

Int Poly::content() const {
    Int g(0);
    for (const auto& t : t_) {
        g = Int::gcd(g, t.c);
        if (g.is_one()) break;
    }
    return g;
}

Poly Poly::primitive(Int& removed) const {
    if (t_.empty()) {
        removed = Int(1);
        return Poly();
    }
    Int c = content();
    if (t_[0].c.sign() < 0) c = -c;
    removed = c;
    return divexact(c);
}

Poly Poly::primitive() const {
    Int dummy;
    return primitive(dummy);
}

Mono Poly::monomial_content() const {
    if (t_.empty()) return Mono{};
    Mono m = t_[0].m;
    for (const auto& t : t_)
        for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], t.m.e[i]);
    m.deg = 0;
    for (int i = 0; i < kMaxVars; ++i) m.deg += m.e[i];
    return m;
}

Poly Poly::div_mono(const Mono& m) const {
    Poly r(*this);
    for (auto& t : r.t_) t.m = m.quotient_of(t.m);
    return r;
}

std::vector<Poly> Poly::coeffs_in(int x) const {
    std::vector<std::vector<Term>> buckets(degree(x) + 1);
    for (const auto& t : t_) {
        Term u = t;
        unsigned k = u.m.e[x];
        u.m.e[x] = 0;
        u.m.deg -= k;
        buckets[k].push_back(std::move(u));
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

Poly Poly::from_coeffs(int x, const std::vector<Poly>& c) {
    std::vector<Term> terms;
    for (size_t k = 0; k < c.size(); ++k) {
        Mono xm = k ? Mono::var(x, static_cast<unsigned>(k)) : Mono{};
        for (const auto& t : c[k].terms()) terms.push_back({t.m * xm, t.c});
    }
    return from_terms(std::move(terms));
}

Poly Poly::derivative(int x) const {
    std::vector<Term> terms;
    for (const auto& t : t_) {
        unsigned k = t.m.e[x];
        if (!k) continue;
        Term u = t;
        u.m.e[x] = static_cast<uint8_t>(k - 1);
        u.m.deg -= 1;
        u.c *= Int(static_cast<long long>(k));
        terms.push_back(std::move(u));
    }
    return from_terms(std::move(terms));
}

Poly Poly::substitute(int x, const Poly& u) const {
    if (!(var_mask() >> x & 1)) return *this;
    auto c = coeffs_in(x);
    Poly r = c.back();
    for (size_t k = c.size() - 1; k-- > 0;) r = r * u + c[k];
    return r;
}

Poly Poly::substitute_cleared(int x, const Poly& u, const Poly& v) const {
    auto c = coeffs_in(x);
    const size_t d = c.size() - 1;
    if (d == 0) return *this;
    std::vector<Poly> vp(d + 1);
    vp[0] = Poly(1);
    for (size_t i = 1; i <= d; ++i) vp[i] = vp[i - 1] * v;
    Poly r = c[d];
    for (size_t k = d; k-- > 0;) {
        r = r * u;
        if (!c[k].is_zero()) r += c[k] * vp[d - k];
    }
    return r;
}

Poly Poly::rename(const std::array<int8_t, kMaxVars>& to) const {
    std::vector<Term> terms;
    terms.reserve(t_.size());
    for (const auto& t : t_) {
        Term u;
        u.m.deg = t.m.deg;
        for (int i = 0; i < kMaxVars; ++i) {
            if (!t.m.e[i]) continue;
            if (to[i] < 0) throw std::logic_error("rename drops a live variable");
            u.m.e[to[i]] = t.m.e[i];
        }
        u.c = t.c;
        terms.push_back(std::move(u));
    }
    return from_terms(std::move(terms));
}

bool Poly::divide(const Poly& b, Poly& q) const {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    q = Poly();
    if (is_zero()) return true;
    const Term& lb = b.lead();
    Poly r(*this);
    std::vector<Term> qt;
    while (!r.is_zero()) {
        const Term& lr = r.lead();
        if (lr.m.deg < lb.m.deg || !lb.m.divides(lr.m) || !Int::divisible(lr.c, lb.c)) return false;
        Mono m = lb.m.quotient_of(lr.m);
        Int c = Int::divexact(lr.c, lb.c);
        r -= b.mul_mono(m, c);
        qt.push_back({m, std::move(c)});
    }
    q.t_ = std::move(qt);
    return true;
}

int64_t Poly::eval_mod(const std::vector<int64_t>& point, int64_t p) const {
    int64_t acc = 0;
    for (const auto& t : t_) {
        int64_t v = t.c.mod_small(p);
        for (int i = 0; i < kMaxVars && v; ++i)
            for (unsigned k = 0; k < t.m.e[i]; ++k) v = v * point[i] % p;
        acc = (acc + v) % p;
    }
    return acc;
}

size_t Poly::hash() const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& t : t_) {
        h ^= t.m.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= t.c.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

std::string Poly::key() const {
    std::string s;
    VarMask m = var_mask();
    int top = m ? 64 - __builtin_clzll(m) : 0;
    for (const auto& t : t_) {
        s.append(reinterpret_cast<const char*>(t.m.e.data()), top);
        s += t.c.str();
        s += ';';
    }
    return s;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i)
        if (a.t_[i].m != b.t_[i].m || a.t_[i].c != b.t_[i].c) return false;
    return true;
}

int Poly::compare(const Poly& a, const Poly& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree() ? -1 : 1;
    if (a.t_.size() != b.t_.size()) return a.t_.size() < b.t_.size() ? -1 : 1;
    for (size_t i = 0; i < a.t_.size(); ++i) {
        int c = mono_cmp(a.t_[i].m, b.t_[i].m);
        if (c) return c;
        c = Int::cmp(a.t_[i].c, b.t_[i].c);
        if (c) return c;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gcd

namespace {

int highest_var(VarMask m) { return 63 - __builtin_clzll(m); }

Poly pp_in(const Poly& a, int x, Poly* cont = nullptr) {
    Poly c = content_in(a, x);
    if (cont) *cont = c;
    if (c.is_constant()) return a.primitive();
    Poly q;
    a.divide(c, q);
    return q.primitive();
}

}  // namespace

Poly content_in(const Poly& a, int x) {
    if (a.is_zero()) return Poly();
    auto cs = a.coeffs_in(x);
    Poly g;
    // cheapest coefficients first
    std::sort(cs.begin(), cs.end(), [](const Poly& p, const Poly& q) { return p.size() < q.size(); });
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) return g;
    }
    return g;
}

Poly prem(const Poly& a, const Poly& b, int x) {
    auto A = a.coeffs_in(x);
    auto B = b.coeffs_in(x);
    const size_t db = B.size() - 1;
    const Poly& lb = B.back();
    while (!A.empty() && A.size() - 1 >= db) {
        Poly la = A.back();
        size_t shift = A.size() - 1 - db;
        for (auto& c : A) c = c * lb;
        for (size_t i = 0; i <= db; ++i) A[i + shift] -= la * B[i];
        while (!A.empty() && A.back().is_zero()) A.pop_back();
        if (A.empty()) break;
    }
    return Poly::from_coeffs(x, A);
}

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.primitive().scale(b.content());
    if (b.is_zero()) return a.primitive().scale(a.content());
    Int ic = Int::gcd(a.content(), b.content());
    if (a.is_constant() || b.is_constant()) return Poly(ic);
    Mono ma = a.monomial_content(), mb = b.monomial_content(), mg;
    for (int i = 0; i < kMaxVars; ++i) {
        mg.e[i] = std::min(ma.e[i], mb.e[i]);
        mg.deg += mg.e[i];
    }
    Poly x = a.div_mono(ma).primitive();
    Poly y = b.div_mono(mb).primitive();
    Poly g;
    if (x == y) {
        g = x;
    } else if (x.is_constant() || y.is_constant()) {
        g = Poly(1);
    } else {
        VarMask mx = x.var_mask(), my = y.var_mask();
        VarMask only = (mx ^ my);
        if (only) {
            int v = highest_var(only);
            if (mx >> v & 1) g = gcd(content_in(x, v), y);
            else g = gcd(x, content_in(y, v));
        } else {
            int v = highest_var(mx);
            Poly cx, cy;
            Poly px = pp_in(x, v, &cx), py = pp_in(y, v, &cy);
            Poly c = gcd(cx, cy);
            if (px.degree(v) < py.degree(v)) std::swap(px, py);
            while (true) {
                Poly r = prem(px, py, v);
                if (r.is_zero()) break;
                if (r.degree(v) == 0) {
                    py = Poly(1);
                    break;
                }
                px = std::move(py);
                py = pp_in(r, v);
            }
            g = (c * py).primitive();
        }
    }
    return g.mul_mono(mg, Int(1)).primitive().scale(ic);
}

// ---------------------------------------------------------------------------
// roots and powers

std::optional<Poly> nth_root(const Poly& f, unsigned n) {
    if (f.is_zero() || n < 2) return std::nullopt;
    const Term& lt = f.lead();
    Mono mu;
    for (int i = 0; i < kMaxVars; ++i) {
        if (lt.m.e[i] % n) return std::nullopt;
        mu.e[i] = lt.m.e[i] / n;
    }
    mu.deg = lt.m.deg / n;
    Int c;
    if (!Int::root_exact(lt.c, n, c)) return std::nullopt;
    Poly u = Poly::monomial(mu, c);
    uint32_t lowest = f.terms().back().m.deg;
    Int nlead = Int(static_cast<long long>(n)) * Int::pow(c, n - 1);
    Mono lead_pow;
    for (unsigned i = 0; i + 1 < n; ++i) lead_pow = lead_pow * mu;
    for (size_t guard = 0; guard <= 4 * f.size() + 8; ++guard) {
        Poly r = f - u.pow(n);
        if (r.is_zero()) {
            if (n % 2 == 0 && u.lead().c.sign() < 0) u = -u;
            return u;
        }
        const Term& lr = r.lead();
        if (!lead_pow.divides(lr.m) || !Int::divisible(lr.c, nlead)) return std::nullopt;
        Mono tm = lead_pow.quotient_of(lr.m);
        if (mono_cmp(tm, mu) >= 0) return std::nullopt;
        if (tm.deg * n < lowest) return std::nullopt;
        u += Poly::monomial(tm, Int::divexact(lr.c, nlead));
    }
    return std::nullopt;
}

std::optional<std::pair<Poly, unsigned>> perfect_power(const Poly& f) {
    if (f.is_zero() || f.is_constant()) return std::nullopt;
    const unsigned d = f.total_degree();
    for (unsigned n = d; n >= 2; --n) {
        if (d % n) continue;
        if (auto u = nth_root(f, n)) return std::make_pair(*u, n);
    }
    return std::nullopt;
}

std::optional<Poly> perfect_square_root(const Poly& f) {
    if (f.is_zero()) return Poly();
    return nth_root(f, 2);
}

// ---------------------------------------------------------------------------
// factor splitting

namespace {

upoly::UPoly to_upoly(const Poly& f, int x) {
    auto cs = f.coeffs_in(x);
    upoly::UPoly u(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) u[i] = cs[i].is_zero() ? Int(0) : cs[i].constant_value();
    return u;
}

Poly from_upoly(const upoly::UPoly& u, int x) {
    std::vector<Term> terms;
    for (size_t i = 0; i < u.size(); ++i)
        if (!u[i].is_zero()) terms.push_back({i ? Mono::var(x, static_cast<unsigned>(i)) : Mono{}, u[i]});
    return Poly::from_terms(std::move(terms));
}

bool proper(const Poly& g, const Poly& f) {
    return !g.is_constant() && g.total_degree() < f.total_degree();
}

// f primitive, no monomial factor, nonconstant.
std::optional<Poly> find_factor(const Poly& f, const SplitConfig& cfg) {
    VarMask vm = f.var_mask();
    std::vector<int> vars;
    for (VarMask m = vm; m; m &= m - 1) vars.push_back(__builtin_ctzll(m));

    if (vars.size() == 1) {
        int x = vars[0];
        auto u = to_upoly(f, x);
        if (upoly::degree(u) <= 1) return std::nullopt;
        upoly::UPoly rest;
        auto roots = upoly::rational_roots(u, rest);
        if (!roots.empty()) {
            mpq_class r = roots[0].value;
            return from_upoly({Int(mpz_class(-r.get_num())), Int(mpz_class(r.get_den()))}, x);
        }
        if (upoly::degree(u) <= 3) return std::nullopt;
        auto g = upoly::gcd(u, upoly::derivative(u));
        if (upoly::degree(g) >= 1) return from_upoly(g, x);
        if (auto k = upoly::kronecker_factor(u, cfg.degree_bound)) return from_upoly(*k, x);
        return std::nullopt;
    }

    // Linear in some variable with coprime coefficients: irreducible.
    for (int x : vars) {
        if (f.degree(x) != 1) continue;
        auto cs = f.coeffs_in(x);
        Poly g = gcd(cs[0], cs[1]);
        if (g.is_constant()) return std::nullopt;
        return g;
    }

    for (int x : vars) {
        Poly c = content_in(f, x);
        if (!c.is_constant()) return c;
    }

    for (int x : vars) {
        Poly g = gcd(f, f.derivative(x));
        if (proper(g, f)) return g;
    }

    for (int x : vars) {
        if (f.degree(x) != 2) continue;
        auto cs = f.coeffs_in(x);
        Poly disc = cs[1] * cs[1] - Poly(4) * cs[2] * cs[0];
        if (disc.is_zero()) continue;
        auto h = perfect_square_root(disc);
        if (!h) continue;
        Poly cand = Poly(2) * cs[2] * Poly::var(x) + cs[1] + *h;
        Poly g = gcd(f, cand);
        if (proper(g, f)) return g;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::pair<Poly, Poly>> split_product(const Poly& f, const SplitConfig& cfg) {
    if (f.is_zero() || f.is_constant()) return std::nullopt;
    Mono m = f.monomial_content();
    if (m.deg > 0) {
        if (f.size() == 1 && m.deg == 1) return std::nullopt;
        int x = 0;
        while (!m.e[x]) ++x;
        return std::make_pair(Poly::var(x), f.div_mono(Mono::var(x)));
    }
    Int unit;
    Poly p = f.primitive(unit);
    auto g = find_factor(p, cfg);
    if (!g) return std::nullopt;
    Poly u = g->primitive(), v;
    if (!p.divide(u, v)) throw std::logic_error("split_product: factor does not divide");
    return std::make_pair(u, v.scale(unit));
}

Factorization factor(const Poly& f, const SplitConfig& cfg) {
    if (f.is_zero()) throw std::domain_error("factor of zero");
    Factorization out;
    Poly p = f.primitive(out.unit);
    std::vector<std::pair<Poly, unsigned>> work{{p, 1}};
    std::vector<std::pair<Poly, unsigned>> done;
    while (!work.empty()) {
        auto [g, mult] = std::move(work.back());
        work.pop_back();
        if (g.is_constant()) continue;
        Mono m = g.monomial_content();
        if (m.deg > 0) {
            for (int i = 0; i < kMaxVars; ++i)
                if (m.e[i]) done.emplace_back(Poly::var(i), mult * m.e[i]);
            g = g.div_mono(m);
            if (g.is_constant()) {
                out.unit *= g.constant_value();
                continue;
            }
        }
        auto h = find_factor(g, cfg);
        if (!h) {
            done.emplace_back(g, mult);
            continue;
        }
        Poly u = h->primitive(), v;
        if (!g.divide(u, v)) throw std::logic_error("factor: candidate does not divide");
        if (v.lead().c.sign() < 0) {
            v = -v;
            out.unit = -out.unit;
        }
        if (u == v) {
            work.emplace_back(u, mult * 2);
        } else {
            work.emplace_back(u, mult);
            work.emplace_back(v, mult);
        }
    }
    std::sort(done.begin(), done.end(),
              [](const auto& a, const auto& b) { return Poly::compare(a.first, b.first) < 0; });
    for (auto& d : done) {
        if (!out.factors.empty() && out.factors.back().first == d.first) out.factors.back().second += d.second;
        else out.factors.push_back(std::move(d));
    }
    return out;
}

}  // namespace grotto
