#include "grotto/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace grotto::upoly {

void trim(UPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int degree(const UPoly& a) { return static_cast<int>(a.size()) - 1; }

bool is_zero(const UPoly& a) { return a.empty(); }

UPoly add(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

UPoly sub(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

UPoly mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

UPoly scale(const UPoly& a, const Int& c) {
    if (c.is_zero()) return {};
    UPoly r(a);
    for (auto& x : r) x *= c;
    return r;
}

UPoly neg(const UPoly& a) {
    UPoly r(a);
    for (auto& x : r) x = -x;
    return r;
}

UPoly pow(const UPoly& a, unsigned e) {
    UPoly r{Int(1)}, base(a);
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

Int content(const UPoly& a) {
    Int g(0);
    for (const auto& c : a) {
        g = Int::gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

UPoly primitive(const UPoly& a) {
    if (a.empty()) return {};
    Int c = content(a);
    if (a.back().sign() < 0) c = -c;
    UPoly r(a);
    if (!c.is_one())
        for (auto& x : r) x = Int::divexact(x, c);
    return r;
}

UPoly derivative(const UPoly& a) {
    if (a.size() <= 1) return {};
    UPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Int(static_cast<long long>(i));
    trim(r);
    return r;
}

UPoly prem(const UPoly& a, const UPoly& b) {
    if (b.empty()) throw std::domain_error("prem by zero");
    UPoly r(a);
    const int db = degree(b);
    const Int& lb = b.back();
    while (degree(r) >= db) {
        Int lr = r.back();
        int shift = degree(r) - db;
        for (auto& x : r) x *= lb;
        for (int i = 0; i <= db; ++i) r[i + shift] -= lr * b[i];
        trim(r);
    }
    return r;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    if (a.empty()) return primitive(b);
    if (b.empty()) return primitive(a);
    UPoly x = primitive(a), y = primitive(b);
    if (degree(x) < degree(y)) std::swap(x, y);
    while (!y.empty()) {
        if (degree(y) == 0) return {Int(1)};
        UPoly r = prem(x, y);
        x = std::move(y);
        y = primitive(r);
    }
    return primitive(x);
}

std::optional<UPoly> divexact(const UPoly& a, const UPoly& b) {
    if (b.empty()) throw std::domain_error("division by zero polynomial");
    if (a.empty()) return UPoly{};
    if (degree(a) < degree(b)) return std::nullopt;
    UPoly r(a);
    UPoly q(a.size() - b.size() + 1);
    const int db = degree(b);
    while (!r.empty() && degree(r) >= db) {
        if (!Int::divisible(r.back(), b.back())) return std::nullopt;
        Int c = Int::divexact(r.back(), b.back());
        int shift = degree(r) - db;
        q[shift] = c;
        for (int i = 0; i <= db; ++i) r[i + shift] -= c * b[i];
        trim(r);
    }
    if (!r.empty()) return std::nullopt;
    trim(q);
    return q;
}

Int eval(const UPoly& a, const Int& x) {
    Int r(0);
    for (size_t i = a.size(); i-- > 0;) {
        r *= x;
        r += a[i];
    }
    return r;
}

mpq_class eval(const UPoly& a, const mpq_class& x) {
    mpq_class r(0);
    for (size_t i = a.size(); i-- > 0;) {
        r *= x;
        r += a[i].to_mpz();
    }
    return r;
}

namespace {

// Positive divisors of |n|, n != 0. Cofactors beyond the trial bound are
// treated as prime, which can only lose candidates, never invent them.
std::vector<Int> positive_divisors(const Int& n) {
    mpz_class m = abs(n.to_mpz());
    std::vector<std::pair<mpz_class, unsigned>> fac;
    for (unsigned long p = 2; p < 1000000 && mpz_class(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++e;
        }
        if (e) fac.emplace_back(mpz_class(p), e);
    }
    if (m > 1) fac.emplace_back(m, 1);
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : fac) {
        size_t n0 = divs.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < n0; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::vector<Int> out;
    out.reserve(divs.size());
    for (auto& d : divs) out.emplace_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

// q^deg * a(p/q)
Int eval_homog(const UPoly& a, const Int& p, const Int& q) {
    Int r(0);
    const int d = degree(a);
    std::vector<Int> qp(d + 1);
    qp[0] = Int(1);
    for (int i = 1; i <= d; ++i) qp[i] = qp[i - 1] * q;
    Int ppow(1);
    for (int i = 0; i <= d; ++i) {
        if (!a[i].is_zero()) r += a[i] * ppow * qp[d - i];
        ppow *= p;
    }
    return r;
}

}  // namespace

std::vector<RationalRoot> rational_roots(const UPoly& a, UPoly& rest) {
    if (a.empty()) throw std::domain_error("roots of zero polynomial");
    std::vector<RationalRoot> roots;
    UPoly f = primitive(a);
    unsigned zero_mult = 0;
    while (f.size() > 1 && f[0].is_zero()) {
        f.erase(f.begin());
        ++zero_mult;
    }
    if (zero_mult) roots.push_back({mpq_class(0), zero_mult});
    if (degree(f) >= 1) {
        auto ps = positive_divisors(f[0]);
        auto qs = positive_divisors(f.back());
        for (const auto& q : qs) {
            for (const auto& p0 : ps) {
                if (degree(f) < 1) break;
                if (!Int::gcd(p0, q).is_one()) continue;
                for (int s : {1, -1}) {
                    Int p = s > 0 ? p0 : -p0;
                    unsigned mult = 0;
                    while (degree(f) >= 1 && eval_homog(f, p, q).is_zero()) {
                        auto d = divexact(f, UPoly{-p, q});
                        f = primitive(*d);
                        ++mult;
                    }
                    if (mult) {
                        mpq_class v(p.to_mpz(), q.to_mpz());
                        v.canonicalize();
                        roots.push_back({v, mult});
                    }
                }
            }
        }
    }
    rest = f;
    std::sort(roots.begin(), roots.end(),
              [](const RationalRoot& x, const RationalRoot& y) { return x.value < y.value; });
    return roots;
}

namespace {

// Newton interpolation through (xs[i], ys[i]) over Q.
std::vector<mpq_class> interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys) {
    const size_t n = xs.size();
    std::vector<mpq_class> dd(n);
    for (size_t i = 0; i < n; ++i) dd[i] = ys[i].to_mpz();
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / mpq_class(xs[i].to_mpz() - xs[i - j].to_mpz());
            if (i == j) break;
        }
    std::vector<mpq_class> poly{dd[n - 1]};
    for (size_t k = n - 1; k-- > 0;) {
        std::vector<mpq_class> next(poly.size() + 1);
        mpq_class xk(xs[k].to_mpz());
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * xk;
        }
        next[0] += dd[k];
        poly = std::move(next);
    }
    return poly;
}

}  // namespace

std::optional<UPoly> kronecker_factor(const UPoly& a, unsigned max_degree) {
    const int n = degree(a);
    if (n < 4) return std::nullopt;
    const unsigned top = std::min<unsigned>(max_degree, static_cast<unsigned>(n / 2));
    for (unsigned k = 2; k <= top; ++k) {
        std::vector<Int> xs, vals;
        for (long long t = 0; xs.size() < k + 1 && t < 64; ++t) {
            long long x = (t % 2 == 0) ? t / 2 : -(t + 1) / 2;
            Int v = eval(a, Int(x));
            if (v.is_zero()) continue;
            xs.emplace_back(x);
            vals.push_back(v);
        }
        if (xs.size() < k + 1) continue;
        std::vector<std::vector<Int>> divs;
        double combos = 1;
        for (const auto& v : vals) {
            auto d = positive_divisors(v);
            combos *= 2.0 * static_cast<double>(d.size());
            divs.push_back(std::move(d));
        }
        if (combos > 2e6) continue;
        std::vector<size_t> idx(k + 1, 0);
        std::vector<int> sgn(k + 1, 1);
        while (true) {
            std::vector<Int> ys(k + 1);
            for (size_t i = 0; i <= k; ++i) ys[i] = sgn[i] > 0 ? divs[i][idx[i]] : -divs[i][idx[i]];
            auto coeffs = interpolate(xs, ys);
            bool integral = true;
            UPoly cand(coeffs.size());
            for (size_t i = 0; i < coeffs.size() && integral; ++i) {
                if (coeffs[i].get_den() != 1) integral = false;
                else cand[i] = Int(mpz_class(coeffs[i].get_num()));
            }
            if (integral) {
                trim(cand);
                if (degree(cand) >= 1 && degree(cand) < n) {
                    if (divexact(a, cand)) return primitive(cand);
                }
            }
            // advance odometer; the first sign stays positive
            size_t pos = 0;
            while (pos <= k) {
                if (pos > 0 && sgn[pos] > 0) {
                    sgn[pos] = -1;
                    break;
                }
                if (pos > 0) sgn[pos] = 1;
                if (++idx[pos] < divs[pos].size()) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos > k) break;
        }
    }
    return std::nullopt;
}

}  // namespace grotto::upoly
