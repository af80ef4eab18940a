#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "grotto/variety.hpp"

namespace grotto {

namespace {

constexpr std::array<unsigned, 64> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,  67,  71,  73,  79,
    83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

uint64_t prime_mask(const Int& c) {
    if (c.is_zero()) return ~uint64_t(0);
    if (c.is_small() && (c.small() == 1 || c.small() == -1)) return 0;
    uint64_t m = 0;
    for (size_t i = 0; i < kSmallPrimes.size(); ++i)
        if (c.mod_small(kSmallPrimes[i]) == 0) m |= uint64_t(1) << i;
    return m;
}

struct Val {
    upoly::UPoly v;
    uint64_t bad = 0;
};

upoly::UPoly q_power(unsigned k) {
    upoly::UPoly r(k + 1);
    r[k] = Int(1);
    return r;
}

// An equation together with its distinct irreducible factors; p is their product.
struct Entry {
    Poly p;
    std::vector<Poly> factors;
};

bool poly_less(const Poly& a, const Poly& b) { return Poly::compare(a, b) < 0; }

void sort_unique(std::vector<Poly>& v) {
    std::sort(v.begin(), v.end(), poly_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool contains(const std::vector<Poly>& sorted, const Poly& p) {
    return std::binary_search(sorted.begin(), sorted.end(), p, poly_less);
}

Poly product(const std::vector<Poly>& fs) {
    Poly r(1);
    for (const auto& f : fs) r = r * f;
    return r;
}

class Solver {
public:
    explicit Solver(const ClassConfig& cfg) : cfg_(cfg) {}

    Val solve(const std::vector<Poly>& F, const std::vector<Poly>& G, VarMask S, unsigned depth);

    ClassStats stats;

private:
    const Factorization& factored(const Poly& f) {
        auto it = fcache_.find(f);
        if (it != fcache_.end()) return it->second;
        return fcache_.emplace(f, factor(f, SplitConfig{cfg_.split_degree_bound})).first->second;
    }

    Val core(std::vector<Entry> F, std::vector<Poly> G, unsigned depth);
    Val rules(const std::vector<Entry>& F, const std::vector<Poly>& G, VarMask S, unsigned depth);
    bool is_unit(const Poly& u, const std::vector<Poly>& G);
    [[noreturn]] void unresolvable(const std::vector<Entry>& F, const std::vector<Poly>& G);

    ClassConfig cfg_;
    std::unordered_map<Poly, Factorization> fcache_;
    std::unordered_map<std::string, Val> memo_;
};

Val Solver::solve(const std::vector<Poly>& F, const std::vector<Poly>& G, VarMask S, unsigned depth) {
    if (depth > cfg_.max_depth)
        throw DepthExceeded("recursion depth exceeded " + std::to_string(cfg_.max_depth));
    ++stats.nodes;
    stats.max_depth = std::max<uint64_t>(stats.max_depth, depth);
    uint64_t bad = 0;

    std::vector<Poly> g2;
    for (const auto& g : G) {
        if (g.is_zero()) {
            ++stats.rule[1];
            return {{}, bad};
        }
        if (g.is_constant()) {
            bad |= prime_mask(g.constant_value());
            continue;
        }
        const auto& fz = factored(g);
        bad |= prime_mask(fz.unit);
        for (const auto& [f, m] : fz.factors) g2.push_back(f);
    }
    sort_unique(g2);

    std::vector<Entry> f2;
    for (const auto& f : F) {
        if (f.is_zero()) continue;
        if (f.is_constant()) {
            bad |= prime_mask(f.constant_value());
            ++stats.rule[1];
            return {{}, bad};
        }
        const auto& fz = factored(f);
        bad |= prime_mask(fz.unit);
        Entry e;
        bool power = false;
        for (const auto& [fac, m] : fz.factors) {
            if (m > 1) power = true;
            if (!contains(g2, fac)) e.factors.push_back(fac);
        }
        if (e.factors.empty()) {
            ++stats.rule[1];
            return {{}, bad};
        }
        if (power) ++stats.rule[4];
        e.p = e.factors.size() == 1 ? e.factors[0] : product(e.factors);
        f2.push_back(std::move(e));
    }
    std::sort(f2.begin(), f2.end(), [](const Entry& a, const Entry& b) { return poly_less(a.p, b.p); });
    f2.erase(std::unique(f2.begin(), f2.end(), [](const Entry& a, const Entry& b) { return a.p == b.p; }), f2.end());

    if (f2.empty() && g2.empty()) {
        ++stats.rule[2];
        return {q_power(__builtin_popcountll(S)), bad};
    }

    VarMask used = 0;
    for (const auto& e : f2) used |= e.p.var_mask();
    for (const auto& g : g2) used |= g.var_mask();
    if (used & ~S) throw std::logic_error("polynomial uses a variable outside S");
    unsigned free = __builtin_popcountll(S & ~used);
    if (free) ++stats.rule[3];

    Val r = core(std::move(f2), std::move(g2), depth);
    r.bad |= bad;
    if (free && !r.v.empty()) r.v = upoly::mul(r.v, q_power(free));
    return r;
}

// Splits into variable-disjoint components, canonicalizes variable names and
// consults the memo table before applying the rules.
Val Solver::core(std::vector<Entry> F, std::vector<Poly> G, unsigned depth) {
    // union-find over variables
    std::array<int, kMaxVars> parent;
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto join = [&](VarMask m) {
        if (!m) return;
        int a = find(__builtin_ctzll(m));
        for (m &= m - 1; m; m &= m - 1) parent[find(__builtin_ctzll(m))] = a;
    };
    for (const auto& e : F) join(e.p.var_mask());
    for (const auto& g : G) join(g.var_mask());
    VarMask first = 0;
    for (const auto& e : F) first |= e.p.var_mask();
    for (const auto& g : G) first |= g.var_mask();
    int root0 = find(__builtin_ctzll(first));
    bool split = false;
    for (VarMask m = first; m; m &= m - 1)
        if (find(__builtin_ctzll(m)) != root0) split = true;
    if (split) {
        ++stats.components;
        std::vector<int> roots;
        for (VarMask m = first; m; m &= m - 1) roots.push_back(find(__builtin_ctzll(m)));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        Val total{{Int(1)}, 0};
        for (int r : roots) {
            std::vector<Poly> cf, cg;
            VarMask cm = 0;
            for (const auto& e : F)
                if (find(__builtin_ctzll(e.p.var_mask())) == r) {
                    cf.push_back(e.p);
                    cm |= e.p.var_mask();
                }
            for (const auto& g : G)
                if (find(__builtin_ctzll(g.var_mask())) == r) {
                    cg.push_back(g);
                    cm |= g.var_mask();
                }
            Val part = solve(cf, cg, cm, depth + 1);
            total.bad |= part.bad;
            if (part.v.empty()) return {{}, total.bad};
            total.v = upoly::mul(total.v, part.v);
        }
        return total;
    }

    // canonical variable order by first occurrence, two refinement passes
    for (int pass = 0; pass < 2; ++pass) {
        std::array<int8_t, kMaxVars> to;
        to.fill(-1);
        int next = 0;
        auto scan = [&](const Poly& p) {
            for (const auto& t : p.terms())
                for (int i = 0; i < kMaxVars; ++i)
                    if (t.m.e[i] && to[i] < 0) to[i] = static_cast<int8_t>(next++);
        };
        for (const auto& e : F) scan(e.p);
        for (const auto& g : G) scan(g);
        bool identity = true;
        for (int i = 0; i < next && identity; ++i) identity = to[i] == i;
        if (identity && pass > 0) break;
        if (!identity) {
            for (auto& e : F) {
                e.p = e.p.rename(to);
                for (auto& f : e.factors) f = f.rename(to);
                std::sort(e.factors.begin(), e.factors.end(), poly_less);
            }
            for (auto& g : G) g = g.rename(to);
        }
        std::sort(F.begin(), F.end(), [](const Entry& a, const Entry& b) { return poly_less(a.p, b.p); });
        std::sort(G.begin(), G.end(), poly_less);
    }
    VarMask S = 0;
    for (const auto& e : F) S |= e.p.var_mask();
    for (const auto& g : G) S |= g.var_mask();

    std::string key;
    if (cfg_.memoize) {
        for (const auto& e : F) key += e.p.key() + '|';
        key += '#';
        for (const auto& g : G) key += g.key() + '|';
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            ++stats.memo_hits;
            return it->second;
        }
    }
    Val r = rules(F, G, S, depth);
    if (cfg_.memoize) {
        memo_.emplace(std::move(key), r);
        stats.memo_size = memo_.size();
    }
    return r;
}

bool Solver::is_unit(const Poly& u, const std::vector<Poly>& G) {
    if (u.is_zero()) return false;
    if (u.is_constant()) return true;
    const auto& fz = factored(u);
    for (const auto& [f, m] : fz.factors)
        if (!contains(G, f)) return false;
    return true;
}

void Solver::unresolvable(const std::vector<Entry>& F, const std::vector<Poly>& G) {
    std::ostringstream os;
    os << "no rule applies to a subproblem with " << F.size() << " equations and " << G.size()
       << " inequations";
    throw Unresolvable(os.str());
}

namespace {

std::vector<Poly> substituted(const std::vector<Poly>& ps, int x, const Poly& num, const Poly& den) {
    std::vector<Poly> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(p.substitute_cleared(x, num, den));
    return out;
}

std::vector<Poly> entry_polys(const std::vector<Entry>& F, size_t skip) {
    std::vector<Poly> out;
    for (size_t i = 0; i < F.size(); ++i)
        if (i != skip) out.push_back(F[i].p);
    return out;
}

void add(Val& acc, const Val& part, int sign) {
    acc.bad |= part.bad;
    acc.v = sign > 0 ? upoly::add(acc.v, part.v) : upoly::sub(acc.v, part.v);
}

}  // namespace

Val Solver::rules(const std::vector<Entry>& F, const std::vector<Poly>& G, VarMask S, unsigned depth) {
    const unsigned d1 = depth + 1;
    const size_t none = F.size();

    // Linear elimination x = -v/u where u is a unit on X: a single branch.
    // This is rule 7 with the u = 0 branch known to be empty.
    {
        size_t best_e = none;
        int best_x = -1;
        std::tuple<int, size_t, size_t> best_score{};
        for (size_t i = 0; i < F.size(); ++i) {
            if (F[i].factors.size() != 1) continue;
            const Poly& f = F[i].p;
            for (VarMask m = f.var_mask(); m; m &= m - 1) {
                int x = __builtin_ctzll(m);
                if (f.degree(x) != 1) continue;
                auto cs = f.coeffs_in(x);
                bool constant = cs[1].is_constant();
                if (!constant && !is_unit(cs[1], G)) continue;
                int cost = 0;
                for (size_t j = 0; j < F.size(); ++j)
                    if (j != i) cost += F[j].p.degree(x);
                for (const auto& g : G) cost += g.degree(x);
                std::tuple<int, size_t, size_t> score{(constant ? 0 : 1000) + cost, cs[1].size(), cs[0].size()};
                if (best_e == none || score < best_score) {
                    best_e = i;
                    best_x = x;
                    best_score = score;
                }
            }
        }
        if (best_e != none) {
            ++stats.rule[7];
            auto cs = F[best_e].p.coeffs_in(best_x);
            Poly num = -cs[0], den = cs[1];
            auto F2 = substituted(entry_polys(F, best_e), best_x, num, den);
            auto G2 = substituted(G, best_x, num, den);
            if (!den.is_constant()) G2.push_back(den);
            Val r = solve(F2, G2, S & ~(VarMask(1) << best_x), d1);
            if (den.is_constant()) r.bad |= prime_mask(den.constant_value());
            return r;
        }
    }

    // Rule 5: univariate equation with rational roots.
    for (size_t i = 0; i < F.size(); ++i) {
        const Poly& f = F[i].p;
        if (__builtin_popcountll(f.var_mask()) != 1) continue;
        bool linear = std::all_of(F[i].factors.begin(), F[i].factors.end(),
                                  [](const Poly& p) { return p.total_degree() == 1; });
        if (!linear) continue;
        ++stats.rule[5];
        int x = f.single_var();
        auto rest = entry_polys(F, i);
        Val acc;
        for (const auto& fac : F[i].factors) {
            auto cs = fac.coeffs_in(x);
            Poly num = -cs[0], den = cs[1];
            Val part = solve(substituted(rest, x, num, den), substituted(G, x, num, den), S & ~(VarMask(1) << x), d1);
            part.bad |= prime_mask(den.constant_value());
            add(acc, part, 1);
        }
        // distinct roots must stay distinct modulo good primes
        for (size_t a = 0; a < F[i].factors.size(); ++a)
            for (size_t b = a + 1; b < F[i].factors.size(); ++b) {
                auto ca = F[i].factors[a].coeffs_in(x), cb = F[i].factors[b].coeffs_in(x);
                Int det = ca[0].constant_value() * cb[1].constant_value() - cb[0].constant_value() * ca[1].constant_value();
                acc.bad |= prime_mask(det);
            }
        return acc;
    }

    auto quadratic = [&](size_t i, int x) -> std::optional<Val> {
        const Poly& f = F[i].p;
        auto cs = f.coeffs_in(x);
        const Poly &w = cs[0], &v = cs[1], &u = cs[2];
        Poly disc = v * v - Poly(4) * u * w;
        std::optional<Poly> h;
        if (disc.is_zero()) h = Poly();
        else h = perfect_square_root(disc);
        if (!h) return std::nullopt;
        ++stats.rule[8];
        auto rest = entry_polys(F, i);
        Poly two_u = u.scale(Int(2));
        Val acc;
        acc.bad |= prime_mask(Int(2));
        // u = 0
        {
            auto F1 = rest;
            F1.push_back(u);
            F1.push_back(v * Poly::var(x) + w);
            add(acc, solve(F1, G, S, d1), 1);
        }
        const VarMask Sx = S & ~(VarMask(1) << x);
        // u != 0, D = 0: double root
        {
            auto F2 = substituted(rest, x, -v, two_u);
            F2.push_back(*h);
            auto G2 = substituted(G, x, -v, two_u);
            G2.push_back(u);
            add(acc, solve(F2, G2, Sx, d1), 1);
        }
        if (!h->is_zero()) {
            for (int s : {1, -1}) {
                Poly num = s > 0 ? -v + *h : -v - *h;
                auto F3 = substituted(rest, x, num, two_u);
                auto G3 = substituted(G, x, num, two_u);
                G3.push_back(u);
                G3.push_back(*h);
                add(acc, solve(F3, G3, Sx, d1), 1);
            }
        }
        return acc;
    };

    if (cfg_.quadratic_first) {
        for (size_t i = 0; i < F.size(); ++i)
            for (VarMask m = F[i].p.var_mask(); m; m &= m - 1) {
                int x = __builtin_ctzll(m);
                if (F[i].p.degree(x) != 2) continue;
                if (auto r = quadratic(i, x)) return *r;
            }
    }

    // Rule 6: product split.
    for (size_t i = 0; i < F.size(); ++i) {
        if (F[i].factors.size() < 2) continue;
        ++stats.rule[6];
        auto rest = entry_polys(F, i);
        Val acc;
        auto G2 = G;
        for (const auto& fac : F[i].factors) {
            auto F2 = rest;
            F2.push_back(fac);
            add(acc, solve(F2, G2, S, d1), 1);
            G2.push_back(fac);
        }
        return acc;
    }

    // Rule 7: f = x u + v with u not known to be a unit.
    {
        size_t best_e = none;
        int best_x = -1;
        std::tuple<int, size_t, size_t> best_score{};
        for (size_t i = 0; i < F.size(); ++i) {
            const Poly& f = F[i].p;
            for (VarMask m = f.var_mask(); m; m &= m - 1) {
                int x = __builtin_ctzll(m);
                if (f.degree(x) != 1) continue;
                auto cs = f.coeffs_in(x);
                int cost = 0;
                for (size_t j = 0; j < F.size(); ++j)
                    if (j != i) cost += F[j].p.degree(x);
                for (const auto& g : G) cost += g.degree(x);
                std::tuple<int, size_t, size_t> score{static_cast<int>(cs[1].total_degree()) * 8 + cost, cs[1].size(),
                                                      cs[0].size()};
                if (best_e == none || score < best_score) {
                    best_e = i;
                    best_x = x;
                    best_score = score;
                }
            }
        }
        if (best_e != none) {
            ++stats.rule[7];
            auto cs = F[best_e].p.coeffs_in(best_x);
            const Poly &v = cs[0], &u = cs[1];
            auto rest = entry_polys(F, best_e);
            Val acc;
            {
                auto F1 = rest;
                F1.push_back(u);
                F1.push_back(v);
                add(acc, solve(F1, G, S, d1), 1);
            }
            {
                auto F2 = substituted(rest, best_x, -v, u);
                auto G2 = substituted(G, best_x, -v, u);
                G2.push_back(u);
                add(acc, solve(F2, G2, S & ~(VarMask(1) << best_x), d1), 1);
            }
            return acc;
        }
    }

    // Rule 8: quadratic with square discriminant.
    for (size_t i = 0; i < F.size(); ++i)
        for (VarMask m = F[i].p.var_mask(); m; m &= m - 1) {
            int x = __builtin_ctzll(m);
            if (F[i].p.degree(x) != 2) continue;
            if (auto r = quadratic(i, x)) return *r;
        }

    // Rule 9: [X] = [X without g] - [X with g moved to the equations].
    if (!G.empty()) {
        size_t best = 0;
        std::tuple<int, uint32_t, size_t> best_score{};
        for (size_t j = 0; j < G.size(); ++j) {
            const Poly& g = G[j];
            int linear_unit = 2;
            for (VarMask m = g.var_mask(); m; m &= m - 1) {
                int x = __builtin_ctzll(m);
                if (g.degree(x) != 1) continue;
                auto cs = g.coeffs_in(x);
                if (cs[1].is_constant()) linear_unit = 0;
                else linear_unit = std::min(linear_unit, 1);
            }
            std::tuple<int, uint32_t, size_t> score{linear_unit, g.total_degree(), g.size()};
            if (j == 0 || score < best_score) {
                best = j;
                best_score = score;
            }
        }
        ++stats.rule[9];
        auto G2 = G;
        G2.erase(G2.begin() + best);
        auto Fp = entry_polys(F, none);
        Val acc = solve(Fp, G2, S, d1);
        auto F2 = Fp;
        F2.push_back(G[best]);
        add(acc, solve(F2, G2, S, d1), -1);
        return acc;
    }

    unresolvable(F, G);
}

}  // namespace

bool ClassResult::good_reduction(unsigned p) const {
    return std::find(bad_primes.begin(), bad_primes.end(), p) == bad_primes.end();
}

ClassResult class_of(const ConstraintVariety& X0, const ClassConfig& config) {
    ConstraintVariety X = X0;
    X.normalize();
    if (X.vars.size() > static_cast<size_t>(kMaxVars))
        throw std::length_error("class_of supports at most " + std::to_string(kMaxVars) + " variables");
    std::vector<Poly> F, G;
    for (const auto& f : X.eqs) F.push_back(f.engine_in(X.vars));
    for (const auto& g : X.neqs) G.push_back(g.engine_in(X.vars));
    VarMask S = X.vars.empty() ? 0 : (X.vars.size() == 64 ? ~VarMask(0) : (VarMask(1) << X.vars.size()) - 1);
    Solver solver(config);
    Val v = solver.solve(F, G, S, 0);
    ClassResult r;
    r.value = ClassPoly(v.v);
    r.stats = solver.stats;
    for (size_t i = 0; i < kSmallPrimes.size(); ++i)
        if (v.bad >> i & 1) r.bad_primes.push_back(kSmallPrimes[i]);
    return r;
}

std::tuple<ClassPoly, ClassPoly, ClassPoly> stratify_check(const ConstraintVariety& X, const MultiPoly& h,
                                                           const ClassConfig& config) {
    ClassPoly zero = class_of(X.with_eq(h), config).value;
    ClassPoly nonzero = class_of(X.with_neq(h), config).value;
    ClassPoly all = class_of(X, config).value;
    return {zero, nonzero, all};
}

}  // namespace grotto
