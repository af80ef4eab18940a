#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "grotto/tqft.hpp"
#include "grotto/verify.hpp"

using namespace grotto;

namespace {

ClassPoly C(const std::string& s) { return ClassPoly::parse(s); }
const GroupSpec U2 = GroupSpec::get(GroupId::U2), U3 = GroupSpec::get(GroupId::U3), U4 = GroupSpec::get(GroupId::U4);

std::string golden(const std::string& name) {
    std::ifstream in(default_golden_dir() + "/" + name);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Rational R(long a, long b = 1) { return Rational(a, b); }
Rational Z(long long n) { return Rational(static_cast<long>(n)); }

// ---------------------------------------------------------------------------
// Finite-field oracle: upper triangular N x N matrices over F_p, entries stored row-major.

template <int N>
using Mat = std::array<int, N * N>;

template <int N>
Mat<N> mul(const Mat<N>& a, const Mat<N>& b, int p) {
    Mat<N> c{};
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            int s = 0;
            for (int k = i; k <= j; ++k) s += a[i * N + k] * b[k * N + j];
            c[i * N + j] = s % p;
        }
    return c;
}

int inv_mod(int x, int p) {
    for (int y = 1; y < p; ++y)
        if (x * y % p == 1) return y;
    return 0;
}

template <int N>
Mat<N> inverse(const Mat<N>& a, int p) {
    Mat<N> r{};
    for (int i = 0; i < N; ++i) r[i * N + i] = inv_mod(a[i * N + i], p);
    for (int d = 1; d < N; ++d)
        for (int i = 0; i + d < N; ++i) {
            int j = i + d, s = 0;
            for (int k = i + 1; k <= j; ++k) s += a[i * N + k] * r[k * N + j];
            s %= p;
            r[i * N + j] = (p - s) * r[i * N + i] % p;
        }
    return r;
}

// All invertible upper triangular matrices; with top_one the (0,0) entry is fixed to 1.
template <int N>
std::vector<Mat<N>> elements(int p, bool top_one) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) slots.push_back({i, j});
    std::vector<Mat<N>> out;
    std::vector<int> idx(slots.size(), 0);
    for (;;) {
        Mat<N> m{};
        bool ok = true;
        for (size_t s = 0; s < slots.size(); ++s) {
            auto [i, j] = slots[s];
            m[i * N + j] = idx[s];
            if (i == j && (idx[s] == 0 || (top_one && i == 0 && idx[s] != 1))) ok = false;
        }
        if (ok) out.push_back(m);
        size_t t = 0;
        while (t < idx.size() && ++idx[t] == p) idx[t++] = 0;
        if (t == idx.size()) break;
    }
    return out;
}

long long group_order(int n, long long p) {
    long long r = 1;
    for (int i = 0; i < n * (n - 1) / 2; ++i) r *= p;
    for (int i = 0; i < n; ++i) r *= p - 1;
    return r;
}

// Unipotent strata, written out from the defining equations.
int u3_stratum(const Mat<3>& c) {
    int a01 = c[1], a02 = c[2], a12 = c[5];
    if (!a01 && !a12) return a02 ? 5 : 1;
    if (a01 && a12) return 2;
    return a01 ? 3 : 4;
}

int u4_stratum(const Mat<4>& c, int p) {
    int a01 = c[1], a02 = c[2], a03 = c[3], a12 = c[6], a13 = c[7], a23 = c[11];
    int m5 = ((a03 * a12 - a02 * a13) % p + p) % p, m10 = (a02 * a23 + a01 * a13) % p;
    std::vector<int> hits;
    auto T = [&](int k, bool b) {
        if (b) hits.push_back(k);
    };
    T(1, !a01 && !a02 && !a03 && !a12 && !a13 && !a23);
    T(2, !a12 && !a13 && !a23 && a01);
    T(3, !a01 && !a12 && !a13 && !a23 && a02);
    T(4, !a01 && !a02 && !a12 && !a13 && !a23 && a03);
    T(5, !a01 && !a23 && !m5 && a12);
    T(6, !a01 && !a02 && !a12 && !a23 && a13);
    T(7, !a01 && !a02 && !a12 && a23);
    T(8, !a23 && a01 && a12);
    T(9, !a12 && !a23 && a01 && a13);
    T(10, !a12 && !m10 && a01 && a23);
    T(11, !a01 && !a12 && !a23 && a02 && a13);
    T(12, !a01 && !a12 && a02 && a23);
    T(13, !a01 && a12 && a23);
    T(14, !a01 && !a23 && a12 && m5);
    T(15, a01 && a12 && a23);
    T(16, !a12 && a01 && a23 && m10);
    return hits.size() == 1 ? hits[0] : -1;
}

// Number of pairs (g1, g2) with [g1, g2] in each stratum, times |G| for the source element.
template <int N>
std::vector<long long> brute_first_column(int p, const std::function<int(const Mat<N>&)>& stratum, int d) {
    auto E = elements<N>(p, true);
    std::vector<Mat<N>> I;
    for (const auto& e : E) I.push_back(inverse<N>(e, p));
    std::vector<long long> cnt(d + 1, 0);
    for (size_t a = 0; a < E.size(); ++a)
        for (size_t b = 0; b < E.size(); ++b) {
            Mat<N> c = mul<N>(mul<N>(E[a], E[b], p), mul<N>(I[a], I[b], p), p);
            int s = stratum(c);
            cnt[s < 0 ? 0 : s]++;
        }
    std::vector<long long> out;
    long long scale = static_cast<long long>(p - 1) * (p - 1) * group_order(N, p);
    for (int i = 1; i <= d; ++i) out.push_back(cnt[i] * scale);
    out.push_back(cnt[0]);  // commutators hitting no stratum, or several
    return out;
}

// ---------------------------------------------------------------------------
// 2x2 oracle for closed surfaces and parabolic punctures.

using M2 = std::array<int, 3>;  // a, b, c of [[a, b], [0, c]]

M2 mul2(const M2& x, const M2& y, int p) { return {x[0] * y[0] % p, (x[0] * y[1] + x[1] * y[2]) % p, x[2] * y[2] % p}; }
M2 inv2(const M2& x, int p) {
    int ai = inv_mod(x[0], p), ci = inv_mod(x[2], p);
    return {ai, (p - x[1] * ai % p * ci % p) % p, ci};
}
M2 comm2(const M2& x, const M2& y, int p) { return mul2(mul2(x, y, p), mul2(inv2(x, p), inv2(y, p), p), p); }

std::vector<M2> u2_elements(int p) {
    std::vector<M2> out;
    for (int a = 1; a < p; ++a)
        for (int b = 0; b < p; ++b)
            for (int c = 1; c < p; ++c) out.push_back({a, b, c});
    return out;
}

int residue(const Rational& r, int p) {
    long long n = r.get_num().get_si() % p, d = r.get_den().get_si() % p;
    return static_cast<int>((n + p) % p * inv_mod(static_cast<int>((d + p) % p), p) % p);
}

// Points over F_p of the genus-g surface variety with the given punctures.
long long brute_parabolic(int p, unsigned g, const std::vector<Rational>& J,
                          const std::vector<std::pair<Rational, Rational>>& M) {
    auto U = u2_elements(p);
    std::vector<std::vector<M2>> labels;
    for (const auto& l : J) {
        int x = residue(l, p);
        std::vector<M2> s;
        for (int b = 1; b < p; ++b) s.push_back({x, b, x});
        labels.push_back(s);
    }
    for (const auto& [m, s] : M) {
        int x = residue(m, p), y = residue(s, p);
        std::vector<M2> v;
        for (int b = 0; b < p; ++b) v.push_back({x, b, y});
        labels.push_back(v);
    }
    // Distribution of products over the punctures.
    std::map<M2, long long> punct{{M2{1, 0, 1}, 1}};
    for (const auto& set : labels) {
        std::map<M2, long long> next;
        for (const auto& [m, n] : punct)
            for (const auto& x : set) next[mul2(m, x, p)] += n;
        punct = next;
    }
    std::map<M2, long long> handles{{M2{1, 0, 1}, 1}};
    std::map<M2, long long> one;
    for (const auto& a : U)
        for (const auto& b : U) one[comm2(a, b, p)]++;
    for (unsigned i = 0; i < g; ++i) {
        std::map<M2, long long> next;
        for (const auto& [m, n] : handles)
            for (const auto& [c, k] : one) next[mul2(m, c, p)] += n * k;
        handles = next;
    }
    long long total = 0;
    for (const auto& [h, n] : handles) {
        auto it = punct.find(inv2(h, p));
        if (it != punct.end()) total += n * it->second;
    }
    return total;
}

Rational at(const ClassPoly& c, long long p) { return c.evaluate(Z(p)); }

}  // namespace

TEST_CASE("u2 and u3 matrices match the golden files") {
    CHECK(z_pi_L(U2).golden() == golden("u2_zpi.txt"));
    CHECK(eta(U2).golden() == golden("u2_eta.txt"));
    CHECK(reduced_L(U2).golden() == golden("u2_ztilde.txt"));
    CHECK(z_pi_L(U3).golden() == golden("u3_zpi.txt"));
    CHECK(eta(U3).golden() == golden("u3_eta.txt"));
    CHECK(reduced_L(U3).golden() == golden("u3_ztilde.txt"));
    FTensor F = f_tensor(U3);
    for (int j = 1; j < 5; ++j) CHECK(F.golden_slice(j) == golden("u3_f" + std::to_string(j + 1) + ".txt"));
}

TEST_CASE("u4 regression goldens") {
    CHECK(first_column(U4).golden() == golden("u4_first_column.txt"));
    CHECK(eta(U4).golden() == golden("u4_eta.txt"));
    CHECK(reduced_L(U4).golden() == golden("u4_ztilde.txt"));
}

TEST_CASE("golden text round-trips") {
    for (const auto* G : {&U2, &U3, &U4}) {
        TqftMatrix Z = reduced_L(*G);
        CHECK(TqftMatrix::parse_golden(Z.golden()) == Z);
        TqftMatrix E = eta(*G);
        CHECK(TqftMatrix::parse_golden(E.golden()) == E);
    }
    TqftVector v = first_column(U3);
    CHECK(TqftVector::parse_golden(v.golden()) == v);
    CHECK_THROWS_AS(TqftMatrix::parse_golden("u3:C1 u3:C1\n"), ParseError);
    CHECK_THROWS_AS(TqftVector::parse_golden("u3:C1 q^2 extra\n"), ParseError);
}

TEST_CASE("u3 first column and F tensor entries") {
    TqftVector col = first_column(U3);
    TqftMatrix Z = z_pi_L(U3);
    for (int i = 0; i < 5; ++i) CHECK(ClassExpr(col.entries[i]) == Z.at(i, 0));
    CHECK(col.entries[0] == C("q^6*(q-1)^7*(q^2+q-1)"));
    FTensor F = f_tensor(U3);
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 5; ++k) CHECK(F.at(i, 0, k) == ClassPoly(i == k ? 1 : 0));
    CHECK(F.at(1, 1, 0) == C("q*(q-1)^2"));
    CHECK(F.at(0, 4, 4) == C("1"));
    CHECK_THROWS_AS(f_tensor(U2), std::invalid_argument);
}

TEST_CASE("column sums are conserved") {
    for (const auto* G : {&U2, &U3, &U4}) {
        TqftMatrix Z = z_pi_L(*G);
        ClassPoly G3 = G->group_class().pow(3);
        const auto& st = strata(*G);
        for (int j = 0; j < Z.dim(); ++j) {
            ClassExpr s;
            for (int i = 0; i < Z.dim(); ++i) s += Z.at(i, j);
            INFO(st[j].label);
            CHECK(s == ClassExpr(st[j].stratum_class * G3));
        }
    }
}

TEST_CASE("unipotent transfer matrices are symmetric") {
    CHECK(z_pi_L(U3).is_symmetric());
    CHECK(z_pi_L(U4).is_symmetric());
    CHECK_FALSE(reduced_L(U3).is_symmetric());
}

TEST_CASE("results do not depend on the thread count") {
    TqftOptions one, four;
    one.threads = 1;
    four.threads = 4;
    one.cache = four.cache = false;
    CHECK(first_column(U3, one) == first_column(U3, four));
    CHECK(f_tensor(U3, one).v == f_tensor(U3, four).v);
    CHECK(z_pi_L(U2, one) == z_pi_L(U2, four));
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("matrix powers") {
    TqftMatrix Z = reduced_L(U2);
    CHECK(matrix_power(Z, 0) == TqftMatrix::identity(Z.basis()));
    CHECK(matrix_power(Z, 1) == Z);
    CHECK(matrix_power(Z, 2) == Z * Z);
    CHECK(matrix_power(Z, 5) == Z * Z * Z * Z * Z);
    CHECK(matrix_power(Z, 2).at(0, 0) == ClassExpr(C("q^5*(q-1)^8*(q-1)*((q-1)^3+1)")));
    TqftMatrix Y = reduced_L(U3);
    CHECK(matrix_power(Y, 3) == Y * (Y * Y));
}

TEST_CASE("representation variety classes") {
    for (unsigned g = 1; g <= 4; ++g) CHECK(rep_variety_class(U2, g) == closed_form(U2, g));
    CHECK(rep_variety_class(U2, 1) == C("q^2*(q-1)^3"));
    CHECK(rep_variety_class(U2, 2) == C("q^4*(q-1)^5*(q^2-3*q+3)"));
    for (unsigned g = 1; g <= 5; ++g) CHECK(rep_variety_class(U3, g) == closed_form_from_eigendata(U3, g));
    CHECK(rep_variety_class(U3, 1) == C("q^3*(q-1)^4*(q^2+q-1)"));
    CHECK(rep_variety_class(U3, 2) == C("q^7*(q-1)^6*(q^8-6*q^7+15*q^6-18*q^5+9*q^4+q^3-3*q^2+3*q-1)"));
    CHECK(rep_variety_class(U4, 1) == C("q^7*(q-1)^5*(q^2+3*q-2)"));
    CHECK_THROWS_AS(rep_variety_class(U2, 0), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_from_eigendata(U4, 1), std::invalid_argument);

    // Genus one is the commuting variety.
    for (const auto* G : {&U2, &U3, &U4})
        CHECK(ClassExpr(rep_variety_class(*G, 1)) == ClassExpr(first_column(*G).entries[0]) / G->group_class());
}

TEST_CASE("u2 closed surfaces agree with point counts") {
    for (auto [p, g] : std::vector<std::pair<int, unsigned>>{{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 2}}) {
        INFO("p=", p, " g=", g);
        CHECK(at(rep_variety_class(U2, g), p) == Z(brute_parabolic(p, g, {}, {})));
    }
}

TEST_CASE("first columns agree with point counts") {
    for (int p : {2, 3, 5}) {
        auto cnt = brute_first_column<3>(p, u3_stratum, 5);
        auto col = first_column(U3);
        CHECK(cnt.back() == 0);
        for (int i = 0; i < 5; ++i) {
            INFO("u3 p=", p, " C", i + 1);
            CHECK(at(col.entries[i], p) == Z(cnt[i]));
        }
    }
    auto col = first_column(U4);
    for (int p : {2, 3}) {
        auto cnt = brute_first_column<4>(p, [p](const Mat<4>& c) { return u4_stratum(c, p); }, 16);
        CHECK(cnt.back() == 0);
        for (int i = 0; i < 16; ++i) {
            INFO("u4 p=", p, " C", i + 1);
            CHECK(at(col.entries[i], p) == Z(cnt[i]));
        }
    }
}

TEST_CASE("u4 first column against the printed vector") {
    // The printed vector disagrees with the computed one (and with point counts at p = 3) in
    // these entries; every difference is a multiple of (q-2)^2.
    const std::vector<std::string> differ = {"u4:C1", "u4:C3", "u4:C4", "u4:C6", "u4:C7", "u4:C11", "u4:C12"};
    TqftVector col = first_column(U4);
    TqftVector printed = TqftVector::parse_golden(golden("u4_first_column_printed.txt"));
    REQUIRE(printed.basis == col.basis);
    for (size_t i = 0; i < 16; ++i) {
        INFO(col.basis[i]);
        bool expect_diff = std::count(differ.begin(), differ.end(), col.basis[i]) > 0;
        CHECK((col.entries[i] != printed.entries[i]) == expect_diff);
        CHECK(at(col.entries[i], 2) == at(printed.entries[i], 2));
        ClassExpr d = ClassExpr(col.entries[i] - printed.entries[i]) / ClassExpr(C("(q-2)^2"));
        CHECK(d.is_polynomial());
    }
}

TEST_CASE("diagonalization data") {
    CHECK(diag_check(U2));
    CHECK(diag_check(U3));
    DiagData d = reference_diag_data(U3);
    CHECK(d.A * d.A_inv == TqftMatrix::identity(d.A.basis()));

    DiagData swapped = d;
    std::swap(swapped.D.at(1, 1), swapped.D.at(2, 2));
    CHECK_FALSE(diag_check(reduced_L(U3), swapped));
    DiagData bad_inv = d;
    bad_inv.A_inv.at(0, 0) = bad_inv.A_inv.at(0, 0) + ClassExpr(1);
    CHECK_FALSE(diag_check(reduced_L(U3), bad_inv));
    CHECK_THROWS_AS(reference_diag_data(U4), std::invalid_argument);
}

TEST_CASE("localization") {
    for (const auto* G : {&U2, &U3, &U4}) {
        TqftMatrix Z = reduced_L(*G);
        for (int i = 0; i < Z.dim(); ++i)
            for (int j = 0; j < Z.dim(); ++j) CHECK(Z.at(i, j).is_localized());
    }
    TqftMatrix m = TqftMatrix::identity({"x", "y"});
    m.at(0, 1) = ClassExpr(1) / ClassExpr(C("q-2"));
    CHECK_THROWS_AS(m.require_localized("test"), NotLocalized);
    CHECK_THROWS_AS(matrix_power(m, 2), NotLocalized);
    ParabolicState s = ParabolicState::delta({U2Kind::S, 1, 0});
    CHECK_THROWS_AS(s.add({U2Kind::J, 1, 0}, ClassExpr(1) / ClassExpr(C("q+1"))), NotLocalized);
}

TEST_CASE("parabolic examples") {
    CHECK(u2_parabolic_class(1, {R(-1), R(-1)}, {}) == C("q^2*(q-1)^3*(q^2-3*q+3)"));
    CHECK(u2_parabolic_class(1, {}, {{R(2), R(3)}, {R(1, 2), R(1, 3)}}) == C("q^3*(q-1)^4"));
    CHECK(u2_parabolic_class(1, {R(2)}, {}).is_zero());
    CHECK(u2_parabolic_class(2, {}, {{R(2), R(3)}}).is_zero());
    for (unsigned g = 1; g <= 3; ++g) CHECK(u2_parabolic_class(g, {}, {}) == rep_variety_class(U2, g));
    CHECK_THROWS_AS(u2_parabolic_class(0, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(u2_parabolic_class(1, {R(0)}, {}), std::invalid_argument);
    CHECK_THROWS_AS(u2_parabolic_class(1, {}, {{R(2), R(2)}}), std::invalid_argument);
}

TEST_CASE("parabolic grid against the closed formula") {
    const std::vector<std::vector<Rational>> J = {{}, {R(1)}, {R(-1)}, {R(2)}, {R(2), R(1, 2)}, {R(-1), R(-1)},
                                                  {R(3), R(5)}, {R(1, 3), R(3), R(-1)}};
    using MT = std::vector<std::pair<Rational, Rational>>;
    const std::vector<MT> M = {{},
                               {{R(2), R(3)}},
                               {{R(2), R(3)}, {R(1, 2), R(1, 3)}},
                               {{R(1, 4), R(1, 6)}, {R(2), R(3)}},
                               {{R(-1), R(2)}, {R(-1), R(1, 2)}},
                               {{R(1, 5), R(1, 3)}, {R(1, 3), R(1, 5)}}};
    for (unsigned g = 1; g <= 3; ++g)
        for (const auto& j : J)
            for (const auto& m : M) {
                INFO("g=", g, " k=", j.size(), " l=", m.size());
                CHECK(u2_parabolic_class(g, j, m) == u2_parabolic_formula(g, j, m));
            }
}

TEST_CASE("parabolic classes ignore puncture order and depend on products only") {
    std::mt19937 rng(11);
    const std::vector<Rational> pool = {R(2), R(1, 2), R(-1), R(3), R(1, 3), R(-2, 3), R(5, 7)};
    for (int t = 0; t < 40; ++t) {
        std::vector<Rational> j;
        std::vector<std::pair<Rational, Rational>> m;
        for (unsigned i = 0, k = rng() % 4; i < k; ++i) j.push_back(pool[rng() % pool.size()]);
        for (unsigned i = 0, l = rng() % 3; i < l; ++i) {
            Rational a = pool[rng() % pool.size()], b = pool[rng() % pool.size()];
            if (a == b) b = -b;
            m.push_back({a, b});
        }
        unsigned g = 1 + rng() % 2;
        ClassPoly base = u2_parabolic_class(g, j, m);
        auto j2 = j;
        auto m2 = m;
        std::shuffle(j2.begin(), j2.end(), rng);
        std::shuffle(m2.begin(), m2.end(), rng);
        CHECK(u2_parabolic_class(g, j2, m2) == base);
        if (j.size() >= 2) {
            // Moving a factor between two Jordan tags keeps the product.
            j2 = j;
            j2[0] *= R(3);
            j2[1] /= R(3);
            if (j2[0] != 0 && j2[1] != 0) CHECK(u2_parabolic_class(g, j2, m) == base);
        }
    }
}

TEST_CASE("parabolic classes agree with point counts") {
    using MT = std::vector<std::pair<Rational, Rational>>;
    const std::vector<std::pair<std::vector<Rational>, MT>> cases = {
        {{R(2), R(1, 2)}, {}},
        {{R(-1)}, {}},
        {{R(3)}, {}},
        {{}, {{R(2), R(3)}, {R(1, 2), R(1, 3)}}},
        {{R(2)}, {{R(1, 4), R(1, 6)}, {R(2), R(3)}}},
        {{}, {{R(2), R(3)}}},
    };
    for (int p : {7, 11})
        for (const auto& [j, m] : cases) {
            INFO("p=", p, " k=", j.size(), " l=", m.size());
            CHECK(at(u2_parabolic_class(1, j, m), p) == Z(brute_parabolic(p, 1, j, m)));
        }
    CHECK(at(u2_parabolic_class(2, {R(-1), R(-1)}, {}), 5) == Z(brute_parabolic(5, 2, {R(-1), R(-1)}, {})));
}

TEST_CASE("parabolic state operations") {
    ParabolicLabel s1{U2Kind::S, 1, 0}, j2{U2Kind::J, 2, 0};
    ParabolicState s = ParabolicState::delta(s1);
    CHECK(s.coeff(s1) == ClassExpr(1));
    s = u2_parabolic_apply(s, Puncture{U2Kind::J, 2, 0});
    CHECK(s.coeff(j2) == ClassExpr(C("q*(q-1)^3")));
    CHECK(s.coeff(s1).is_zero());
    s = u2_parabolic_apply(s, Puncture{U2Kind::M, R(1, 2), 3});
    ParabolicLabel m{U2Kind::M, 1, 6};
    CHECK(s.coeff(m) == ClassExpr(C("q^3*(q-1)^5")));
    CHECK(s.str() == "(q^3*(q-1)^5)*M[1,6]");
    CHECK(parse_rational("-3/6") == R(-1, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
}
