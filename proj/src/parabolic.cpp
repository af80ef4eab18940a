#include <mutex>
#include <sstream>

#include "grotto/tqft.hpp"

namespace grotto {

namespace {

ClassPoly P(const char* s) { return ClassPoly::parse(s); }

std::string tag(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

void check_tags(U2Kind kind, const Rational& a, const Rational& b) {
    if (a == 0) throw std::invalid_argument("eigenvalue tags must be nonzero");
    if (kind == U2Kind::M && (b == 0 || a == b))
        throw std::invalid_argument("M labels need two distinct nonzero eigenvalues");
}

ParabolicLabel S(const Rational& a) { return {U2Kind::S, a, 0}; }
ParabolicLabel J(const Rational& a) { return {U2Kind::J, a, 0}; }
ParabolicLabel M(const Rational& a, const Rational& b) { return {U2Kind::M, a, b}; }

// Blocks of the reduced genus handle, read off the computed U2 matrix on the lambda = 1 fiber.
struct HandleBlocks {
    ClassExpr ss, js, sj, jj, mm;
};

const HandleBlocks& handle_blocks() {
    static std::once_flag once;
    static HandleBlocks h;
    std::call_once(once, [] {
        TqftMatrix Z = reduced_L(GroupSpec::get(GroupId::U2));
        h = {Z.at(0, 0), Z.at(1, 0), Z.at(0, 1), Z.at(1, 1), Z.at(2, 2)};
    });
    return h;
}

}  // namespace

std::string ParabolicLabel::str() const {
    switch (kind) {
        case U2Kind::S: return "S[" + tag(a) + "]";
        case U2Kind::J: return "J[" + tag(a) + "]";
        case U2Kind::M: return "M[" + tag(a) + "," + tag(b) + "]";
    }
    return "?";
}

bool operator<(const ParabolicLabel& x, const ParabolicLabel& y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
}

ParabolicState ParabolicState::delta(const ParabolicLabel& l) {
    check_tags(l.kind, l.a, l.b);
    ParabolicState s;
    s.t_[l] = 1;
    return s;
}

ClassExpr ParabolicState::coeff(const ParabolicLabel& l) const {
    auto it = t_.find(l);
    return it == t_.end() ? ClassExpr(0) : it->second;
}

void ParabolicState::add(const ParabolicLabel& l, const ClassExpr& c) {
    if (c.is_zero()) return;
    check_tags(l.kind, l.a, l.b);
    if (!c.is_localized()) throw NotLocalized("parabolic coefficient " + c.str() + " leaves the localized ring");
    ClassExpr v = coeff(l) + c;
    if (v.is_zero())
        t_.erase(l);
    else
        t_[l] = v;
}

std::string ParabolicState::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [l, c] : t_) {
        os << (first ? "" : " + ") << "(" << c.factored() << ")*" << l.str();
        first = false;
    }
    return first ? "0" : os.str();
}

ParabolicState u2_parabolic_apply(const ParabolicState& s, const ParabolicStep& step) {
    ParabolicState r;
    if (std::holds_alternative<GenusHandle>(step)) {
        const auto& h = handle_blocks();
        for (const auto& [l, c] : s.terms()) {
            switch (l.kind) {
                case U2Kind::S:
                    r.add(S(l.a), c * h.ss);
                    r.add(J(l.a), c * h.js);
                    break;
                case U2Kind::J:
                    r.add(S(l.a), c * h.sj);
                    r.add(J(l.a), c * h.jj);
                    break;
                case U2Kind::M: r.add(l, c * h.mm); break;
            }
        }
        return r;
    }
    const auto& p = std::get<Puncture>(step);
    check_tags(p.kind, p.a, p.b);
    const ClassExpr f = P("q*(q-1)^2"), q = ClassPoly::q(), q1 = P("q-1"), q2 = P("q-2");
    for (const auto& [l, c0] : s.terms()) {
        ClassExpr c = c0 * f;
        switch (p.kind) {
            case U2Kind::S:
                if (l.kind == U2Kind::M)
                    r.add(M(p.a * l.a, p.a * l.b), c);
                else
                    r.add({l.kind, p.a * l.a, 0}, c);
                break;
            case U2Kind::J:
                switch (l.kind) {
                    case U2Kind::S: r.add(J(p.a * l.a), c * q1); break;
                    case U2Kind::J:
                        r.add(S(p.a * l.a), c);
                        r.add(J(p.a * l.a), c * q2);
                        break;
                    case U2Kind::M: r.add(M(p.a * l.a, p.a * l.b), c * q1); break;
                }
                break;
            case U2Kind::M: {
                Rational x = p.a * l.a, y = p.b * (l.kind == U2Kind::M ? l.b : l.a);
                if (x != y) {
                    r.add(M(x, y), c * q);
                } else {
                    r.add(S(x), c);
                    r.add(J(x), c * q1);
                }
                break;
            }
        }
    }
    return r;
}

ClassPoly u2_parabolic_class(unsigned genus, const std::vector<Rational>& jordan_tags,
                             const std::vector<std::pair<Rational, Rational>>& m_tags) {
    if (genus < 1) throw std::invalid_argument("genus must be at least 1");
    ParabolicState s = ParabolicState::delta(S(1));
    for (auto it = m_tags.rbegin(); it != m_tags.rend(); ++it)
        s = u2_parabolic_apply(s, Puncture{U2Kind::M, it->first, it->second});
    for (auto it = jordan_tags.rbegin(); it != jordan_tags.rend(); ++it)
        s = u2_parabolic_apply(s, Puncture{U2Kind::J, *it, 0});
    for (unsigned i = 0; i < genus; ++i) s = u2_parabolic_apply(s, GenusHandle{});
    size_t n = genus + jordan_tags.size() + m_tags.size();
    ClassExpr G = GroupSpec::get(GroupId::U2).group_class().pow(static_cast<unsigned>(n));
    return as_polynomial(s.coeff(S(1)) / G);
}

ClassPoly u2_parabolic_formula(unsigned g, const std::vector<Rational>& jordan_tags,
                               const std::vector<std::pair<Rational, Rational>>& m_tags) {
    Rational lam = 1, mu = 1, sig = 1;
    for (const auto& l : jordan_tags) lam *= l;
    for (const auto& [m, s] : m_tags) {
        mu *= m;
        sig *= s;
    }
    if (lam * mu != 1 || lam * sig != 1) return ClassPoly(0);
    unsigned k = static_cast<unsigned>(jordan_tags.size()), l = static_cast<unsigned>(m_tags.size());
    ClassPoly q1 = P("q-1");
    if (l == 0) {
        ClassPoly sign = k % 2 ? ClassPoly(-1) : ClassPoly(1);
        return ClassPoly::q_pow(2 * g - 1) * q1.pow(2 * g) * (sign * q1 + q1.pow(2 * g + k));
    }
    return ClassPoly::q_pow(2 * g + l - 1) * q1.pow(4 * g + k);
}

}  // namespace grotto
