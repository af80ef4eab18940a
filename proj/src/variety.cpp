#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "grotto/variety.hpp"

namespace grotto {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void dedup(std::vector<MultiPoly>& ps) {
    std::sort(ps.begin(), ps.end(), [](const MultiPoly& a, const MultiPoly& b) {
        if (a.vars() != b.vars()) return a.vars() < b.vars();
        return Poly::compare(a.engine(), b.engine()) < 0;
    });
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
}

}  // namespace

void ConstraintVariety::normalize() {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (const auto* list : {&eqs, &neqs})
        for (const auto& f : *list)
            for (const auto& v : f.vars())
                if (!std::binary_search(vars.begin(), vars.end(), v))
                    throw ParseError("polynomial " + f.str() + " uses undeclared variable " + v);
    dedup(eqs);
    dedup(neqs);
}

ConstraintVariety ConstraintVariety::with_eq(const MultiPoly& f) const {
    ConstraintVariety r = *this;
    r.eqs.push_back(f);
    r.normalize();
    return r;
}

ConstraintVariety ConstraintVariety::with_neq(const MultiPoly& g) const {
    ConstraintVariety r = *this;
    r.neqs.push_back(g);
    r.normalize();
    return r;
}

ConstraintVariety ConstraintVariety::renamed(const std::vector<std::pair<Variable, Variable>>& mapping) const {
    std::map<Variable, Variable> m(mapping.begin(), mapping.end());
    auto name = [&](const Variable& v) {
        auto it = m.find(v);
        return it == m.end() ? v : it->second;
    };
    ConstraintVariety r;
    for (const auto& v : vars) r.vars.push_back(name(v));
    std::set<Variable> seen(r.vars.begin(), r.vars.end());
    if (seen.size() != r.vars.size()) throw std::invalid_argument("renaming is not injective");
    auto apply = [&](const MultiPoly& f) {
        std::vector<Variable> names;
        for (const auto& v : f.vars()) names.push_back(name(v));
        std::vector<Variable> sorted = names;
        std::sort(sorted.begin(), sorted.end());
        std::array<int8_t, kMaxVars> to;
        to.fill(-1);
        for (size_t i = 0; i < names.size(); ++i)
            to[i] = static_cast<int8_t>(std::lower_bound(sorted.begin(), sorted.end(), names[i]) - sorted.begin());
        return MultiPoly::from_engine(f.engine().rename(to), sorted);
    };
    for (const auto& f : eqs) r.eqs.push_back(apply(f));
    for (const auto& g : neqs) r.neqs.push_back(apply(g));
    r.normalize();
    return r;
}

ConstraintVariety ConstraintVariety::parse(const std::string& text) {
    ConstraintVariety X;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'vars:', 'eq:' or 'neq:'");
        std::string head = trim(line.substr(0, colon)), body = trim(line.substr(colon + 1));
        try {
            if (head == "vars") {
                std::istringstream vs(body);
                std::string v;
                while (std::getline(vs, v, ',')) {
                    v = trim(v);
                    if (v.empty() || v == "none") continue;
                    if (!valid_variable_name(v)) throw ParseError("bad variable name '" + v + "'");
                    X.vars.push_back(v);
                }
            } else if (head == "eq") {
                X.eqs.push_back(MultiPoly::parse(body));
            } else if (head == "neq") {
                X.neqs.push_back(MultiPoly::parse(body));
            } else {
                throw ParseError("unknown directive '" + head + "'");
            }
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    X.normalize();
    return X;
}

ConstraintVariety ConstraintVariety::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string ConstraintVariety::str() const {
    std::ostringstream os;
    os << "vars: ";
    for (size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << vars[i];
    os << '\n';
    for (const auto& f : eqs) os << "eq: " << f.str() << '\n';
    for (const auto& g : neqs) os << "neq: " << g.str() << '\n';
    return os.str();
}

Int count_points(const ConstraintVariety& X0, unsigned p, uint64_t budget) {
    ConstraintVariety X = X0;
    X.normalize();
    const int n = static_cast<int>(X.vars.size());
    double total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    if (total > static_cast<double>(budget))
        throw BudgetExceeded(std::to_string(p) + "^" + std::to_string(n) + " points exceed the enumeration budget");

    std::vector<Poly> polys;
    std::vector<uint8_t> is_eq;
    for (const auto& f : X.eqs) {
        polys.push_back(f.engine_in(X.vars));
        is_eq.push_back(1);
    }
    for (const auto& g : X.neqs) {
        polys.push_back(g.engine_in(X.vars));
        is_eq.push_back(0);
    }
    const int64_t P = p;
    if (n == 0) {
        std::vector<int64_t> pt;
        for (size_t i = 0; i < polys.size(); ++i)
            if ((polys[i].eval_mod(pt, P) == 0) != static_cast<bool>(is_eq[i])) return Int(0);
        return Int(1);
    }

    const int last = n - 1;
    int deg = 0;
    std::vector<std::vector<Poly>> rows;
    for (const auto& f : polys) {
        rows.push_back(f.coeffs_in(last));
        deg = std::max(deg, static_cast<int>(rows.back().size()) - 1);
    }
    const int stride = deg + 1;
    const int np = static_cast<int>(polys.size());
    std::vector<int64_t> coeffs(static_cast<size_t>(np) * stride);
    std::vector<int64_t> point(n, 0);
    auto kernel = kernels::active();
    uint64_t count = 0;
    for (;;) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        for (int i = 0; i < np; ++i)
            for (size_t k = 0; k < rows[i].size(); ++k) coeffs[i * stride + k] = rows[i][k].eval_mod(point, P);
        count += np ? kernel(coeffs.data(), is_eq.data(), np, deg, P) : p;
        int k = 0;
        while (k < last && ++point[k] == P) point[k++] = 0;
        if (k == last) break;
    }
    return Int(static_cast<long long>(count));
}

}  // namespace grotto
