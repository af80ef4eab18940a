#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grotto/tqft.hpp"
#include "grotto/verify.hpp"
#include "json.hpp"

using namespace grotto;
using json = nlohmann::json;

namespace {

struct CliConfig {
    std::string input;
    std::string group = "u2";
    unsigned genus = 1;
    std::string jordan;
    std::string m_tags;
    std::string format = "expanded";
    std::string emit = "zpi";
    unsigned threads = 0;
    unsigned split_degree_bound = ClassConfig{}.split_degree_bound;
    unsigned max_depth = ClassConfig{}.max_depth;
    bool full = false;
    bool inject_fault = false;
    std::string golden_dir;
};

TqftOptions tqft_options(const CliConfig& c) {
    TqftOptions o;
    o.threads = c.threads;
    o.engine.split_degree_bound = c.split_degree_bound;
    o.engine.max_depth = c.max_depth;
    return o;
}

json stats_json(const ClassStats& s) {
    json rules = json::object();
    for (size_t i = 1; i < s.rule.size(); ++i)
        if (s.rule[i]) rules[std::to_string(i)] = s.rule[i];
    return {{"nodes", s.nodes}, {"max_depth", s.max_depth}, {"memo_hits", s.memo_hits},
            {"memo_size", s.memo_size}, {"components", s.components}, {"rules", rules}};
}

void print_class(const ClassPoly& c, const std::string& format, const json& stats) {
    if (format == "expanded") {
        std::cout << c.str() << '\n';
    } else if (format == "factored") {
        std::cout << c.factored() << '\n';
    } else if (format == "e-poly") {
        std::cout << e_polynomial(c).str() << '\n';
    } else {
        json coeffs = json::array();
        for (const auto& k : c.coeffs()) coeffs.push_back(k.str());
        json out = {{"class", {{"coeffs", coeffs}}}, {"stats", stats}};
        std::cout << out.dump() << '\n';
    }
}

std::vector<Rational> parse_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

std::vector<std::pair<Rational, Rational>> parse_pairs(const std::string& s) {
    std::vector<std::pair<Rational, Rational>> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("--m entries look like mu:sigma, got '" + item + "'");
        out.push_back({parse_rational(item.substr(0, colon)), parse_rational(item.substr(colon + 1))});
    }
    return out;
}

int cmd_class(const CliConfig& c, bool epoly) {
    ConstraintVariety X = ConstraintVariety::load(c.input);
    ClassResult r = class_of(X, tqft_options(c).engine);
    json stats = stats_json(r.stats);
    stats["bad_primes"] = r.bad_primes;
    print_class(r.value, epoly ? "e-poly" : c.format, stats);
    return 0;
}

int cmd_repvar(const CliConfig& c) {
    GroupSpec g = GroupSpec::parse(c.group);
    ClassPoly v = rep_variety_class(g, c.genus, tqft_options(c));
    print_class(v, c.format, {{"group", g.name()}, {"genus", c.genus}});
    return 0;
}

int cmd_parabolic(const CliConfig& c) {
    auto J = parse_list(c.jordan);
    auto M = parse_pairs(c.m_tags);
    ClassPoly v = u2_parabolic_class(c.genus, J, M);
    print_class(v, c.format, {{"genus", c.genus}, {"jordan", J.size()}, {"m", M.size()}});
    return 0;
}

int cmd_tqft(const CliConfig& c) {
    GroupSpec g = GroupSpec::parse(c.group);
    TqftOptions o = tqft_options(c);
    if (c.emit == "zpi") {
        std::cout << z_pi_L(g, o).golden();
    } else if (c.emit == "eta") {
        std::cout << eta(g).golden();
    } else if (c.emit == "ztilde") {
        std::cout << reduced_L(g, o).golden();
    } else if (c.emit == "column") {
        std::cout << first_column(g, o).golden();
    } else {
        FTensor F = f_tensor(g, o);
        const auto& st = strata(g);
        for (int j = 0; j < F.d; ++j) std::cout << "# " << st[j].label << '\n' << F.golden_slice(j);
    }
    return 0;
}

int cmd_verify(const CliConfig& c) {
    VerifyOptions v;
    v.full = c.full;
    v.tqft = tqft_options(c);
    v.golden_dir = c.golden_dir;
    v.corrupt_eta_u3 = c.inject_fault;
    bool ok = true;
    run_verification(v, [&](const CheckResult& r) {
        std::cout << format_result(r) << std::flush;
        if (!r.skipped && !r.pass()) ok = false;
    });
    std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig c;
    CLI::App app{"Virtual classes in the Grothendieck ring of varieties"};
    app.require_subcommand(1);
    app.add_option("--threads", c.threads, "Worker threads (default: GROTTO_THREADS or hardware)");
    app.add_option("--split-degree-bound", c.split_degree_bound, "Largest degree for splitting by roots");
    app.add_option("--max-depth", c.max_depth, "Recursion depth limit");

    const std::vector<std::string> formats = {"expanded", "factored", "e-poly", "json"};
    auto fmt = [&](CLI::App* s) {
        s->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
    };

    auto* cls = app.add_subcommand("class", "Class of a constraint variety file");
    cls->add_option("file", c.input)->required();
    fmt(cls);

    auto* ep = app.add_subcommand("epoly", "E-polynomial of a constraint variety file");
    ep->add_option("file", c.input)->required();

    auto* rep = app.add_subcommand("repvar", "Class of the representation variety of a closed surface");
    rep->add_option("--group", c.group)->required()->check(CLI::IsMember({"u2", "u3", "u4"}));
    rep->add_option("--genus", c.genus)->required()->check(CLI::PositiveNumber);
    fmt(rep);

    auto* par = app.add_subcommand("parabolic", "u2 representation variety with parabolic punctures");
    par->add_option("--genus", c.genus)->required()->check(CLI::PositiveNumber);
    par->add_option("--jordan", c.jordan, "Comma-separated Jordan eigenvalues, e.g. 2,1/2");
    par->add_option("--m", c.m_tags, "Comma-separated mu:sigma pairs, e.g. 2:3,1/2:1/3");
    fmt(par);

    auto* tq = app.add_subcommand("tqft", "Print a transfer matrix in golden format");
    tq->add_option("--group", c.group)->required()->check(CLI::IsMember({"u2", "u3", "u4"}));
    tq->add_option("--emit", c.emit)->check(CLI::IsMember({"zpi", "eta", "ztilde", "f", "column"}));

    auto* ver = app.add_subcommand("verify", "Run the acceptance checks");
    ver->add_flag("--full", c.full, "Include the u4 pipeline and all printed u4 reduced-matrix entries");
    ver->add_flag("--inject-fault", c.inject_fault, "Corrupt one u3 stratum class first");
    ver->add_option("--golden-dir", c.golden_dir, "Directory of golden files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cls) return cmd_class(c, false);
        if (*ep) return cmd_class(c, true);
        if (*rep) return cmd_repvar(c);
        if (*par) return cmd_parabolic(c);
        if (*tq) return cmd_tqft(c);
        if (*ver) return cmd_verify(c);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const Unresolvable& e) {
        std::cerr << "unresolvable: " << e.what() << '\n';
        return 3;
    } catch (const DepthExceeded& e) {
        std::cerr << "depth exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
