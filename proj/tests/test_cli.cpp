#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "grotto/classring.hpp"
#include "json.hpp"

using namespace grotto;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + GROTTO_CLI + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
    int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(GROTTO_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("class command") {
    CHECK(run("class " + data("gl2.var")).out == "q^4 - q^3 - q^2 + q\n");
    CHECK(run("class " + data("empty.var")).out == "1\n");
    CHECK(run("class " + data("eq_one.var")).out == "0\n");
    Run r = run("class " + data("commuting_u3.var") + " --format factored");
    CHECK(r.code == 0);
    CHECK(r.out == "q^3*(q-1)^4*(q^2+q-1)\n");
    CHECK(run("epoly " + data("gl2.var")).out == "u^4*v^4 - u^3*v^3 - u^2*v^2 + u*v\n");
}

TEST_CASE("repvar command") {
    CHECK(run("repvar --group u2 --genus 1").out == ClassPoly::parse("q^2*(q-1)^3").str() + "\n");
    CHECK(run("repvar --group u3 --genus 1 --format factored").out == "q^3*(q-1)^4*(q^2+q-1)\n");
    CHECK(run("repvar --group u2 --genus 1 --format e-poly").out ==
          "u^5*v^5 - 3*u^4*v^4 + 3*u^3*v^3 - u^2*v^2\n");
}

TEST_CASE("json output round-trips") {
    for (std::string args : {"class " + data("gl2.var"), std::string("repvar --group u3 --genus 2"),
                             std::string("parabolic --genus 1 --jordan -1,-1")}) {
        Run j = run(args + " --format json"), e = run(args + " --format expanded");
        REQUIRE(j.code == 0);
        auto doc = nlohmann::json::parse(j.out);
        REQUIRE(doc.contains("stats"));
        upoly::UPoly c;
        for (const auto& s : doc["class"]["coeffs"]) c.push_back(Int::parse(s.get<std::string>()));
        ClassPoly p(c);
        CHECK(p.str() + "\n" == e.out);
        CHECK(ClassPoly::parse(p.str()) == p);
    }
}

TEST_CASE("parabolic command") {
    CHECK(run("parabolic --genus 1 --jordan -1,-1 --format factored").out == "q^2*(q-1)^3*(q^2-3*q+3)\n");
    CHECK(run("parabolic --genus 1 --m 2:3,1/2:1/3 --format factored").out == "q^3*(q-1)^4\n");
    CHECK(run("parabolic --genus 1 --jordan 2").out == "0\n");
}

TEST_CASE("output does not depend on parallelism") {
    for (std::string args : {"tqft --group u3 --emit zpi", "tqft --group u3 --emit f", "tqft --group u2 --emit ztilde",
                             "repvar --group u3 --genus 3 --format json"}) {
        Run a = run(args, "GROTTO_THREADS=1"), b = run(args, "GROTTO_THREADS=4"), c = run("--threads 3 " + args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }
}

TEST_CASE("errors give nonzero exit codes") {
    CHECK(run("class /nonexistent/file.var").code != 0);
    CHECK(run("repvar --group u5 --genus 1").code != 0);
    CHECK(run("repvar --group u2 --genus 0").code != 0);
    CHECK(run("parabolic --genus 1 --jordan 1/0").code == 2);
    CHECK(run("parabolic --genus 1 --m 2").code == 2);
    CHECK(run("parabolic --genus 1 --m 2:2").code != 0);
    CHECK(run("tqft --group u2 --emit f").code != 0);
    CHECK(run("").code != 0);
}

TEST_CASE("verify reports an injected fault") {
    Run ok = run("verify");
    CHECK(ok.out.find("[PASS] 0") != std::string::npos);
    Run bad = run("verify --inject-fault");
    CHECK(bad.code != 0);
    CHECK(bad.out.find("StrataClassMismatch") != std::string::npos);
}
