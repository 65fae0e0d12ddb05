#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "shadowlab/config.hpp"
#include "shadowlab/errors.hpp"

using namespace shadowlab;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        path = std::string("config_test_tmp.ini");
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};
} // namespace

TEST_CASE("ini round trip") {
    Params p;
    p.l = 0.04;
    p.K = 20.0;
    TempFile f(params_to_ini(p));
    const Params q = params_from_ini(f.path);
    CHECK(q.l == p.l);
    CHECK(q.K == p.K);
    CHECK(q.a == p.a);
    CHECK(q.tol == p.tol);
}

TEST_CASE("sections and comments parse") {
    TempFile f("# comment\n[field]\nl = 0.03 ; trailing\n\n[numerics]\ntol = 1e-8\n");
    const Params p = params_from_ini(f.path);
    CHECK(p.l == 0.03);
    CHECK(p.tol == 1e-8);
}

TEST_CASE("unknown keys are rejected") {
    TempFile f("[field]\nlength = 0.05\n");
    CHECK_THROWS_AS(params_from_ini(f.path), PreconditionError);
}

TEST_CASE("override applies by key") {
    Params p;
    apply_override(p, "K", "25");
    CHECK(p.K == 25.0);
    CHECK_THROWS_AS(apply_override(p, "K", "abc"), PreconditionError);
    CHECK_THROWS_AS(apply_override(p, "nope", "1"), PreconditionError);
}
