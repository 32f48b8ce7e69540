#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ulgf/lgf.hpp"
#include "ulgf/specfun.hpp"

using namespace ulgf;
using namespace ulgf::lgf;

namespace {

const LgfTable& table_w2(double omega2, int box_n) {
    static std::map<std::pair<double, int>, LgfTable> cache;
    auto key = std::make_pair(omega2, box_n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_lgf_table(omega2, box_n)).first;
    return it->second;
}

double max_stencil_residual(const LgfTable& t) {
    const StencilOperator op{t.omega2()};
    auto g = [&](int i, int j) { return t.at(i, j); };
    double worst = 0.0;
    for (int i = 0; i <= t.box_n() - 1; ++i) {
        for (int j = 0; j <= t.box_n() - 1; ++j) {
            const double delta = (i == 0 && j == 0) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(op.apply(g, i, j) - delta));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("table satisfies the defining equation to transform roundoff") {
    const LgfTable& t = table_w2(2.0, 200);
    CHECK(max_stencil_residual(t) < 1e-10);
}

TEST_CASE("table construction guards") {
    CHECK_THROWS_AS(compute_lgf_table(0.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(compute_lgf_table(-1.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(compute_lgf_table(4.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(compute_lgf_table(1.0, 199), std::invalid_argument);
}

TEST_CASE("resonance guard trips on an exact box eigenvalue and retry clears it") {
    const int box_n = 200;
    const int n = 2 * box_n + 1;
    const double w2 = 4.0 - 4.0 * std::cos(150.0 * M_PI / (double)(n + 1));
    CHECK_THROWS_AS(compute_lgf_table(w2, box_n), ResonanceError);
    CHECK_NOTHROW(compute_lgf_table(w2, box_n + 1));
}

TEST_CASE("accessor symmetry, evenness, origin, and range error") {
    const LgfTable& t = table_w2(2.0, 200);
    CHECK(t.at(3, -7) == t.at(7, 3));
    CHECK(t.at(-5, -2) == t.at(2, 5));
    CHECK(t.at(0, 0) == t.quadrant()[0]);
    try {
        (void)t.at(201, 0);
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        CHECK(std::string(e.what()).find("201") != std::string::npos);
    }
}

TEST_CASE("diagonal agreement with the Legendre closed form") {
    for (double w2 : {0.5, 6.0}) {
        const LgfTable& t = table_w2(w2, 256);
        double worst = 0.0;
        for (int n = 0; n <= 20; ++n)
            worst = std::max(worst, std::abs(t.at(n, n) - specfun::lgf_diagonal(n, w2)));
        CHECK(worst < 5e-6);  // actual agreement with exact ring data is ~1e-10
    }
}

TEST_CASE("table values stabilize when the box grows") {
    const LgfTable& a = table_w2(0.5, 256);
    const LgfTable& b = table_w2(0.5, 320);
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
    CHECK(worst < 5e-6);
}

TEST_CASE("quadrature oracle: symmetry, stencil property, table agreement") {
    const double w2 = 2.0;
    CHECK(std::abs(lgf_quadrature_oracle(w2, 5, 3, 1e-3) - lgf_quadrature_oracle(w2, 3, 5, 1e-3)) <
          1e-10);

    // applying the stencil to oracle values reproduces the delta source
    auto g = [&](int i, int j) { return lgf_quadrature_oracle(w2, i, j, 1e-3); };
    const StencilOperator op{w2};
    CHECK(std::abs(op.apply(g, 0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(op.apply(g, 1, 0)) < 1e-6);
    CHECK(std::abs(op.apply(g, 1, 1)) < 1e-6);

    const LgfTable& t = table_w2(w2, 200);
    for (auto [m1, m2] : {std::pair{0, 0}, {1, 0}, {5, 3}, {10, 10}}) {
        CHECK(std::abs(t.at(m1, m2) - lgf_quadrature_oracle(w2, m1, m2, 1e-3)) < 1e-6);
    }
    CHECK_THROWS_AS(lgf_quadrature_oracle(w2, 25, 0, 1e-3), std::invalid_argument);
}

TEST_CASE("point integral matches frozen oracle references") {
    // frozen from the limiting-absorption quadrature oracle
    const cdouble g = lgf_point_integral(0.5, 0, 0);
    CHECK(g.real() == doctest::Approx(-0.34783129295597426).epsilon(1e-10));
    CHECK(g.imag() == doctest::Approx(-0.26696370599773306).epsilon(1e-10));
    const cdouble g53 = lgf_point_integral(6.0, 5, 3);
    CHECK(g53.real() == doctest::Approx(-0.095933474032657812).epsilon(1e-10));
    CHECK(g53.imag() == doctest::Approx(0.011812741318940688).epsilon(1e-9));
}

TEST_CASE("hankel boundary data is only a small-omega2 approximation") {
    // with continuum data the table inherits the lattice dispersion drift;
    // at omega2 = 1e-3 the result is still close to the exact construction
    const LgfTable exact = compute_lgf_table(1e-3, 200, LgfBoundaryData::exact);
    const LgfTable approx = compute_lgf_table(1e-3, 200, LgfBoundaryData::hankel);
    CHECK(std::abs(exact.at(0, 0) - approx.at(0, 0)) < 1e-2);
    CHECK(max_stencil_residual(approx) < 1e-10);  // it still solves the box problem
}

TEST_CASE("ring solution at omega2 = 4 annihilates the stencil exactly") {
    CHECK(ring_solution_check(5) <= 1e-15);
    CHECK(ring_solution_check(3) == ring_solution_check(8));
    // origin row: four ring-1 neighbors each +1/4 sum to the delta load
    const double sum = 4.0 * 0.25;
    CHECK(sum == 1.0);
    CHECK_THROWS_AS(ring_solution_check(2), std::invalid_argument);
}

TEST_CASE("cache round trip, key validation, and corruption checks") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ulgf_test_cache";
    fs::create_directories(dir);
    const fs::path file = dir / "t.lgf2";

    const LgfTable& t = table_w2(2.0, 200);
    save_lgf_cache(t, file);
    auto loaded = load_lgf_cache(file, 2.0, 200);
    REQUIRE(loaded.has_value());
    CHECK(loaded->at(7, 3) == t.at(7, 3));
    CHECK(loaded->at(0, 0) == t.at(0, 0));

    CHECK(!load_lgf_cache(dir / "missing.lgf2", 2.0, 200).has_value());
    CHECK_THROWS(load_lgf_cache(file, 2.5, 200));
    CHECK_THROWS(load_lgf_cache(file, 2.0, 256));

    {
        std::ofstream bad(dir / "bad.lgf2", std::ios::binary);
        bad << "NOPE garbage";
    }
    CHECK_THROWS(load_lgf_cache(dir / "bad.lgf2", 2.0, 200));
    fs::remove_all(dir);
}
