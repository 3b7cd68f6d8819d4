#include <doctest.h>

#include "okubo/katz.hpp"
#include "okubo/sampling.hpp"
#include "okubo/yokoyama.hpp"

using namespace okubo;

namespace {

struct Case {
    Kind kind;
    int n;
};

const Case kCases[] = {{Kind::I, 3}, {Kind::I, 4}, {Kind::IStar, 3}, {Kind::IStar, 4},
                       {Kind::II, 1}, {Kind::II, 2}, {Kind::III, 1}, {Kind::III, 2}};

}  // namespace

TEST_CASE("kind names") {
    for (Kind k : {Kind::I, Kind::IStar, Kind::II, Kind::III}) CHECK(parse_kind(kind_name(k)) == k);
    CHECK_THROWS_AS(parse_kind("IV"), UnsupportedType);
}

TEST_CASE("canonical system shapes and spectra") {
    for (const auto& c : kCases) {
        CAPTURE(kind_name(c.kind));
        CAPTURE(c.n);
        YokoyamaSpec s = random_spec(c.kind, c.n, std::uint64_t(7));
        OkuboSystem sys = canonical_system(s);
        CHECK(sys.dim() == s.dim());
        CHECK(sys.blocks.total() == s.dim());
        auto d = s.diagonal();
        for (int i = 0; i < sys.dim(); ++i) CHECK(sys.A(i, i) == d[static_cast<std::size_t>(i)]);
        CHECK(multiset_distance(eigenvalues(sys.A), s.profile().infinity) < 1e-8);
        CHECK(s.profile().fuchs_holds(1e-10));
        CHECK(s.genericity_margin() >= 0.1 - 1e-12);
    }
}

TEST_CASE("type I* off-diagonal entries") {
    YokoyamaSpec s = random_spec(Kind::IStar, 4, std::uint64_t(3));
    OkuboSystem sys = canonical_system(s);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(sys.A(i, j) == s.alpha[static_cast<std::size_t>(j)] - s.rho[0]);
    CHECK(sys.blocks.sizes == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("type II_2 is the hypergeometric Okubo matrix") {
    YokoyamaSpec s = random_spec(Kind::II, 1, std::uint64_t(4));
    OkuboSystem sys = canonical_system(s);
    cplx a = s.alpha[0], b = s.beta[0], r1 = s.rho[0];
    CHECK(std::abs(sys.A(0, 1) * sys.A(1, 0) - (a - r1) * (b - r1)) < 1e-13);
}

TEST_CASE("bad specs are rejected") {
    YokoyamaSpec s = random_spec(Kind::II, 2, std::uint64_t(1));
    YokoyamaSpec wrong = s;
    wrong.rho.back() += 0.1;
    CHECK_THROWS_AS(canonical_system(wrong), GenericityError);
    YokoyamaSpec shape = s;
    shape.alpha.pop_back();
    CHECK_THROWS_AS(canonical_system(shape), ShapeError);
}

TEST_CASE("katz chain reproduces the canonical system") {
    int draws = 0;
    for (const auto& c : kCases) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed, ++draws) {
            YokoyamaSpec s = random_spec(c.kind, c.n, seed * 31 + static_cast<std::uint64_t>(c.n));
            auto [sys, log] = katz_chain(s);
            OkuboSystem want = canonical_system(s);
            CHECK(sys.blocks.sizes == want.blocks.sizes);
            CHECK(max_abs(sys.A - want.A) < 1e-8);
            CHECK(log.is_array());
        }
    }
    CHECK(draws == 24);
}

TEST_CASE("rank-one complement closed form") {
    for (Kind kind : {Kind::I, Kind::II, Kind::III}) {
        for (int n : {2, 3}) {
            YokoyamaSpec s = random_spec(kind, n, std::uint64_t(10 + n));
            std::optional<cplx> rho;
            if (kind == Kind::I) rho = s.rho.back();
            XiEta xe = xieta_closed_form(s, rho);
            CMatrix expr = xieta_matrix_expression(s, rho);
            CHECK(xe.xi.cols() == 1);
            CHECK(max_abs(xe.xi * xe.eta - expr) <= 1e-9 * std::max(1.0, max_abs(expr)));
        }
    }
    CHECK_THROWS_AS(xieta_closed_form(random_spec(Kind::IStar, 3, std::uint64_t(1))), UnsupportedType);
}

TEST_CASE("exponent exchange symmetry") {
    YokoyamaSpec s = random_spec(Kind::II, 2, std::uint64_t(8));
    OkuboSystem sys = canonical_system(s);
    CHECK(max_abs(symmetry_conjugate(sys, s, 0, 0).A - sys.A) == 0.0);

    OkuboSystem sw = symmetry_conjugate(sys, s, 0, 1);
    OkuboSystem want = canonical_system(swap_exponents(s, 0, 1));
    CHECK(max_abs(sw.A - want.A) < 1e-10);

    YokoyamaSpec back = swap_exponents(swap_exponents(s, 2, 3), 2, 3);
    CHECK(back.beta == s.beta);
    OkuboSystem twice = symmetry_conjugate(symmetry_conjugate(sys, s, 2, 3), swap_exponents(s, 2, 3), 2, 3);
    CHECK(max_abs(twice.A - sys.A) < 1e-10);

    CHECK_THROWS_AS(swap_exponents(s, 0, 2), IndexError);
}
