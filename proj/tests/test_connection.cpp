#include <doctest.h>

#include <cmath>

#include "okubo/connection.hpp"
#include "okubo/sampling.hpp"

using namespace okubo;

namespace {

double max_rel(const ConnectionData& a, const ConnectionData& b) {
    double worst = 0.0;
    for (const auto& [key, C] : b.C) {
        const CMatrix& X = a.at(key.first, key.second);
        double scale = std::max(max_abs(C), 1e-300);
        worst = std::max(worst, max_abs(X - C) / scale);
    }
    return worst;
}

}  // namespace

TEST_CASE("regularized beta") {
    CHECK(std::abs(regularized_beta(0.5, 0.5) - 4.0 * kPi) < 1e-12);
    CHECK(std::abs(regularized_beta(1.0, cplx(0.3, 0.2))) < 1e-13);
    cplx a(0.31, 0.22), b(-0.45, 0.61);
    cplx direct = (e_of(a) - 1.0) * (e_of(b) - 1.0) * gamma_c(a) * gamma_c(b) / gamma_c(a + b);
    CHECK(std::abs(regularized_beta(a, b) - direct) < 1e-12 * std::abs(direct));
    // Entire in a: finite at the poles of Gamma(a).
    cplx at_pole = regularized_beta(-1.0, b);
    CHECK(std::isfinite(at_pole.real()));
    CHECK(std::abs(regularized_beta(cplx(-1.0 + 1e-7, 0.0), b) - at_pole) < 1e-5);

    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = a;
    D(1, 1) = cplx(0.12, -0.3);
    CMatrix R = regularized_beta(D, b);
    CHECK(std::abs(R(0, 0) - regularized_beta(a, b)) < 1e-12);
    CHECK(std::abs(R(1, 1) - regularized_beta(D(1, 1), b)) < 1e-12);
    CHECK(std::abs(R(0, 1)) < 1e-13);

    CMatrix S(2, 2);
    S << 1.0, 2.0, 0.5, -1.0;
    CMatrix Ssim = S * D * S.inverse();
    CHECK(max_abs(regularized_beta(Ssim, b) - S * R * S.inverse()) < 1e-11);
}

TEST_CASE("closed forms agree with the starting data") {
    for (Kind kind : {Kind::I, Kind::II}) {
        YokoyamaSpec s = random_spec(kind, kind == Kind::I ? 2 : 1, std::uint64_t(6));
        PathConfig cfg = PathConfig::make_default(s.points);
        ConnectionData cf = closed_form_connection(s, cfg);
        ConnectionData init = initial_connection(s, cfg);
        CHECK(max_rel(init, cf) < 1e-12);
        ConnectionData printed = initial_connection(s, cfg, true);
        CHECK(max_rel(printed, cf) > 1e-3);
    }
}

TEST_CASE("recurrences reproduce the closed forms") {
    struct C {
        Kind kind;
        int n;
    };
    for (C c : {C{Kind::I, 3}, C{Kind::I, 4}, C{Kind::II, 2}, C{Kind::III, 1}, C{Kind::III, 2}}) {
        CAPTURE(kind_name(c.kind));
        CAPTURE(c.n);
        YokoyamaSpec s = random_spec(c.kind, c.n, std::uint64_t(40 + c.n));
        PathConfig cfg = PathConfig::make_default(s.points);
        ConnectionData rec = recurrence_connection(s, cfg);
        CHECK(rec.complete());
        CHECK(max_rel(rec, closed_form_connection(s, cfg)) < 1e-10);
    }
    YokoyamaSpec st = random_spec(Kind::IStar, 3, std::uint64_t(1));
    CHECK_THROWS_AS(recurrence_connection(st, PathConfig::make_default(st.points)), UnsupportedType);
}

TEST_CASE("symmetry_extend fills missing rows and leaves complete data alone") {
    YokoyamaSpec s = random_spec(Kind::II, 2, std::uint64_t(3));
    PathConfig cfg = PathConfig::make_default(s.points);
    ConnectionData cf = closed_form_connection(s, cfg);
    auto eval = [&](const YokoyamaSpec& t) { return closed_form_connection(t, cfg); };
    ConnectionData same = symmetry_extend(cf, s, eval);
    CHECK(max_rel(same, cf) == 0.0);

    ConnectionData holes = cf;
    holes.at(0, 1).row(1).setConstant(cplx(NAN, NAN));
    holes.at(1, 0).col(1).setConstant(cplx(NAN, NAN));
    CHECK_FALSE(holes.complete());
    ConnectionData filled = symmetry_extend(holes, s, eval);
    CHECK(filled.complete());
    CHECK(max_rel(filled, cf) < 1e-12);
}

TEST_CASE("assembled monodromy structure") {
    YokoyamaSpec s = random_spec(Kind::III, 2, std::uint64_t(9));
    PathConfig cfg = PathConfig::make_default(s.points);
    MonodromyTuple mon = assemble_monodromy(closed_form_connection(s, cfg), s);
    auto bl = s.blocks();
    for (int k = 0; k < 2; ++k) {
        cplx want = 1.0;
        auto d = s.diagonal();
        for (int i = bl.offset(k); i < bl.offset(k) + bl.sizes[k]; ++i) want *= e_of(d[static_cast<std::size_t>(i)]);
        CHECK(std::abs(mon.M[static_cast<std::size_t>(k)].determinant() - want) < 1e-10);
    }

    ConnectionData zero;
    zero.blocks = bl;
    zero.C[{0, 1}] = CMatrix::Zero(bl.sizes[0], bl.sizes[1]);
    zero.C[{1, 0}] = CMatrix::Zero(bl.sizes[1], bl.sizes[0]);
    MonodromyTuple diag = assemble_monodromy(zero, s);
    for (const auto& M : diag.M) {
        CMatrix off = M;
        off.diagonal().setZero();
        CHECK(max_abs(off) == 0.0);
    }
}

TEST_CASE("closed-form switches change the numbers") {
    YokoyamaSpec s = random_spec(Kind::II, 2, std::uint64_t(11));
    PathConfig cfg = PathConfig::make_default(s.points);
    ConnectionData base = closed_form_connection(s, cfg);
    ClosedFormOptions lit;
    lit.literal_alpha1 = true;
    CHECK(max_rel(closed_form_connection(s, cfg, lit), base) > 1e-3);
    ClosedFormOptions pr;
    pr.printed = true;
    YokoyamaSpec u = random_spec(Kind::III, 2, std::uint64_t(11));
    CHECK(max_rel(closed_form_connection(u, cfg, pr), closed_form_connection(u, cfg)) > 1e-3);

    YokoyamaSpec t = random_spec(Kind::IStar, 3, std::uint64_t(2));
    PathConfig ct = PathConfig::make_default(t.points);
    ClosedFormOptions der;
    der.istar = IStarConvention::Derivation;
    CHECK(max_rel(closed_form_connection(t, ct, der), closed_form_connection(t, ct)) > 1e-3);
}

TEST_CASE("hypergeometric monodromy and its gauge") {
    cplx a(0.2, 0.3), b(-0.4, 0.5), r(0.1, 0.2);
    MonodromyTuple h = hgem_monodromy(a, b, r);
    CHECK(std::abs(h.M[0].determinant() - e_of(a)) < 1e-14);
    CHECK(std::abs(h.M[1].determinant() - e_of(b)) < 1e-14);
    CHECK(numerical_rank(h.M[0] - CMatrix::Identity(2, 2)) == 1);

    YokoyamaSpec s = random_spec(Kind::II, 1, std::uint64_t(5));
    PathConfig cfg = PathConfig::make_default(s.points);
    CMatrix R = hgem_gauge(s, cfg);
    MonodromyTuple cf = assemble_monodromy(closed_form_connection(s, cfg), s);
    MonodromyTuple hs = hgem_monodromy(s.alpha[0], s.beta[0], s.rho[0]);
    for (int k = 0; k < 2; ++k) {
        CMatrix g = R * hs.M[static_cast<std::size_t>(k)] * R.inverse();
        CHECK(max_abs(g - cf.M[static_cast<std::size_t>(k)]) < 1e-10);
    }
    CHECK_THROWS_AS(hgem_gauge(random_spec(Kind::II, 2, std::uint64_t(1)), cfg), UnsupportedType);
}

TEST_CASE("diagonal gauge residual") {
    CMatrix A(2, 2);
    A << 1.0, 2.0, 3.0, 4.0;
    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = cplx(0.5, 1.0);
    D(1, 1) = 2.0;
    CMatrix B = D * A * D.inverse();
    CHECK(diagonal_gauge_residual({A}, {B}) < 1e-12);
    CMatrix Bt = B;
    Bt(0, 1) *= 1.5;
    CHECK(diagonal_gauge_residual({A}, {Bt}) > 1e-3);
}

TEST_CASE("determinant closed form") {
    YokoyamaSpec s = random_spec(Kind::II, 1, std::uint64_t(2));
    PathConfig cfg = PathConfig::make_default(s.points);
    cplx x0 = cfg.base, x1 = cfg.base + cplx(0.05, 0.02);
    // The x-dependence is prod (x - t_k)^{sum of block-k exponents}.
    cplx ratio = okubo_determinant(s, x1, cfg) / okubo_determinant(s, x0, cfg);
    cplx want = 1.0;
    for (int k = 0; k < 2; ++k) {
        cplx a = k == 0 ? s.alpha[0] : s.beta[0];
        want *= segment_power(x1, k, a, cfg) / segment_power(x0, k, a, cfg);
    }
    CHECK(std::abs(ratio - want) < 1e-12 * std::abs(want));
    CHECK(std::abs(segment_power(cfg.base, 0, 1.0, cfg) - (cfg.base - cfg.points[0])) < 1e-14);
}
