#include <doctest.h>

#include "okubo/sampling.hpp"
#include "okubo/verify.hpp"

using namespace okubo;

namespace {

OkuboSystem diagonal_system(cplx a, cplx b) {
    OkuboSystem s;
    s.blocks.sizes = {1, 1};
    s.points = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    s.A = CMatrix::Zero(2, 2);
    s.A(0, 0) = a;
    s.A(1, 1) = b;
    return s;
}

}  // namespace

TEST_CASE("Frobenius series of a diagonal system") {
    OkuboSystem s = diagonal_system(cplx(0.3, 0.2), cplx(-0.4, 0.1));
    LocalSeries f = frobenius_series(s, 0, 6);
    CHECK(f.F.size() >= 7);
    CHECK(max_abs(f.F[0] - CMatrix::Identity(2, 2)) == 0.0);
    // Column 0 carries z^a alone; column 1 is (x - t_1)^b normalized at t_0.
    for (std::size_t m = 1; m < f.F.size(); ++m) CHECK(max_abs(f.F[m].col(0)) < 1e-15);
    cplx z(0.1, 0.05);
    CHECK(std::abs(f.value(z)(1, 1) - std::pow(1.0 - z, cplx(-0.4, 0.1))) < 1e-6);
    LocalSeries g = frobenius_series(s, 0);
    CHECK(std::abs(g.value(z)(1, 1) - std::pow(1.0 - z, cplx(-0.4, 0.1))) < 1e-12);
    CHECK(f.radius == doctest::Approx(1.0));
}

TEST_CASE("Frobenius series solves the system") {
    YokoyamaSpec spec = random_spec(Kind::III, 2, std::uint64_t(3));
    OkuboSystem sys = canonical_system(spec);
    for (int k = 0; k < 2; ++k) {
        LocalSeries f = frobenius_series(sys, k, 0, 0.4 * std::abs(spec.points[0] - spec.points[1]));
        for (cplx z : {cplx(0.05, 0.02), cplx(-0.1, 0.2), cplx(0.3, -0.1)}) CHECK(series_residual(sys, f, z) < 1e-10);
    }
    CHECK_THROWS_AS(frobenius_series(diagonal_system(-2.0, 0.1), 0, 4), ResonanceError);
}

TEST_CASE("continuation") {
    OkuboSystem zero = diagonal_system(0.0, 0.0);
    CMatrix Y0 = CMatrix::Identity(2, 2);
    LoopPath seg = LoopPath::segment(cplx(0.5, 0.5), cplx(0.4, -0.6));
    CHECK(max_abs(continue_along(zero, Y0, seg) - Y0) < 1e-14);

    // Y = diag((x - 0)^a, (x - 1)^b).
    cplx a(0.3, 0.2), b(-0.4, 0.1);
    OkuboSystem d = diagonal_system(a, b);
    cplx x0(0.5, 0.5), x1(0.7, 0.4);
    CMatrix Y = CMatrix::Zero(2, 2);
    Y(0, 0) = std::pow(x0, a);
    Y(1, 1) = std::pow(x0 - 1.0, b);
    CMatrix Y1 = continue_along(d, Y, LoopPath::segment(x0, x1));
    CHECK(std::abs(Y1(0, 0) - std::pow(x1, a)) < 1e-10);
    CHECK(std::abs(Y1(1, 1) - std::pow(x1 - 1.0, b)) < 1e-10);
    CHECK(ode_residual(d, x1, Y1) < 1e-8);

    // A closed loop around nothing returns to the start; one around t_0 multiplies by e(a).
    PathConfig cfg = PathConfig::make_default(d.points);
    LoopPath loop = LoopPath::loop(cfg, 0);
    CHECK(std::abs(loop.pieces.front().start() - cfg.base) < 1e-15);
    CHECK(std::abs(loop.pieces.back().end() - cfg.base) < 1e-15);
    CMatrix Yb = CMatrix::Zero(2, 2);
    Yb(0, 0) = 1.0;
    Yb(1, 1) = 1.0;
    CMatrix Yl = continue_along(d, Yb, loop);
    CHECK(std::abs(Yl(0, 0) - e_of(a)) < 1e-9);
    CHECK(std::abs(Yl(1, 1) - 1.0) < 1e-9);

    LoopPath there_and_back;
    for (const auto& p : LoopPath::segment(x0, x1).pieces) there_and_back.pieces.push_back(p);
    for (const auto& p : LoopPath::segment(x1, x0).pieces) there_and_back.pieces.push_back(p);
    CHECK(max_abs(continue_along(d, Y, there_and_back) - Y) < 1e-10);
}

TEST_CASE("numeric monodromy of a diagonal system") {
    cplx a(0.3, 0.2), b(-0.4, 0.1);
    OkuboSystem d = diagonal_system(a, b);
    PathConfig cfg = PathConfig::make_default(d.points);
    MonodromyTuple mon = numeric_monodromy(d, cfg);
    CHECK(std::abs(mon.M[0](0, 0) - e_of(a)) < 1e-9);
    CHECK(std::abs(mon.M[1](1, 1) - e_of(b)) < 1e-9);
    CHECK(std::abs(mon.M[0](0, 1)) < 1e-9);
    CHECK(std::abs(mon.M[1](1, 0)) < 1e-9);
}

TEST_CASE("canonical solution determinant and local monodromy") {
    YokoyamaSpec spec = random_spec(Kind::II, 1, std::uint64_t(2));
    OkuboSystem sys = canonical_system(spec);
    PathConfig cfg = PathConfig::make_default(spec.points);
    CMatrix Psi = numeric_canonical_solution(sys, cfg);
    cplx want = okubo_determinant(spec, cfg.base, cfg);
    CHECK(std::abs(Psi.determinant() - want) < 1e-7 * std::abs(want));
    CHECK(ode_residual(sys, cfg.base, Psi) < 1e-7);

    MonodromyTuple mon = numeric_monodromy(sys, cfg);
    CHECK(std::abs(mon.M[0](0, 0) - e_of(spec.alpha[0])) < 1e-9);
    CHECK(std::abs(mon.M[1](1, 1) - e_of(spec.beta[0])) < 1e-9);
    CHECK(spectral_residual(mon, spec.profile().infinity) < 1e-8);

    CMatrix R = hgem_gauge(spec, cfg);
    MonodromyTuple h = hgem_monodromy(spec.alpha[0], spec.beta[0], spec.rho[0]);
    for (std::size_t k = 0; k < 2; ++k) CHECK(max_abs(R * h.M[k] * R.inverse() - mon.M[k]) < 1e-8);

    ConnectionData back = connection_from_monodromy(mon, sys);
    ConnectionData cf = closed_form_connection(spec, cfg);
    CHECK(std::abs(back.at(0, 1)(0, 0) - cf.at(0, 1)(0, 0)) < 1e-8 * std::abs(cf.at(0, 1)(0, 0)));
}

TEST_CASE("numerical convergence") {
    YokoyamaSpec spec = random_spec(Kind::III, 1, std::uint64_t(4));
    OkuboSystem sys = canonical_system(spec);
    PathConfig cfg = PathConfig::make_default(spec.points);
    MonodromyTuple a = numeric_monodromy(sys, cfg);
    MonodromyTuple b = numeric_monodromy(sys, cfg, NumericOptions{2, 0.5});
    for (std::size_t k = 0; k < 2; ++k) CHECK(max_abs(a.M[k] - b.M[k]) < 1e-8);
}

TEST_CASE("exactly one I* sign convention matches") {
    YokoyamaSpec spec = random_spec(Kind::IStar, 3, std::uint64_t(5));
    OkuboSystem sys = canonical_system(spec);
    PathConfig cfg = PathConfig::make_default(spec.points);
    MonodromyTuple num = numeric_monodromy(sys, cfg);
    auto gap = [&](IStarConvention c) {
        ClosedFormOptions o;
        o.istar = c;
        MonodromyTuple m = assemble_monodromy(closed_form_connection(spec, cfg, o), spec);
        double w = 0.0;
        for (std::size_t k = 0; k < m.M.size(); ++k) w = std::max(w, max_abs(m.M[k] - num.M[k]));
        return w;
    };
    double thm = gap(IStarConvention::Theorem), der = gap(IStarConvention::Derivation);
    CHECK(thm < 1e-6);
    CHECK(der > 1e-3);
}

TEST_CASE("verify_spec report") {
    YokoyamaSpec spec = random_spec(Kind::II, 1, std::uint64_t(2));
    PathConfig cfg = PathConfig::make_default(spec.points);
    Report rep = verify_spec(spec, cfg);
    CHECK(rep.pass());
    json j = report_to_json(rep);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("checks").size() == rep.checks.size());

    SuiteOptions strict;
    strict.tol = 1e-20;
    CHECK_FALSE(verify_spec(spec, cfg, strict).pass());

    OkuboSystem bad = canonical_system(spec);
    bad.A(1, 0) += 0.5;
    Report broken = verify_spec(spec, cfg, {}, &bad);
    CHECK_FALSE(broken.pass());
}
