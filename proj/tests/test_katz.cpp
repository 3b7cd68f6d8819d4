#include <doctest.h>

#include <random>

#include "okubo/connection.hpp"
#include "okubo/katz.hpp"
#include "okubo/sampling.hpp"
#include "okubo/verify.hpp"

using namespace okubo;

namespace {

SchlesingerSystem rank_one(cplx a, cplx b) {
    SchlesingerSystem s;
    s.points = {cplx(0.3, 0.1), cplx(1.6, -0.2)};
    s.residues = {CMatrix::Constant(1, 1, a), CMatrix::Constant(1, 1, b)};
    return s;
}

MonodromyTuple scalar_tuple(std::vector<cplx> v) {
    MonodromyTuple m;
    for (cplx x : v) m.M.push_back(CMatrix::Constant(1, 1, x));
    return m;
}

double spectrum_gap(const CMatrix& a, const CMatrix& b) { return multiset_distance(eigenvalues(a), eigenvalues(b)); }

const cplx a1(0.21, 0.33), b1(-0.47, 0.52), mu(0.36, 0.41);

}  // namespace

TEST_CASE("addition") {
    SchlesingerSystem s = rank_one(a1, b1);
    auto same = add_system(s, {0.0, 0.0});
    CHECK(same.residues[0](0, 0) == a1);
    auto shifted = add_system(s, {cplx(0.1, 0.2), 0.0});
    CHECK(std::abs(shifted.residues[0](0, 0) - (a1 + cplx(0.1, 0.2))) < 1e-15);
    CHECK(shifted.residues[1](0, 0) == b1);
    CHECK(std::abs((shifted.a_infinity() - s.a_infinity())(0, 0) + cplx(0.1, 0.2)) < 1e-15);

    auto m = scalar_tuple({2.0, 3.0});
    auto m1 = add_monodromy(m, {1.0, 1.0});
    CHECK(m1.M[0](0, 0) == 2.0);
    CHECK(add_monodromy(m, {cplx(0.0, 2.0), 1.0}).M[0](0, 0) == cplx(0.0, 4.0));
    CHECK_THROWS_AS(add_monodromy(m, {0.0, 1.0}), ZeroScalar);
}

TEST_CASE("addition scales each local monodromy") {
    YokoyamaSpec spec = random_spec(Kind::II, 1, std::uint64_t(21));
    PathConfig cfg = PathConfig::make_default(spec.points);
    auto mon = numeric_monodromy(canonical_system(spec), cfg);
    std::vector<cplx> a{cplx(0.13, 0.05), cplx(-0.22, 0.11)};
    auto added = add_monodromy(mon, {e_of(a[0]), e_of(a[1])});
    for (std::size_t k = 0; k < 2; ++k) CHECK(max_abs(added.M[k] - e_of(a[k]) * mon.M[k]) < 1e-14);
    CHECK(std::abs(added.product().determinant() - e_of(2.0 * (a[0] + a[1])) * mon.product().determinant()) < 1e-10);
}

TEST_CASE("convolution of the rank-one seed is the hypergeometric Okubo matrix") {
    OkuboSystem conv = convolve_system(rank_one(a1, b1), mu);
    CMatrix hge(2, 2);
    hge << a1 + mu, b1, a1, b1 + mu;
    CHECK(max_abs(conv.A - hge) < 1e-15);
    CHECK(conv.blocks.sizes == std::vector<int>{1, 1});

    OkuboSystem zero = convolve_system(rank_one(0.0, 0.0), 0.0);
    CHECK(zero.A.isZero(0.0));

    auto [mc, w] = middle_convolution_system(rank_one(a1, b1), mu);
    CHECK(w.m == 2);
    CMatrix sum = mc.residues[0] + mc.residues[1];
    CHECK(max_abs(sum - hge) < 1e-14);
    CHECK(max_abs(mc.residues[0].row(1)) < 1e-15);
}

TEST_CASE("K- and L-reduction") {
    std::mt19937_64 g(4);
    std::normal_distribution<double> d;
    auto rnd = [&](int r, int c) {
        CMatrix M(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) M(i, j) = cplx(d(g), d(g));
        return M;
    };
    SchlesingerSystem full;
    full.points = {0.0, 1.0};
    full.residues = {rnd(2, 2), rnd(2, 2)};
    ReductionWitness w = factor_residues(full, mu);
    OkuboSystem conv = convolve_system(full, mu);
    SchlesingerSystem k = k_reduce_system(conv, w);
    CHECK(k.dim() == 4);
    CMatrix Bt = k.residues[0] + k.residues[1];
    CHECK(spectrum_gap(Bt, conv.A) < 1e-8);

    SchlesingerSystem l = l_reduce_system(k, w.ranks, mu);
    CMatrix Bh = l.residues[0] + l.residues[1];
    CHECK(spectrum_gap(Bh, Bt) < 1e-8);

    SchlesingerSystem partial = full;
    partial.residues[1].setZero();
    ReductionWitness w2 = factor_residues(partial, mu);
    SchlesingerSystem k2 = k_reduce_system(convolve_system(partial, mu), w2);
    CHECK(k2.dim() == 2);
    CHECK(w2.ranks[1] == 0);

    // Rank-one inputs give entries Q_i P_j + mu delta_ij.
    ReductionWitness w3 = factor_residues(rank_one(a1, b1), mu);
    SchlesingerSystem k3 = k_reduce_system(convolve_system(rank_one(a1, b1), mu), w3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cplx want = (w3.Q[static_cast<std::size_t>(i)] * w3.P[static_cast<std::size_t>(j)])(0, 0) +
                        (i == j ? mu : cplx(0.0));
            CHECK(std::abs(k3.residues[static_cast<std::size_t>(i)](i, j) - want) < 1e-15);
        }

    SchlesingerSystem zero;
    zero.points = {0.0, 1.0};
    zero.residues = {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
    SchlesingerSystem lz = l_reduce_system(zero, {1, 1}, mu);
    CHECK(lz.dim() == 0);

    CHECK_THROWS_AS(k_reduce_system(convolve_system(rank_one(a1, b1), mu), w), ShapeError);
}

TEST_CASE("multiplicative convolution") {
    auto m = scalar_tuple({cplx(0.3, 0.4)});
    auto n = convolve_monodromy(m, cplx(2.0, 0.0));
    CHECK(std::abs(n.M[0](0, 0) - cplx(0.6, 0.8)) < 1e-15);

    MonodromyTuple ids;
    ids.M = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
    for (const auto& N : convolve_monodromy(ids, 1.0).M) CHECK(N.isIdentity(0.0));
    CHECK_THROWS_AS(convolve_monodromy(m, 0.0), ZeroScalar);
}

TEST_CASE("MC of the rank-one tuple gives the hypergeometric monodromy") {
    cplx al(0.21, 0.33), be(-0.47, 0.52), r1(0.36, 0.41);
    auto [mc, w] = middle_convolution_monodromy(scalar_tuple({e_of(al - r1), e_of(be - r1)}), e_of(r1));
    REQUIRE(mc.M.size() == 2);
    REQUIRE(mc.dim() == 2);
    MonodromyTuple h = hgem_monodromy(al, be, r1);
    for (int k = 0; k < 2; ++k) CHECK(max_abs(mc.M[static_cast<std::size_t>(k)] - h.M[static_cast<std::size_t>(k)]) < 1e-12);
    // Product spectrum: e(rho) values of (II)_2.
    YokoyamaSpec s;
    s.kind = Kind::II;
    s.n = 1;
    s.alpha = {al};
    s.beta = {be};
    s.rho = {r1, 0.0, al + be - r1};
    s.points = default_points(Kind::II, 1);
    std::vector<cplx> want;
    for (cplx r : s.profile().infinity) want.push_back(e_of(r));
    CHECK(multiset_distance(eigenvalues(mc.product()), want) < 1e-8);
}

TEST_CASE("additive and multiplicative middle convolutions agree on spectra") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        YokoyamaSpec s = random_spec(Kind::II, 1, seed);
        cplx r1 = s.rho[0];
        SchlesingerSystem seedsys = rank_one(s.alpha[0] - r1, s.beta[0] - r1);
        auto [add, w] = middle_convolution_system(seedsys, r1);
        OkuboSystem ok;
        ok.blocks.sizes = {1, 1};
        ok.points = seedsys.points;
        ok.A = add.residues[0] + add.residues[1];
        PathConfig cfg = PathConfig::make_default(ok.points);
        auto num = numeric_monodromy(ok, cfg);
        auto [mul, wm] = middle_convolution_monodromy(scalar_tuple({e_of(s.alpha[0] - r1), e_of(s.beta[0] - r1)}), e_of(r1));
        for (int k = 0; k < 2; ++k)
            CHECK(spectrum_gap(num.M[static_cast<std::size_t>(k)], mul.M[static_cast<std::size_t>(k)]) < 1e-7);
        CHECK(spectrum_gap(num.product(), mul.product()) < 1e-7);
    }
}

TEST_CASE("complement factorization") {
    CMatrix X = CMatrix::Zero(3, 3);
    X(0, 0) = 2.0;
    X(1, 1) = 3.0;
    X(2, 2) = 0.0;
    BlockStructure bl{{2, 1}};
    auto cf = complement_factorization(X, bl, 0);
    CHECK(cf.l == 0);

    std::mt19937_64 g(8);
    std::normal_distribution<double> d;
    CMatrix A = CMatrix::Random(2, 2) + 3.0 * CMatrix::Identity(2, 2);
    CMatrix B = CMatrix::Random(2, 2), C = CMatrix::Random(2, 2);
    CVector u = CVector::Random(2), v = CVector::Random(2);
    CMatrix D = C * A.inverse() * B + u * v.transpose();
    CMatrix Y(4, 4);
    Y << A, B, C, D;
    auto f = complement_factorization(Y, BlockStructure{{2, 2}}, 0);
    CHECK(f.l == 1);
    CHECK(max_abs(f.xi * f.eta - (D - C * A.inverse() * B)) < 1e-10);

    CMatrix sing = Y;
    sing.topLeftCorner(2, 2).setZero();
    CHECK_THROWS_AS(complement_factorization(sing, BlockStructure{{2, 2}}, 0), SingularBlock);

    YokoyamaSpec s = random_spec(Kind::II, 2, std::uint64_t(5));
    OkuboSystem sys = canonical_system(s);
    CMatrix Z = sys.A - s.rho[1] * CMatrix::Identity(4, 4);
    auto fz = complement_factorization(Z, sys.blocks, 0);
    CHECK(fz.l == 1);
    XiEta xe = xieta_closed_form(s);
    CHECK(max_abs(fz.xi * fz.eta - xe.xi * xe.eta) < 1e-9);
}

TEST_CASE("mc with additions builds the next canonical system") {
    for (Kind kind : {Kind::II, Kind::III}) {
        YokoyamaSpec target = random_spec(kind, 2, std::uint64_t(17));
        ChainStep st = chain_predecessor(target);
        REQUIRE(st.source);
        OkuboSystem src = canonical_system(*st.source);
        auto [out, w] = mc_add_system(src, st.k, st.c, st.rho, st.eta_first);
        OkuboSystem want = canonical_system(target);
        CHECK(out.blocks.sizes == want.blocks.sizes);
        CHECK(max_abs(out.A - want.A) < 1e-9);

        // The new row of block k: zero over the old block-k columns, rho on the diagonal.
        int ok = out.blocks.offset(st.k), nk = src.blocks.sizes[st.k];
        CHECK(max_abs(out.A.block(ok + nk, ok, 1, nk)) < 1e-14);
        CHECK(std::abs(out.A(ok + nk, ok + nk) - st.rho) < 1e-14);
        CHECK(max_abs(out.A.block(ok, ok, nk, nk) - src.block(st.k, st.k)) < 1e-14);

        // Fuchs relation from eigenvalues.
        cplx local = out.A.trace();
        cplx inf = 0.0;
        for (cplx e : eigenvalues(out.A)) inf += e;
        CHECK(std::abs(local - inf) < 1e-9);
    }
    YokoyamaSpec s = random_spec(Kind::II, 1, std::uint64_t(2));
    OkuboSystem sys = canonical_system(s);
    CHECK_THROWS_AS(mc_add_system(sys, 0, -s.alpha[0], 0.3), KernelError);
    CHECK_THROWS_AS(mc_add_system(sys, 0, 0.2, s.alpha[0]), KernelError);
}

TEST_CASE("mc with additions on monodromy") {
    YokoyamaSpec target = random_spec(Kind::III, 1, std::uint64_t(12));
    ChainStep st = chain_predecessor(target);
    REQUIRE(st.source);
    YokoyamaSpec src = *st.source;
    PathConfig cfg = PathConfig::make_default(src.points);
    MonodromyTuple base = assemble_monodromy(closed_form_connection(src, cfg), src);
    cplx s = e_of(st.c), lambda = e_of(-st.rho);
    auto [mc, w] = mc_add_monodromy(base, src.blocks(), st.k, s, lambda);
    CHECK(is_okubo_type(mc, target.blocks(), 1e-12));
    MonodromyTuple want = assemble_monodromy(closed_form_connection(target, cfg), target);
    CHECK(diagonal_gauge_residual(mc.M, want.M) < 1e-9);

    // s = lambda: the (i, k1) block of a row above k reduces to M_ik.
    YokoyamaSpec t2 = random_spec(Kind::II, 2, std::uint64_t(13));
    ChainStep s2 = chain_predecessor(t2);
    YokoyamaSpec src2 = *s2.source;
    MonodromyTuple b2 = assemble_monodromy(closed_form_connection(src2, cfg), src2);
    auto bl2 = src2.blocks();
    REQUIRE(s2.k == 1);
    auto [eq, w2] = mc_add_monodromy(b2, bl2, 1, cplx(0.7, 0.2), cplx(0.7, 0.2));
    CMatrix got = eq.M[0].block(0, bl2.sizes[0], bl2.sizes[0], bl2.sizes[1]);
    CMatrix orig = b2.M[0].block(0, bl2.sizes[0], bl2.sizes[0], bl2.sizes[1]);
    CHECK(max_abs(got - orig) < 1e-12);

    MonodromyTuple broken = base;
    broken.M[0](1, 0) = 0.5;
    CHECK_THROWS_AS(mc_add_monodromy(broken, src.blocks(), 0, s, lambda), StructureError);
    CHECK_THROWS_AS(mc_add_monodromy(base, src.blocks(), 0, 0.0, lambda), ZeroScalar);
}
