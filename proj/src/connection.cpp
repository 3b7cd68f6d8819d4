#include "okubo/connection.hpp"

#include <cmath>
#include <limits>

namespace okubo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

cplx bp(const PathConfig& cfg, int i, int j, cplx a) { return branch_power(cfg, i, j, a); }

cplx sgn_pow(int p) { return (p % 2 == 0) ? 1.0 : -1.0; }

// Reciprocal gamma, zero at the poles.
cplx rgamma(cplx z) {
    if (pole_distance(z) < 1e-12 * std::max(1.0, std::abs(z))) return 0.0;
    return 1.0 / gamma_c(z);
}

// (e(a) - 1) Gamma(a), entire in a.
cplx e_gamma(cplx a) { return cplx(0.0, 2.0 * kPi) * e_of(a / 2.0) * rgamma(1.0 - a); }

}  // namespace

CMatrix& ConnectionData::at(int k, int j) {
    auto it = C.find({k, j});
    if (it == C.end()) throw IndexError("no connection block for this pair");
    return it->second;
}

const CMatrix& ConnectionData::at(int k, int j) const {
    auto it = C.find({k, j});
    if (it == C.end()) throw IndexError("no connection block for this pair");
    return it->second;
}

bool ConnectionData::complete() const {
    for (int k = 0; k < blocks.count(); ++k)
        for (int j = 0; j < blocks.count(); ++j) {
            if (k == j) continue;
            auto it = C.find({k, j});
            if (it == C.end() || it->second.rows() != blocks.sizes[k] || it->second.cols() != blocks.sizes[j])
                return false;
            if (it->second.hasNaN()) return false;
        }
    return true;
}

json connection_to_json(const ConnectionData& conn) {
    json pairs = json::array();
    for (const auto& [kj, M] : conn.C) pairs.push_back(json{{"k", kj.first}, {"j", kj.second}, {"C", matrix_to_json(M)}});
    json j{{"blocks", conn.blocks}, {"pairs", pairs}};
    if (conn.blocks.count() == 2 && conn.C.count({0, 1}) && conn.C.count({1, 0})) {
        j["C"] = matrix_to_json(conn.at(0, 1));
        j["D"] = matrix_to_json(conn.at(1, 0));
    }
    if (conn.cfg) j["config"] = *conn.cfg;
    return j;
}

ConnectionData connection_from_json(const json& j) {
    ConnectionData out;
    out.blocks = j.at("blocks").get<BlockStructure>();
    for (const auto& p : j.at("pairs"))
        out.C[{p.at("k").get<int>(), p.at("j").get<int>()}] = matrix_from_json(p.at("C"));
    if (j.contains("config")) out.cfg = j.at("config").get<PathConfig>();
    return out;
}

ConnectionData closed_form_connection(const YokoyamaSpec& spec, const PathConfig& cfg, const ClosedFormOptions& opt) {
    spec.validate();
    cfg.validate();
    if (cfg.points != spec.points) throw ShapeError("path configuration points differ from the spec");
    ConnectionData out;
    out.blocks = spec.blocks();
    out.cfg = cfg;
    const auto& al = spec.alpha;
    const auto& be = spec.beta;
    const auto& r = spec.rho;
    int n = spec.n;
    switch (spec.kind) {
        case Kind::I: {
            CMatrix C(n - 1, 1), D(1, n - 1);
            cplx an = al[n - 1], r2 = r[1];
            cplx sign = opt.printed ? sgn_pow(n) : cplx(-1.0);
            for (int i = 0; i < n - 1; ++i) {
                cplx ai = al[i];
                std::vector<cplx> num{-ai, an + 1.0}, den;
                for (int k = 0; k < n - 1; ++k)
                    if (k != i) num.push_back(1.0 + al[k] - ai);
                for (cplx rk : r) den.push_back(1.0 + rk - ai);
                C(i, 0) = sign * e_of((r2 - ai - an) / 2.0) * bp(cfg, 0, 1, r2 - ai) / bp(cfg, 1, 0, r2 - an) *
                          gamma_ratio(num, den);
                num = {1.0 + ai, -an};
                den.clear();
                for (int k = 0; k < n - 1; ++k)
                    if (k != i) num.push_back(ai - al[k]);
                for (cplx rk : r) den.push_back(ai - rk);
                D(0, i) = e_of((ai + an - r2) / 2.0) * bp(cfg, 1, 0, r2 - an) / bp(cfg, 0, 1, r2 - ai) *
                          gamma_ratio(num, den);
            }
            out.C[{0, 1}] = C;
            out.C[{1, 0}] = D;
            break;
        }
        case Kind::IStar: {
            cplx r1 = r[0];
            cplx sign = opt.printed ? cplx(1.0) : cplx(-1.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    bool minus = (i < j) == (opt.istar == IStarConvention::Theorem);
                    cplx ef = e_of((minus ? -r1 : r1) / 2.0);
                    cplx pw = 1.0;
                    for (int k = 0; k < n; ++k) {
                        if (k != i) pw *= bp(cfg, i, k, al[k] - r1);
                        if (k != j) pw /= bp(cfg, j, k, al[k] - r1);
                    }
                    cplx v = sign * ef * pw * gamma_ratio({-al[i], al[j] + 1.0}, {al[j] - r1, 1.0 + r1 - al[i]});
                    out.C[{i, j}] = CMatrix::Constant(1, 1, v);
                }
            break;
        }
        case Kind::II:
        case Kind::III: {
            bool three = spec.kind == Kind::III;
            int m = static_cast<int>(al.size());
            cplx r1 = r[0], r2 = r[1], r3 = r[2];
            CMatrix C(m, n), D(n, m);
            cplx signC = opt.printed ? sgn_pow(three ? n : n - 1) : cplx(-1.0);
            cplx signD = opt.printed ? sgn_pow(n - 1) : cplx(-1.0);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    cplx ai = al[i], bj = be[j], aa = opt.literal_alpha1 ? al[0] : ai;
                    std::vector<cplx> num{bj + 1.0, -ai}, den;
                    if (!three) {
                        den = {1.0 + r1 - ai, bj - r1};
                    } else if (opt.printed) {
                        den = {ai - r1, ai - r2};
                    } else {
                        den = {1.0 + r1 - ai, 1.0 + r2 - ai};
                    }
                    for (int k = 0; k < m; ++k)
                        if (k != i) {
                            num.push_back(1.0 + al[k] - ai);
                            den.push_back(bj + al[k] - r1 - r2);
                        }
                    for (int k = 0; k < n; ++k)
                        if (k != j) {
                            num.push_back(bj - be[k]);
                            den.push_back(1.0 + r1 + r2 - aa - be[k]);
                        }
                    C(i, j) = signC * e_of((r3 - ai - bj) / 2.0) * bp(cfg, 0, 1, r3 - ai) / bp(cfg, 1, 0, r3 - bj) *
                              gamma_ratio(num, den);
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) {
                    cplx bi = be[i], aj = al[j];
                    std::vector<cplx> num{-bi, aj + 1.0}, den;
                    if (!three) {
                        den = {aj - r1, 1.0 + r1 - bi};
                    } else if (opt.printed) {
                        den = {1.0 + r1 - aj, 1.0 + r2 - aj};
                    } else {
                        den = {aj - r1, aj - r2};
                    }
                    for (int k = 0; k < m; ++k)
                        if (k != j) {
                            num.push_back(aj - al[k]);
                            den.push_back(1.0 + r1 + r2 - al[k] - bi);
                        }
                    for (int k = 0; k < n; ++k)
                        if (k != i) {
                            num.push_back(1.0 + be[k] - bi);
                            den.push_back(aj + be[k] - r1 - r2);
                        }
                    D(i, j) = signD * e_of((aj + bi - r3) / 2.0) * bp(cfg, 1, 0, r3 - bi) / bp(cfg, 0, 1, r3 - aj) *
                              gamma_ratio(num, den);
                }
            out.C[{0, 1}] = C;
            out.C[{1, 0}] = D;
            break;
        }
    }
    return out;
}

MonodromyTuple assemble_monodromy(const ConnectionData& conn, const std::vector<cplx>& diagonal) {
    const auto& bl = conn.blocks;
    int n = bl.total();
    if (static_cast<int>(diagonal.size()) != n) throw ShapeError("diagonal does not match block structure");
    if (!conn.complete()) throw ShapeError("connection data incomplete");
    MonodromyTuple out;
    out.cfg = conn.cfg;
    for (int k = 0; k < bl.count(); ++k) {
        CMatrix M = CMatrix::Identity(n, n);
        int ok = bl.offset(k), nk = bl.sizes[k];
        CVector em1(nk);
        for (int a = 0; a < nk; ++a) {
            cplx e = e_of(diagonal[static_cast<std::size_t>(ok + a)]);
            M(ok + a, ok + a) = e;
            em1(a) = e - 1.0;
        }
        for (int j = 0; j < bl.count(); ++j)
            if (j != k) M.block(ok, bl.offset(j), nk, bl.sizes[j]) = em1.asDiagonal() * conn.at(k, j);
        out.M.push_back(M);
    }
    return out;
}

MonodromyTuple assemble_monodromy(const ConnectionData& conn, const YokoyamaSpec& spec) {
    return assemble_monodromy(conn, spec.diagonal());
}

ConnectionData initial_connection(const YokoyamaSpec& spec, const PathConfig& cfg, bool printed) {
    spec.validate();
    ConnectionData out;
    out.blocks = spec.blocks();
    out.cfg = cfg;
    cplx C, D;
    if (spec.kind == Kind::I && spec.n == 2) {
        cplx a1 = spec.alpha[0], a2 = spec.alpha[1], r1 = spec.rho[0], r2 = spec.rho[1];
        cplx sign = printed ? cplx(1.0) : cplx(-1.0);
        C = sign * e_of(-r1 / 2.0) * bp(cfg, 0, 1, r2 - a1) / bp(cfg, 1, 0, a1 - r1) *
            gamma_ratio({-a1, a2 + 1.0}, {1.0 + r2 - a1, 1.0 + r1 - a1});
        D = e_of(r1 / 2.0) * bp(cfg, 1, 0, a1 - r1) / bp(cfg, 0, 1, a2 - r1) *
            gamma_ratio({-a2, a1 + 1.0}, {a1 - r1, a1 - r2});
    } else if (spec.kind == Kind::II && spec.n == 1) {
        cplx a1 = spec.alpha[0], b1 = spec.beta[0], r1 = spec.rho[0];
        C = -e_of(-r1 / 2.0) * bp(cfg, 0, 1, b1 - r1) / bp(cfg, 1, 0, a1 - r1) *
            gamma_ratio({-a1, b1 + 1.0}, {b1 - r1, 1.0 - a1 + r1});
        cplx last = printed ? 1.0 - b1 - r1 : 1.0 + r1 - b1;
        D = -e_of(r1 / 2.0) * bp(cfg, 1, 0, a1 - r1) / bp(cfg, 0, 1, b1 - r1) *
            gamma_ratio({-b1, a1 + 1.0}, {a1 - r1, last});
    } else {
        throw UnsupportedType("initial data exists only for (I)_2 and (II)_2");
    }
    out.C[{0, 1}] = CMatrix::Constant(1, 1, C);
    out.C[{1, 0}] = CMatrix::Constant(1, 1, D);
    return out;
}

cplx segment_power(cplx x, int k, cplx a, const PathConfig& cfg) {
    cplx t = cfg.points.at(static_cast<std::size_t>(k));
    if (x == t) throw PoleError("evaluation at a singular point");
    double arg = cfg.theta.at(static_cast<std::size_t>(k)) + std::arg((x - t) / (cfg.base - t));
    return std::exp(a * cplx(std::log(std::abs(x - t)), arg));
}

cplx okubo_determinant(const ExponentProfile& prof, cplx x, const PathConfig& cfg) {
    if (prof.local.size() != cfg.points.size()) throw ShapeError("profile does not match points");
    std::vector<cplx> num, den;
    cplx pw = 1.0;
    for (std::size_t k = 0; k < prof.local.size(); ++k) {
        cplx s = 0.0;
        for (cplx a : prof.local[k]) {
            num.push_back(1.0 + a);
            s += a;
        }
        pw *= segment_power(x, static_cast<int>(k), s, cfg);
    }
    for (cplx r : prof.infinity) den.push_back(1.0 + r);
    for (cplx z : den)
        if (pole_distance(z) < 1e-12) throw PoleError("rho_i + 1 at a pole");
    return gamma_ratio(num, den) * pw;
}

cplx okubo_determinant(const YokoyamaSpec& spec, cplx x, const PathConfig& cfg) {
    spec.validate();
    return okubo_determinant(spec.profile(), x, cfg);
}

cplx regularized_beta(cplx a, cplx b) {
    return e_gamma(a) * e_gamma(b) * rgamma(a + b);
}

CMatrix regularized_beta(const CMatrix& A, cplx b) {
    if (A.rows() != A.cols()) throw ShapeError("square matrix required");
    int n = static_cast<int>(A.rows());
    CMatrix off = A;
    off.diagonal().setZero();
    if (max_abs(off) <= 1e-14 * std::max(1.0, max_abs(A))) {
        CMatrix out = CMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) out(i, i) = regularized_beta(A(i, i), b);
        return out;
    }
    Eigen::ComplexEigenSolver<CMatrix> es(A);
    CMatrix V = es.eigenvectors();
    Eigen::JacobiSVD<CMatrix> svd(V);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) < 1e-10 * s(0)) throw NonDiagonalizable("matrix is not diagonalizable");
    CVector d(n);
    for (int i = 0; i < n; ++i) d(i) = regularized_beta(es.eigenvalues()(i), b);
    return V * d.asDiagonal() * V.inverse();
}

MonodromyTuple hgem_monodromy(cplx a1, cplx a2, cplx rho1) {
    MonodromyTuple out;
    CMatrix M1(2, 2), M2(2, 2);
    M1 << e_of(a1), e_of(a2 - rho1) - 1.0, 0.0, 1.0;
    M2 << 1.0, 0.0, e_of(rho1) * (e_of(a1 - rho1) - 1.0), e_of(a2);
    out.M = {M1, M2};
    return out;
}

CMatrix hgem_gauge(const YokoyamaSpec& spec, const PathConfig& cfg) {
    if (spec.kind != Kind::II || spec.n != 1) throw UnsupportedType("HGEM gauge is defined for (II)_2");
    cplx a = spec.alpha[0], b = spec.beta[0], r1 = spec.rho[0];
    CMatrix R = CMatrix::Zero(2, 2);
    R(0, 0) = bp(cfg, 0, 1, b - r1) * regularized_beta(a - r1, r1 + 1.0);
    R(1, 1) = bp(cfg, 1, 0, a - r1) * regularized_beta(b - r1, r1 + 1.0);
    return R;
}

double diagonal_gauge_residual(const std::vector<CMatrix>& A, const std::vector<CMatrix>& B, CMatrix* Dout) {
    if (A.size() != B.size() || A.empty()) throw ShapeError("tuples differ in length");
    int n = static_cast<int>(A[0].rows());
    std::vector<cplx> d(static_cast<std::size_t>(n), cplx(kNaN, kNaN));
    d[0] = 1.0;
    auto known = [&](int a) { return !std::isnan(d[static_cast<std::size_t>(a)].real()); };
    for (int sweep = 0; sweep < n; ++sweep)
        for (std::size_t t = 0; t < A.size(); ++t) {
            double thr = 1e-8 * std::max(1.0, max_abs(A[t]));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (a == b || std::abs(A[t](a, b)) < thr || std::abs(B[t](a, b)) < thr) continue;
                    if (known(a) && !known(b)) d[static_cast<std::size_t>(b)] = d[static_cast<std::size_t>(a)] * A[t](a, b) / B[t](a, b);
                    if (!known(a) && known(b)) d[static_cast<std::size_t>(a)] = B[t](a, b) * d[static_cast<std::size_t>(b)] / A[t](a, b);
                }
        }
    CVector dv(n);
    for (int a = 0; a < n; ++a) dv(a) = known(a) ? d[static_cast<std::size_t>(a)] : cplx(1.0);
    CMatrix D = dv.asDiagonal();
    CMatrix Di = dv.cwiseInverse().asDiagonal();
    double res = 0.0;
    for (std::size_t t = 0; t < A.size(); ++t) res = std::max(res, max_abs(D * A[t] * Di - B[t]));
    if (Dout) *Dout = D;
    return res;
}

}  // namespace okubo
