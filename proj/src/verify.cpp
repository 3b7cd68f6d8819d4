#include "okubo/verify.hpp"

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>

namespace okubo {

namespace odeint = boost::numeric::odeint;

namespace {

std::vector<cplx> t_diagonal(const OkuboSystem& sys) {
    std::vector<cplx> d;
    for (int b = 0; b < sys.blocks.count(); ++b)
        for (int a = 0; a < sys.blocks.sizes[b]; ++a) d.push_back(sys.points[static_cast<std::size_t>(b)]);
    return d;
}

// Right-solve X B = Y.
CMatrix right_solve(const CMatrix& Y, const CMatrix& B) {
    Eigen::PartialPivLU<CMatrix> lu(B.transpose());
    return lu.solve(Y.transpose()).transpose();
}

double lu_conditioning(const CMatrix& B) {
    if (B.size() == 0) return 1.0;
    Eigen::PartialPivLU<CMatrix> lu(B);
    const CMatrix& U = lu.matrixLU();
    double lo = std::abs(U(0, 0)), hi = lo;
    for (Eigen::Index i = 1; i < U.rows(); ++i) {
        lo = std::min(lo, std::abs(U(i, i)));
        hi = std::max(hi, std::abs(U(i, i)));
    }
    return hi == 0.0 ? 0.0 : lo / hi;
}

using State = std::vector<double>;

struct Rhs {
    const CMatrix& A;
    const std::vector<cplx>& tdiag;
    const PathPiece& piece;
    int n, m;

    void operator()(const State& y, State& dy, double s) const {
        cplx x, dx;
        if (piece.arc) {
            cplx u = std::polar(piece.radius, piece.phi0 + s);
            x = piece.center + u;
            dx = cplx(0.0, 1.0) * u;
        } else {
            x = piece.a + s * (piece.b - piece.a);
            dx = piece.b - piece.a;
        }
        Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>> Y(
            reinterpret_cast<const cplx*>(y.data()), n, m);
        Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>> dY(reinterpret_cast<cplx*>(dy.data()), n, m);
        dY.noalias() = A * Y;
        for (int i = 0; i < n; ++i) dY.row(i) *= dx / (x - tdiag[static_cast<std::size_t>(i)]);
    }
};

double gap_to_points(const OkuboSystem& sys, cplx x) {
    double g = std::numeric_limits<double>::infinity();
    for (cplx t : sys.points) g = std::min(g, std::abs(x - t));
    return g;
}

}  // namespace

CMatrix LocalSeries::value(cplx z) const {
    CMatrix acc = F.back();
    for (int m = static_cast<int>(F.size()) - 2; m >= 0; --m) acc = (acc * z + F[static_cast<std::size_t>(m)]).eval();
    return acc;
}

CMatrix LocalSeries::derivative(cplx z) const {
    int N = static_cast<int>(F.size()) - 1;
    if (N < 1) return CMatrix::Zero(F[0].rows(), F[0].cols());
    CMatrix acc = static_cast<double>(N) * F[static_cast<std::size_t>(N)];
    for (int m = N - 1; m >= 1; --m) acc = (acc * z + static_cast<double>(m) * F[static_cast<std::size_t>(m)]).eval();
    return acc;
}

LocalSeries frobenius_series(const OkuboSystem& sys, int k, int N, double eval_radius, double tol, int cap) {
    sys.validate();
    const auto& bl = sys.blocks;
    if (k < 0 || k >= bl.count()) throw IndexError("block index out of range");
    int n = sys.dim(), ok = bl.offset(k), nk = bl.sizes[k];
    std::vector<cplx> td = t_diagonal(sys);
    cplx tk = sys.points[static_cast<std::size_t>(k)];

    LocalSeries s;
    s.k = k;
    s.radius = std::numeric_limits<double>::infinity();
    for (int b = 0; b < bl.count(); ++b)
        if (b != k) s.radius = std::min(s.radius, std::abs(sys.points[static_cast<std::size_t>(b)] - tk));
    if (eval_radius <= 0.0) eval_radius = s.radius / 4.0;

    CMatrix Ak = sys.residue(k);
    CMatrix Akk = sys.block(k, k);
    CMatrix In = CMatrix::Identity(n, n);
    CMatrix Rows = sys.A.middleRows(ok, nk);
    Rows.middleCols(ok, nk).setZero();
    s.F.push_back(In);
    double total = 1.0, rp = 1.0;
    int quiet = 0;
    for (int m = 0;; ++m) {
        if (N > 0 && m == N) break;
        if (m >= cap) throw ResonanceError("local series did not converge within the order cap");
        const CMatrix& Fm = s.F.back();
        CMatrix R = Fm * (static_cast<double>(m) * In + Ak) - sys.A * Fm;
        CMatrix B = static_cast<double>(m + 1) * In + Ak;
        if (lu_conditioning(B) < 1e-12) throw ResonanceError("(m+1) I + A_k is singular");
        CMatrix Fn = CMatrix::Zero(n, n);
        CMatrix Rs = right_solve(R, B);
        for (int i = 0; i < n; ++i) {
            if (i >= ok && i < ok + nk) continue;
            Fn.row(i) = Rs.row(i) / (td[static_cast<std::size_t>(i)] - tk);
        }
        // Block-k rows: X B - A_kk X = sum_{j != k} A_kj (F_{m+1})_j.
        CMatrix rhs = Rows * Fn;
        CMatrix K = Eigen::kroneckerProduct(B.transpose(), CMatrix::Identity(nk, nk)) -
                    Eigen::kroneckerProduct(In, Akk);
        if (lu_conditioning(K) < 1e-12) throw ResonanceError("Sylvester equation for the block-k rows is singular");
        Eigen::PartialPivLU<CMatrix> lu(K);
        CVector x = lu.solve(Eigen::Map<const CVector>(rhs.data(), rhs.size()));
        Fn.middleRows(ok, nk) = Eigen::Map<const CMatrix>(x.data(), nk, n);
        s.F.push_back(Fn);
        rp *= eval_radius;
        double term = max_abs(Fn) * rp;
        total = std::max(total, term);
        if (N <= 0) {
            quiet = term <= tol * total ? quiet + 1 : 0;
            if (quiet >= 2) break;
        }
    }
    s.order = static_cast<int>(s.F.size()) - 1;
    return s;
}

cplx PathPiece::start() const { return arc ? center + std::polar(radius, phi0) : a; }
cplx PathPiece::end() const { return arc ? center + std::polar(radius, phi0 + sweep) : b; }

LoopPath LoopPath::segment(cplx a, cplx b) {
    LoopPath p;
    PathPiece s;
    s.a = a;
    s.b = b;
    p.pieces.push_back(s);
    return p;
}

LoopPath LoopPath::loop(const PathConfig& cfg, int k) {
    cfg.validate();
    auto kk = static_cast<std::size_t>(k);
    cplx tk = cfg.points.at(kk);
    cplx xk = tk + std::polar(cfg.radius[kk], cfg.theta[kk]);
    LoopPath p = segment(cfg.base, xk);
    PathPiece arc;
    arc.arc = true;
    arc.center = tk;
    arc.radius = cfg.radius[kk];
    arc.phi0 = cfg.theta[kk];
    arc.sweep = 2.0 * kPi;
    p.pieces.push_back(arc);
    p.pieces.push_back(segment(xk, cfg.base).pieces[0]);
    return p;
}

CMatrix continue_along(const OkuboSystem& sys, const CMatrix& Y0, const LoopPath& path, const IntegrationOptions& opt) {
    int n = sys.dim(), m = static_cast<int>(Y0.cols());
    if (Y0.rows() != n) throw ShapeError("initial value has the wrong row count");
    std::vector<cplx> td = t_diagonal(sys);
    CMatrix Y = Y0;
    for (const auto& piece : path.pieces) {
        double len = piece.arc ? piece.sweep : 1.0;
        if (!piece.arc && piece.a == piece.b) continue;
        State st(static_cast<std::size_t>(2 * n * m));
        std::copy(reinterpret_cast<const double*>(Y.data()), reinterpret_cast<const double*>(Y.data()) + st.size(),
                  st.begin());
        Rhs rhs{sys.A, td, piece, n, m};
        auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
        try {
            odeint::integrate_adaptive(stepper, rhs, st, 0.0, len, len / 64.0);
        } catch (const std::exception& e) {
            throw StepFailure(std::string("integration failed: ") + e.what());
        }
        std::copy(st.begin(), st.end(), reinterpret_cast<double*>(Y.data()));
        if (Y.hasNaN()) throw StepFailure("integration produced NaN");
    }
    return Y;
}

namespace {

IntegrationOptions integ(const PathConfig& cfg, const NumericOptions& opt) {
    return {cfg.rtol * opt.tol_factor, cfg.atol * opt.tol_factor};
}

}  // namespace

CMatrix local_block_solution(const OkuboSystem& sys, const PathConfig& cfg, int k, const NumericOptions& opt) {
    auto kk = static_cast<std::size_t>(k);
    double r = cfg.radius.at(kk);
    LocalSeries s = frobenius_series(sys, k, 0, r, cfg.series_tol, cfg.series_cap);
    if (opt.series_factor > 1) s = frobenius_series(sys, k, s.order * opt.series_factor, r, cfg.series_tol, 0x7fffffff);
    cplx z = std::polar(r, cfg.theta[kk]);
    int ok = sys.blocks.offset(k), nk = sys.blocks.sizes[k];
    CMatrix F = s.value(z);
    return F.middleCols(ok, nk) * matrix_power(sys.block(k, k), cplx(std::log(r), cfg.theta[kk]));
}

CMatrix numeric_canonical_solution(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt) {
    sys.validate();
    cfg.validate();
    if (cfg.points != sys.points) throw ShapeError("path configuration points differ from the system");
    int n = sys.dim();
    CMatrix Psi(n, n);
    for (int k = 0; k < sys.blocks.count(); ++k) {
        auto kk = static_cast<std::size_t>(k);
        cplx xk = cfg.points[kk] + std::polar(cfg.radius[kk], cfg.theta[kk]);
        CMatrix Y = local_block_solution(sys, cfg, k, opt);
        Psi.middleCols(sys.blocks.offset(k), sys.blocks.sizes[k]) =
            continue_along(sys, Y, LoopPath::segment(xk, cfg.base), integ(cfg, opt));
    }
    double colprod = 1.0;
    for (int j = 0; j < n; ++j) colprod *= Psi.col(j).norm();
    if (colprod == 0.0 || std::abs(Psi.determinant()) < 1e-10 * colprod)
        throw SingularPsi("canonical solution matrix is not invertible");
    return Psi;
}

CMatrix numeric_canonical_solution_at(const OkuboSystem& sys, const PathConfig& cfg, cplx x, const NumericOptions& opt) {
    CMatrix Psi = numeric_canonical_solution(sys, cfg, opt);
    return continue_along(sys, Psi, LoopPath::segment(cfg.base, x), integ(cfg, opt));
}

MonodromyTuple numeric_monodromy(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt) {
    CMatrix Psi = numeric_canonical_solution(sys, cfg, opt);
    Eigen::PartialPivLU<CMatrix> lu(Psi);
    MonodromyTuple out;
    out.cfg = cfg;
    for (int k = 0; k < sys.blocks.count(); ++k)
        out.M.push_back(lu.solve(continue_along(sys, Psi, LoopPath::loop(cfg, k), integ(cfg, opt))));
    return out;
}

ConnectionData connection_from_monodromy(const MonodromyTuple& mon, const OkuboSystem& sys) {
    const auto& bl = sys.blocks;
    ConnectionData out;
    out.blocks = bl;
    out.cfg = mon.cfg;
    for (int k = 0; k < bl.count(); ++k) {
        int nk = bl.sizes[k];
        CMatrix E = matrix_power(sys.block(k, k), cplx(0.0, 2.0 * kPi)) - CMatrix::Identity(nk, nk);
        if (smallest_singular_value(E) < 1e-10) throw SingularBlock("e(A_kk) - 1 is not invertible");
        Eigen::PartialPivLU<CMatrix> lu(E);
        for (int j = 0; j < bl.count(); ++j)
            if (j != k)
                out.C[{k, j}] = lu.solve(mon.M[static_cast<std::size_t>(k)].block(bl.offset(k), bl.offset(j), nk, bl.sizes[j]));
    }
    return out;
}

ConnectionData numeric_connection(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt) {
    return connection_from_monodromy(numeric_monodromy(sys, cfg, opt), sys);
}

double ode_residual(const OkuboSystem& sys, cplx x, const CMatrix& Y, double h) {
    std::vector<cplx> td = t_diagonal(sys);
    if (gap_to_points(sys, x) < 4.0 * h) throw PoleError("residual point too close to a singular point");
    IntegrationOptions opt{1e-13, 1e-15};
    auto at = [&](double s) { return continue_along(sys, Y, LoopPath::segment(x, x + s * h), opt); };
    CMatrix dY = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
    CMatrix R = sys.A * Y;
    for (int i = 0; i < sys.dim(); ++i) R.row(i) -= (x - td[static_cast<std::size_t>(i)]) * dY.row(i);
    return max_abs(R) / std::max(1e-300, std::max(1.0, max_abs(sys.A)) * max_abs(Y));
}

double series_residual(const OkuboSystem& sys, const LocalSeries& s, cplx z) {
    std::vector<cplx> td = t_diagonal(sys);
    cplx tk = sys.points[static_cast<std::size_t>(s.k)];
    CMatrix F = s.value(z), dF = s.derivative(z);
    CMatrix L = dF + F * sys.residue(s.k) / z;
    for (int i = 0; i < sys.dim(); ++i) L.row(i) *= (z + tk - td[static_cast<std::size_t>(i)]);
    CMatrix R = L - sys.A * F;
    return max_abs(R) / (std::max(1.0, max_abs(sys.A)) * max_abs(F));
}

double spectral_residual(const MonodromyTuple& mon, const std::vector<cplx>& rho_profile) {
    std::vector<cplx> want;
    for (cplx r : rho_profile) want.push_back(e_of(r));
    return multiset_distance(eigenvalues(mon.product()), want);
}

bool Report::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void Report::add(const std::string& name, double value, double tol, json detail) {
    checks.push_back(Check{name, value, tol, std::isfinite(value) && value <= tol, std::move(detail)});
}

json report_to_json(const Report& r) {
    json arr = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name}, {"residual", c.value}, {"tolerance", c.reference}, {"pass", c.pass}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(j);
    }
    return json{{"pass", r.pass()}, {"checks", arr}};
}

namespace {

double tuple_gap(const MonodromyTuple& a, const MonodromyTuple& b) {
    double g = 0.0;
    for (std::size_t k = 0; k < a.M.size(); ++k) g = std::max(g, max_abs(a.M[k] - b.M[k]));
    return g;
}

double connection_rel_gap(const ConnectionData& a, const ConnectionData& b) {
    double g = 0.0;
    for (const auto& [kj, M] : b.C) g = std::max(g, max_rel_diff(a.at(kj.first, kj.second), M));
    return g;
}

}  // namespace

Report verify_spec(const YokoyamaSpec& spec, const PathConfig& cfg, const SuiteOptions& opt, const OkuboSystem* given) {
    spec.validate();
    auto tol = [&](double t) { return opt.tol > 0.0 ? opt.tol : t; };
    Report rep;
    OkuboSystem canon = canonical_system(spec);
    const OkuboSystem& sys = given ? *given : canon;

    auto chain = katz_chain(spec).first;
    rep.add("chain_equals_canonical", max_abs(chain.A - canon.A), tol(1e-8));

    MonodromyTuple num = numeric_monodromy(sys, cfg);
    ClosedFormOptions cf;
    cf.istar = opt.istar;
    MonodromyTuple closed = assemble_monodromy(closed_form_connection(spec, cfg, cf), spec);
    json detail = json::object();
    if (spec.kind == Kind::IStar) {
        ClosedFormOptions other = cf;
        other.istar = opt.istar == IStarConvention::Theorem ? IStarConvention::Derivation : IStarConvention::Theorem;
        double g_other = tuple_gap(assemble_monodromy(closed_form_connection(spec, cfg, other), spec), num);
        detail["other_convention_residual"] = g_other;
    }
    rep.add("closed_form_monodromy", tuple_gap(closed, num), tol(1e-6), detail);

    if (spec.kind == Kind::II && spec.n == 1) {
        MonodromyTuple h = hgem_monodromy(spec.alpha[0], spec.beta[0], spec.rho[0]);
        CMatrix R = hgem_gauge(spec, cfg);
        CMatrix Ri = R.inverse();
        for (auto& M : h.M) M = R * M * Ri;
        rep.add("hgem_monodromy", tuple_gap(h, num), tol(1e-8));
    }

    rep.add("spectrum_at_infinity", spectral_residual(num, spec.profile().infinity), tol(1e-7));

    double det_err = 0.0;
    std::vector<cplx> offsets{cplx(0.2, 0.05), cplx(-0.15, 0.25), cplx(0.1, -0.2), cplx(0.3, 0.3)};
    double rmin = *std::min_element(cfg.radius.begin(), cfg.radius.end());
    int used = 0;
    for (cplx off : offsets) {
        if (used >= opt.det_points) break;
        cplx x = cfg.base + off * std::max(rmin, 0.25);
        if (gap_to_points(sys, x) < rmin) continue;
        cplx want = okubo_determinant(spec, x, cfg);
        cplx got = numeric_canonical_solution_at(sys, cfg, x).determinant();
        det_err = std::max(det_err, std::abs(got - want) / std::abs(want));
        ++used;
    }
    rep.add("determinant", det_err, tol(1e-7));

    if (spec.kind != Kind::IStar) {
        rep.add("recurrence_vs_closed_form",
                connection_rel_gap(recurrence_connection(spec, cfg), closed_form_connection(spec, cfg)), tol(1e-10));
        std::optional<cplx> p;
        if (spec.kind == Kind::I) p = spec.rho.back();
        XiEta xe = xieta_closed_form(spec, p);
        rep.add("rank_complement", max_abs(xe.xi * xe.eta - xieta_matrix_expression(spec, p)), tol(1e-9));
    }

    MonodromyTuple fine = numeric_monodromy(sys, cfg, NumericOptions{2, 0.5});
    rep.add("numerical_convergence", tuple_gap(fine, num), tol(1e-8));
    return rep;
}

}  // namespace okubo
