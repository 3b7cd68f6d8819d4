#include "okubo/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace okubo {

int BlockStructure::total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int BlockStructure::offset(int k) const {
    if (k < 0 || k >= count()) throw IndexError("block index out of range");
    return std::accumulate(sizes.begin(), sizes.begin() + k, 0);
}

void BlockStructure::validate() const {
    if (sizes.empty()) throw ShapeError("empty block structure");
    for (int s : sizes)
        if (s < 1) throw ShapeError("block sizes must be positive");
}

CMatrix OkuboSystem::block(int i, int j) const {
    return A.block(blocks.offset(i), blocks.offset(j), blocks.sizes[i], blocks.sizes[j]);
}

CMatrix OkuboSystem::residue(int k) const {
    CMatrix R = CMatrix::Zero(A.rows(), A.cols());
    int o = blocks.offset(k);
    R.middleRows(o, blocks.sizes[k]) = A.middleRows(o, blocks.sizes[k]);
    return R;
}

void OkuboSystem::validate() const {
    blocks.validate();
    int n = blocks.total();
    if (A.rows() != n || A.cols() != n) throw ShapeError("A does not match block structure");
    if (static_cast<int>(points.size()) != blocks.count()) throw ShapeError("one point per block required");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw ShapeError("singular points must be distinct");
    if (!A.allFinite()) throw ShapeError("A has non-finite entries");
}

CMatrix SchlesingerSystem::a_infinity() const {
    CMatrix S = CMatrix::Zero(dim(), dim());
    for (const auto& R : residues) S -= R;
    return S;
}

void SchlesingerSystem::validate() const {
    if (points.size() != residues.size()) throw ShapeError("one residue per point required");
    for (const auto& R : residues)
        if (R.rows() != dim() || R.cols() != dim()) throw ShapeError("residues must share a square shape");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw ShapeError("singular points must be distinct");
}

cplx ExponentProfile::fuchs_defect() const {
    cplx s = 0.0;
    for (const auto& blk : local)
        for (cplx a : blk) s += a;
    for (cplx r : infinity) s -= r;
    return s;
}

bool ExponentProfile::fuchs_holds(double tol) const {
    double scale = 1.0;
    for (const auto& blk : local)
        for (cplx a : blk) scale = std::max(scale, std::abs(a));
    return std::abs(fuchs_defect()) <= tol * scale;
}

namespace {
double integer_distance(cplx z) { return std::abs(z - std::round(z.real())); }
}  // namespace

double ExponentProfile::genericity_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& blk : local) {
        for (std::size_t i = 0; i < blk.size(); ++i) {
            m = std::min(m, integer_distance(blk[i]));
            for (std::size_t j = i + 1; j < blk.size(); ++j) m = std::min(m, integer_distance(blk[i] - blk[j]));
        }
    }
    return m;
}

PathConfig PathConfig::make_default(const std::vector<cplx>& points) {
    PathConfig cfg;
    cfg.points = points;
    cplx mean = 0.0;
    for (cplx t : points) mean += t;
    mean /= static_cast<double>(points.size());
    cfg.base = mean - cplx(0.0, 1.0);
    cfg.refresh_theta();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            if (i != j) gap = std::min(gap, std::abs(points[i] - points[j]));
    cfg.radius.clear();
    for (cplx t : points) {
        double r = std::min(gap, std::abs(t - cfg.base)) / 4.0;
        cfg.radius.push_back(r);
    }
    return cfg;
}

void PathConfig::refresh_theta() {
    theta.clear();
    for (cplx t : points) theta.push_back(std::arg(base - t));
}

void PathConfig::validate() const {
    int r = static_cast<int>(points.size());
    if (static_cast<int>(theta.size()) != r || static_cast<int>(radius.size()) != r)
        throw ShapeError("path config arrays must match the number of points");
    for (int k = 0; k < r; ++k) {
        if (std::abs(std::exp(cplx(0.0, theta[k])) - (base - points[k]) / std::abs(base - points[k])) > 1e-12)
            throw BranchError("theta_k must equal arg(p0 - t_k)");
    }
    for (int k = 0; k + 1 < r; ++k)
        if (!(theta[k] > theta[k + 1])) throw BranchError("theta must decrease");
    if (r > 1 && !(theta[r - 1] > theta[0] - kPi)) throw BranchError("theta_r must exceed theta_1 - pi");
    for (int i = 1; i < r; ++i)
        if (!(((points[i] - base) / (points[0] - base)).imag() < 0.0))
            throw BranchError("points not ordered clockwise as seen from p0");
    for (int k = 0; k < r; ++k) {
        double lim = std::abs(points[k] - base);
        for (int j = 0; j < r; ++j)
            if (j != k) lim = std::min(lim, std::abs(points[k] - points[j]));
        if (!(radius[k] > 0.0 && radius[k] < lim / 2.0)) throw ShapeError("loop radius too large");
    }
}

int PathConfig::index_of(cplx t) const {
    for (std::size_t k = 0; k < points.size(); ++k)
        if (points[k] == t) return static_cast<int>(k);
    throw IndexError("point not registered in path config");
}

CMatrix MonodromyTuple::product() const {
    CMatrix P = CMatrix::Identity(dim(), dim());
    for (const auto& m : M) P = P * m;
    return P;
}

cplx e_of(cplx mu) { return std::exp(cplx(0.0, 2.0 * kPi) * mu); }

cplx branch_power(cplx ti, cplx tj, cplx alpha, double theta_j, Order order) {
    cplx d = ti - tj;
    if (d == 0.0) throw BranchError("coincident points");
    double lo = order == Order::Less ? theta_j - kPi : theta_j;
    double hi = lo + kPi;
    double a = std::arg(d);
    while (a <= lo) a += 2.0 * kPi;
    while (a >= hi) a -= 2.0 * kPi;
    if (!(a > lo && a < hi)) throw BranchError("no argument representative in the mandated interval");
    return std::exp(alpha * cplx(std::log(std::abs(d)), a));
}

cplx branch_power(cplx ti, cplx tj, cplx alpha, const PathConfig& cfg, Order order) {
    return branch_power(ti, tj, alpha, cfg.theta.at(cfg.index_of(tj)), order);
}

cplx branch_power(const PathConfig& cfg, int i, int j, cplx alpha) {
    if (i == j) throw IndexError("branch_power needs distinct indices");
    return branch_power(cfg.points.at(i), cfg.points.at(j), alpha, cfg.theta.at(j), i < j ? Order::Less : Order::Greater);
}

double default_rank_tol(const CMatrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return 1e-10 * std::max(smax, M.cwiseAbs().maxCoeff() * std::max(M.rows(), M.cols()));
}

int numerical_rank(const CMatrix& M, double tol) {
    if (M.size() == 0) return 0;
    if (tol < 0) tol = default_rank_tol(M);
    Eigen::JacobiSVD<CMatrix> svd(M);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return r;
}

double smallest_singular_value(const CMatrix& M) {
    if (M.size() == 0) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

RankFactorization rank_factorization(const CMatrix& M, double tol) {
    RankFactorization out;
    if (tol < 0) tol = default_rank_tol(M);
    if (M.size() == 0) {
        out.P = CMatrix::Zero(M.rows(), 0);
        out.Q = CMatrix::Zero(0, M.cols());
        return out;
    }
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    out.rank = r;
    if (r == 0) {
        out.P = CMatrix::Zero(M.rows(), 0);
        out.Q = CMatrix::Zero(0, M.cols());
        return out;
    }
    // Row-space basis V (r x m); choose pivot columns left to right.
    CMatrix V = svd.matrixV().leftCols(r).adjoint();
    std::vector<int> piv;
    CMatrix basis(r, 0);
    for (int j = 0; j < V.cols() && static_cast<int>(piv.size()) < r; ++j) {
        CVector v = V.col(j);
        if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
        if (v.norm() > 1e-6) {
            basis.conservativeResize(r, basis.cols() + 1);
            basis.col(basis.cols() - 1) = v / v.norm();
            piv.push_back(j);
        }
    }
    if (static_cast<int>(piv.size()) < r) throw RankError("could not select pivot columns");
    CMatrix Vp(r, r);
    for (int i = 0; i < r; ++i) Vp.col(i) = V.col(piv[i]);
    CMatrix Q = Vp.partialPivLu().solve(V);
    for (int i = 0; i < r; ++i) {
        Q.col(piv[i]).setZero();
        Q(i, piv[i]) = 1.0;
    }
    CMatrix QQ = Q * Q.adjoint();
    out.P = M * Q.adjoint() * QQ.inverse();
    out.Q = Q;
    return out;
}

CMatrix right_inverse(const CMatrix& Q, double tol) {
    if (Q.rows() == 0) return CMatrix::Zero(Q.cols(), 0);
    Eigen::JacobiSVD<CMatrix> svd(Q);
    const auto& s = svd.singularValues();
    if (s.size() < Q.rows() || s(Q.rows() - 1) <= tol * std::max(1.0, s(0)))
        throw RankError("matrix is not of full row rank");
    return Q.adjoint() * (Q * Q.adjoint()).inverse();
}

SchlesingerSystem okubo_to_schlesinger(const OkuboSystem& sys) {
    sys.validate();
    SchlesingerSystem out;
    out.points = sys.points;
    for (int k = 0; k < sys.blocks.count(); ++k) out.residues.push_back(sys.residue(k));
    return out;
}

CMatrix matrix_power(const CMatrix& A, cplx log_z) {
    CMatrix L = log_z * A;
    return L.exp();
}

std::vector<cplx> eigenvalues(const CMatrix& M) {
    if (M.rows() == 0) return {};
    Eigen::ComplexEigenSolver<CMatrix> es(M, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    while (!a.empty()) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (std::abs(a[i] - b[j]) < best) {
                    best = std::abs(a[i] - b[j]);
                    bi = i;
                    bj = j;
                }
        worst = std::max(worst, best);
        a.erase(a.begin() + static_cast<long>(bi));
        b.erase(b.begin() + static_cast<long>(bj));
    }
    return worst;
}

double max_abs(const CMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

double max_rel_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            double d = std::abs(a(i, j) - b(i, j));
            double s = std::max(1.0, std::abs(b(i, j)));
            worst = std::max(worst, d / s);
        }
    return worst;
}

}  // namespace okubo
