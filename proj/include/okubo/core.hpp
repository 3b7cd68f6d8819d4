#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "okubo/errors.hpp"

namespace okubo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

struct BlockStructure {
    std::vector<int> sizes;

    int count() const { return static_cast<int>(sizes.size()); }
    int total() const;
    int offset(int k) const;
    void validate() const;
};

struct OkuboSystem {
    BlockStructure blocks;
    std::vector<cplx> points;
    CMatrix A;

    int dim() const { return static_cast<int>(A.rows()); }
    CMatrix block(int i, int j) const;
    // k-th block row of A embedded in an n x n zero matrix.
    CMatrix residue(int k) const;
    void validate() const;
};

struct SchlesingerSystem {
    std::vector<cplx> points;
    std::vector<CMatrix> residues;

    int dim() const { return residues.empty() ? 0 : static_cast<int>(residues.front().rows()); }
    CMatrix a_infinity() const;
    void validate() const;
};

struct ExponentProfile {
    std::vector<std::vector<cplx>> local;
    std::vector<cplx> infinity;

    // Sum of local exponents minus sum of exponents at infinity.
    cplx fuchs_defect() const;
    bool fuchs_holds(double tol = 1e-10) const;
    // Distance of the nearest genericity wall (integer differences, integer exponents).
    double genericity_margin() const;
};

struct PathConfig {
    cplx base;
    std::vector<cplx> points;
    std::vector<double> theta;
    std::vector<double> radius;
    double rtol = 1e-11;
    double atol = 1e-13;
    double series_tol = 1e-13;
    int series_cap = 200;

    static PathConfig make_default(const std::vector<cplx>& points);
    // Recompute theta from base and points.
    void refresh_theta();
    void validate() const;
    int index_of(cplx t) const;
};

struct MonodromyTuple {
    std::vector<CMatrix> M;
    std::optional<PathConfig> cfg;

    int dim() const { return M.empty() ? 0 : static_cast<int>(M.front().rows()); }
    CMatrix product() const;
};

enum class Order { Less, Greater };

cplx e_of(cplx mu);

cplx gamma_c(cplx z);
cplx log_gamma_c(cplx z);
// exp(sum log Gamma(num) - sum log Gamma(den)); the log branch cancels.
cplx gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den);
double pole_distance(cplx z);

// (t_i - t_j)^alpha with arg(t_i - t_j) in (theta_j - pi, theta_j) for i<j
// and (theta_j, theta_j + pi) for i>j.
cplx branch_power(cplx ti, cplx tj, cplx alpha, double theta_j, Order order);
cplx branch_power(cplx ti, cplx tj, cplx alpha, const PathConfig& cfg, Order order);
cplx branch_power(const PathConfig& cfg, int i, int j, cplx alpha);

struct RankFactorization {
    CMatrix P;
    CMatrix Q;
    int rank = 0;
};

double default_rank_tol(const CMatrix& M);
RankFactorization rank_factorization(const CMatrix& M, double tol = -1.0);
CMatrix right_inverse(const CMatrix& Q, double tol = 1e-12);
int numerical_rank(const CMatrix& M, double tol = -1.0);
double smallest_singular_value(const CMatrix& M);

SchlesingerSystem okubo_to_schlesinger(const OkuboSystem& sys);

CMatrix matrix_power(const CMatrix& A, cplx log_z);
std::vector<cplx> eigenvalues(const CMatrix& M);
// Max over i of min_j |a_i - b_j| after greedy matching; inf on size mismatch.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);
double max_abs(const CMatrix& M);
double max_rel_diff(const CMatrix& a, const CMatrix& b);

}  // namespace okubo
