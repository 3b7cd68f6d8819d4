#pragma once

#include <optional>
#include <utility>

#include "okubo/core.hpp"
#include "okubo/json_io.hpp"

namespace okubo {

// Factors recorded by a middle convolution (additive or multiplicative).
struct ReductionWitness {
    bool multiplicative = false;
    cplx parameter = 0.0;  // mu for mc, lambda for MC
    double tol = 0.0;
    std::vector<CMatrix> P, Q, S;
    CMatrix P0, Q0, S0;
    std::vector<int> ranks;
    int m = 0;

    int reduced_dim() const;
};

struct ComplementFactorization {
    CMatrix xi;   // (n - n_k) x l, rows ordered by the blocks other than k
    CMatrix eta;  // l x (n - n_k)
    int l = 0;
};

struct McAddWitness {
    bool multiplicative = false;
    int k = 0;
    cplx c = 0.0, rho = 0.0;      // additive parameters
    cplx s = 1.0, lambda = 1.0;   // multiplicative parameters
    CMatrix xi, eta;
    CMatrix G;                    // additive gauge, (n+l) x (n+l)
    CMatrix GQ;                   // additive, (n+l) x (n r)
    CMatrix M0k;                  // multiplicative M_0^{(k)}
    CMatrix P0k, Q0k;             // multiplicative factors of M_0^{(k)} - 1
    CMatrix Gm;                   // multiplicative gauge
    BlockStructure blocks_out;
    double tol = 0.0;
};

SchlesingerSystem add_system(const SchlesingerSystem& sys, const std::vector<cplx>& a);
MonodromyTuple add_monodromy(const MonodromyTuple& mon, const std::vector<cplx>& lambdas);

OkuboSystem convolve_system(const SchlesingerSystem& sys, cplx mu);
// A_k = P_k Q_k for every residue, with S_k a right inverse of Q_k.
ReductionWitness factor_residues(const SchlesingerSystem& sys, cplx mu, double tol = -1.0);
SchlesingerSystem k_reduce_system(const OkuboSystem& conv, const ReductionWitness& w);
// block_sizes: the K-reduced block layout (ranks of the A_k).
SchlesingerSystem l_reduce_system(const SchlesingerSystem& ksys, const std::vector<int>& block_sizes, cplx mu,
                                  ReductionWitness* w = nullptr, double tol = -1.0);
std::pair<SchlesingerSystem, ReductionWitness> middle_convolution_system(const SchlesingerSystem& sys, cplx mu,
                                                                         double tol = -1.0);

MonodromyTuple convolve_monodromy(const MonodromyTuple& mon, cplx lambda);
std::pair<MonodromyTuple, ReductionWitness> middle_convolution_monodromy(const MonodromyTuple& mon, cplx lambda,
                                                                         double tol = -1.0);

ComplementFactorization complement_factorization(const CMatrix& X, const BlockStructure& blocks, int k,
                                                 double tol = 1e-9);

// add_(rho at k) o mc_(-rho-c) o add_(c at k) in Okubo form. eta_first fixes the
// scalar gauge of (xi, eta) by prescribing eta's first entry (rank-one case).
std::pair<OkuboSystem, McAddWitness> mc_add_system(const OkuboSystem& sys, int k, cplx c, cplx rho,
                                                   std::optional<cplx> eta_first = std::nullopt,
                                                   double tol = 1e-8);

bool is_okubo_type(const MonodromyTuple& mon, const BlockStructure& blocks, double tol = 1e-12);
// Add_(1/lambda at k) o MC_(lambda/s) o Add_(s at k) for a tuple of Okubo type.
std::pair<MonodromyTuple, McAddWitness> mc_add_monodromy(const MonodromyTuple& mon, const BlockStructure& blocks,
                                                         int k, cplx s, cplx lambda,
                                                         std::optional<cplx> eta_first = std::nullopt,
                                                         double tol = 1e-8);

json witness_to_json(const ReductionWitness& w);
json witness_to_json(const McAddWitness& w);

}  // namespace okubo
