#pragma once

#include <functional>
#include <map>
#include <utility>

#include "okubo/core.hpp"
#include "okubo/json_io.hpp"
#include "okubo/yokoyama.hpp"

namespace okubo {

// C^{(kj)} for every ordered pair of distinct blocks. Unknown entries are NaN.
struct ConnectionData {
    BlockStructure blocks;
    std::map<std::pair<int, int>, CMatrix> C;
    std::optional<PathConfig> cfg;

    CMatrix& at(int k, int j);
    const CMatrix& at(int k, int j) const;
    bool complete() const;
};

json connection_to_json(const ConnectionData& conn);
ConnectionData connection_from_json(const json& j);

// Which of the two printed e(+-rho_1/2) assignments to use for type I*.
enum class IStarConvention { Theorem, Derivation };

struct ClosedFormOptions {
    IStarConvention istar = IStarConvention::Theorem;
    // Use alpha_1 instead of alpha_i in the Gamma(1 + rho_1 + rho_2 - alpha - beta_k) factor.
    bool literal_alpha1 = false;
    // Use the overall signs and the type III Gamma denominators exactly as printed.
    bool printed = false;
};

ConnectionData closed_form_connection(const YokoyamaSpec& spec, const PathConfig& cfg,
                                      const ClosedFormOptions& opt = {});

// M_k: identity outside block row k, e(A_kk) on the diagonal, (e(A_kk) - 1) C^{(kj)} off it.
MonodromyTuple assemble_monodromy(const ConnectionData& conn, const std::vector<cplx>& diagonal);
MonodromyTuple assemble_monodromy(const ConnectionData& conn, const YokoyamaSpec& spec);

// Starting data for the chains: (I)_2 and (II)_2 (printed = keep the printed signs/arguments).
ConnectionData initial_connection(const YokoyamaSpec& spec, const PathConfig& cfg, bool printed = false);

struct RecurrenceState {
    YokoyamaSpec spec;
    ConnectionData conn;
    CMatrix R_i;   // diagonal, for the block other than k
    CMatrix R_k1;  // diagonal
};

struct RecurrenceParams {
    int k = 0;
    cplx c = 0.0, rho = 0.0;
    int l = 1;
    YokoyamaSpec target;
    bool printed = false;
};

// One application of the mc-with-additions recurrences. Rows/columns of the new
// (k2) part of block k stay NaN.
RecurrenceState recurrence_step(const RecurrenceState& state, const RecurrenceParams& step, const PathConfig& cfg);

using IndexOneEvaluator = std::function<ConnectionData(const YokoyamaSpec&)>;
// Fill NaN rows/columns by swapping the exponent with the first one of its block.
ConnectionData symmetry_extend(const ConnectionData& conn, const YokoyamaSpec& spec, const IndexOneEvaluator& eval);

// Initial data, recurrences along the Katz chain, then symmetry_extend. Types I, II, III.
ConnectionData recurrence_connection(const YokoyamaSpec& spec, const PathConfig& cfg);

cplx okubo_determinant(const YokoyamaSpec& spec, cplx x, const PathConfig& cfg);
cplx okubo_determinant(const ExponentProfile& prof, cplx x, const PathConfig& cfg);
// (x - t_k)^a continued along the straight segment from the base point.
cplx segment_power(cplx x, int k, cplx a, const PathConfig& cfg);

CMatrix regularized_beta(const CMatrix& A, cplx b);
cplx regularized_beta(cplx a, cplx b);

// The hypergeometric monodromy pair in the MC normal form.
MonodromyTuple hgem_monodromy(cplx a1, cplx a2, cplx rho1);
// Diagonal R with canonical (II)_2 monodromy = R HGEM R^{-1}.
CMatrix hgem_gauge(const YokoyamaSpec& spec, const PathConfig& cfg);

// Best diagonal D with D A_i D^{-1} ~ B_i for all i; returns the residual max entry gap.
double diagonal_gauge_residual(const std::vector<CMatrix>& A, const std::vector<CMatrix>& B,
                               CMatrix* D = nullptr);

}  // namespace okubo
