#pragma once

#include <optional>
#include <string>
#include <utility>

#include "okubo/core.hpp"
#include "okubo/json_io.hpp"

namespace okubo {

enum class Kind { I, IStar, II, III };

std::string kind_name(Kind k);
Kind parse_kind(const std::string& s);

// Size parameter n: dimension for I and I*; (II)_{2n} and (III)_{2n+1} otherwise.
struct YokoyamaSpec {
    Kind kind = Kind::II;
    int n = 1;
    std::vector<cplx> alpha, beta, rho;
    std::vector<cplx> points;

    int dim() const;
    BlockStructure blocks() const;
    // Diagonal of the canonical A in block order.
    std::vector<cplx> diagonal() const;
    ExponentProfile profile() const;
    cplx fuchs_defect() const;
    // Throws ShapeError on size mismatch, GenericityError on a broken Fuchs relation.
    void validate(double fuchs_tol = 1e-10) const;
    double genericity_margin() const;
};

void to_json(json& j, const YokoyamaSpec& s);
void from_json(const json& j, YokoyamaSpec& s);

OkuboSystem canonical_system(const YokoyamaSpec& spec);

struct XiEta {
    CMatrix xi, eta;
};

// rho is the convolution parameter for type I and is ignored otherwise (rho_2 is used).
XiEta xieta_closed_form(const YokoyamaSpec& spec, std::optional<cplx> rho = std::nullopt);
// The Schur complement that the closed forms factor.
CMatrix xieta_matrix_expression(const YokoyamaSpec& spec, std::optional<cplx> rho = std::nullopt);
// Block index k used for the complement in the chain step out of this type.
int complement_block(Kind kind);

// Exchange two exponents of the same block (global 0-based diagonal indices).
YokoyamaSpec swap_exponents(const YokoyamaSpec& spec, int i, int j);
OkuboSystem symmetry_conjugate(const OkuboSystem& sys, const YokoyamaSpec& spec, int i, int j);

// op is "seed" (mc_mu of a rank-one tuple, plus the diagonal gauge for (I)_2)
// or "mcadd" (mc_add_system applied to the source canonical system).
struct ChainStep {
    std::string op;
    YokoyamaSpec target;
    std::optional<YokoyamaSpec> source;
    std::vector<cplx> seed;
    int k = -1;
    cplx c = 0.0, rho = 0.0, mu = 0.0;
    cplx eta_first = 1.0;
};

// The step that ends at spec.
ChainStep chain_predecessor(const YokoyamaSpec& spec);
// Steps from the rank-one seed up to spec.
std::vector<ChainStep> chain_plan(const YokoyamaSpec& spec);
std::pair<OkuboSystem, json> katz_chain(const YokoyamaSpec& spec);

}  // namespace okubo
