#pragma once

#include <string>
#include <vector>

#include "okubo/connection.hpp"
#include "okubo/core.hpp"
#include "okubo/json_io.hpp"
#include "okubo/yokoyama.hpp"

namespace okubo {

// F^{(k)}(x) = sum_m F_m (x - t_k)^m with F_0 = I; Psi^{(k)} = F^{(k)} (x - t_k)^{A_k}.
struct LocalSeries {
    int k = 0;
    int order = 0;
    std::vector<CMatrix> F;
    double radius = 0.0;  // distance to the nearest other singular point

    CMatrix value(cplx z) const;
    CMatrix derivative(cplx z) const;
};

// Adaptive order (tail below cfg.series_tol at |z| = eval_radius) unless N > 0.
LocalSeries frobenius_series(const OkuboSystem& sys, int k, int N = 0, double eval_radius = 0.0,
                             double tol = 1e-13, int cap = 200);

struct PathPiece {
    bool arc = false;
    cplx a, b;            // segment endpoints
    cplx center;          // arc data
    double radius = 0.0, phi0 = 0.0, sweep = 0.0;

    cplx start() const;
    cplx end() const;
};

struct LoopPath {
    std::vector<PathPiece> pieces;
    static LoopPath segment(cplx a, cplx b);
    // p0 -> t_k + r_k e(i theta_k) -> positive circle -> p0.
    static LoopPath loop(const PathConfig& cfg, int k);
};

struct IntegrationOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
};

CMatrix continue_along(const OkuboSystem& sys, const CMatrix& Y0, const LoopPath& path, const IntegrationOptions& opt = {});

// Knobs for the numerical-convergence gate.
struct NumericOptions {
    int series_factor = 1;   // multiplies the adaptive series order
    double tol_factor = 1.0; // multiplies rtol and atol of the integrator
};

// Block-k columns of Psi^{(k)} at the radius point t_k + r_k e^{i theta_k}.
CMatrix local_block_solution(const OkuboSystem& sys, const PathConfig& cfg, int k, const NumericOptions& opt = {});
CMatrix numeric_canonical_solution(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt = {});
// Psi continued from p0 along the straight segment to x.
CMatrix numeric_canonical_solution_at(const OkuboSystem& sys, const PathConfig& cfg, cplx x,
                                      const NumericOptions& opt = {});
MonodromyTuple numeric_monodromy(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt = {});
ConnectionData numeric_connection(const OkuboSystem& sys, const PathConfig& cfg, const NumericOptions& opt = {});
ConnectionData connection_from_monodromy(const MonodromyTuple& mon, const OkuboSystem& sys);

// Relative residual of (x - T) Y' - A Y, Y' by a five-point stencil of continued values.
double ode_residual(const OkuboSystem& sys, cplx x, const CMatrix& Y, double h = 1e-3);
double series_residual(const OkuboSystem& sys, const LocalSeries& s, cplx z);

// Spectrum of M_1 ... M_r = M_infinity^{-1} against e(rho) with multiplicities.
double spectral_residual(const MonodromyTuple& mon, const std::vector<cplx>& rho_profile);

struct Check {
    std::string name;
    double value = 0.0;      // achieved residual
    double reference = 0.0;  // tolerance
    bool pass = false;
    json detail;
};

struct Report {
    std::vector<Check> checks;
    bool pass() const;
    void add(const std::string& name, double value, double tol, json detail = json::object());
};

json report_to_json(const Report& r);

struct SuiteOptions {
    double tol = -1.0;  // overrides every per-check tolerance when positive
    IStarConvention istar = IStarConvention::Theorem;
    int det_points = 3;
};

// Numerical acceptance checks for one spec; sys defaults to canonical_system(spec).
Report verify_spec(const YokoyamaSpec& spec, const PathConfig& cfg, const SuiteOptions& opt = {},
                   const OkuboSystem* sys = nullptr);

}  // namespace okubo
