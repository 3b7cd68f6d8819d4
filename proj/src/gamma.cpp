#include <array>
#include <cmath>

#include "okubo/core.hpp"

namespace okubo {

namespace {

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr double kG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

constexpr double kPoleTol = 1e-12;

cplx lanczos_sum(cplx z) {
    cplx s = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) s += kLanczos[i] / (z + static_cast<double>(i));
    return s;
}

void check_pole(cplx z) {
    if (pole_distance(z) < kPoleTol * std::max(1.0, std::abs(z)))
        throw PoleError("gamma argument at non-positive integer");
}

// log Gamma for Re z >= 1/2 (principal branch of the Lanczos form).
cplx log_gamma_right(cplx z) {
    cplx zm = z - 1.0;
    cplx t = zm + kG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm));
}

}  // namespace

double pole_distance(cplx z) {
    if (z.real() > 0.5) return std::numeric_limits<double>::infinity();
    double nearest = std::round(z.real());
    if (nearest > 0.0) nearest = 0.0;
    return std::abs(z - nearest);
}

cplx gamma_c(cplx z) {
    check_pole(z);
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_c(1.0 - z));
    return std::exp(log_gamma_right(z));
}

cplx log_gamma_c(cplx z) {
    check_pole(z);
    if (z.real() < 0.5) return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma_right(1.0 - z);
    return log_gamma_right(z);
}

cplx gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den) {
    cplx acc = 0.0;
    for (cplx z : num) acc += log_gamma_c(z);
    for (cplx z : den) acc -= log_gamma_c(z);
    return std::exp(acc);
}

}  // namespace okubo
