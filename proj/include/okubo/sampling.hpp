#pragma once

#include <cstdint>
#include <random>

#include "okubo/yokoyama.hpp"

namespace okubo {

// Two points for I, II, III; n points on a horizontal line for I*.
std::vector<cplx> default_points(Kind kind, int n);

struct SamplingOptions {
    double re_max = 0.9;
    double im_min = 0.1, im_max = 0.9;
    double min_margin = 0.1;
    int max_tries = 10000;
};

// Random exponents with the last rho fixed by the Fuchs relation. Resampled until
// the spec and every chain predecessor have genericity margin >= min_margin.
YokoyamaSpec random_spec(Kind kind, int n, std::mt19937_64& rng, const SamplingOptions& opt = {});
YokoyamaSpec random_spec(Kind kind, int n, std::uint64_t seed, const SamplingOptions& opt = {});

}  // namespace okubo
