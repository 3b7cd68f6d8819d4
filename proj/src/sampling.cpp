#include "okubo/sampling.hpp"

namespace okubo {

std::vector<cplx> default_points(Kind kind, int n) {
    if (kind != Kind::IStar) return {cplx(0.3, 0.1), cplx(1.6, -0.2)};
    std::vector<cplx> pts;
    for (int k = 0; k < n; ++k) pts.emplace_back(1.2 * k, 0.15 * ((k % 2) ? 1.0 : -1.0));
    return pts;
}

namespace {

bool chain_generic(const YokoyamaSpec& spec, double margin) {
    if (spec.genericity_margin() < margin) return false;
    if (spec.kind == Kind::IStar) return true;
    for (const auto& st : chain_plan(spec))
        if (st.source && st.source->genericity_margin() < margin) return false;
    return true;
}

}  // namespace

YokoyamaSpec random_spec(Kind kind, int n, std::mt19937_64& rng, const SamplingOptions& opt) {
    std::uniform_real_distribution<double> re(-opt.re_max, opt.re_max), im(opt.im_min, opt.im_max);
    auto draw = [&] { return cplx(re(rng), im(rng)); };
    int na = kind == Kind::III ? n + 1 : n;
    int nb = (kind == Kind::II || kind == Kind::III) ? n : 0;
    int nr = kind == Kind::I ? n : kind == Kind::IStar ? 2 : 3;
    for (int tries = 0; tries < opt.max_tries; ++tries) {
        YokoyamaSpec s;
        s.kind = kind;
        s.n = n;
        s.points = default_points(kind, n);
        for (int i = 0; i < na; ++i) s.alpha.push_back(draw());
        for (int i = 0; i < nb; ++i) s.beta.push_back(draw());
        for (int i = 0; i < nr - 1; ++i) s.rho.push_back(draw());
        cplx total = 0.0, known = 0.0;
        for (cplx x : s.alpha) total += x;
        for (cplx x : s.beta) total += x;
        switch (kind) {
            case Kind::I:
                for (cplx x : s.rho) known += x;
                break;
            case Kind::IStar: known = static_cast<double>(n - 1) * s.rho[0]; break;
            case Kind::II: known = static_cast<double>(n) * s.rho[0] + static_cast<double>(n - 1) * s.rho[1]; break;
            case Kind::III: known = static_cast<double>(n) * (s.rho[0] + s.rho[1]); break;
        }
        s.rho.push_back(total - known);
        try {
            s.validate();
            if (chain_generic(s, opt.min_margin)) return s;
        } catch (const Error&) {
        }
    }
    throw GenericityError("no generic exponents found within the try budget");
}

YokoyamaSpec random_spec(Kind kind, int n, std::uint64_t seed, const SamplingOptions& opt) {
    std::mt19937_64 rng(seed);
    return random_spec(kind, n, rng, opt);
}

}  // namespace okubo
