#include <cmath>
#include <limits>

#include "okubo/connection.hpp"

namespace okubo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<cplx> block_diag(const std::vector<cplx>& d, const BlockStructure& bl, int b) {
    auto first = d.begin() + bl.offset(b);
    return {first, first + bl.sizes[b]};
}

// Recurrence output without the symmetry fill of the new index.
ConnectionData partial_connection(const YokoyamaSpec& spec, const PathConfig& cfg);

ConnectionData full_connection(const YokoyamaSpec& spec, const PathConfig& cfg) {
    ConnectionData part = partial_connection(spec, cfg);
    if (part.complete()) return part;
    return symmetry_extend(part, spec, [&](const YokoyamaSpec& s) { return partial_connection(s, cfg); });
}

ConnectionData partial_connection(const YokoyamaSpec& spec, const PathConfig& cfg) {
    if (spec.kind == Kind::IStar) throw UnsupportedType("type I* is not reached by the recurrences");
    if ((spec.kind == Kind::I && spec.n == 2) || (spec.kind == Kind::II && spec.n == 1))
        return initial_connection(spec, cfg);
    ChainStep st = chain_predecessor(spec);
    RecurrenceState state;
    state.spec = *st.source;
    state.conn = full_connection(state.spec, cfg);
    RecurrenceParams p;
    p.k = st.k;
    p.c = st.c;
    p.rho = st.rho;
    p.target = spec;
    return recurrence_step(state, p, cfg).conn;
}

}  // namespace

RecurrenceState recurrence_step(const RecurrenceState& state, const RecurrenceParams& step, const PathConfig& cfg) {
    const auto& src = state.conn;
    const auto& bl = src.blocks;
    int r = bl.count(), k = step.k, l = step.l;
    if (k < 0 || k >= r) throw IndexError("block index out of range");
    if (!src.complete()) throw ShapeError("source connection data incomplete");
    std::vector<cplx> diag = state.spec.diagonal();
    if (static_cast<int>(diag.size()) != bl.total()) throw ShapeError("source spec does not match connection data");
    cplx rc = step.rho + step.c, rho = step.rho, c = step.c;

    RecurrenceState out;
    out.spec = step.target;
    out.conn.blocks = bl;
    out.conn.blocks.sizes[k] += l;
    out.conn.cfg = cfg;
    const auto& nb = out.conn.blocks;

    auto left = [&](cplx a) { return gamma_ratio({rc - a}, {-a}); };
    auto right = [&](cplx a) { return gamma_ratio({a - rc + 1.0}, {a + 1.0}); };
    std::vector<cplx> Ak = block_diag(diag, bl, k);

    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if (i == j) continue;
            const CMatrix& Cs = src.at(i, j);
            CMatrix Cn = CMatrix::Constant(nb.sizes[i], nb.sizes[j], cplx(kNaN, kNaN));
            std::vector<cplx> Ai = block_diag(diag, bl, i), Aj = block_diag(diag, bl, j);
            if (j == k) {
                cplx f = branch_power(cfg, i, k, rc) * e_of((i < k ? rc : -rc) / 2.0);
                for (int a = 0; a < bl.sizes[i]; ++a)
                    for (int b = 0; b < bl.sizes[k]; ++b)
                        Cn(a, b) = f * left(Ai[a]) * Cs(a, b) * gamma_ratio({Ak[b] - rho}, {Ak[b] + c});
            } else if (i == k) {
                cplx f = e_of((j < k ? -rc : rc) / 2.0) * branch_power(cfg, j, k, -rc);
                for (int a = 0; a < bl.sizes[k]; ++a)
                    for (int b = 0; b < bl.sizes[j]; ++b)
                        Cn(a, b) = f * gamma_ratio({1.0 + rho - Ak[a]}, {1.0 - Ak[a] - c}) * Cs(a, b) * right(Aj[b]);
            } else {
                cplx f = branch_power(cfg, i, k, rc) * branch_power(cfg, j, k, -rc) * e_of((i < j ? rc : -rc) / 2.0);
                for (int a = 0; a < bl.sizes[i]; ++a)
                    for (int b = 0; b < bl.sizes[j]; ++b) Cn(a, b) = f * left(Ai[a]) * Cs(a, b) * right(Aj[b]);
            }
            out.conn.C[{i, j}] = Cn;
        }

    if (r == 2) {
        int o = 1 - k;
        std::vector<cplx> Ao = block_diag(diag, bl, o);
        out.R_i = CMatrix::Zero(bl.sizes[o], bl.sizes[o]);
        for (int a = 0; a < bl.sizes[o]; ++a)
            out.R_i(a, a) = Ao[a] * branch_power(cfg, o, k, rc) * regularized_beta(Ao[a], 1.0 - rc) /
                            (e_of(Ao[a]) - 1.0);
        out.R_k1 = CMatrix::Zero(bl.sizes[k], bl.sizes[k]);
        for (int b = 0; b < bl.sizes[k]; ++b)
            out.R_k1(b, b) = (Ak[b] - rho) * regularized_beta(Ak[b] + c, 1.0 - rc) / (e_of(Ak[b] - rho) - 1.0);
    }
    return out;
}

ConnectionData symmetry_extend(const ConnectionData& conn, const YokoyamaSpec& spec, const IndexOneEvaluator& eval) {
    ConnectionData out = conn;
    const auto& bl = conn.blocks;
    int r = bl.count();
    for (int b = 0; b < r; ++b)
        for (int q = 1; q < bl.sizes[b]; ++q) {
            bool missing = false;
            for (int j = 0; j < r; ++j) {
                if (j == b) continue;
                if (out.at(b, j).row(q).array().isNaN().all() || out.at(j, b).col(q).array().isNaN().all()) missing = true;
            }
            if (!missing) continue;
            YokoyamaSpec sw = swap_exponents(spec, bl.offset(b), bl.offset(b) + q);
            ConnectionData other = eval(sw);
            for (int j = 0; j < r; ++j) {
                if (j == b) continue;
                if (other.at(b, j).row(0).hasNaN() || other.at(j, b).col(0).hasNaN())
                    throw ShapeError("swapped evaluation lacks the index-one entries");
                out.at(b, j).row(q) = other.at(b, j).row(0);
                out.at(j, b).col(q) = other.at(j, b).col(0);
            }
        }
    return out;
}

ConnectionData recurrence_connection(const YokoyamaSpec& spec, const PathConfig& cfg) {
    spec.validate();
    if (cfg.points != spec.points) throw ShapeError("path configuration points differ from the spec");
    return full_connection(spec, cfg);
}

}  // namespace okubo
