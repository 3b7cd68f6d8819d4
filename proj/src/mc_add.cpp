#include "okubo/katz.hpp"

namespace okubo {

namespace {

// Position of old index i after block k grows by l.
int shifted(int i, int end_k, int l) { return i >= end_k ? i + l : i; }

void apply_eta_gauge(ComplementFactorization& cf, std::optional<cplx> eta_first) {
    if (!eta_first) return;
    if (cf.l != 1) throw ShapeError("eta normalization needs a rank-one complement");
    cplx cur = 0.0;
    for (Eigen::Index j = 0; j < cf.eta.cols(); ++j)
        if (std::abs(cf.eta(0, j)) > 1e-12) {
            cur = cf.eta(0, j);
            break;
        }
    if (cur == cplx(0.0)) throw ShapeError("eta vanishes");
    cplx f = *eta_first / cur;
    cf.eta *= f;
    cf.xi /= f;
}

// Rows of xi belonging to old block b (b != k).
CMatrix xi_block(const ComplementFactorization& cf, const BlockStructure& blocks, int k, int b) {
    int row = blocks.offset(b);
    if (b > k) row -= blocks.sizes[k];
    return cf.xi.middleRows(row, blocks.sizes[b]);
}

CMatrix eta_block(const ComplementFactorization& cf, const BlockStructure& blocks, int k, int b) {
    int col = blocks.offset(b);
    if (b > k) col -= blocks.sizes[k];
    return cf.eta.middleCols(col, blocks.sizes[b]);
}

CMatrix sub(const CMatrix& M, const BlockStructure& b, int i, int j) {
    return M.block(b.offset(i), b.offset(j), b.sizes[i], b.sizes[j]);
}

}  // namespace

std::pair<OkuboSystem, McAddWitness> mc_add_system(const OkuboSystem& sys, int k, cplx c, cplx rho,
                                                   std::optional<cplx> eta_first, double tol) {
    sys.validate();
    const auto& bl = sys.blocks;
    int r = bl.count();
    if (k < 0 || k >= r) throw IndexError("block index out of range");
    int n = sys.dim(), ok = bl.offset(k), nk = bl.sizes[k], endk = ok + nk;
    double scale = std::max(1.0, max_abs(sys.A));
    CMatrix Ik = CMatrix::Identity(nk, nk);
    if (smallest_singular_value(sys.residue(k) + c * CMatrix::Identity(n, n)) <= tol * scale)
        throw KernelError("Ker(A_k + c) is nontrivial");
    CMatrix Akk = sys.block(k, k);
    if (smallest_singular_value(Akk - rho * Ik) <= tol * scale) throw KernelError("Ker(A_kk - rho) is nontrivial");

    ComplementFactorization cf =
        complement_factorization(sys.A - rho * CMatrix::Identity(n, n), bl, k, 1e-9);
    apply_eta_gauge(cf, eta_first);
    int l = cf.l, N = n + l;
    CMatrix Rinv = (Akk - rho * Ik).inverse();
    CMatrix W = (Akk + c * Ik) * Rinv;

    CMatrix Am = CMatrix::Zero(N, N);
    CMatrix G = CMatrix::Identity(N, N);
    for (int bi = 0; bi < r; ++bi) {
        int oi = bl.offset(bi), ni = bl.sizes[bi], pi = shifted(oi, endk, l);
        for (int bj = 0; bj < r; ++bj) {
            if (bj == k && bi != k) continue;
            int pj = shifted(bl.offset(bj), endk, l);
            CMatrix blk = sys.block(bi, bj);
            if (bi == bj && bi != k) blk -= (rho + c) * CMatrix::Identity(ni, ni);
            Am.block(pi, pj, ni, bl.sizes[bj]) = blk;
        }
        if (bi == k) continue;
        CMatrix Aik = sys.block(bi, k);
        CMatrix xi_i = xi_block(cf, bl, k, bi);
        Am.block(pi, ok, ni, nk) = Aik * W;
        Am.block(pi, endk, ni, l) = (rho + c) * xi_i;
        G.block(pi, ok, ni, nk) = Aik * Rinv;
        G.block(pi, endk, ni, l) = xi_i;
        Am.block(endk, pi, l, ni) = eta_block(cf, bl, k, bi);
    }
    Am.block(endk, endk, l, l) = rho * CMatrix::Identity(l, l);

    // Q maps the convolution space C^{nr} onto the reduced space.
    CMatrix Q = CMatrix::Zero(N, n * r);
    for (int bi = 0; bi < r; ++bi) {
        if (bi == k) continue;
        int pi = shifted(bl.offset(bi), endk, l), ni = bl.sizes[bi];
        CMatrix Qi = sys.A.middleRows(bl.offset(bi), ni);
        Q.block(pi, bi * n, ni, n) = Qi;
        Q.block(pi, k * n, ni, n) = -Qi;
    }
    CMatrix Q0 = CMatrix::Zero(nk + l, n);
    Q0.topRows(nk) = sys.A.middleRows(ok, nk);
    Q0.block(0, ok, nk, nk) -= rho * Ik;
    for (int bj = 0; bj < r; ++bj)
        if (bj != k) Q0.block(nk, bl.offset(bj), l, bl.sizes[bj]) = eta_block(cf, bl, k, bj);
    Q.block(ok, k * n, nk + l, n) = Q0;

    OkuboSystem out;
    out.blocks = bl;
    out.blocks.sizes[k] += l;
    out.points = sys.points;
    out.A = Am;

    McAddWitness w;
    w.k = k;
    w.c = c;
    w.rho = rho;
    w.xi = cf.xi;
    w.eta = cf.eta;
    w.G = G;
    w.GQ = G * Q;
    w.blocks_out = out.blocks;
    w.tol = tol;
    return {out, w};
}

bool is_okubo_type(const MonodromyTuple& mon, const BlockStructure& blocks, double tol) {
    if (static_cast<int>(mon.M.size()) != blocks.count()) return false;
    int n = blocks.total();
    for (int i = 0; i < blocks.count(); ++i) {
        const auto& M = mon.M[i];
        if (M.rows() != n || M.cols() != n) return false;
        int oi = blocks.offset(i), ni = blocks.sizes[i];
        for (int a = 0; a < n; ++a) {
            if (a >= oi && a < oi + ni) continue;
            for (int b = 0; b < n; ++b)
                if (std::abs(M(a, b) - (a == b ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

std::pair<MonodromyTuple, McAddWitness> mc_add_monodromy(const MonodromyTuple& mon, const BlockStructure& bl,
                                                         int k, cplx s, cplx lambda, std::optional<cplx> eta_first,
                                                         double tol) {
    bl.validate();
    if (s == cplx(0.0) || lambda == cplx(0.0)) throw ZeroScalar("s and lambda must be nonzero");
    int r = bl.count();
    if (k < 0 || k >= r) throw IndexError("block index out of range");
    if (!is_okubo_type(mon, bl, 1e-10 * std::max(1.0, max_abs(mon.M[0]))))
        throw StructureError("monodromy tuple is not of Okubo type");
    int n = bl.total(), ok = bl.offset(k), nk = bl.sizes[k], endk = ok + nk;
    CMatrix In = CMatrix::Identity(n, n), Ik = CMatrix::Identity(nk, nk);

    CMatrix M0 = In;
    for (int q = k + 1; q < r; ++q) M0 = M0 * mon.M[q];
    for (int q = 0; q <= k; ++q) M0 = M0 * mon.M[q];
    M0 *= lambda;
    CMatrix Mkk = sub(M0, bl, k, k);
    double scale = std::max(1.0, max_abs(M0));
    if (smallest_singular_value(Mkk - Ik) <= tol * scale) throw SingularBlock("M_kk^(k) - 1 is not invertible");
    ComplementFactorization cf = complement_factorization(M0 - In, bl, k, 1e-9);
    apply_eta_gauge(cf, eta_first);
    int l = cf.l, N = n + l;
    CMatrix Mt = M0.inverse();
    CMatrix W = (Mkk - (lambda / s) * Ik) * (Mkk - Ik).inverse();

    BlockStructure nb = bl;
    nb.sizes[k] += l;
    auto pos = [&](int b) { return shifted(bl.offset(b), endk, l); };

    MonodromyTuple out;
    out.cfg = mon.cfg;
    for (int i = 0; i < r; ++i) {
        const CMatrix& Mi = mon.M[i];
        CMatrix R = CMatrix::Identity(N, N);
        int ni = bl.sizes[i], pi = pos(i);
        R.block(pi, pi, ni, ni).setZero();
        if (i != k) {
            for (int j = 0; j < r; ++j) {
                if (j == k) continue;
                cplx f = j <= i ? lambda / s : cplx(1.0);
                R.block(pi, pos(j), ni, bl.sizes[j]) = f * sub(Mi, bl, i, j);
            }
            CMatrix Mik = sub(Mi, bl, i, k);
            CMatrix k1, k2;
            if (i < k) {
                k1 = (s / lambda) * Mik * W;
                CMatrix acc = -xi_block(cf, bl, k, i);
                for (int j = i + 1; j < k; ++j) acc += sub(Mi, bl, i, j) * xi_block(cf, bl, k, j);
                k2 = (1.0 - s / lambda) * acc;
            } else {
                k1 = Mik * W;
                CMatrix acc = CMatrix::Zero(ni, l);
                for (int j = k + 1; j <= i; ++j) {
                    CMatrix inner = CMatrix::Zero(bl.sizes[j], l);
                    for (int p = 0; p < r; ++p)
                        if (p != k) inner += sub(Mt, bl, j, p) * xi_block(cf, bl, k, p);
                    acc += sub(Mi, bl, i, j) * inner;
                }
                k2 = lambda * (1.0 - lambda / s) * acc;
            }
            R.block(pi, ok, ni, nk) = k1;
            R.block(pi, endk, ni, l) = k2;
        } else {
            for (int j = 0; j < r; ++j) {
                cplx f = j < k ? lambda / s : cplx(1.0);
                R.block(ok, pos(j), nk, bl.sizes[j]) = f * sub(Mi, bl, k, j);
            }
            R.block(endk, endk, l, l) = CMatrix::Identity(l, l) / lambda;
            for (int j = 0; j < r; ++j) {
                if (j == k) continue;
                cplx f = j < k ? 1.0 / s : 1.0 / lambda;
                R.block(endk, pos(j), l, bl.sizes[j]) = f * eta_block(cf, bl, k, j);
            }
        }
        out.M.push_back(R);
    }

    // M0^(k) - 1 = P0k Q0k with the complement factors.
    CMatrix Minv = (Mkk - Ik).inverse();
    CMatrix P0k = CMatrix::Zero(n, nk + l), Q0k = CMatrix::Zero(nk + l, n);
    Q0k.topRows(nk) = (M0 - In).middleRows(ok, nk);
    P0k.block(ok, 0, nk, nk) = Ik;
    for (int b = 0; b < r; ++b) {
        if (b == k) continue;
        int ob = bl.offset(b), nbs = bl.sizes[b];
        P0k.block(ob, 0, nbs, nk) = sub(M0, bl, b, k) * Minv;
        P0k.block(ob, nk, nbs, l) = xi_block(cf, bl, k, b);
        Q0k.block(nk, ob, l, nbs) = eta_block(cf, bl, k, b);
    }
    CMatrix Gm = CMatrix::Identity(N, N);
    for (int b = 0; b < r; ++b) {
        if (b == k) continue;
        int nbs = bl.sizes[b];
        CMatrix row = b < k ? CMatrix((s / lambda) * P0k.middleRows(bl.offset(b), nbs))
                            : CMatrix(lambda * Mt.middleRows(bl.offset(b), nbs) * P0k);
        Gm.block(pos(b), ok, nbs, nk + l) = row;
    }

    McAddWitness w;
    w.multiplicative = true;
    w.k = k;
    w.s = s;
    w.lambda = lambda;
    w.xi = cf.xi;
    w.eta = cf.eta;
    w.M0k = M0;
    w.P0k = P0k;
    w.Q0k = Q0k;
    w.Gm = Gm;
    w.blocks_out = nb;
    w.tol = tol;
    return {out, w};
}

}  // namespace okubo
