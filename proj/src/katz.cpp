#include "okubo/katz.hpp"

#include <string>

namespace okubo {

namespace {

void check_residual(const CMatrix& M, const CMatrix& PQ, double tol, const char* what) {
    double scale = std::max(1.0, max_abs(M));
    if (max_abs(M - PQ) > std::max(tol, 1e-10) * 10.0 * scale)
        throw RankError(std::string("factor residual too large in ") + what);
}

CMatrix selector(const std::vector<int>& sizes, int k) {
    int n = 0, off = 0;
    for (int i = 0; i < static_cast<int>(sizes.size()); ++i) {
        if (i < k) off += sizes[i];
        n += sizes[i];
    }
    CMatrix E = CMatrix::Zero(n, n);
    for (int q = 0; q < sizes[k]; ++q) E(off + q, off + q) = 1.0;
    return E;
}

}  // namespace

int ReductionWitness::reduced_dim() const { return m; }

SchlesingerSystem add_system(const SchlesingerSystem& sys, const std::vector<cplx>& a) {
    if (a.size() != sys.residues.size()) throw ShapeError("addition needs one scalar per point");
    SchlesingerSystem out = sys;
    for (std::size_t k = 0; k < a.size(); ++k)
        out.residues[k] += a[k] * CMatrix::Identity(sys.dim(), sys.dim());
    return out;
}

MonodromyTuple add_monodromy(const MonodromyTuple& mon, const std::vector<cplx>& lambdas) {
    if (lambdas.size() != mon.M.size()) throw ShapeError("addition needs one scalar per point");
    MonodromyTuple out = mon;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (lambdas[k] == cplx(0.0)) throw ZeroScalar("multiplicative addition by zero");
        out.M[k] *= lambdas[k];
    }
    return out;
}

OkuboSystem convolve_system(const SchlesingerSystem& sys, cplx mu) {
    sys.validate();
    int n = sys.dim();
    int r = static_cast<int>(sys.residues.size());
    OkuboSystem out;
    out.blocks.sizes.assign(r, n);
    out.points = sys.points;
    out.A = CMatrix::Zero(n * r, n * r);
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < r; ++j) {
            CMatrix blk = sys.residues[j];
            if (j == k) blk += mu * CMatrix::Identity(n, n);
            out.A.block(k * n, j * n, n, n) = blk;
        }
    return out;
}

ReductionWitness factor_residues(const SchlesingerSystem& sys, cplx mu, double tol) {
    sys.validate();
    ReductionWitness w;
    w.parameter = mu;
    w.tol = tol;
    for (const auto& A : sys.residues) {
        double t = tol < 0 ? default_rank_tol(A) : tol;
        RankFactorization f = rank_factorization(A, t);
        check_residual(A, f.P * f.Q, t, "residue factorization");
        w.P.push_back(f.P);
        w.Q.push_back(f.Q);
        w.S.push_back(right_inverse(f.Q));
        w.ranks.push_back(f.rank);
    }
    return w;
}

SchlesingerSystem k_reduce_system(const OkuboSystem& conv, const ReductionWitness& w) {
    int r = conv.blocks.count();
    if (static_cast<int>(w.P.size()) != r || static_cast<int>(w.Q.size()) != r)
        throw ShapeError("witness does not match the number of points");
    int n = r ? conv.blocks.sizes[0] : 0;
    int nt = 0;
    std::vector<int> off;
    for (int k = 0; k < r; ++k) {
        if (conv.blocks.sizes[k] != n || w.P[k].rows() != n || w.Q[k].cols() != n ||
            w.P[k].cols() != w.Q[k].rows())
            throw ShapeError("witness factors do not match the convolution");
        off.push_back(nt);
        nt += static_cast<int>(w.Q[k].rows());
    }
    cplx mu = w.parameter;
    SchlesingerSystem out;
    out.points = conv.points;
    for (int k = 0; k < r; ++k) {
        CMatrix Bk = CMatrix::Zero(nt, nt);
        int nk = static_cast<int>(w.Q[k].rows());
        for (int j = 0; j < r; ++j) {
            int nj = static_cast<int>(w.P[j].cols());
            CMatrix blk = w.Q[k] * w.P[j];
            if (j == k) blk += mu * CMatrix::Identity(nk, nk);
            Bk.block(off[k], off[j], nk, nj) = blk;
        }
        out.residues.push_back(Bk);
    }
    return out;
}

SchlesingerSystem l_reduce_system(const SchlesingerSystem& ksys, const std::vector<int>& block_sizes, cplx mu,
                                  ReductionWitness* w, double tol) {
    int r = static_cast<int>(ksys.residues.size());
    if (static_cast<int>(block_sizes.size()) != r) throw ShapeError("block layout does not match residues");
    int nt = 0;
    for (int s : block_sizes) nt += s;
    if (ksys.dim() != nt && r > 0) throw ShapeError("block layout does not match dimension");
    CMatrix B = CMatrix::Zero(nt, nt);
    for (const auto& R : ksys.residues) B += R;
    double t = tol < 0 ? default_rank_tol(B) : tol;
    RankFactorization f = rank_factorization(B, t);
    check_residual(B, f.P * f.Q, t, "L-reduction");
    CMatrix S0 = right_inverse(f.Q);
    SchlesingerSystem out;
    out.points = ksys.points;
    for (int k = 0; k < r; ++k) out.residues.push_back(f.Q * selector(block_sizes, k) * f.P);
    if (w) {
        w->P0 = f.P;
        w->Q0 = f.Q;
        w->S0 = S0;
        w->m = f.rank;
        w->parameter = mu;
        w->tol = t;
    }
    return out;
}

std::pair<SchlesingerSystem, ReductionWitness> middle_convolution_system(const SchlesingerSystem& sys, cplx mu,
                                                                         double tol) {
    ReductionWitness w = factor_residues(sys, mu, tol);
    OkuboSystem conv = convolve_system(sys, mu);
    SchlesingerSystem ksys = k_reduce_system(conv, w);
    SchlesingerSystem out = l_reduce_system(ksys, w.ranks, mu, &w, tol);
    return {out, w};
}

MonodromyTuple convolve_monodromy(const MonodromyTuple& mon, cplx lambda) {
    if (lambda == cplx(0.0)) throw ZeroScalar("convolution parameter is zero");
    int n = mon.dim();
    int r = static_cast<int>(mon.M.size());
    CMatrix I = CMatrix::Identity(n, n);
    MonodromyTuple out;
    out.cfg = mon.cfg;
    for (int k = 0; k < r; ++k) {
        CMatrix N = CMatrix::Identity(n * r, n * r);
        for (int j = 0; j < r; ++j) {
            CMatrix blk;
            if (j < k) blk = lambda * (mon.M[j] - I);
            else if (j == k) blk = lambda * mon.M[k];
            else blk = mon.M[j] - I;
            N.block(k * n, j * n, n, n) = blk;
        }
        out.M.push_back(N);
    }
    return out;
}

std::pair<MonodromyTuple, ReductionWitness> middle_convolution_monodromy(const MonodromyTuple& mon, cplx lambda,
                                                                         double tol) {
    if (lambda == cplx(0.0)) throw ZeroScalar("convolution parameter is zero");
    int n = mon.dim();
    int r = static_cast<int>(mon.M.size());
    CMatrix I = CMatrix::Identity(n, n);
    ReductionWitness w;
    w.multiplicative = true;
    w.parameter = lambda;
    int nt = 0;
    std::vector<int> off;
    for (const auto& M : mon.M) {
        CMatrix X = M - I;
        double t = tol < 0 ? default_rank_tol(X) : tol;
        RankFactorization f = rank_factorization(X, t);
        check_residual(X, f.P * f.Q, t, "monodromy factorization");
        w.P.push_back(f.P);
        w.Q.push_back(f.Q);
        w.S.push_back(right_inverse(f.Q));
        w.ranks.push_back(f.rank);
        off.push_back(nt);
        nt += f.rank;
    }
    std::vector<CMatrix> Nt;
    for (int k = 0; k < r; ++k) {
        CMatrix N = CMatrix::Identity(nt, nt);
        int nk = w.ranks[k];
        for (int j = 0; j < r; ++j) {
            CMatrix blk = w.Q[k] * w.P[j];
            if (j == k) blk = lambda * (blk + CMatrix::Identity(nk, nk));
            else if (j < k) blk *= lambda;
            N.block(off[k], off[j], nk, w.ranks[j]) = blk;
        }
        Nt.push_back(N);
    }
    CMatrix N0 = CMatrix::Identity(nt, nt);
    for (const auto& N : Nt) N0 = N0 * N;
    CMatrix X0 = N0 - CMatrix::Identity(nt, nt);
    double t0 = tol < 0 ? default_rank_tol(X0) : tol;
    RankFactorization f0 = rank_factorization(X0, t0);
    check_residual(X0, f0.P * f0.Q, t0, "L-reduction");
    w.P0 = f0.P;
    w.Q0 = f0.Q;
    w.S0 = right_inverse(f0.Q);
    w.m = f0.rank;
    w.tol = t0;
    MonodromyTuple out;
    out.cfg = mon.cfg;
    for (const auto& N : Nt) out.M.push_back(w.Q0 * N * w.S0);
    return {out, w};
}

ComplementFactorization complement_factorization(const CMatrix& X, const BlockStructure& blocks, int k, double tol) {
    blocks.validate();
    int n = blocks.total();
    if (X.rows() != n || X.cols() != n) throw ShapeError("matrix does not match block structure");
    if (k < 0 || k >= blocks.count()) throw IndexError("block index out of range");
    int ok = blocks.offset(k), nk = blocks.sizes[k];
    double scale = std::max(1.0, max_abs(X));
    CMatrix Xkk = X.block(ok, ok, nk, nk);
    if (smallest_singular_value(Xkk) <= 1e-8 * scale) throw SingularBlock("diagonal block k is not invertible");
    std::vector<int> oth;
    for (int i = 0; i < n; ++i)
        if (i < ok || i >= ok + nk) oth.push_back(i);
    int no = static_cast<int>(oth.size());
    CMatrix Xoo(no, no), Xok(no, nk), Xko(nk, no);
    for (int a = 0; a < no; ++a) {
        for (int b = 0; b < no; ++b) Xoo(a, b) = X(oth[a], oth[b]);
        for (int q = 0; q < nk; ++q) {
            Xok(a, q) = X(oth[a], ok + q);
            Xko(q, a) = X(ok + q, oth[a]);
        }
    }
    CMatrix S = Xoo - Xok * Xkk.partialPivLu().solve(Xko);
    RankFactorization f = rank_factorization(S, tol * scale);
    if (f.rank + nk < nk) throw RankError("rank of X below n_k");
    ComplementFactorization out;
    out.xi = f.P;
    out.eta = f.Q;
    out.l = f.rank;
    if (max_abs(S - out.xi * out.eta) > tol * scale * 10.0) throw RankError("complement factor residual too large");
    return out;
}

json witness_to_json(const ReductionWitness& w) {
    json P = json::array(), Q = json::array(), S = json::array();
    for (std::size_t k = 0; k < w.P.size(); ++k) {
        P.push_back(matrix_to_json(w.P[k]));
        Q.push_back(matrix_to_json(w.Q[k]));
        S.push_back(matrix_to_json(w.S[k]));
    }
    return json{{"kind", w.multiplicative ? "MC" : "mc"},
                {"parameter", complex_to_json(w.parameter)},
                {"tol", w.tol},
                {"ranks", w.ranks},
                {"m", w.m},
                {"P", P},
                {"Q", Q},
                {"S", S},
                {"P0", matrix_to_json(w.P0)},
                {"Q0", matrix_to_json(w.Q0)},
                {"S0", matrix_to_json(w.S0)}};
}

json witness_to_json(const McAddWitness& w) {
    json j{{"kind", w.multiplicative ? "MCadd" : "mcadd"},
           {"k", w.k},
           {"xi", matrix_to_json(w.xi)},
           {"eta", matrix_to_json(w.eta)},
           {"blocks", w.blocks_out},
           {"tol", w.tol}};
    if (w.multiplicative) {
        j["s"] = complex_to_json(w.s);
        j["lambda"] = complex_to_json(w.lambda);
        j["M0k"] = matrix_to_json(w.M0k);
        j["P0k"] = matrix_to_json(w.P0k);
        j["Q0k"] = matrix_to_json(w.Q0k);
        j["G"] = matrix_to_json(w.Gm);
    } else {
        j["c"] = complex_to_json(w.c);
        j["rho"] = complex_to_json(w.rho);
        j["G"] = matrix_to_json(w.G);
        j["GQ"] = matrix_to_json(w.GQ);
    }
    return j;
}

}  // namespace okubo
