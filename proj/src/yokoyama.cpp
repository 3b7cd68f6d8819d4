#include "okubo/yokoyama.hpp"

#include <algorithm>
#include <functional>

#include "okubo/katz.hpp"

namespace okubo {

namespace {

cplx prod_except(const std::vector<cplx>& v, std::size_t skip, const std::function<cplx(cplx)>& f) {
    cplx p = 1.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (k != skip) p *= f(v[k]);
    return p;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

cplx checked_den(cplx d, const char* what) {
    if (std::abs(d) < 1e-13) throw GenericityError(std::string("vanishing denominator: ") + what);
    return d;
}

// Product of (x - v_k) over k != skip, rejected if it vanishes.
cplx diff_prod(cplx x, const std::vector<cplx>& v, std::size_t skip, const char* what) {
    return checked_den(prod_except(v, skip, [x](cplx y) { return x - y; }), what);
}

std::vector<cplx> repeat(cplx z, int times) { return std::vector<cplx>(static_cast<std::size_t>(std::max(times, 0)), z); }

double int_dist(cplx z) { return std::abs(z - std::round(z.real())); }

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::I: return "I";
        case Kind::IStar: return "I*";
        case Kind::II: return "II";
        case Kind::III: return "III";
    }
    return "?";
}

Kind parse_kind(const std::string& s) {
    if (s == "I") return Kind::I;
    if (s == "I*" || s == "Istar" || s == "IStar") return Kind::IStar;
    if (s == "II") return Kind::II;
    if (s == "III") return Kind::III;
    throw UnsupportedType("unsupported type " + s);
}

int YokoyamaSpec::dim() const {
    switch (kind) {
        case Kind::I:
        case Kind::IStar: return n;
        case Kind::II: return 2 * n;
        case Kind::III: return 2 * n + 1;
    }
    return 0;
}

BlockStructure YokoyamaSpec::blocks() const {
    switch (kind) {
        case Kind::I: return {{n - 1, 1}};
        case Kind::IStar: return {std::vector<int>(static_cast<std::size_t>(n), 1)};
        case Kind::II: return {{n, n}};
        case Kind::III: return {{n + 1, n}};
    }
    return {};
}

std::vector<cplx> YokoyamaSpec::diagonal() const {
    std::vector<cplx> d = alpha;
    d.insert(d.end(), beta.begin(), beta.end());
    return d;
}

ExponentProfile YokoyamaSpec::profile() const {
    ExponentProfile p;
    auto d = diagonal();
    auto bl = blocks();
    std::size_t pos = 0;
    for (int s : bl.sizes) {
        p.local.emplace_back(d.begin() + static_cast<long>(pos), d.begin() + static_cast<long>(pos + s));
        pos += static_cast<std::size_t>(s);
    }
    switch (kind) {
        case Kind::I: p.infinity = rho; break;
        case Kind::IStar:
            p.infinity = repeat(rho.at(0), n - 1);
            p.infinity.push_back(rho.at(1));
            break;
        case Kind::II:
        case Kind::III: {
            int m = kind == Kind::II ? n - 1 : n;
            p.infinity = repeat(rho.at(0), n);
            auto r2 = repeat(rho.at(1), m);
            p.infinity.insert(p.infinity.end(), r2.begin(), r2.end());
            p.infinity.push_back(rho.at(2));
            break;
        }
    }
    return p;
}

cplx YokoyamaSpec::fuchs_defect() const { return profile().fuchs_defect(); }

void YokoyamaSpec::validate(double fuchs_tol) const {
    std::size_t na = 0, nb = 0, nr = 0, np = 2;
    int nmin = 1;
    switch (kind) {
        case Kind::I: na = n; nr = n; nmin = 2; break;
        case Kind::IStar: na = n; nr = 2; np = n; nmin = 2; break;
        case Kind::II: na = n; nb = n; nr = 3; break;
        case Kind::III: na = n + 1; nb = n; nr = 3; break;
    }
    if (n < nmin) throw ShapeError("size parameter too small for type " + kind_name(kind));
    if (alpha.size() != na || beta.size() != nb || rho.size() != nr)
        throw ShapeError("exponent counts do not match type " + kind_name(kind));
    if (points.size() != np) throw ShapeError("wrong number of singular points");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw ShapeError("singular points must be distinct");
    if (!profile().fuchs_holds(fuchs_tol)) throw GenericityError("Fuchs relation violated");
}

double YokoyamaSpec::genericity_margin() const {
    double m = std::numeric_limits<double>::infinity();
    auto upd = [&](cplx z) { m = std::min(m, int_dist(z)); };
    for (const auto* v : {&alpha, &beta, &rho})
        for (std::size_t i = 0; i < v->size(); ++i) {
            upd((*v)[i]);
            for (std::size_t j = i + 1; j < v->size(); ++j) upd((*v)[i] - (*v)[j]);
        }
    for (const auto* v : {&alpha, &beta})
        for (cplx a : *v)
            for (cplx r : rho) upd(a - r);
    if (kind == Kind::II || kind == Kind::III)
        for (cplx a : alpha)
            for (cplx b : beta) upd(a + b - rho[0] - rho[1]);
    return m;
}

void to_json(json& j, const YokoyamaSpec& s) {
    j = json{{"kind", kind_name(s.kind)},
             {"n", s.n},
             {"alpha", complex_list_to_json(s.alpha)},
             {"beta", complex_list_to_json(s.beta)},
             {"rho", complex_list_to_json(s.rho)},
             {"points", complex_list_to_json(s.points)}};
}

void from_json(const json& j, YokoyamaSpec& s) {
    s.kind = parse_kind(j.at("kind").get<std::string>());
    s.n = j.at("n").get<int>();
    s.alpha = complex_list_from_json(j.at("alpha"));
    s.beta = j.contains("beta") ? complex_list_from_json(j.at("beta")) : std::vector<cplx>{};
    s.rho = complex_list_from_json(j.at("rho"));
    s.points = complex_list_from_json(j.at("points"));
}

OkuboSystem canonical_system(const YokoyamaSpec& spec) {
    spec.validate();
    OkuboSystem sys;
    sys.blocks = spec.blocks();
    sys.points = spec.points;
    int N = spec.dim(), n = spec.n;
    sys.A = CMatrix::Zero(N, N);
    auto d = spec.diagonal();
    for (int i = 0; i < N; ++i) sys.A(i, i) = d[static_cast<std::size_t>(i)];
    const auto& al = spec.alpha;
    const auto& be = spec.beta;
    const auto& r = spec.rho;
    switch (spec.kind) {
        case Kind::I: {
            std::vector<cplx> head(al.begin(), al.end() - 1);
            for (int i = 0; i < n - 1; ++i) {
                sys.A(i, n - 1) = 1.0;
                cplx a = al[static_cast<std::size_t>(i)];
                cplx num = prod_except(r, kNone, [a](cplx x) { return a - x; });
                sys.A(n - 1, i) = -num / diff_prod(a, head, static_cast<std::size_t>(i), "alpha_i - alpha_k");
            }
            break;
        }
        case Kind::IStar:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) sys.A(i, j) = al[static_cast<std::size_t>(j)] - r[0];
            break;
        case Kind::II:
        case Kind::III: {
            int m = static_cast<int>(al.size());
            cplx r1 = r[0], r2 = r[1];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    cplx b = be[static_cast<std::size_t>(j)];
                    cplx num = prod_except(al, static_cast<std::size_t>(i), [&](cplx a) { return a + b - r1 - r2; });
                    if (spec.kind == Kind::II) num *= b - r1;
                    sys.A(i, m + j) = num / diff_prod(b, be, static_cast<std::size_t>(j), "beta_j - beta_k");
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) {
                    cplx a = al[static_cast<std::size_t>(j)];
                    cplx num = prod_except(be, static_cast<std::size_t>(i), [&](cplx b) { return a + b - r1 - r2; });
                    num *= a - r1;
                    if (spec.kind == Kind::III) num *= a - r2;
                    sys.A(m + i, j) = num / diff_prod(a, al, static_cast<std::size_t>(j), "alpha_j - alpha_k");
                }
            break;
        }
    }
    sys.validate();
    return sys;
}

int complement_block(Kind kind) {
    switch (kind) {
        case Kind::I:
        case Kind::II: return 0;
        case Kind::III: return 1;
        case Kind::IStar: break;
    }
    throw UnsupportedType("type I* has no rank-one complement step");
}

XiEta xieta_closed_form(const YokoyamaSpec& spec, std::optional<cplx> rho) {
    spec.validate();
    XiEta out;
    const auto& al = spec.alpha;
    const auto& be = spec.beta;
    const auto& r = spec.rho;
    switch (spec.kind) {
        case Kind::I: {
            if (!rho) throw ShapeError("type I needs the convolution parameter rho");
            cplx p = *rho;
            std::vector<cplx> head(al.begin(), al.end() - 1);
            out.xi = CMatrix::Constant(1, 1, -prod_except(r, kNone, [p](cplx x) { return p - x; }) /
                                                 diff_prod(p, head, kNone, "rho - alpha_k"));
            out.eta = CMatrix::Constant(1, 1, 1.0);
            break;
        }
        case Kind::II: {
            int n = spec.n;
            cplx r1 = r[0], r2 = r[1];
            out.xi.resize(n, 1);
            out.eta.resize(1, n);
            cplx den = diff_prod(r2, al, kNone, "rho_2 - alpha_k");
            for (int i = 0; i < n; ++i) {
                auto si = static_cast<std::size_t>(i);
                out.xi(i, 0) = (r2 - r1) * prod_except(be, si, [r1](cplx b) { return b - r1; }) / den;
                cplx bj = be[si];
                out.eta(0, i) = prod_except(al, kNone, [&](cplx a) { return bj + a - r1 - r2; }) /
                                diff_prod(bj, be, si, "beta_j - beta_k");
            }
            break;
        }
        case Kind::III: {
            int m = spec.n + 1;
            cplx r1 = r[0], r2 = r[1];
            out.xi.resize(m, 1);
            out.eta.resize(1, m);
            cplx den = diff_prod(r2, be, kNone, "rho_2 - beta_k");
            for (int i = 0; i < m; ++i) {
                auto si = static_cast<std::size_t>(i);
                out.xi(i, 0) = prod_except(al, si, [r1](cplx a) { return a - r1; }) / den;
                cplx aj = al[si];
                out.eta(0, i) = (aj - r2) * prod_except(be, kNone, [&](cplx b) { return b + aj - r1 - r2; }) /
                                diff_prod(aj, al, si, "alpha_j - alpha_k");
            }
            break;
        }
        case Kind::IStar: throw UnsupportedType("no rank-one complement for type I*");
    }
    return out;
}

CMatrix xieta_matrix_expression(const YokoyamaSpec& spec, std::optional<cplx> rho) {
    OkuboSystem sys = canonical_system(spec);
    auto bl = sys.blocks;
    cplx p;
    if (spec.kind == Kind::I) {
        if (!rho) throw ShapeError("type I needs the convolution parameter rho");
        p = *rho;
    } else {
        p = spec.rho.at(1);
    }
    int k = complement_block(spec.kind);
    int o = 1 - k;
    CMatrix Dk = sys.block(k, k) - p * CMatrix::Identity(bl.sizes[k], bl.sizes[k]);
    CMatrix Do = sys.block(o, o) - p * CMatrix::Identity(bl.sizes[o], bl.sizes[o]);
    return Do - sys.block(o, k) * Dk.inverse() * sys.block(k, o);
}

YokoyamaSpec swap_exponents(const YokoyamaSpec& spec, int i, int j) {
    auto bl = spec.blocks();
    int N = spec.dim();
    if (i < 0 || j < 0 || i >= N || j >= N) throw IndexError("exponent index out of range");
    auto block_of = [&](int q) {
        for (int b = 0; b < bl.count(); ++b)
            if (q < bl.offset(b) + bl.sizes[b]) return b;
        return -1;
    };
    if (block_of(i) != block_of(j)) throw IndexError("exponents lie in different blocks");
    YokoyamaSpec out = spec;
    int na = static_cast<int>(spec.alpha.size());
    auto ref = [&](int q) -> cplx& {
        return q < na ? out.alpha[static_cast<std::size_t>(q)] : out.beta[static_cast<std::size_t>(q - na)];
    };
    std::swap(ref(i), ref(j));
    return out;
}

OkuboSystem symmetry_conjugate(const OkuboSystem& sys, const YokoyamaSpec& spec, int i, int j) {
    swap_exponents(spec, i, j);  // index checks
    OkuboSystem out = sys;
    out.A.row(i).swap(out.A.row(j));
    out.A.col(i).swap(out.A.col(j));
    return out;
}

ChainStep chain_predecessor(const YokoyamaSpec& spec) {
    spec.validate();
    ChainStep st;
    st.target = spec;
    const auto& a = spec.alpha;
    const auto& b = spec.beta;
    const auto& r = spec.rho;
    int n = spec.n;
    switch (spec.kind) {
        case Kind::I:
            if (n == 2) {
                st.op = "seed";
                st.mu = r[0];
                st.seed = {a[0] - r[0], a[1] - r[0]};
                return st;
            } else {
                YokoyamaSpec src = spec;
                src.n = n - 1;
                st.k = 0;
                st.rho = a[static_cast<std::size_t>(n - 2)];
                st.c = -r[static_cast<std::size_t>(n - 1)];
                src.alpha.assign(a.begin(), a.end() - 2);
                src.alpha.push_back(a.back() + st.rho + st.c);
                src.rho.assign(r.begin(), r.end() - 1);
                st.op = "mcadd";
                st.eta_first = 1.0;
                st.source = src;
                return st;
            }
        case Kind::IStar:
            st.op = "seed";
            st.mu = r[0];
            for (cplx x : a) st.seed.push_back(x - r[0]);
            return st;
        case Kind::II:
            if (n == 1) {
                st.op = "seed";
                st.mu = r[0];
                st.seed = {a[0] - r[0], b[0] - r[0]};
                return st;
            } else {
                YokoyamaSpec src;
                src.kind = Kind::III;
                src.n = n - 1;
                src.points = spec.points;
                cplx bc = -r[0], r2 = b.back();
                for (cplx x : a) src.alpha.push_back(x + r2 + bc);
                src.beta.assign(b.begin(), b.end() - 1);
                src.rho = {r[1], r2, r[2]};
                st.op = "mcadd";
                st.k = 1;
                st.c = bc;
                st.rho = r2;
                st.source = src;
                st.eta_first = xieta_closed_form(src).eta(0, 0);
                return st;
            }
        case Kind::III: {
            YokoyamaSpec src;
            src.kind = Kind::II;
            src.n = n;
            src.points = spec.points;
            cplx ac = -r[0], r2 = a.back();
            src.alpha.assign(a.begin(), a.end() - 1);
            for (cplx x : b) src.beta.push_back(x + r2 + ac);
            src.rho = {r[1], r2, r[2]};
            st.op = "mcadd";
            st.k = 0;
            st.c = ac;
            st.rho = r2;
            st.source = src;
            st.eta_first = xieta_closed_form(src).eta(0, 0);
            return st;
        }
    }
    return st;
}

std::vector<ChainStep> chain_plan(const YokoyamaSpec& spec) {
    std::vector<ChainStep> steps;
    YokoyamaSpec cur = spec;
    while (true) {
        ChainStep st = chain_predecessor(cur);
        steps.push_back(st);
        if (!st.source) break;
        cur = *st.source;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

std::pair<OkuboSystem, json> katz_chain(const YokoyamaSpec& spec) {
    auto steps = chain_plan(spec);
    json log = json::array();
    OkuboSystem sys;
    for (const auto& st : steps) {
        json entry{{"op", st.op}, {"target", st.target}};
        if (st.op == "seed") {
            SchlesingerSystem seed;
            seed.points = st.target.points;
            for (cplx x : st.seed) seed.residues.push_back(CMatrix::Constant(1, 1, x));
            auto [mc, w] = middle_convolution_system(seed, st.mu);
            if (mc.dim() != static_cast<int>(st.seed.size()))
                throw RankError("seed convolution lost rank; exponents not generic");
            sys.blocks.sizes.assign(st.seed.size(), 1);
            sys.points = seed.points;
            sys.A = CMatrix::Zero(mc.dim(), mc.dim());
            for (const auto& R : mc.residues) sys.A += R;
            if (st.target.kind == Kind::I) {
                // (I)_2 has a unit upper-right entry.
                CMatrix G = CMatrix::Identity(2, 2);
                G(1, 1) = st.target.alpha[1] - st.target.rho[0];
                sys.A = G * sys.A * G.inverse();
                entry["gauge"] = matrix_to_json(G);
            }
            sys.validate();
            entry["seed"] = complex_list_to_json(st.seed);
            entry["mu"] = complex_to_json(st.mu);
            entry["witness"] = witness_to_json(w);
        } else {
            auto [next, w] = mc_add_system(sys, st.k, st.c, st.rho, st.eta_first);
            sys = next;
            entry["k"] = st.k;
            entry["c"] = complex_to_json(st.c);
            entry["rho"] = complex_to_json(st.rho);
            entry["eta_first"] = complex_to_json(st.eta_first);
            entry["witness"] = witness_to_json(w);
        }
        entry["system"] = sys;
        log.push_back(entry);
    }
    return {sys, log};
}

}  // namespace okubo
