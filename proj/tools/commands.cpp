#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "okubo/katz.hpp"
#include "okubo/sampling.hpp"

namespace okubo::cli {

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_complex(item));
    return out;
}

IStarConvention parse_convention(const std::string& s) {
    if (s == "theorem") return IStarConvention::Theorem;
    if (s == "derivation") return IStarConvention::Derivation;
    throw FormatError("convention must be 'theorem' or 'derivation'");
}

YokoyamaSpec SpecFlags::build() const {
    if (!spec_file.empty()) {
        json j = read_json_file(spec_file);
        YokoyamaSpec s = j.contains("spec") ? j.at("spec").get<YokoyamaSpec>() : j.get<YokoyamaSpec>();
        s.validate();
        return s;
    }
    if (type.empty()) throw FormatError("either --spec or --type is required");
    Kind kind = parse_kind(type);
    if (n < 1) throw FormatError("--n must be positive");
    YokoyamaSpec s;
    if (alpha.empty() && beta.empty() && rho.empty()) {
        s = random_spec(kind, n, seed);
    } else {
        s.kind = kind;
        s.n = n;
        s.alpha = parse_complex_list(alpha);
        s.beta = parse_complex_list(beta);
        s.rho = parse_complex_list(rho);
        s.points = default_points(kind, n);
    }
    if (!points.empty()) s.points = parse_complex_list(points);
    s.validate();
    return s;
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json_file(path, j);
    }
}

int cmd_generate(const GenerateArgs& a) {
    YokoyamaSpec spec = a.spec.build();
    json out;
    if (a.via_chain) {
        auto [sys, log] = katz_chain(spec);
        out = sys;
        out["chain_log"] = log;
    } else {
        out = canonical_system(spec);
    }
    out["spec"] = spec;
    emit(out, a.out);
    return kPass;
}

namespace {

// Okubo form of a Schlesinger system whose residues occupy consecutive row blocks.
std::optional<OkuboSystem> as_okubo(const SchlesingerSystem& s) {
    OkuboSystem o;
    o.points = s.points;
    int n = static_cast<int>(s.residues.at(0).rows()), row = 0;
    o.A = CMatrix::Zero(n, n);
    for (const auto& R : s.residues) {
        int first = -1, last = -1;
        for (int i = 0; i < n; ++i)
            if (R.row(i).cwiseAbs().maxCoeff() > 1e-13) {
                if (first < 0) first = i;
                last = i;
            }
        if (first != row) return std::nullopt;
        o.blocks.sizes.push_back(last - first + 1);
        o.A += R;
        row = last + 1;
    }
    if (row != n) return std::nullopt;
    for (std::size_t k = 0; k < s.residues.size(); ++k)
        if (max_abs(o.residue(static_cast<int>(k)) - s.residues[k]) > 1e-13) return std::nullopt;
    return o;
}

}  // namespace

int cmd_mc(const McArgs& a) {
    OkuboSystem sys = read_json_file(a.input).get<OkuboSystem>();
    bool additive = a.k || a.c || a.rho;
    if (a.mu && additive) throw FormatError("--mu excludes --k/--c/--rho");
    json out;
    if (a.mu) {
        auto [res, w] = middle_convolution_system(okubo_to_schlesinger(sys), parse_complex(*a.mu));
        out["schlesinger"] = res;
        if (auto o = as_okubo(res)) out["okubo"] = *o;
        out["witness"] = witness_to_json(w);
    } else {
        if (!(a.k && a.c && a.rho)) throw FormatError("--k, --c and --rho are required together");
        std::optional<cplx> eta;
        if (a.eta_first) eta = parse_complex(*a.eta_first);
        auto [res, w] = mc_add_system(sys, *a.k, parse_complex(*a.c), parse_complex(*a.rho), eta);
        out = res;
        out["witness"] = witness_to_json(w);
    }
    emit(out, a.out);
    return kPass;
}

int cmd_connection(const ConnectionArgs& a) {
    YokoyamaSpec spec = a.spec.build();
    PathConfig cfg = PathConfig::make_default(spec.points);
    ConnectionData conn;
    if (a.method == "closed-form") {
        ClosedFormOptions opt;
        opt.istar = parse_convention(a.convention);
        conn = closed_form_connection(spec, cfg, opt);
    } else if (a.method == "recurrence") {
        conn = recurrence_connection(spec, cfg);
    } else if (a.method == "numeric") {
        conn = numeric_connection(canonical_system(spec), cfg);
    } else {
        throw FormatError("--method must be closed-form, recurrence or numeric");
    }
    json out = connection_to_json(conn);
    out["type"] = kind_name(spec.kind);
    out["spec"] = spec;
    out["method"] = a.method;
    emit(out, a.out);
    return kPass;
}

int cmd_monodromy(const MonodromyArgs& a) {
    if (!a.closed_form && !a.numeric) throw FormatError("choose --closed-form and/or --numeric");
    std::optional<YokoyamaSpec> spec;
    std::optional<OkuboSystem> sys;
    if (!a.input.empty()) {
        json j = read_json_file(a.input);
        sys = j.get<OkuboSystem>();
        if (j.contains("spec")) spec = j.at("spec").get<YokoyamaSpec>();
    }
    if (a.spec.given()) spec = a.spec.build();
    if (!sys && spec) sys = canonical_system(*spec);
    if (!sys) throw FormatError("need --input or spec flags");
    if (a.closed_form && !spec) throw FormatError("--closed-form needs a Yokoyama spec");
    PathConfig cfg = PathConfig::make_default(sys->points);
    json out;
    if (spec) {
        out["type"] = kind_name(spec->kind);
        out["spec"] = *spec;
    }
    out["config"] = cfg;
    std::optional<MonodromyTuple> cf, num;
    if (a.closed_form) {
        ClosedFormOptions opt;
        opt.istar = parse_convention(a.convention);
        ConnectionData conn = closed_form_connection(*spec, cfg, opt);
        cf = assemble_monodromy(conn, *spec);
        out["closed_form"] = *cf;
        out["C"] = connection_to_json(conn);
    }
    if (a.numeric) {
        num = numeric_monodromy(*sys, cfg);
        out["numeric"] = *num;
    }
    out["monodromy"] = cf ? *cf : *num;
    if (cf && num) {
        json blocks = json::array();
        double worst = 0.0;
        for (std::size_t k = 0; k < cf->M.size(); ++k) {
            CMatrix d = cf->M[k] - num->M[k];
            blocks.push_back(matrix_to_json(d));
            worst = std::max(worst, max_abs(d));
        }
        out["residuals"] = {{"entrywise", blocks}, {"max_abs", worst}};
    }
    emit(out, a.out);
    return kPass;
}

int cmd_det_check(const DetCheckArgs& a) {
    YokoyamaSpec spec = a.spec.build();
    OkuboSystem sys = canonical_system(spec);
    PathConfig cfg = PathConfig::make_default(spec.points);
    std::vector<cplx> xs = a.x.empty() ? std::vector<cplx>{cfg.base, cfg.base + cplx(0.05, 0.1),
                                                           cfg.base + cplx(-0.1, 0.05)}
                                       : parse_complex_list(a.x);
    json rows = json::array();
    double worst = 0.0;
    for (cplx x : xs) {
        cplx want = okubo_determinant(spec, x, cfg);
        cplx got = numeric_canonical_solution_at(sys, cfg, x).determinant();
        double rel = std::abs(got - want) / std::abs(want);
        worst = std::max(worst, rel);
        rows.push_back({{"x", complex_to_json(x)},
                        {"closed_form", complex_to_json(want)},
                        {"numeric", complex_to_json(got)},
                        {"relative_error", rel}});
    }
    bool ok = worst <= a.tol;
    emit(json{{"type", kind_name(spec.kind)}, {"points", rows}, {"max_relative_error", worst}, {"tolerance", a.tol},
              {"pass", ok}},
         a.out);
    return ok ? kPass : kFail;
}

int cmd_verify(const VerifyArgs& a) {
    YokoyamaSpec spec = a.spec.build();
    PathConfig cfg = PathConfig::make_default(spec.points);
    SuiteOptions opt;
    opt.tol = a.tol;
    opt.istar = parse_convention(a.convention);
    std::optional<OkuboSystem> sys;
    if (!a.input.empty()) sys = read_json_file(a.input).get<OkuboSystem>();
    Report rep = verify_spec(spec, cfg, opt, sys ? &*sys : nullptr);
    json out = report_to_json(rep);
    out["type"] = kind_name(spec.kind);
    out["spec"] = spec;
    emit(out, a.out);
    for (const auto& c : rep.checks)
        if (!c.pass) std::cerr << "FAIL " << c.name << ": residual " << c.value << " > " << c.reference << "\n";
    return rep.pass() ? kPass : kFail;
}

}  // namespace okubo::cli
