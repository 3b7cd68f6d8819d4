#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace okubo;
using namespace okubo::cli;

namespace {

void add_spec_flags(CLI::App* app, SpecFlags& s) {
    auto* file = app->add_option("--spec", s.spec_file, "Yokoyama spec JSON (or a generate output carrying \"spec\")");
    auto* type = app->add_option("--type", s.type, "I, I*, II or III")->excludes(file);
    app->add_option("--n", s.n, "size parameter: dimension for I/I*, half dimension (floor) for II/III")->needs(type);
    app->add_option("--alpha", s.alpha, "comma-separated complex list")->needs(type);
    app->add_option("--beta", s.beta, "comma-separated complex list")->needs(type);
    app->add_option("--rho", s.rho, "comma-separated complex list")->needs(type);
    app->add_option("--points", s.points, "comma-separated singular points");
    app->add_option("--seed", s.seed, "seed for random generic exponents when none are given");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Katz operations, Yokoyama canonical systems and their connection data.\n"
        "Complex values are written re+imi, re-imi, re or imi (j is accepted for i).\n"
        "Values starting with '-' must be attached with '=', e.g. --alpha=-0.3+0.2i,0.1i."};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write the canonical Okubo system of a Yokoyama spec");
    add_spec_flags(g, gen.spec);
    g->add_flag("--via-chain", gen.via_chain, "build through the Katz chain and include its log");
    g->add_option("-o,--output", gen.out, "output file (default stdout)");

    McArgs mc;
    auto* m = app.add_subcommand("mc", "middle convolution (--mu) or mc with additions (--k --c --rho)");
    m->add_option("input", mc.input, "Okubo system JSON")->required();
    auto* mu = m->add_option("--mu", mc.mu, "convolution parameter");
    m->add_option("--k", mc.k, "0-based block index")->excludes(mu);
    m->add_option("--c", mc.c, "addition parameter")->excludes(mu);
    m->add_option("--rho", mc.rho, "convolution parameter of the addition step")->excludes(mu);
    m->add_option("--eta-first", mc.eta_first, "normalize the first nonzero entry of eta");
    m->add_option("-o,--output", mc.out, "output file (default stdout)");

    ConnectionArgs con;
    auto* c = app.add_subcommand("connection", "connection coefficients C^{(kj)}");
    add_spec_flags(c, con.spec);
    c->add_option("--method", con.method, "closed-form, recurrence or numeric")
        ->check(CLI::IsMember({"closed-form", "recurrence", "numeric"}));
    c->add_option("--istar-convention", con.convention, "theorem or derivation")
        ->check(CLI::IsMember({"theorem", "derivation"}));
    c->add_option("-o,--output", con.out, "output file (default stdout)");

    MonodromyArgs mon;
    auto* mo = app.add_subcommand("monodromy", "monodromy tuple from the closed forms and/or numerics");
    add_spec_flags(mo, mon.spec);
    mo->add_option("--input", mon.input, "Okubo system JSON");
    mo->add_flag("--closed-form", mon.closed_form, "assemble from the closed-form connection coefficients");
    mo->add_flag("--numeric", mon.numeric, "numerical analytic continuation");
    mo->add_option("--istar-convention", mon.convention, "theorem or derivation")
        ->check(CLI::IsMember({"theorem", "derivation"}));
    mo->add_option("-o,--output", mon.out, "output file (default stdout)");

    DetCheckArgs det;
    auto* d = app.add_subcommand("det-check", "determinant of the canonical solution matrix vs the closed form");
    add_spec_flags(d, det.spec);
    d->add_option("--x", det.x, "comma-separated evaluation points (default: near the base point)");
    d->add_option("--tol", det.tol, "relative tolerance");
    d->add_option("-o,--output", det.out, "output file (default stdout)");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "run the numerical checks for one spec");
    add_spec_flags(v, ver.spec);
    v->add_option("--input", ver.input, "use this Okubo system for the numerical side");
    v->add_option("--tol", ver.tol, "override every check tolerance");
    v->add_option("--istar-convention", ver.convention, "theorem or derivation")
        ->check(CLI::IsMember({"theorem", "derivation"}));
    v->add_option("-o,--output", ver.out, "report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*m) return cmd_mc(mc);
        if (*c) return cmd_connection(con);
        if (*mo) return cmd_monodromy(mon);
        if (*d) return cmd_det_check(det);
        if (*v) return cmd_verify(ver);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.numerical() ? kNumerical : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
