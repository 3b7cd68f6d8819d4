#pragma once

#include <optional>
#include <string>

#include "okubo/verify.hpp"

namespace okubo::cli {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

struct SpecFlags {
    std::string spec_file;
    std::string type;
    int n = 0;
    std::string alpha, beta, rho, points;
    std::uint64_t seed = 1;

    YokoyamaSpec build() const;
    bool given() const { return !spec_file.empty() || !type.empty(); }
};

std::vector<cplx> parse_complex_list(const std::string& text);
IStarConvention parse_convention(const std::string& s);

// Writes to path, or stdout when path is empty or "-".
void emit(const json& j, const std::string& path);

struct GenerateArgs {
    SpecFlags spec;
    bool via_chain = false;
    std::string out;
};
int cmd_generate(const GenerateArgs& a);

struct McArgs {
    std::string input, out;
    std::optional<std::string> mu, c, rho, eta_first;
    std::optional<int> k;
};
int cmd_mc(const McArgs& a);

struct ConnectionArgs {
    SpecFlags spec;
    std::string method = "closed-form";
    std::string convention = "theorem";
    std::string out;
};
int cmd_connection(const ConnectionArgs& a);

struct MonodromyArgs {
    SpecFlags spec;
    std::string input, out;
    bool closed_form = false, numeric = false;
    std::string convention = "theorem";
};
int cmd_monodromy(const MonodromyArgs& a);

struct DetCheckArgs {
    SpecFlags spec;
    std::string x, out;
    double tol = 1e-7;
};
int cmd_det_check(const DetCheckArgs& a);

struct VerifyArgs {
    SpecFlags spec;
    std::string input, out;
    double tol = -1.0;
    std::string convention = "theorem";
};
int cmd_verify(const VerifyArgs& a);

}  // namespace okubo::cli
