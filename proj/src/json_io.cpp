#include "okubo/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace okubo {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw FormatError("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_list_to_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (cplx z : v) out.push_back(complex_to_json(z));
    return out;
}

std::vector<cplx> complex_list_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("expected an array of complex numbers");
    std::vector<cplx> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

json matrix_to_json(const CMatrix& M) {
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index k = 0; k < M.cols(); ++k) data.push_back(complex_to_json(M(i, k)));
    return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw FormatError("matrix must be {rows, cols, data}");
    auto rows = j.at("rows").get<Eigen::Index>();
    auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw FormatError("matrix data length does not match rows*cols");
    CMatrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
    return M;
}

void to_json(json& j, const BlockStructure& b) { j = b.sizes; }
void from_json(const json& j, BlockStructure& b) { b.sizes = j.get<std::vector<int>>(); }

void to_json(json& j, const OkuboSystem& s) {
    j = json{{"blocks", s.blocks}, {"points", complex_list_to_json(s.points)}, {"A", matrix_to_json(s.A)}};
}

void from_json(const json& j, OkuboSystem& s) {
    s.blocks = j.at("blocks").get<BlockStructure>();
    s.points = complex_list_from_json(j.at("points"));
    s.A = matrix_from_json(j.at("A"));
    s.validate();
}

void to_json(json& j, const SchlesingerSystem& s) {
    json res = json::array();
    for (const auto& R : s.residues) res.push_back(matrix_to_json(R));
    j = json{{"points", complex_list_to_json(s.points)}, {"residues", res}};
}

void from_json(const json& j, SchlesingerSystem& s) {
    s.points = complex_list_from_json(j.at("points"));
    s.residues.clear();
    for (const auto& r : j.at("residues")) s.residues.push_back(matrix_from_json(r));
    s.validate();
}

void to_json(json& j, const ExponentProfile& p) {
    json loc = json::array();
    for (const auto& blk : p.local) loc.push_back(complex_list_to_json(blk));
    j = json{{"local", loc}, {"infinity", complex_list_to_json(p.infinity)}};
}

void from_json(const json& j, ExponentProfile& p) {
    p.local.clear();
    for (const auto& blk : j.at("local")) p.local.push_back(complex_list_from_json(blk));
    p.infinity = complex_list_from_json(j.at("infinity"));
}

void to_json(json& j, const PathConfig& c) {
    j = json{{"base", complex_to_json(c.base)},
             {"points", complex_list_to_json(c.points)},
             {"theta", c.theta},
             {"radius", c.radius},
             {"rtol", c.rtol},
             {"atol", c.atol},
             {"series_tol", c.series_tol},
             {"series_cap", c.series_cap}};
}

void from_json(const json& j, PathConfig& c) {
    c.base = complex_from_json(j.at("base"));
    c.points = complex_list_from_json(j.at("points"));
    c.theta = j.at("theta").get<std::vector<double>>();
    c.radius = j.at("radius").get<std::vector<double>>();
    c.rtol = j.value("rtol", 1e-11);
    c.atol = j.value("atol", 1e-13);
    c.series_tol = j.value("series_tol", 1e-13);
    c.series_cap = j.value("series_cap", 200);
}

void to_json(json& j, const MonodromyTuple& m) {
    json mats = json::array();
    for (const auto& M : m.M) mats.push_back(matrix_to_json(M));
    j = json{{"matrices", mats}};
    if (m.cfg) j["config"] = *m.cfg;
}

void from_json(const json& j, MonodromyTuple& m) {
    m.M.clear();
    for (const auto& x : j.at("matrices")) m.M.push_back(matrix_from_json(x));
    if (j.contains("config")) m.cfg = j.at("config").get<PathConfig>();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << j.dump(2) << '\n';
}

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch == 'j' ? 'i' : ch);
    if (s.empty()) throw FormatError("empty complex literal");
    auto to_double = [&](const std::string& part) -> double {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw FormatError("bad complex literal: " + text);
        }
        if (used != part.size()) throw FormatError("bad complex literal: " + text);
        return v;
    };
    if (s.back() != 'i') return {to_double(s), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not part of an exponent or leading.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(body)};
    return {to_double(body.substr(0, split)), to_double(body.substr(split))};
}

std::string format_complex(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace okubo
