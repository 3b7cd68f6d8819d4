#pragma once

#include <string>

#include <json.hpp>

#include "okubo/core.hpp"

namespace okubo {

using json = nlohmann::json;

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json complex_list_to_json(const std::vector<cplx>& v);
std::vector<cplx> complex_list_from_json(const json& j);
json matrix_to_json(const CMatrix& M);
CMatrix matrix_from_json(const json& j);

void to_json(json& j, const BlockStructure& b);
void from_json(const json& j, BlockStructure& b);
void to_json(json& j, const OkuboSystem& s);
void from_json(const json& j, OkuboSystem& s);
void to_json(json& j, const SchlesingerSystem& s);
void from_json(const json& j, SchlesingerSystem& s);
void to_json(json& j, const ExponentProfile& p);
void from_json(const json& j, ExponentProfile& p);
void to_json(json& j, const PathConfig& c);
void from_json(const json& j, PathConfig& c);
void to_json(json& j, const MonodromyTuple& m);
void from_json(const json& j, MonodromyTuple& m);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// Parses "re+imi", "re-imi", "re", "imi", "i", "-i" (also accepts j for i).
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

}  // namespace okubo
