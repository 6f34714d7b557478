#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "holant/formula.hpp"
#include "holant/grid.hpp"
#include "holant/signature.hpp"

namespace holant {

using json = nlohmann::json;

Scalar scalar_from_json(const json& j);
json scalar_to_json(const Scalar& s);

Signature signature_from_json(const json& j);
json signature_to_json(const Signature& f);

Mat2 matrix_from_json(const json& j);  // [[a,b],[c,d]] or "I"/"X"/"K1"/"K2"
json matrix_to_json(const Mat2& m);

SignatureGrid grid_from_json(const json& j);
json grid_to_json(const SignatureGrid& g);
SignatureGrid load_grid(const std::string& path);
void save_grid(const SignatureGrid& g, const std::string& path);

PpsHFormula formula_from_json(const json& j);
json formula_to_json(const PpsHFormula& psi);

json read_json_file(const std::string& path);

}  // namespace holant
