#pragma once

// JSON file formats. Indices are 1-based in files.
//
//   form           {"m": 2, "n": 2, "terms": [{"i":1,"k":1,"j":1,"l":1,"c":1.0}, ...]}
//   x-symmetric    {"m": 3, "d": [...], "A": [[...]], "B": [[...]]}
//   decomposition  {"m": 2, "n": 2, "factors": [[W_p row-major, m·n entries], ...]}
//   support set    {"m": 3, "n": 2, "pairs": [[1,1], [2,2], ...]}
//   Gram point     {"gamma": [...], "rank": 2}

#include "biquad/forms.hpp"
#include "biquad/gram.hpp"
#include "biquad/meig.hpp"
#include "biquad/partsym.hpp"
#include "biquad/simple.hpp"

#include <json.hpp>

#include <string>

namespace biquad::io {

using Json = nlohmann::ordered_json;

/// Throws InvalidInput when the file cannot be read or is not valid JSON.
Json read_json_file(const std::string& path);
/// Writes `text` to a temporary sibling file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& text);
std::string dump(const Json& j);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);

Json form_to_json(const BiquadraticForm& p);
BiquadraticForm form_from_json(const Json& j);

Json xsym_to_json(const XSymmetricData& x);
XSymmetricData xsym_from_json(const Json& j);

/// Reads either file kind; x-symmetric data is expanded into its form.
BiquadraticForm any_form_from_json(const Json& j);

Json decomposition_to_json(const SOSDecomposition& d);
SOSDecomposition decomposition_from_json(const Json& j);

Json support_to_json(const SupportSet& s);
SupportSet support_from_json(const Json& j);

Json gram_point_to_json(const GramPoint& g, int rank);
Json witness_to_json(const FormWitness& w);
Json certificate_to_json(const PSDCertificate& c);
Json meig_to_json(const MEigResult& r);

}  // namespace biquad::io
