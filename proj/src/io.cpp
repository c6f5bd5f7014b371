#include "biquad/io.hpp"

#include "biquad/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace biquad::io {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("field \"") + key + "\": " + e.what());
  }
}

Eigen::MatrixXd matrix_from(const Json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  const auto data = get<std::vector<std::vector<double>>>(j, key);
  if (static_cast<Eigen::Index>(data.size()) != rows) {
    throw InvalidInput(std::string("field \"") + key + "\" has the wrong number of rows");
  }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(data[r].size()) != cols) {
      throw InvalidInput(std::string("field \"") + key + "\" has a row of the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = data[r][c];
  }
  return out;
}

int positive(const Json& j, const char* key) {
  const int v = get<int>(j, key);
  if (v < 1) throw InvalidInput(std::string("field \"") + key + "\" must be positive");
  return v;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

Json form_to_json(const BiquadraticForm& p) {
  Json terms = Json::array();
  for (const MonomialTerm& t : p.terms()) {
    terms.push_back({{"i", t.i + 1}, {"k", t.k + 1}, {"j", t.j + 1}, {"l", t.l + 1}, {"c", t.coefficient}});
  }
  return {{"m", p.m()}, {"n", p.n()}, {"terms", terms}};
}

BiquadraticForm form_from_json(const Json& j) {
  const int m = positive(j, "m");
  const int n = positive(j, "n");
  const Json& raw = j.at("terms");
  if (!raw.is_array()) throw InvalidInput("field \"terms\" must be an array");
  std::vector<MonomialTerm> terms;
  for (const Json& t : raw) {
    MonomialTerm term{get<int>(t, "i") - 1, get<int>(t, "k") - 1, get<int>(t, "j") - 1, get<int>(t, "l") - 1,
                      get<double>(t, "c")};
    if (term.i < 0 || term.i >= m || term.k < 0 || term.k >= m || term.j < 0 || term.j >= n || term.l < 0 ||
        term.l >= n) {
      throw InvalidInput("term index out of range");
    }
    terms.push_back(term);
  }
  return BiquadraticForm::from_terms(m, n, terms);
}

Json xsym_to_json(const XSymmetricData& x) {
  return {{"m", x.m}, {"d", to_json(x.d)}, {"A", to_json(x.a.matrix())}, {"B", to_json(x.b.matrix())}};
}

XSymmetricData xsym_from_json(const Json& j) {
  XSymmetricData out;
  out.m = positive(j, "m");
  const auto d = get<std::vector<double>>(j, "d");
  if (d.empty()) throw InvalidInput("field \"d\" must not be empty");
  const auto n = static_cast<Eigen::Index>(d.size());
  out.d = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
  const Eigen::MatrixXd a = matrix_from(j, "A", n, n);
  const Eigen::MatrixXd b = matrix_from(j, "B", n, n);
  if (a != a.transpose() || b != b.transpose()) throw InvalidInput("A and B must be symmetric");
  out.a = SymMatrix(a);
  out.b = SymMatrix(b);
  out.validate();
  return out;
}

BiquadraticForm any_form_from_json(const Json& j) {
  if (j.is_object() && j.contains("terms")) return form_from_json(j);
  if (j.is_object() && j.contains("A")) return reconstruct(xsym_from_json(j));
  throw InvalidInput("expected a form (\"terms\") or x-symmetric data (\"A\", \"B\", \"d\")");
}

Json decomposition_to_json(const SOSDecomposition& d) {
  Json factors = Json::array();
  for (Eigen::Index p = 0; p < d.size(); ++p) factors.push_back(to_json(Eigen::VectorXd(d.columns().col(p))));
  return {{"m", d.m()}, {"n", d.n()}, {"factors", factors}};
}

SOSDecomposition decomposition_from_json(const Json& j) {
  const int m = positive(j, "m");
  const int n = positive(j, "n");
  const auto factors = get<std::vector<std::vector<double>>>(j, "factors");
  Eigen::MatrixXd cols(m * n, static_cast<Eigen::Index>(factors.size()));
  for (std::size_t p = 0; p < factors.size(); ++p) {
    if (factors[p].size() != static_cast<std::size_t>(m * n)) throw InvalidInput("factor has the wrong length");
    for (int e = 0; e < m * n; ++e) cols(e, static_cast<Eigen::Index>(p)) = factors[p][static_cast<std::size_t>(e)];
  }
  return SOSDecomposition(m, n, std::move(cols));
}

Json support_to_json(const SupportSet& s) {
  Json pairs = Json::array();
  for (const auto& [i, j] : s.pairs) pairs.push_back({i + 1, j + 1});
  return {{"m", s.m}, {"n", s.n}, {"pairs", pairs}};
}

SupportSet support_from_json(const Json& j) {
  SupportSet out{positive(j, "m"), positive(j, "n"), {}};
  for (const auto& pair : get<std::vector<std::vector<int>>>(j, "pairs")) {
    if (pair.size() != 2) throw InvalidInput("support pairs must have two entries");
    out.pairs.emplace_back(pair[0] - 1, pair[1] - 1);
  }
  return out;
}

Json gram_point_to_json(const GramPoint& g, int rank) { return {{"gamma", g.gamma}, {"rank", rank}}; }

Json witness_to_json(const FormWitness& w) {
  return {{"x", to_json(w.x)}, {"y", to_json(w.y)}, {"value", w.value}};
}

Json certificate_to_json(const PSDCertificate& c) {
  Json out = {{"verdict", c.verdict == Verdict::PSD ? "psd" : "not-psd"},
              {"q_eigenvalues", to_json(c.q_eigs)},
              {"r_eigenvalues", to_json(c.r_eigs)}};
  if (c.witness) out["witness"] = witness_to_json(*c.witness);
  return out;
}

Json meig_to_json(const MEigResult& r) {
  Json pairs = Json::array();
  for (const MEigenpair& p : r.pairs) {
    pairs.push_back({{"lambda", p.lambda},
                     {"x", to_json(p.x)},
                     {"y", to_json(p.y)},
                     {"residual_x", p.residual_x},
                     {"residual_y", p.residual_y}});
  }
  return {{"pairs", pairs}, {"discarded_starts", r.discarded_starts}};
}

}  // namespace biquad::io
