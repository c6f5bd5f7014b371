// Command-line front end. Exit codes:
//   0 ok / PSD, 1 error, 2 not PSD, 3 not x-symmetric, 4 inconclusive.

#include "biquad/forms.hpp"
#include "biquad/gram.hpp"
#include "biquad/io.hpp"
#include "biquad/kernels.hpp"
#include "biquad/meig.hpp"
#include "biquad/partsym.hpp"
#include "biquad/random.hpp"
#include "biquad/simple.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace biquad;
using io::Json;

namespace {

enum Exit : int { kOk = 0, kError = 1, kNotPsd = 2, kNotXSymmetric = 3, kInconclusive = 4 };

struct Common {
  bool json = false;
  std::uint64_t seed = 0;
  int restarts = 20;
  std::optional<double> tol;
  bool transpose = false;
};

Tolerances tolerances(const Common& c) {
  Tolerances t = Tolerances::from_env();
  if (c.tol) t = t.with_eps(*c.tol);
  return t;
}

BiquadraticForm load_form(const std::string& path, const Common& c) {
  BiquadraticForm p = io::any_form_from_json(io::read_json_file(path));
  return c.transpose ? transpose_xy(p) : p;
}

const char* status_name(int code) {
  switch (code) {
    case kOk:
      return "ok";
    case kNotPsd:
      return "not-psd";
    case kInconclusive:
      return "inconclusive";
    default:
      return "error";
  }
}

int emit(const Common& c, const std::string& command, int code, Json payload, const std::string& summary) {
  if (c.json) {
    Json out = {{"command", command}, {"status", status_name(code)}};
    out["result"] = std::move(payload);
    std::cout << io::dump(out);
  } else {
    std::cout << summary;
  }
  return code;
}

std::string vec_str(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

/// Re-verifies before anything is written; a failure is a hard error.
VerifyResult checked(const BiquadraticForm& p, const SOSDecomposition& d) {
  const VerifyResult v = verify_sos(p, d);
  if (!v.passed) {
    std::ostringstream os;
    os << "decomposition failed re-verification (max residual " << v.max_residual << " > " << v.threshold << ")";
    throw std::runtime_error(os.str());
  }
  return v;
}

int cmd_check_psd(const Common& c, const std::string& file) {
  const BiquadraticForm p = load_form(file, c);
  const std::optional<XSymmetricData> xs = detect_x_symmetric(p);
  if (!xs) {
    if (c.json) {
      std::cout << io::dump({{"command", "check-psd"}, {"status", "error"}, {"reason", "not x-symmetric"}});
    } else {
      std::cout << "form is not x-symmetric; use `biquad sos-rank` for general forms"
                << (c.transpose ? "" : " (or try --transpose)") << "\n";
    }
    return kNotXSymmetric;
  }
  const GeneralPsdResult r = check_psd_general(*xs, tolerances(c));
  const int code = r.verdict == Verdict::PSD ? kOk : kNotPsd;
  Json payload = {{"m", xs->m}, {"n", xs->n()}, {"monic", xs->monic()}, {"data", io::xsym_to_json(*xs)}};
  payload["verdict"] = code == kOk ? "psd" : "not-psd";
  if (r.monic_certificate) payload["certificate"] = io::certificate_to_json(*r.monic_certificate);
  if (r.reduction) {
    std::vector<int> active;
    for (int j : r.reduction->active) active.push_back(j + 1);
    payload["active_y"] = active;
  }
  if (r.witness) payload["witness"] = io::witness_to_json(*r.witness);
  if (!r.reason.empty()) payload["reason"] = r.reason;

  std::ostringstream os;
  os << "x-symmetric form, m = " << xs->m << ", n = " << xs->n() << (xs->monic() ? " (monic)" : "") << "\n";
  if (r.monic_certificate) {
    os << "eig(Q) = " << vec_str(r.monic_certificate->q_eigs) << "\n";
    os << "eig(R) = " << vec_str(r.monic_certificate->r_eigs) << "\n";
  }
  if (!r.reason.empty()) os << r.reason << "\n";
  os << "verdict: " << (code == kOk ? "PSD" : "NOT PSD") << "\n";
  if (r.witness) {
    os << "witness x = " << vec_str(r.witness->x) << ", y = " << vec_str(r.witness->y)
       << ", P(x, y) = " << r.witness->value << "\n";
  }
  return emit(c, "check-psd", code, payload, os.str());
}

int cmd_decompose(const Common& c, const std::string& file, const std::string& method, const std::string& out) {
  const BiquadraticForm original = io::any_form_from_json(io::read_json_file(file));
  const BiquadraticForm p = c.transpose ? transpose_xy(original) : original;
  const std::optional<XSymmetricData> xs = detect_x_symmetric(p);
  if (!xs) throw InvalidInput("decompose: form is not x-symmetric; use `biquad sos-rank` for general forms");
  const Tolerances tol = tolerances(c);
  SOSDecomposition d(p.m(), p.n());
  std::string used = method == "naive" ? "naive" : "structured";
  try {
    if (!xs->monic()) {
      used = "general";
      d = sos_decompose_general(*xs, tol);
    } else if (used == "naive") {
      d = sos_decompose_naive(*xs, tol);
    } else {
      d = sos_decompose_structured(*xs, tol);
    }
  } catch (const NotPSD& e) {
    Json payload = {{"reason", e.what()}};
    std::ostringstream os;
    os << "form is not PSD: " << e.what() << "\n";
    if (e.form_witness()) {
      const FormWitness w = *e.form_witness();
      payload["witness"] = io::witness_to_json(c.transpose ? FormWitness{w.y, w.x, w.value} : w);
    }
    return emit(c, "decompose", kNotPsd, payload, os.str());
  }
  if (c.transpose) d = d.transposed();
  const VerifyResult v = checked(original, d);
  if (!out.empty()) io::write_atomic(out, io::dump(io::decomposition_to_json(d)));

  Json payload = {{"method", used}, {"factors", d.size()}, {"max_residual", v.max_residual},
                  {"threshold", v.threshold}};
  if (out.empty()) payload["decomposition"] = io::decomposition_to_json(d);
  std::ostringstream os;
  os << "method: " << used << "\nfactors: " << d.size() << "\nmax verification residual: " << v.max_residual
     << " (threshold " << v.threshold << ")\n";
  if (!out.empty()) os << "wrote " << out << "\n";
  return emit(c, "decompose", kOk, payload, os.str());
}

std::string rank_summary(const std::variant<int, UpperBoundOnly>& r) {
  if (std::holds_alternative<int>(r)) return "exact SOS rank: " + std::to_string(std::get<int>(r));
  return "SOS rank <= " + std::to_string(std::get<UpperBoundOnly>(r).bound) +
         " (support has a rectangle; no lower bound)";
}

int cmd_gen_simple(const Common& c, int m, int n, int s, const std::string& out) {
  const SupportSet support = gen_simple(m, n, s);
  const BiquadraticForm p = to_form(support);
  const auto rank = exact_sos_rank_simple(support);
  const LowerBoundCertificate cert = lower_bound_certificate(support);

  Json form = io::form_to_json(p);
  form["support"] = io::support_to_json(support)["pairs"];
  if (!out.empty()) io::write_atomic(out, io::dump(form));

  Json payload = {{"support", io::support_to_json(support)}};
  if (std::holds_alternative<int>(rank)) {
    payload["exact_sos_rank"] = std::get<int>(rank);
  } else {
    payload["upper_bound"] = std::get<UpperBoundOnly>(rank).bound;
    Json rect = Json::array();
    for (const auto& [i, j] : *cert.rectangle) rect.push_back({i + 1, j + 1});
    payload["rectangle"] = rect;
  }
  if (out.empty()) payload["form"] = form;

  std::ostringstream os;
  os << "P_{" << m << "," << n << "," << s << "} =";
  bool first = true;
  for (const auto& [i, j] : support.pairs) {
    os << (first ? " " : " + ") << "x" << i + 1 << "^2 y" << j + 1 << "^2";
    first = false;
  }
  os << "\n" << rank_summary(rank) << "\n";
  if (!out.empty()) os << "wrote " << out << "\n";
  return emit(c, "gen-simple", kOk, payload, os.str());
}

int cmd_sos_rank(const Common& c, const std::string& file, int center_iterations, const std::string& out) {
  const BiquadraticForm p = load_form(file, c);
  const Tolerances tol = tolerances(c);
  const GramFamily f = build_family(p);
  const int mn = p.m() * p.n();

  std::optional<int> lower;
  std::optional<std::array<std::pair<int, int>, 4>> rectangle;
  if (const auto support = support_of(p)) {
    const LowerBoundCertificate cert = lower_bound_certificate(*support);
    if (cert.applicable) lower = cert.bound;
    rectangle = cert.rectangle;
  }

  SearchResult search;
  try {
    search = min_rank_search(f, {c.restarts, c.seed, tol, center_iterations});
  } catch (const NoPSDPointFound& e) {
    Json payload = {{"seed", c.seed}, {"restarts", c.restarts}, {"reason", e.what()}};
    std::ostringstream os;
    os << "seed: " << c.seed << "\ninconclusive: no PSD Gram matrix found (the form may be PSD but not SOS)\n";
    return emit(c, "sos-rank", kInconclusive, payload, os.str());
  }

  GramPoint best = search.best;
  int upper = search.rank;
  if (upper == mn && f.dimension() > 0) {
    try {
      best = reduce_to_boundary(f, best, c.seed, tol);
      upper = numerical_rank(best.matrix, tol);
    } catch (const CannotReduce&) {
    }
  }
  const SOSDecomposition d = factor_gram(f, best, tol);
  const VerifyResult v = checked(p, d);
  if (!out.empty()) io::write_atomic(out, io::dump(io::decomposition_to_json(d)));
  const bool exact = lower && *lower == upper;

  Json payload = {{"seed", c.seed},
                  {"restarts", c.restarts},
                  {"upper_bound", upper},
                  {"start_rank", search.start_rank},
                  {"boundary_bound_holds", upper <= mn - 1},
                  {"gram_point", io::gram_point_to_json(best, upper)},
                  {"max_residual", v.max_residual}};
  payload["lower_bound"] = lower ? Json(*lower) : Json(nullptr);
  payload["exact"] = exact ? Json(upper) : Json(nullptr);

  std::ostringstream os;
  os << "seed: " << c.seed << "\n";
  os << "upper bound (heuristic search): " << upper << "\n";
  if (lower) {
    os << "lower bound (rectangle-free support): " << *lower << "\n";
  } else if (rectangle) {
    os << "no lower bound: support contains the rectangle";
    for (const auto& [i, j] : *rectangle) os << " (" << i + 1 << "," << j + 1 << ")";
    os << "\n";
  }
  os << (exact ? "exact SOS rank: " + std::to_string(upper) : "SOS rank <= " + std::to_string(upper)) << "\n";
  os << "max verification residual: " << v.max_residual << "\n";
  return emit(c, "sos-rank", kOk, payload, os.str());
}

int cmd_reduce_rank(const Common& c, const std::string& file, const std::string& out) {
  const BiquadraticForm p = load_form(file, c);
  const Tolerances tol = tolerances(c);
  const GramFamily f = build_family(p);
  const std::optional<GramPoint> start = find_psd_point(f, {c.restarts, c.seed, tol});
  if (!start) {
    std::ostringstream os;
    os << "seed: " << c.seed << "\ninconclusive: no PSD Gram matrix found\n";
    return emit(c, "reduce-rank", kInconclusive, {{"seed", c.seed}}, os.str());
  }
  const int start_rank = numerical_rank(start->matrix, tol);
  const GramPoint g = reduce_to_boundary(f, *start, c.seed, tol);
  const int rank = numerical_rank(g.matrix, tol);
  const SOSDecomposition d = factor_gram(f, g, tol);
  const VerifyResult v = checked(p, d);
  if (!out.empty()) io::write_atomic(out, io::dump(io::decomposition_to_json(d)));
  Json payload = {{"seed", c.seed},
                  {"start_rank", start_rank},
                  {"rank", rank},
                  {"gram_point", io::gram_point_to_json(g, rank)},
                  {"max_residual", v.max_residual}};
  std::ostringstream os;
  os << "seed: " << c.seed << "\nstart rank: " << start_rank << "\nboundary rank: " << rank << " (<= "
     << p.m() * p.n() - 1 << ")\nmax verification residual: " << v.max_residual << "\n";
  return emit(c, "reduce-rank", kOk, payload, os.str());
}

int cmd_meig(const Common& c, const std::string& file) {
  const BiquadraticForm p = load_form(file, c);
  MEigOptions opts;
  opts.restarts = c.restarts;
  opts.seed = c.seed;
  const MEigResult r = meig_solve(p, opts);
  Json payload = io::meig_to_json(r);
  payload["seed"] = c.seed;
  std::ostringstream os;
  os << "seed: " << c.seed << "\n";
  os.precision(10);
  for (const MEigenpair& e : r.pairs) {
    os << "lambda = " << e.lambda << "  x = " << vec_str(e.x) << "  y = " << vec_str(e.y) << "  residuals "
       << e.residual_x << ", " << e.residual_y << "\n";
  }
  if (!r.pairs.empty()) os << "smallest found (upper bound on the least M-eigenvalue): " << r.pairs.front().lambda << "\n";
  if (r.discarded_starts > 0) os << "discarded " << r.discarded_starts << " non-converged runs\n";
  return emit(c, "meig", kOk, payload, os.str());
}

/// Random monic form with Q, R ⪰ (1/2)I.
XSymmetricData random_psd_monic(Rng& rng, int m, int n) {
  const double c = 0.5 / (static_cast<double>(n) * m);
  Eigen::MatrixXd a = random_uniform(rng, n, n, -c, c);
  Eigen::MatrixXd b = random_uniform(rng, n, n, -c, c);
  a = 0.5 * (a + a.transpose()).eval();
  b = 0.5 * (b + b.transpose()).eval();
  b.diagonal().setZero();
  return XSymmetricData::monic_from(m, a, b);
}

int cmd_bench(const Common& c, int m, int n, int trials) {
  if (m < 1 || n < 1 || trials < 1) throw InvalidInput("bench: m, n and trials must be positive");
  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  Rng rng(c.seed);
  const Tolerances tol = tolerances(c);
  Json rows = Json::array();
  std::ostringstream os;
  os << "seed: " << c.seed << "  kernels: " << kernels::isa_name(kernels::active_isa()) << "\n";
  os << "trial      naive_ms  structured_ms   speedup  gram_rel_diff\n";
  for (int t = 0; t < trials; ++t) {
    const XSymmetricData x = random_psd_monic(rng, m, n);
    auto t0 = clock::now();
    const SOSDecomposition naive = sos_decompose_naive(x, tol);
    const double naive_ms = ms(clock::now() - t0);
    t0 = clock::now();
    const SOSDecomposition structured = sos_decompose_structured(x, tol);
    const double structured_ms = ms(clock::now() - t0);
    Json row = {{"trial", t}, {"naive_ms", naive_ms}, {"structured_ms", structured_ms},
                {"speedup", naive_ms / std::max(structured_ms, 1e-9)}};
    double diff = -1.0;
    if (static_cast<long>(m) * n <= 2500) {
      const Eigen::MatrixXd g1 = naive.gram();
      diff = (g1 - structured.gram()).norm() / std::max(1.0, g1.norm());
      row["gram_rel_diff"] = diff;
    } else {
      row["gram_rel_diff"] = nullptr;
    }
    rows.push_back(row);
    char line[128];
    std::snprintf(line, sizeof line, "%5d %13.3f %14.3f %9.1f  %s\n", t, naive_ms, structured_ms,
                  naive_ms / std::max(structured_ms, 1e-9), diff < 0 ? "(skipped)" : std::to_string(diff).c_str());
    os << line;
  }
  Json payload = {{"seed", c.seed}, {"m", m}, {"n", n}, {"kernels", kernels::isa_name(kernels::active_isa())},
                  {"trials", rows}};
  return emit(c, "bench", kOk, payload, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biquadratic form analysis: PSD checks, SOS decompositions and SOS-rank bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "Print the machine-readable result on standard output");
  app.add_option("--tol", common.tol, "Rank and PSD tolerance (overrides BIQUAD_TOL)")->check(CLI::PositiveNumber);
  app.add_flag("--transpose", common.transpose, "Swap the roles of x and y before the analysis");

  std::string file;
  std::string out;
  std::string method = "auto";
  int m = 0;
  int n = 0;
  int s = 0;
  int trials = 3;
  int center_iterations = 300;

  const auto add_seeded = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--restarts", common.restarts, "Number of restarts")->capture_default_str()->check(
        CLI::NonNegativeNumber);
  };

  CLI::App* check = app.add_subcommand("check-psd", "Decide PSD for an x-symmetric form");
  check->add_option("file", file, "Form or x-symmetric data file")->required();

  CLI::App* decompose = app.add_subcommand("decompose", "SOS decomposition of a PSD x-symmetric form");
  decompose->add_option("file", file, "Form or x-symmetric data file")->required();
  decompose->add_option("--method", method, "naive, structured or auto (= structured)")
      ->check(CLI::IsMember({"naive", "structured", "auto"}))
      ->capture_default_str();
  decompose->add_option("-o,--out", out, "Decomposition output file");

  CLI::App* gen = app.add_subcommand("gen-simple", "Generate the simple form P_{m,n,s}");
  gen->add_option("m", m)->required();
  gen->add_option("n", n)->required();
  gen->add_option("s", s)->required();
  gen->add_option("-o,--out", out, "Form output file");

  CLI::App* rank = app.add_subcommand("sos-rank", "Bounds on the SOS rank of a general form");
  rank->add_option("file", file, "Form file")->required();
  rank->add_option("--center-iterations", center_iterations, "Ascent steps for the first PSD point")
      ->capture_default_str();
  rank->add_option("-o,--out", out, "Decomposition output file for the best Gram point");
  add_seeded(rank);

  CLI::App* reduce = app.add_subcommand("reduce-rank", "Move a PSD Gram matrix onto the PSD boundary");
  reduce->add_option("file", file, "Form file")->required();
  reduce->add_option("-o,--out", out, "Decomposition output file");
  add_seeded(reduce);

  CLI::App* meig = app.add_subcommand("meig", "M-eigenpairs of a small form (heuristic)");
  meig->add_option("file", file, "Form file")->required();
  add_seeded(meig);

  CLI::App* bench = app.add_subcommand("bench", "Time the naive and structured decompositions");
  bench->add_option("--m", m, "Number of x variables")->default_val(200);
  bench->add_option("--n", n, "Number of y variables")->default_val(20);
  bench->add_option("--trials", trials, "Trials")->capture_default_str();
  bench->add_option("--seed", common.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*check) return cmd_check_psd(common, file);
    if (*decompose) return cmd_decompose(common, file, method, out);
    if (*gen) return cmd_gen_simple(common, m, n, s, out);
    if (*rank) return cmd_sos_rank(common, file, center_iterations, out);
    if (*reduce) return cmd_reduce_rank(common, file, out);
    if (*meig) return cmd_meig(common, file);
    if (*bench) return cmd_bench(common, m, n, trials);
  } catch (const std::exception& e) {
    if (common.json) {
      std::cout << io::dump({{"status", "error"}, {"reason", e.what()}});
    }
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
