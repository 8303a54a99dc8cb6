#include "spcert/cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spcert/cert.hpp"
#include "spcert/coherence.hpp"
#include "spcert/error.hpp"
#include "spcert/generators.hpp"
#include "spcert/matrix_io.hpp"
#include "spcert/width.hpp"

#ifndef SPCERT_VERSION
#define SPCERT_VERSION "0.0.0"
#endif

namespace spcert {

const char* tool_version() noexcept { return SPCERT_VERSION; }

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string in;
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  std::optional<std::size_t> kcap;
  std::size_t trials = 100;
  std::string mode = "random";
  bool normalize = false;
  unsigned threads = 1;
  double tol = 1e-8;
  std::string kind = "gaussian";
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  bool cross_check = false;
};

// Distinguishes bad input files (exit 1) from failed computations (exit 2).
struct InputError {
  std::string message;
};

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

MatrixFormat resolve_format(const Options& o, const std::string& path) {
  if (o.format == "csv") return MatrixFormat::Csv;
  if (o.format == "json") return MatrixFormat::Json;
  return format_from_path(path);
}

Matrix load_input(const Options& o) {
  try {
    Matrix a = load_matrix(o.in, resolve_format(o, o.in));
    return o.normalize ? normalize_columns(a) : a;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroColumn) throw;
    throw InputError{e.what()};
  }
}

std::string matrix_id(const std::string& path) { return std::filesystem::path(path).stem().string(); }

std::size_t default_kcap(const Matrix& a) { return std::min(a.cols() - 1, a.rows() / 2 + 1); }

void emit(const Options& o, const Json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) out << text;
  else write_text_file(o.out, text);
}

Json header(const Options& o, const Matrix& a) {
  Json j;
  j["matrix_id"] = matrix_id(o.in);
  j["m"] = a.rows();
  j["n"] = a.cols();
  return j;
}

// Fills is_dictionary and, for dictionaries, M / argmax pair / k2.
std::optional<CoherenceReport> add_coherence(Json& j, const Matrix& a, double tol) {
  const bool dict = a.rows() < a.cols() && is_dictionary(a, tol);
  j["is_dictionary"] = dict;
  if (!dict) return std::nullopt;
  CoherenceReport c = coherence(a, tol);
  j["M"] = c.coherence;
  j["k2"] = c.k2;
  return c;
}

Json partition_json(const Partition& s) { return Json(s.support()); }

// Orders k2 <= k1 <= k_star; a violation is an internal bug, never output.
void check_ordering(const Json& j) {
  const auto k1 = j.value("k1", std::size_t{0});
  if (j.contains("k2") && j["k2"].get<std::size_t>() > k1)
    throw Error(ErrorCode::InternalInvariant, "certificate ordering violated: k2 > k1");
  if (j.contains("k_star") && k1 > j["k_star"].get<std::size_t>())
    throw Error(ErrorCode::InternalInvariant, "certificate ordering violated: k1 > k_star");
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  Matrix a;
  if (o.kind == "gaussian") a = gen_gaussian(o.m, o.n, o.seed, o.normalize);
  else a = gen_id_hadamard(o.m);
  const MatrixFormat f = o.format == "csv" ? MatrixFormat::Csv : MatrixFormat::Json;
  const std::string text = format_matrix(a, f);
  if (o.out.empty()) out << text;
  else write_text_file(o.out, text);
  err << "generated " << a.rows() << "x" << a.cols() << " " << o.kind << " matrix\n";
  return 0;
}

int cmd_width(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix a = load_input(o);
  Stopwatch sw;
  Json timings;
  Json j = header(o, a);
  const NullSpaceBasis basis = null_space_basis(a);
  timings["null_space"] = sw.lap_ms();
  const WidthReport w = gamma_width(basis, o.threads);
  timings["width"] = sw.lap_ms();

  j["p"] = basis.p();
  j["gamma"] = w.gamma;
  j["k1"] = w.k1;
  add_coherence(j, a, o.tol);
  j["width"] = {{"best_face", w.best_face},
                {"witness_v", w.witness_v},
                {"minimizer_x", w.minimizer_x},
                {"per_face_values", w.per_face_values}};
  if (o.cross_check) {
    j["width"]["gamma_reciprocal"] = gamma_reciprocal(basis, o.threads);
    timings["reciprocal"] = sw.lap_ms();
  }
  check_ordering(j);
  j["timings"] = timings;
  j["tool_version"] = tool_version();
  emit(o, j, out);
  err << "gamma=" << w.gamma << " k1=" << w.k1 << "\n";
  return 0;
}

int cmd_coherence(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix a = load_input(o);
  Json j = header(o, a);
  const auto c = add_coherence(j, a, o.tol);
  if (c) j["argmax_pair"] = {c->argmax_pair.first, c->argmax_pair.second};
  j["tool_version"] = tool_version();
  emit(o, j, out);
  if (c) err << "M=" << c->coherence << " k2=" << c->k2 << "\n";
  else err << "not a dictionary (columns are not unit norm; try --normalize)\n";
  return 0;
}

Json balance_json(const BalancednessReport& r) {
  Json j;
  j["k_star"] = r.k_star;
  j["k_cap"] = r.k_cap;
  j["failure_found"] = r.failure_found;
  if (r.k_cap > 0) {
    j["worst_partition"] = partition_json(r.worst_partition);
    j["worst_mu"] = r.worst_mu;
  }
  j["strict_margin"] = r.strict_margin;
  return j;
}

int cmd_certify(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix a = load_input(o);
  Stopwatch sw;
  Json timings;
  Json j = header(o, a);
  const NullSpaceBasis basis = null_space_basis(a);
  timings["null_space"] = sw.lap_ms();
  const WidthReport w = gamma_width(basis, o.threads);
  timings["width"] = sw.lap_ms();
  j["p"] = basis.p();
  j["gamma"] = w.gamma;
  j["k1"] = w.k1;

  const auto c = add_coherence(j, a, o.tol);
  timings["coherence"] = sw.lap_ms();

  const std::size_t kcap = o.kcap.value_or(default_kcap(a));
  const BalancednessReport bal = max_certified_k(basis, kcap, o.threads);
  timings["balancedness"] = sw.lap_ms();
  j["k_star"] = bal.k_star;
  if (c) j["theorem3_holds"] = 1.0 + 1.0 / c->coherence <= w.gamma + o.tol;
  j["balancedness"] = balance_json(bal);
  check_ordering(j);
  j["timings"] = timings;
  j["tool_version"] = tool_version();
  emit(o, j, out);
  err << "gamma=" << w.gamma << " k1=" << w.k1;
  if (c) err << " M=" << c->coherence << " k2=" << c->k2;
  err << " k*=" << bal.k_star << "\n";
  return 0;
}

int cmd_balanced(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix a = load_input(o);
  Stopwatch sw;
  const NullSpaceBasis basis = null_space_basis(a);
  const BalancednessReport bal = max_certified_k(basis, o.kcap.value_or(default_kcap(a)), o.threads);
  Json j = header(o, a);
  j["p"] = basis.p();
  const Json summary = balance_json(bal);
  for (const auto& [k, v] : summary.items()) j[k] = v;
  Json mus = Json::array();
  for (const auto& [s, mu] : bal.mu_by_support) mus.push_back({{"support", s}, {"mu", mu}});
  j["mu_by_support"] = mus;
  j["timings"] = {{"balancedness", sw.lap_ms()}};
  j["tool_version"] = tool_version();
  emit(o, j, out);
  err << "k*=" << bal.k_star << " worst_mu=" << bal.worst_mu << "\n";
  return 0;
}

int cmd_recover(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix a = load_input(o);
  Stopwatch sw;
  const ExperimentMode mode = o.mode == "exhaustive" ? ExperimentMode::Exhaustive : ExperimentMode::Random;
  const ExperimentResult r = recovery_experiment(a, o.k, mode, o.trials, o.seed, o.threads);
  Json j = header(o, a);
  j["k"] = o.k;
  j["mode"] = o.mode;
  j["seed"] = o.seed;
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate;
  j["timings"] = {{"experiment", sw.lap_ms()}};
  j["tool_version"] = tool_version();
  emit(o, j, out);
  err << r.successes << "/" << r.trials << " recovered\n";
  return 0;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse-recovery certificates for a fixed measurement matrix", "spcert"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));
  Options o;

  auto add_common = [&o](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--in", o.in, "input matrix (json or csv)");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "matrix format (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "dictionary / comparison tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--normalize", o.normalize, "scale columns to unit norm first");
  };

  auto* gen = app.add_subcommand("gen", "generate a test matrix");
  add_common(gen, false);
  gen->add_option("--kind", o.kind, "gaussian | id-hadamard")->check(CLI::IsMember({"gaussian", "id-hadamard"}));
  gen->add_option("--m", o.m, "rows")->required();
  gen->add_option("--n", o.n, "columns (gaussian)");
  gen->add_option("--seed", o.seed, "generator seed");

  auto* width = app.add_subcommand("width", "gamma_{1,inf} width and the bound k1");
  add_common(width, true);
  width->add_flag("--cross-check", o.cross_check, "also solve the reciprocal formulation");

  auto* coh = app.add_subcommand("coherence", "coherence M(A) and the bound k2");
  add_common(coh, true);

  auto* certify = app.add_subcommand("certify", "width, coherence and exact balancedness");
  add_common(certify, true);
  certify->add_option("--kcap", o.kcap, "largest k to test for strict balancedness");

  auto* balanced = app.add_subcommand("balanced", "exact strict k-balancedness only");
  add_common(balanced, true);
  balanced->add_option("--kcap", o.kcap, "largest k to test");

  auto* recover = app.add_subcommand("recover", "basis pursuit recovery experiment");
  add_common(recover, true);
  recover->add_option("--k", o.k, "sparsity")->required();
  recover->add_option("--mode", o.mode, "exhaustive | random")->check(CLI::IsMember({"exhaustive", "random"}));
  recover->add_option("--trials", o.trials, "trials (random) or magnitude draws per pattern (exhaustive)")
      ->check(CLI::PositiveNumber);
  recover->add_option("--seed", o.seed, "experiment seed");

  std::vector<const char*> argv{"spcert"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out, err);
    if (width->parsed()) return cmd_width(o, out, err);
    if (coh->parsed()) return cmd_coherence(o, out, err);
    if (certify->parsed()) return cmd_certify(o, out, err);
    if (balanced->parsed()) return cmd_balanced(o, out, err);
    if (recover->parsed()) return cmd_recover(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.message << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage = e.code() == ErrorCode::IoError || e.code() == ErrorCode::BadDimensions ||
                       e.code() == ErrorCode::NotPowerOfTwo;
    return usage ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace spcert
