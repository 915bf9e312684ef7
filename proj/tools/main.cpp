// Command-line front end: compile the two protocol braids, run the
// distillation protocol from a config file, or verify invariants of a
// braid-word file.  Exit codes: 0 success, 1 verification failure, 2
// usage/config error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibdistill/compile.hpp"
#include "fibdistill/distill.hpp"
#include "fibdistill/report.hpp"
#include "fibdistill/wordfile.hpp"

namespace {

using namespace fibdistill;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Input problems (bad flags, bad config, unreadable files) as opposed to
// checks that ran and failed.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BraidWord load_word(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("word file not found: " + path);
  try {
    return read_word_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Phase a word puts on a one-dimensional invariant slice spanned by a
// single basis path, plus the leaked weight off that path.
struct SectorPhase {
  double phase;
  double residual;
};

SectorPhase monomial_sector_phase(const BraidWord& word, const BasisPtr& basis,
                                  const FusionPath& path) {
  auto idx = basis->find(path);
  if (!idx) throw Error("sector path missing from basis");
  StateVector s{basis, Eigen::VectorXcd::Zero(
                           static_cast<Eigen::Index>(basis->size()))};
  s.amplitudes[static_cast<Eigen::Index>(*idx)] = 1.0;
  StateVector out = apply_word(word, s);
  std::complex<double> amp = out.amplitudes[static_cast<Eigen::Index>(*idx)];
  double leak = out.amplitudes.squaredNorm() - std::norm(amp);
  return {std::arg(amp), std::sqrt(std::max(0.0, leak))};
}

// The two one-dimensional leaf slices (tau,tau,1,1) and (1,1,tau,tau) of
// the four-dot charge-trivial space; a purebraid must fix each up to a
// phase.
std::vector<SectorPhase> purebraid_sector_phases(const BraidWord& word) {
  auto basis = enumerate_basis(4, Label::trivial);
  FusionPath left{{Label::tau, Label::tau, Label::trivial, Label::trivial},
                  {Label::trivial, Label::tau, Label::trivial, Label::trivial,
                   Label::trivial}};
  FusionPath right{{Label::trivial, Label::trivial, Label::tau, Label::tau},
                   {Label::trivial, Label::trivial, Label::trivial, Label::tau,
                    Label::trivial}};
  return {monomial_sector_phase(word, basis, left),
          monomial_sector_phase(word, basis, right)};
}

// The one-dimensional charge-trivial space of three tau dots; any braid
// acts on it by a phase.
SectorPhase weave_sector_phase(const BraidWord& word) {
  auto basis = enumerate_basis(
      3, Label::trivial,
      std::vector<Label>{Label::tau, Label::tau, Label::tau});
  FusionPath p{{Label::tau, Label::tau, Label::tau},
               {Label::trivial, Label::tau, Label::tau, Label::trivial}};
  return monomial_sector_phase(word, basis, p);
}

int run_compile(const std::string& targetName, double epsilon,
                const std::string& outPath, int baseLength, int maxDepth,
                bool verbose) {
  if (epsilon <= 0) throw UsageError("--epsilon must be positive");
  if (outPath.empty()) throw UsageError("--out is required");

  CompileOptions options;
  if (maxDepth >= 0) options.maxDepth = maxDepth;
  if (baseLength > 0) {
    options.purebraidNet.maxBaseLength = baseLength;
    options.weaveNet.maxBaseLength = baseLength;
  }

  const bool isNot = targetName == "not-purebraid";
  const std::string metaPath = outPath + ".meta.json";
  const std::string constraintName = isNot ? "purebraid" : "weave";

  CompileResult result;
  try {
    result = isNot ? compile_not_purebraid(epsilon, options)
                   : compile_injection_weave(epsilon, options);
  } catch (const Error& e) {
    json record;
    record["schemaVersion"] = 1;
    record["target"] = targetName;
    record["constraint"] = constraintName;
    record["requestedEpsilon"] = epsilon;
    record["error"] = std::string(e.what());
    atomic_write_file(metaPath, record.dump() + "\n");
    std::fprintf(stderr, "compile failed: %s\n", e.what());
    return kExitCheckFailed;
  }

  write_word_file(outPath, result.word);

  std::vector<double> phases;
  if (isNot) {
    for (const auto& sp : purebraid_sector_phases(result.word)) {
      if (sp.residual > 1e-10) {
        std::fprintf(stderr,
                     "invariant-sector leakage %.3e exceeds 1e-10\n",
                     sp.residual);
        return kExitCheckFailed;
      }
      phases.push_back(sp.phase);
    }
  } else {
    phases.push_back(weave_sector_phase(result.word).phase);
  }

  const BraidNet& net = isNot ? purebraid_net(options.purebraidNet)
                              : weave_net(options.weaveNet);
  atomic_write_file(metaPath,
                    compile_metadata_line(targetName, constraintName, epsilon,
                                          result, net, phases));

  std::printf("wrote %s: length %zu, achieved %.6e (requested %.6e), depth %d\n",
              outPath.c_str(), result.wordLength, result.achievedEpsilon,
              epsilon, result.skDepth);
  if (verbose) {
    std::printf("net: %zu entries over base length %d, cell %.3f\n", net.size(),
                net.params().maxBaseLength, net.params().cellSize);
    for (std::size_t i = 0; i < phases.size(); ++i)
      std::printf("sector phase %zu: %+.12f rad\n", i, phases[i]);
  }
  return result.achievedEpsilon <= epsilon ? kExitOk : kExitCheckFailed;
}

double require_number(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg[key].is_number())
    throw UsageError("config: missing numeric field \"" + key + "\"");
  return cfg[key].get<double>();
}

std::string require_string(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg[key].is_string())
    throw UsageError("config: missing string field \"" + key + "\"");
  return cfg[key].get<std::string>();
}

int run_distill(const std::string& configPath, const std::string& outDir,
                bool verbose) {
  if (!fs::exists(configPath))
    throw UsageError("config file not found: " + configPath);
  json cfg;
  try {
    std::ifstream in(configPath);
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config parse error in " + configPath + ": " + e.what());
  }

  const int k = static_cast<int>(require_number(cfg, "k"));
  const int m = static_cast<int>(require_number(cfg, "m"));
  const double p = require_number(cfg, "p");
  const double epsilon = require_number(cfg, "epsilon");
  const std::string bPath = require_string(cfg, "bWordPath");
  const std::string wPath = require_string(cfg, "wWordPath");
  const std::uint64_t seed =
      cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 1;
  const std::size_t sampleCount =
      cfg.contains("sampleCount") ? cfg["sampleCount"].get<std::size_t>()
                                  : 10'000;

  if (p < 0.0 || p > 1.0)
    throw UsageError("config: p must lie in [0, 1], got " + std::to_string(p));
  if (epsilon <= 0.0) throw UsageError("config: epsilon must be positive");

  std::optional<NoisyEnsemble::Mode> mode;
  if (cfg.contains("mode")) {
    const std::string s = cfg["mode"].get<std::string>();
    if (s == "exact")
      mode = NoisyEnsemble::Mode::exact;
    else if (s == "sampled")
      mode = NoisyEnsemble::Mode::sampled;
    else
      throw UsageError("config: mode must be \"exact\" or \"sampled\"");
  }

  RegionLayout layout;
  try {
    layout = make_layout(k, m);
  } catch (const Error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  BraidWord b = load_word(bPath);
  BraidWord w = load_word(wPath);

  // Structural checks on the two primitives, each reported individually.
  int structuralFailures = 0;
  auto fail = [&](const std::string& msg) {
    std::fprintf(stderr, "structural check failed: %s\n", msg.c_str());
    ++structuralFailures;
  };
  if (b.strandCount != 4)
    fail(bPath + ": expected 4 strands, got " + std::to_string(b.strandCount));
  else if (!is_purebraid(b))
    fail(bPath + ": induced permutation is not the identity");
  if (w.strandCount != 3) {
    fail(wPath + ": expected 3 strands, got " + std::to_string(w.strandCount));
  } else {
    auto traj = weave_trajectory(w, 3);
    if (!traj)
      fail(wPath + ": not a weave from the right-most position");
    else if (traj->back() != 1)
      fail(wPath + ": warp ends at position " + std::to_string(traj->back()) +
           ", expected 1");
  }
  if (structuralFailures > 0) return kExitCheckFailed;

  NoisyEnsemble ensemble =
      pair_creation_ensemble(layout, p, mode, seed, sampleCount);
  ProtocolReport rep = run_protocol(ensemble, layout, b, w, epsilon);

  RunContext ctx;
  ctx.p = p;
  ctx.seed = seed;
  ctx.sampleCount = ensemble.sampleCount;
  ctx.ensembleMode =
      ensemble.mode == NoisyEnsemble::Mode::exact ? "exact" : "sampled";
  ctx.bWordPath = bPath;
  ctx.wWordPath = wPath;

  fs::create_directories(outDir.empty() ? "." : outDir);
  fs::path base = outDir.empty() ? "." : outDir;
  atomic_write_file(base / "report.json", protocol_report_json(rep, ctx));
  atomic_write_file(base / "report.txt", protocol_report_text(rep, ctx));
  atomic_write_file(base / "report.csv", protocol_report_csv(rep));

  if (verbose) {
    std::fputs(protocol_report_text(rep, ctx).c_str(), stdout);
  } else {
    std::printf("final max error %.6e vs budget %.6e: %s\n", rep.finalMaxError,
                rep.budgetOverall, rep.withinBudget ? "within" : "EXCEEDED");
  }
  return rep.withinBudget ? kExitOk : kExitCheckFailed;
}

std::vector<BasisPtr> all_tau_bases(int strands) {
  std::vector<Label> leaves(static_cast<std::size_t>(strands), Label::tau);
  std::vector<BasisPtr> out;
  for (Label c : {Label::trivial, Label::tau}) {
    auto b = enumerate_basis(strands, c, leaves);
    if (b->size() > 0) out.push_back(b);
  }
  return out;
}

int verify_artin(const BraidWord& word) {
  const int n = word.strandCount;
  double worst = 0.0;
  for (const auto& basis : all_tau_bases(n)) {
    std::vector<Eigen::MatrixXcd> gen;
    for (int i = 1; i < n; ++i)
      gen.push_back(generator_matrix(basis, i, +1).matrix);
    for (int i = 0; i + 1 < n - 1; ++i) {
      double r = (gen[i] * gen[i + 1] * gen[i] - gen[i + 1] * gen[i] * gen[i + 1])
                     .norm();
      worst = std::max(worst, r);
    }
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 2; j < n - 1; ++j)
        worst = std::max(worst, (gen[i] * gen[j] - gen[j] * gen[i]).norm());
  }
  std::printf("braid-relation residual: %.3e (strands %d)\n", worst, n);
  return worst <= 1e-12 ? kExitOk : kExitCheckFailed;
}

int verify_unitarity(const BraidWord& word, int jobs) {
  double worst = 0.0;
  for (const auto& basis : all_tau_bases(word.strandCount)) {
    SectorUnitary u = word_unitary(word, basis, jobs);
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(u.matrix.rows(),
                                                      u.matrix.cols());
    worst = std::max(worst, (u.matrix.adjoint() * u.matrix - eye).norm());
  }
  std::printf("unitarity residual: %.3e\n", worst);
  return worst <= 1e-10 ? kExitOk : kExitCheckFailed;
}

int verify_purebraid(const BraidWord& word) {
  auto perm = induced_permutation(word);
  std::printf("induced permutation:");
  for (std::size_t i = 0; i < perm.size(); ++i)
    std::printf(" %zu->%d", i + 1, perm[i]);
  std::printf("\n");
  if (is_purebraid(word)) {
    std::printf("identity permutation confirmed\n");
    return kExitOk;
  }
  std::printf("not a purebraid\n");
  return kExitCheckFailed;
}

int verify_weave(const BraidWord& word, int warpStart) {
  const int start = warpStart > 0 ? warpStart : word.strandCount;
  if (start < 1 || start > word.strandCount)
    throw UsageError("warp start out of range");
  int pos = start;
  for (std::size_t i = 0; i < word.crossings.size(); ++i) {
    const Crossing& c = word.crossings[i];
    if (c.index == pos) {
      pos += 1;
    } else if (c.index == pos - 1) {
      pos -= 1;
    } else {
      std::printf(
          "crossing %zu (%c%d) does not involve the warp at position %d\n",
          i + 1, c.sign > 0 ? 's' : 'S', c.index, pos);
      return kExitCheckFailed;
    }
  }
  std::printf("weave confirmed: warp %d -> %d over %zu crossings\n", start,
              pos, word.length());
  return kExitOk;
}

int verify_target(const BraidWord& word, std::optional<double> epsilon,
                  int jobs) {
  if (word.strandCount == 4) {
    auto basis = enumerate_basis(
        4, Label::trivial,
        std::vector<Label>(4, Label::tau));
    SectorUnitary u = word_unitary(word, basis, jobs);
    SectorUnitary target{basis, not_target_matrix()};
    double d = projective_distance(u, target);
    std::printf("projective distance to NOT on the 4-dot sector: %.6e\n", d);
    double worstLeak = 0.0;
    auto phases = purebraid_sector_phases(word);
    for (std::size_t i = 0; i < phases.size(); ++i) {
      std::printf("invariant-sector phase %zu: %+.12f rad (leak %.3e)\n", i,
                  phases[i].phase, phases[i].residual);
      worstLeak = std::max(worstLeak, phases[i].residual);
    }
    if (worstLeak > 1e-10) return kExitCheckFailed;
    if (epsilon && d > *epsilon) return kExitCheckFailed;
    return kExitOk;
  }
  if (word.strandCount == 3) {
    auto basis = enumerate_basis(
        3, Label::tau, std::vector<Label>(3, Label::tau));
    SectorUnitary u = word_unitary(word, basis, jobs);
    SectorUnitary target{
        basis, Eigen::MatrixXcd::Identity(
                   static_cast<Eigen::Index>(basis->size()),
                   static_cast<Eigen::Index>(basis->size()))};
    double d = projective_distance(u, target);
    std::printf("projective distance to identity on the 3-dot sector: %.6e\n",
                d);
    auto traj = weave_trajectory(word, 3);
    if (traj)
      std::printf("warp trajectory: 3 -> %d\n", traj->back());
    else
      std::printf("warp trajectory: not a weave from position 3\n");
    SectorPhase sp = weave_sector_phase(word);
    std::printf("charge-trivial sector phase: %+.12f rad\n", sp.phase);
    if (epsilon && d > *epsilon) return kExitCheckFailed;
    return kExitOk;
  }
  throw UsageError("target check needs a 3- or 4-strand word, got " +
                   std::to_string(word.strandCount));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibonacci-anyon braid compiler and distillation runner"};
  app.require_subcommand(1);

  // compile
  std::string compileTarget;
  double compileEpsilon = 1e-2;
  std::string compileOut;
  int compileBaseLength = 0;
  int compileMaxDepth = -1;
  bool verbose = false;

  CLI::App* compile =
      app.add_subcommand("compile", "synthesize a protocol braid word");
  compile->add_flag("--verbose", verbose, "chatty output");
  compile->add_option("--target", compileTarget, "compile target")
      ->required()
      ->check(CLI::IsMember({"not-purebraid", "injection-weave"}));
  compile->add_option("--epsilon", compileEpsilon,
                      "requested projective error")
      ->required();
  compile->add_option("--out", compileOut, "output word-file path")->required();
  compile->add_option("--base-length", compileBaseLength,
                      "override the base net length");
  compile->add_option("--max-depth", compileMaxDepth,
                      "cap the recursion depth");

  // distill
  std::string distillConfig;
  std::string distillOut = ".";
  CLI::App* distill =
      app.add_subcommand("distill", "run the distillation protocol");
  distill->add_option("--config", distillConfig, "JSON config path")
      ->required();
  distill->add_option("--out", distillOut, "report output directory");
  distill->add_flag("--verbose", verbose, "chatty output");

  // verify
  std::string verifyWord;
  std::string verifyCheck;
  int verifyWarp = 0;
  int jobs = 1;
  double verifyEpsilon = -1.0;
  CLI::App* verify =
      app.add_subcommand("verify", "check invariants of a word file");
  verify->add_option("--word", verifyWord, "braid-word file")->required();
  verify->add_option("--check", verifyCheck, "which invariant to check")
      ->required()
      ->check(CLI::IsMember({"artin", "unitarity", "purebraid", "weave",
                             "target"}));
  verify->add_option("--warp", verifyWarp,
                     "warp start position (default: right-most strand)");
  verify->add_option("--epsilon", verifyEpsilon,
                     "pass threshold for the target check");
  verify->add_option("--jobs", jobs, "simulation threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compile->parsed())
      return run_compile(compileTarget, compileEpsilon, compileOut,
                         compileBaseLength, compileMaxDepth, verbose);
    if (distill->parsed()) return run_distill(distillConfig, distillOut,
                                              verbose);
    if (verify->parsed()) {
      BraidWord word = load_word(verifyWord);
      std::optional<double> eps;
      if (verifyEpsilon > 0) eps = verifyEpsilon;
      if (verifyCheck == "artin") return verify_artin(word);
      if (verifyCheck == "unitarity") return verify_unitarity(word, jobs);
      if (verifyCheck == "purebraid") return verify_purebraid(word);
      if (verifyCheck == "weave") return verify_weave(word, verifyWarp);
      return verify_target(word, eps, jobs);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitUsage;
}
