#include "fibdistill/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace fibdistill {

namespace {

using json = nlohmann::ordered_json;

json level_json(const ProtocolLevel& lvl) {
  // The full cabled word is too long to embed; a stable hash identifies it.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const Crossing& c : lvl.word.crossings) {
    mix(static_cast<std::uint64_t>(c.index));
    mix(static_cast<std::uint64_t>(c.sign + 2));
  }
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, h);
  return json{{"level", lvl.level},
              {"compositeExchanges", lvl.compositeCount},
              {"elementaryCrossings", lvl.elementaryCount},
              {"wordHash", hash},
              {"meanLeakage", lvl.meanLeakage},
              {"maxLeakage", lvl.maxLeakage}};
}

}  // namespace

std::string protocol_report_json(const ProtocolReport& rep,
                                 const RunContext& ctx) {
  json j;
  j["schemaVersion"] = 1;
  j["config"] = {{"k", rep.layout.k},
                 {"m", rep.layout.m},
                 {"p", ctx.p},
                 {"epsilon", rep.declaredEpsilon},
                 {"bWordPath", ctx.bWordPath},
                 {"wWordPath", ctx.wWordPath},
                 {"seed", ctx.seed},
                 {"sampleCount", ctx.sampleCount}};
  j["layout"] = {{"k", rep.layout.k},
                 {"m", rep.layout.m},
                 {"levels", rep.layout.ell},
                 {"dots", rep.layout.dot_count()}};
  j["words"] = {{"b", {{"length", rep.bLength}, {"epsilonMeasured", rep.epsilonB}}},
                {"w", {{"length", rep.wLength}, {"epsilonMeasured", rep.epsilonW}}}};
  j["ensemble"] = {{"mode", ctx.ensembleMode},
                   {"members", rep.memberCount},
                   {"physicalWeightMeasured", rep.insideWeight},
                   {"physicalWeightAnalytic", rep.insideWeightAnalytic},
                   {"physicalWeightPerRegionAnalytic", rep.perRegionWeightAnalytic}};
  j["perLevel"] = json::array();
  for (const ProtocolLevel& lvl : rep.levels) j["perLevel"].push_back(level_json(lvl));
  j["final"] = {{"maxError", rep.finalMaxError},
                {"meanError", rep.finalMeanError},
                {"perRegionMaxError", rep.perRegionMaxError},
                {"withinBudget", rep.withinBudget}};
  j["budgets"] = {{"epsilonSum", rep.epsilonB + rep.epsilonW},
                  {"epsilonMax", std::max(rep.epsilonB, rep.epsilonW)},
                  {"deltaPerRegionExact", rep.budgetDeltaExact},
                  {"deltaPerRegionBound", rep.budgetDeltaBound},
                  {"overall", rep.budgetOverall},
                  {"overallMaxVariant", rep.budgetOverallMaxVariant}};
  j["counts"] = {{"compositeExchanges", rep.compositeTotal},
                 {"elementaryCrossings", rep.elementaryTotal},
                 {"elementaryFormula", rep.structuralElementaryFormula},
                 {"compositeFormula", rep.compositeBudgetFormula}};
  return j.dump(2) + "\n";
}

std::string protocol_report_text(const ProtocolReport& rep,
                                 const RunContext& ctx) {
  std::ostringstream out;
  char line[160];
  out << "distillation run: k=" << rep.layout.k << " m=" << rep.layout.m
      << " (" << rep.layout.dot_count() << " dots, " << rep.layout.ell
      << " levels), p=" << ctx.p << "\n";
  std::snprintf(line, sizeof(line),
                "words: b len=%zu eps=%.3e | w len=%zu eps=%.3e\n", rep.bLength,
                rep.epsilonB, rep.wLength, rep.epsilonW);
  out << line;
  std::snprintf(line, sizeof(line),
                "physical-subspace weight: measured %.6f, analytic %.6f\n",
                rep.insideWeight, rep.insideWeightAnalytic);
  out << line;
  out << "level  composite  elementary  mean-leakage   max-leakage\n";
  for (const ProtocolLevel& lvl : rep.levels) {
    std::snprintf(line, sizeof(line), "%5d  %9zu  %10zu  %.6e  %.6e\n",
                  lvl.level, lvl.compositeCount, lvl.elementaryCount,
                  lvl.meanLeakage, lvl.maxLeakage);
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "final error: max %.6e mean %.6e | budget per region %.6e "
                "overall %.6e -> %s\n",
                rep.finalMaxError, rep.finalMeanError, rep.budgetDeltaExact,
                rep.budgetOverall, rep.withinBudget ? "within" : "EXCEEDED");
  out << line;
  std::snprintf(line, sizeof(line),
                "crossings: %zu elementary (formula %zu), %zu composite "
                "(formula %zu)\n",
                rep.elementaryTotal, rep.structuralElementaryFormula,
                rep.compositeTotal, rep.compositeBudgetFormula);
  out << line;
  return out.str();
}

std::string protocol_report_csv(const ProtocolReport& rep) {
  std::ostringstream out;
  out << "level,compositeExchanges,elementaryCrossings,meanLeakage,maxLeakage\n";
  char line[120];
  for (const ProtocolLevel& lvl : rep.levels) {
    std::snprintf(line, sizeof(line), "%d,%zu,%zu,%.12e,%.12e\n", lvl.level,
                  lvl.compositeCount, lvl.elementaryCount, lvl.meanLeakage,
                  lvl.maxLeakage);
    out << line;
  }
  return out.str();
}

std::string compile_metadata_line(const std::string& targetName,
                                  const std::string& constraintName,
                                  double requestedEpsilon,
                                  const CompileResult& result,
                                  const BraidNet& net,
                                  const std::vector<double>& sectorPhases) {
  json j;
  j["target"] = targetName;
  j["constraint"] = constraintName;
  j["requestedEpsilon"] = requestedEpsilon;
  j["achievedEpsilon"] = result.achievedEpsilon;
  j["wordLength"] = result.wordLength;
  j["skDepth"] = result.skDepth;
  j["netParameters"] = {{"maxBaseLength", net.params().maxBaseLength},
                        {"cellSize", net.params().cellSize},
                        {"entries", net.size()},
                        {"symbols", net.symbols().size()},
                        {"maxEntryCrossings", net.max_entry_crossing_length()}};
  if (!sectorPhases.empty()) j["sectorPhases"] = sectorPhases;
  return j.dump() + "\n";
}

}  // namespace fibdistill
