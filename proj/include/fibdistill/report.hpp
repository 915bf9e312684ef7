#pragma once

#include <string>

#include "fibdistill/compile.hpp"
#include "fibdistill/distill.hpp"

namespace fibdistill {

// Extra context carried into reports so every run is reproducible from the
// report alone.
struct RunContext {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::size_t sampleCount = 0;
  std::string ensembleMode;
  std::string bWordPath;
  std::string wWordPath;
};

// Machine-readable protocol report (schemaVersion 1).  Key order and float
// formatting are fixed, so identical runs serialize byte-identically.
std::string protocol_report_json(const ProtocolReport& rep,
                                 const RunContext& ctx);

// Plain-text summary table derived from the same data.
std::string protocol_report_text(const ProtocolReport& rep,
                                 const RunContext& ctx);

// Per-level leakage rows for plotting.
std::string protocol_report_csv(const ProtocolReport& rep);

// One JSON line describing a finished compile, appended to a metadata log.
std::string compile_metadata_line(const std::string& targetName,
                                  const std::string& constraintName,
                                  double requestedEpsilon,
                                  const CompileResult& result,
                                  const BraidNet& net,
                                  const std::vector<double>& sectorPhases);

}  // namespace fibdistill
