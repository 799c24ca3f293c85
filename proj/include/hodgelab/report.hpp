#pragma once

// JSON serialization of result records plus atomic file output. The schema is
// frozen: bump kReportSchemaVersion on any structural change so downstream
// consumers can detect incompatibilities.

#include <string>

#include <json.hpp>

#include "hodgelab/identity_lab.hpp"
#include "hodgelab/spectra.hpp"

namespace hodgelab {

inline constexpr const char* kReportSchemaVersion = "1.0";

nlohmann::ordered_json report_json(const IdentityReport& r);
nlohmann::ordered_json report_json(const SpectrumResult& r);
nlohmann::ordered_json report_json(const SteklovResult& r);
nlohmann::ordered_json report_json(const TheoremCheck& r);
nlohmann::ordered_json report_json(const DualityReport& r);
nlohmann::ordered_json report_json(const TraceReport& r);

// Write via a sibling temp file and rename so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace hodgelab
