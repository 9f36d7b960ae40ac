#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fso/simulation.hpp"
#include "fso/sonspace.hpp"

namespace fso {

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);
std::string to_string(const Rational& r);  // "num/den", always reduced
std::string levels_field(const std::set<int>& levels);  // "1;2;3"

// Column layouts are documented in docs/output-formats.md.
void write_events_csv(std::ostream& out, const MetricsReport& r);
void write_allocator_csv(std::ostream& out, const MetricsReport& r);
void write_energy_csv(std::ostream& out, const MetricsReport& r);
void write_scores_csv(std::ostream& out, const ScoreLedger& scores);
nlohmann::json report_to_json(const MetricsReport& r);

/// Writes events.csv, allocator.csv, energy.csv, report.json and, when
/// requested and knowledge is enabled, scores.csv. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const MetricsReport& r, const std::filesystem::path& dir,
                                                 bool dump_scores);

/// One line per assignment; one column per role instance, in role order.
void write_son_space_csv(std::ostream& out, const CapabilityMatrix& m, const RoleMultiset& roles,
                         const std::vector<SpaceAssignment>& space);

}  // namespace fso
