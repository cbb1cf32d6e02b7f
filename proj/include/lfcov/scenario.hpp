#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lfcov/simulator.hpp"

namespace lfcov {

// Strict JSON scenario files: unknown keys are rejected, validation errors
// name the offending key and constraint. Throws ConfigError.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

// Path files: {"samples": [[x, y], ...], "v_ref": v}.
ReferencePath load_path_file(const std::string& path);
void save_path_file(const std::string& path, const ReferencePath& ref);

// Newline-delimited run log, floats printed with 17 significant digits so
// they parse back bit-exactly.
void write_run_log_record(std::ostream& out, const StepRecord& record);
void write_fault_record(std::ostream& out, const FaultRecord& fault);

struct RunLog {
    std::vector<StepRecord> records;
    std::optional<FaultRecord> fault;
};

RunLog parse_run_log(std::istream& in);
RunLog load_run_log(const std::string& path);

std::string serialize_summary(const RunSummary& summary);
void write_metrics_csv(std::ostream& out, const std::vector<StepRecord>& records);

// Canonical 17-significant-digit float formatting shared by every writer.
std::string format_double(double v);

}  // namespace lfcov
