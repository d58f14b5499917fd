#ifndef FRAMELAB_REPORT_HPP
#define FRAMELAB_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace framelab {

// One verification entry. Info entries record measured quantities without
// affecting the overall verdict; failed entries must carry a witness.
struct CheckEntry {
  enum class Status { pass, fail, info };

  std::string name;
  Status status = Status::info;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured for upper bounds
  std::string provenance;  // exact | strict | surrogate | estimate
  std::string detail;
  nlohmann::json witness = nlohmann::json::object();

  static CheckEntry pass_fail(std::string name, bool ok, double measured, double bound,
                              std::string provenance, std::string detail = "");
  static CheckEntry info(std::string name, double measured, std::string provenance,
                         std::string detail = "");
};

struct VerificationReport {
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckEntry> entries;

  void add(CheckEntry entry) { entries.push_back(std::move(entry)); }
  bool all_passed() const;
  int failed_count() const;
  nlohmann::json to_json() const;
};

// Canonical serialization: object keys sorted, floats printed with 17
// significant digits, LF newline at the end, no locale dependence. Reruns of
// a pipeline with the same config and seed produce byte-identical output.
std::string canonical_json(const nlohmann::json& value);

// CSV with a header row, %.17g floats and LF line endings.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace framelab

#endif
