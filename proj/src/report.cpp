#include "framelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "framelab/errors.hpp"

namespace framelab {

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void emit(const nlohmann::json& value, std::string& out) {
  switch (value.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      break;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      break;
    case nlohmann::json::value_t::number_float:
      out += format_double(value.get<double>());
      break;
    case nlohmann::json::value_t::string:
      out += nlohmann::json(value.get<std::string>()).dump();
      break;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ',';
        first = false;
        emit(item, out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::object: {
      // nlohmann keeps object keys in std::map order, so iteration is sorted.
      out += '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      throw Error(Error::Code::io, "unsupported JSON value type");
  }
}

const char* status_name(CheckEntry::Status status) {
  switch (status) {
    case CheckEntry::Status::pass: return "pass";
    case CheckEntry::Status::fail: return "fail";
    case CheckEntry::Status::info: return "info";
  }
  return "info";
}

}  // namespace

CheckEntry CheckEntry::pass_fail(std::string name, bool ok, double measured,
                                 double bound, std::string provenance,
                                 std::string detail) {
  CheckEntry entry;
  entry.name = std::move(name);
  entry.status = ok ? Status::pass : Status::fail;
  entry.measured = measured;
  entry.bound = bound;
  entry.margin = bound - measured;
  entry.provenance = std::move(provenance);
  entry.detail = std::move(detail);
  return entry;
}

CheckEntry CheckEntry::info(std::string name, double measured, std::string provenance,
                            std::string detail) {
  CheckEntry entry;
  entry.name = std::move(name);
  entry.status = Status::info;
  entry.measured = measured;
  entry.provenance = std::move(provenance);
  entry.detail = std::move(detail);
  return entry;
}

bool VerificationReport::all_passed() const { return failed_count() == 0; }

int VerificationReport::failed_count() const {
  int n = 0;
  for (const auto& entry : entries) {
    if (entry.status == CheckEntry::Status::fail) ++n;
  }
  return n;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json out;
  out["config"] = config;
  nlohmann::json list = nlohmann::json::array();
  int passed = 0, failed = 0, info = 0;
  for (const auto& entry : entries) {
    nlohmann::json e;
    e["name"] = entry.name;
    e["status"] = status_name(entry.status);
    e["measured"] = entry.measured;
    e["bound"] = entry.bound;
    e["margin"] = entry.margin;
    e["provenance"] = entry.provenance;
    if (!entry.detail.empty()) e["detail"] = entry.detail;
    if (!entry.witness.empty()) e["witness"] = entry.witness;
    list.push_back(std::move(e));
    switch (entry.status) {
      case CheckEntry::Status::pass: ++passed; break;
      case CheckEntry::Status::fail: ++failed; break;
      case CheckEntry::Status::info: ++info; break;
    }
  }
  out["entries"] = std::move(list);
  out["summary"] = {{"passed", passed}, {"failed", failed}, {"info", info}};
  return out;
}

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  emit(value, out);
  out += '\n';
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw Error(Error::Code::io, "csv row width does not match the header");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), "%.17g", row[i]);
      out += buffer;
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Code::io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Code::io, "cannot write " + path);
  out << content;
  if (!out) throw Error(Error::Code::io, "write failed for " + path);
}

}  // namespace framelab
