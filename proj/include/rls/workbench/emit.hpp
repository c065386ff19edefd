#pragma once

// CSV and JSON output. CSV uses a header row, '.' decimals and LF endings;
// every angle written to a file is in degrees.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "rls/design.hpp"
#include "rls/hosidf.hpp"
#include "rls/shaping_bounds.hpp"
#include "rls/trace_analysis.hpp"

namespace rls::wb {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
std::string num(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  std::string path_;
  std::size_t columns_;
  std::FILE* file_ = nullptr;
};

void write_json(const std::string& path, const Json& j);

Json to_json(const BandwidthReport& r);
Json to_json(const AngleInterval& i);
Json to_json(const IntervalSet& s);
Json to_json(const GainCapReport& r);
Json to_json(const FilterCheckReport& r);
Json to_json(const DesignResult& r, bool gain_mode);
Json to_json(const TransientMetrics& m);

}  // namespace rls::wb
