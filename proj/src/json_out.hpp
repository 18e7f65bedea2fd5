#pragma once

#include <string>
#include <vector>

#include "stats.hpp"

namespace kummerlab {

// Minimal JSON emitter.  All floating-point values are printed with 17
// significant digits so that serialized output round-trips exactly and
// reruns are byte-identical.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& s);
  JsonWriter& raw(const std::string& s);

  const std::string& str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool after_key_ = false;
};

std::string json_escape(const std::string& s);
std::string format_double(double v);  // %.17g

void write_report(JsonWriter& w, const StatReport& r);
std::string reports_to_json(const std::vector<StatReport>& reports, bool all_pass);

}  // namespace kummerlab
