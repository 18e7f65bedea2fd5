#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace kummerlab {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::comma() {
  if (!needs_comma_.empty() && needs_comma_.back() && !after_key_) out_ += ',';
  if (!needs_comma_.empty() && !after_key_) needs_comma_.back() = true;
  after_key_ = false;
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  needs_comma_.push_back(false);
  return *this;
}
JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  needs_comma_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::begin_array() {
  comma();
  out_ += '[';
  needs_comma_.push_back(false);
  return *this;
}
JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  needs_comma_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  out_ += '"';
  out_ += json_escape(k);
  out_ += "\":";
  after_key_ = true;
  return *this;
}
JsonWriter& JsonWriter::value(double v) {
  comma();
  out_ += format_double(v);
  return *this;
}
JsonWriter& JsonWriter::value(std::uint64_t v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}
JsonWriter& JsonWriter::value(long v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}
JsonWriter& JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
  return *this;
}
JsonWriter& JsonWriter::value(const std::string& s) {
  comma();
  out_ += '"';
  out_ += json_escape(s);
  out_ += '"';
  return *this;
}
JsonWriter& JsonWriter::raw(const std::string& s) {
  comma();
  out_ += s;
  return *this;
}

void write_report(JsonWriter& w, const StatReport& r) {
  w.begin_object();
  w.key("name").value(r.name);
  w.key("statistic").value(r.statistic);
  w.key("threshold").value(r.threshold);
  w.key("n").value(static_cast<std::uint64_t>(r.n));
  w.key("pass").value(r.pass);
  w.key("seed").value(static_cast<std::uint64_t>(r.seed));
  w.key("details").begin_object();
  for (const auto& [k, v] : r.details) w.key(k).value(v);
  w.end_object();
  w.end_object();
}

std::string reports_to_json(const std::vector<StatReport>& reports, bool all_pass) {
  JsonWriter w;
  w.begin_object();
  w.key("all_pass").value(all_pass);
  w.key("reports").begin_array();
  for (const auto& r : reports) write_report(w, r);
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace kummerlab
