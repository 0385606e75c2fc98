#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace qpgate {

// %.17g keeps float64 round-trips lossless and output byte-stable.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal deterministic JSON emitter: fixed key order (insertion order),
// two-space indentation, no locale dependence.
class JsonWriter {
 public:
  std::string str() && { return std::move(out_); }
  const std::string& str() const& { return out_; }

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    separate();
    out_ += '"';
    escape(k);
    out_ += "\": ";
    pending_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(format_double(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::size_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const std::string& s) {
    separate();
    out_ += '"';
    escape(s);
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& null() { return raw("null"); }

 private:
  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;

  void indent() {
    for (std::size_t i = 0; i < first_.size(); ++i) out_ += "  ";
  }

  void separate() {
    if (pending_key_) {  // value following its key
      pending_key_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
      out_ += '\n';
      indent();
    }
  }

  JsonWriter& raw(const std::string& text) {
    separate();
    out_ += text;
    return *this;
  }

  JsonWriter& open(char c) {
    separate();
    out_ += c;
    first_.push_back(true);
    return *this;
  }

  JsonWriter& close(char c) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) {
      out_ += '\n';
      indent();
    }
    out_ += c;
    return *this;
  }

  void escape(const std::string& s) {
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
  }
};

}  // namespace qpgate
