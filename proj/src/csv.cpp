#include "oa/csv.hpp"

#include "oa/text.hpp"

namespace oa::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

std::optional<std::vector<std::string>> split_record(std::string_view record) {
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  const std::size_t n = record.size();
  while (true) {
    current.clear();
    if (i < n && record[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (record[i] == '"') {
          if (i + 1 < n && record[i + 1] == '"') {
            current.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          current.push_back(record[i++]);
        }
      }
      if (!closed) return std::nullopt;
      if (i < n && record[i] != ',') return std::nullopt;
    } else {
      while (i < n && record[i] != ',') {
        if (record[i] == '"') return std::nullopt;
        current.push_back(record[i++]);
      }
    }
    fields.push_back(current);
    if (i >= n) break;
    ++i;  // comma
  }
  return fields;
}

namespace {
// True while an odd number of quote characters has been seen.
bool inside_quotes(std::string_view s) {
  bool inside = false;
  for (const char c : s) {
    if (c == '"') inside = !inside;
  }
  return inside;
}
}  // namespace

bool Reader::next(Record& record) {
  if (!source_.next(line_)) return false;
  record.line_no = source_.line_no();
  record.blank = text::trim(line_).empty();
  if (record.blank) {
    record.fields.reset();
    return true;
  }
  std::string buffer = line_;
  while (inside_quotes(buffer) && source_.next(line_)) {
    buffer.push_back('\n');
    buffer += line_;
  }
  record.fields = split_record(buffer);
  return true;
}

}  // namespace oa::csv
