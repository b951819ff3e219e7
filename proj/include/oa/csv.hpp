// RFC-4180 CSV reading and writing.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oa/line_source.hpp"

namespace oa::csv {

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Joins fields into one record (no trailing newline).
std::string join_record(const std::vector<std::string>& fields);

// Splits one complete record. Returns nullopt for malformed quoting.
std::optional<std::vector<std::string>> split_record(std::string_view record);

// Reads records from a line source; a quoted field may span several lines.
class Reader {
 public:
  explicit Reader(LineSource& source) : source_(source) {}

  struct Record {
    std::size_t line_no = 0;  // line where the record starts
    std::optional<std::vector<std::string>> fields;  // nullopt when malformed
    bool blank = false;
  };

  // Returns false at end of input.
  bool next(Record& record);

 private:
  LineSource& source_;
  std::string line_;
};

}  // namespace oa::csv
