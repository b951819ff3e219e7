// Line-oriented input streams. Files are read through zlib, which passes plain
// (uncompressed) files through unchanged, so every file input may be gzipped.
#pragma once

#include <zlib.h>

#include <istream>
#include <memory>
#include <string>
#include <vector>

namespace oa {

class LineSource {
 public:
  virtual ~LineSource() = default;
  // Reads the next line without its terminator ("\n" or "\r\n"). Returns false
  // at end of input. Throws IoError on a read failure.
  virtual bool next(std::string& line) = 0;
  // 1-based number of the last line returned by next().
  [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

 protected:
  std::size_t line_no_ = 0;
};

class GzLineSource final : public LineSource {
 public:
  // Throws IoError naming the path if it cannot be opened.
  explicit GzLineSource(const std::string& path, std::size_t buffer_size = 1 << 16);

  bool next(std::string& line) override;

 private:
  struct GzCloser {
    void operator()(gzFile f) const noexcept { gzclose(f); }
  };

  bool fill();

  std::string path_;
  std::unique_ptr<gzFile_s, GzCloser> file_;
  std::vector<char> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
};

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}

  bool next(std::string& line) override;

 private:
  std::istream& in_;
};

}  // namespace oa
