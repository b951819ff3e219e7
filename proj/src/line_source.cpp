#include "oa/line_source.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstring>

#include "oa/model.hpp"

namespace oa {

namespace {
void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}
}  // namespace

GzLineSource::GzLineSource(const std::string& path, std::size_t buffer_size)
    : path_(path), file_(gzopen(path.c_str(), "rb")), buffer_(buffer_size) {
  if (!file_) throw IoError(fmt::format("cannot open '{}': {}", path, std::strerror(errno)));
  gzbuffer(file_.get(), 1 << 17);
}

bool GzLineSource::fill() {
  if (eof_) return false;
  const int n = gzread(file_.get(), buffer_.data(), static_cast<unsigned>(buffer_.size()));
  if (n < 0) {
    int err = 0;
    const char* msg = gzerror(file_.get(), &err);
    throw IoError(fmt::format("read error in '{}': {}", path_, msg ? msg : "unknown"));
  }
  if (n == 0) {
    eof_ = true;
    return false;
  }
  pos_ = 0;
  end_ = static_cast<std::size_t>(n);
  return true;
}

bool GzLineSource::next(std::string& line) {
  line.clear();
  bool got_any = false;
  while (true) {
    if (pos_ == end_ && !fill()) {
      if (!got_any) return false;
      break;
    }
    got_any = true;
    const char* begin = buffer_.data() + pos_;
    const char* stop = buffer_.data() + end_;
    const char* nl = std::find(begin, stop, '\n');
    line.append(begin, nl);
    pos_ = static_cast<std::size_t>(nl - buffer_.data());
    if (nl != stop) {
      ++pos_;
      break;
    }
  }
  strip_cr(line);
  ++line_no_;
  return true;
}

bool StreamLineSource::next(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError("read error on input stream");
    return false;
  }
  strip_cr(line);
  ++line_no_;
  return true;
}

}  // namespace oa
