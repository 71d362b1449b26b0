#include "manetsim/metrics/trace.hpp"

#include <utility>

#include "manetsim/error.hpp"

namespace manet::metrics {

TraceWriter::~TraceWriter() { close(); }

TraceWriter::TraceWriter(TraceWriter&& other) noexcept
    : mode_(other.mode_), file_(other.file_), buf_(std::move(other.buf_)) {
  other.mode_ = Mode::off;
  other.file_ = nullptr;
}

TraceWriter& TraceWriter::operator=(TraceWriter&& other) noexcept {
  if (this != &other) {
    close();
    mode_ = other.mode_;
    file_ = other.file_;
    buf_ = std::move(other.buf_);
    other.mode_ = Mode::off;
    other.file_ = nullptr;
  }
  return *this;
}

TraceWriter TraceWriter::to_memory() {
  TraceWriter w;
  w.mode_ = Mode::memory;
  return w;
}

TraceWriter TraceWriter::to_file(const std::string& path) {
  TraceWriter w;
  w.file_ = std::fopen(path.c_str(), "w");
  if (w.file_ == nullptr) throw SimError("cannot open trace file " + path);
  w.mode_ = Mode::file;
  return w;
}

void TraceWriter::vline(const char* prefix, const char* fmt, va_list ap) {
  char tail[1024];
  std::vsnprintf(tail, sizeof(tail), fmt, ap);
  if (mode_ == Mode::file) {
    std::fputs(prefix, file_);
    std::fputs(tail, file_);
    std::fputc('\n', file_);
  } else {
    buf_ += prefix;
    buf_ += tail;
    buf_ += '\n';
  }
}

void TraceWriter::eventf(sim::SimTime t, const char* ev, const char* fmt, ...) {
  if (mode_ == Mode::off) return;
  char prefix[64];
  std::snprintf(prefix, sizeof(prefix), "t=%llu ev=%s ",
                static_cast<unsigned long long>(t.us), ev);
  va_list ap;
  va_start(ap, fmt);
  vline(prefix, fmt, ap);
  va_end(ap);
}

void TraceWriter::rawf(const char* fmt, ...) {
  if (mode_ == Mode::off) return;
  va_list ap;
  va_start(ap, fmt);
  vline("", fmt, ap);
  va_end(ap);
}

void TraceWriter::flush() {
  if (mode_ == Mode::file && file_ != nullptr) std::fflush(file_);
}

void TraceWriter::close() {
  if (mode_ == Mode::file && file_ != nullptr) {
    std::fclose(file_);
    file_ = nullptr;
    mode_ = Mode::off;
  }
}

}  // namespace manet::metrics
