#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

#include "manetsim/sim/time.hpp"

namespace manet::metrics {

/// Line-delimited structured event log: `t=<micros> ev=<name> k=v ...`.
/// Field order per event type is fixed (documented in
/// docs/trace-format.md) so traces are diffable byte for byte between
/// replays. Writers are either off, buffering to memory (tests), or
/// streaming to a file.
class TraceWriter {
 public:
  TraceWriter() = default;  // disabled
  ~TraceWriter();

  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;
  TraceWriter(TraceWriter&& other) noexcept;
  TraceWriter& operator=(TraceWriter&& other) noexcept;

  static TraceWriter disabled() { return TraceWriter(); }
  static TraceWriter to_memory();
  /// Throws SimError when the file cannot be opened.
  static TraceWriter to_file(const std::string& path);

  bool enabled() const { return mode_ != Mode::off; }

  /// Appends one event line: "t=<micros> ev=<ev> " + formatted tail.
  void eventf(sim::SimTime t, const char* ev, const char* fmt, ...)
      __attribute__((format(printf, 4, 5)));

  /// Appends a raw line (no timestamp prefix). Used for the header.
  void rawf(const char* fmt, ...) __attribute__((format(printf, 2, 3)));

  void flush();
  void close();

  /// Memory-mode contents.
  const std::string& buffer() const { return buf_; }

 private:
  enum class Mode { off, memory, file };

  void vline(const char* prefix, const char* fmt, va_list ap);

  Mode mode_ = Mode::off;
  std::FILE* file_ = nullptr;
  std::string buf_;
};

}  // namespace manet::metrics
