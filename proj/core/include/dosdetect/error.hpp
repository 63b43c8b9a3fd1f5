#pragma once

#include <stdexcept>
#include <string>

namespace dosdetect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the pipeline; carries the name of the stage that failed so the
/// CLI can report e.g. "[load-baseline] cannot open file".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace dosdetect
