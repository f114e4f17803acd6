#pragma once

#include <stdexcept>
#include <string>

namespace gprbar {

enum class Errc {
  InvalidPermittivity,
  EmptyInput,
  InvalidSample,
  ScanTooShort,
  NoReferenceColumns,
  InvalidStructuringElement,
  InvalidThresholdFactor,
  PlacementOutOfBounds,
  InvalidGeometry,
  DuplicateEntry,
  InsufficientOutline,
  ConfigMismatch,
  ConfigError,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace gprbar
