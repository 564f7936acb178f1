#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imra {

enum class ErrorKind {
  OrderUnsupported,
  InvalidFilter,
  Overflow,
  Resource,
  Resolution,
  Dimension,
  LevelTooDeep,
  Shape,
  Parameter,
  NonFinite,
  Format,
  Truncated,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so that callers (the CLI
/// in particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the storage layer (unreadable files, bad headers,
  /// truncated or non-finite payloads) as opposed to bad arguments.
  bool is_io() const noexcept {
    return kind_ == ErrorKind::Io || kind_ == ErrorKind::Format ||
           kind_ == ErrorKind::Truncated || kind_ == ErrorKind::NonFinite;
  }

 private:
  ErrorKind kind_;
};

}  // namespace imra
