#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sememe_kb {

enum class ErrorKind {
  // lookups
  UnknownSense,
  UnknownSememe,
  NoSuchWord,
  InvalidK,
  InvalidArgument,
  // taxonomy load
  DuplicateId,
  DuplicateRef,
  DanglingParent,
  ParentCategoryMismatch,
  CycleDetected,
  // lexicon load
  DuplicateSenseId,
  DefinitionParseError,
  UnknownSememeInDef,
  // record / file level
  BadRecord,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain error carried by every fallible library operation except the
/// definition parser, which reports `ParseError` values instead.
class KbError : public std::runtime_error {
 public:
  KbError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sememe_kb
