#include "sememe_kb/error.hpp"

namespace sememe_kb {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownSense: return "UnknownSense";
    case ErrorKind::UnknownSememe: return "UnknownSememe";
    case ErrorKind::NoSuchWord: return "NoSuchWord";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::DuplicateRef: return "DuplicateRef";
    case ErrorKind::DanglingParent: return "DanglingParent";
    case ErrorKind::ParentCategoryMismatch: return "ParentCategoryMismatch";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DuplicateSenseId: return "DuplicateSenseId";
    case ErrorKind::DefinitionParseError: return "DefinitionParseError";
    case ErrorKind::UnknownSememeInDef: return "UnknownSememeInDef";
    case ErrorKind::BadRecord: return "BadRecord";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sememe_kb
