#include "cryptompress/error.hpp"

namespace cryptompress {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyResidual: return "EmptyResidual";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::RoundCountMismatch: return "RoundCountMismatch";
    case ErrorCode::EntropyUnavailable: return "EntropyUnavailable";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::MalformedCell: return "MalformedCell";
    case ErrorCode::InventoryMismatch: return "InventoryMismatch";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::InvalidKeyspace: return "InvalidKeyspace";
  }
  return "Unknown";
}

}  // namespace cryptompress
