#include "kverify/error.hpp"

namespace kverify {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::OrderUnsupported: return "OrderUnsupported";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::NotEinstein: return "NotEinstein";
    case ErrorCode::NotKahler: return "NotKahler";
    case ErrorCode::NotAdapted: return "NotAdapted";
    case ErrorCode::ConstantH: return "ConstantH";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::FlatModel: return "FlatModel";
    case ErrorCode::DegenerateRatio: return "DegenerateRatio";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace kverify
