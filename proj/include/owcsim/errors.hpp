#pragma once

#include <stdexcept>
#include <string>

namespace owc {

enum class ErrorCode {
  degenerate_lens,
  eta_underflow,
  invalid_ber,
  bit_count_mismatch,
  epsilon_unreachable,
  zero_rate,
  length_mismatch,
  empty_network,
  config_invalid,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::degenerate_lens: return "DegenerateLens";
    case ErrorCode::eta_underflow: return "EtaUnderflow";
    case ErrorCode::invalid_ber: return "InvalidBer";
    case ErrorCode::bit_count_mismatch: return "BitCountMismatch";
    case ErrorCode::epsilon_unreachable: return "EpsilonUnreachable";
    case ErrorCode::zero_rate: return "ZeroRate";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::empty_network: return "EmptyNetwork";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace owc
