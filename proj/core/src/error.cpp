#include "lospace/error.hpp"

namespace lospace {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::overflow: return "OVERFLOW";
    case Errc::sign_mismatch: return "SIGN_MISMATCH";
    case Errc::divide_by_zero: return "DIVIDE_BY_ZERO";
    case Errc::sampling_exhausted: return "SAMPLING_EXHAUSTED";
    case Errc::duplicate_prime: return "DUPLICATE_PRIME";
    case Errc::dimension_mismatch: return "DIMENSION_MISMATCH";
    case Errc::retries_exhausted: return "RETRIES_EXHAUSTED";
    case Errc::result_count_mismatch: return "RESULT_COUNT_MISMATCH";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
    case Errc::parse_error: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(Errc::parse_error, line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace lospace
