#pragma once

#include <stdexcept>
#include <string>

namespace lospace {

enum class Errc {
  overflow,
  sign_mismatch,
  divide_by_zero,
  sampling_exhausted,
  duplicate_prime,
  dimension_mismatch,
  retries_exhausted,
  result_count_mismatch,
  invalid_argument,
  parse_error,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Malformed input files; line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lospace
