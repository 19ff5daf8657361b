#include "lospace/bigint.hpp"

namespace lospace {

std::optional<BigInt> parse_bigint(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) return std::nullopt;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') return std::nullopt;
  }
  BigInt value(std::string(text.substr(i)), 10);
  if (negative) value = -value;
  return value;
}

}  // namespace lospace
