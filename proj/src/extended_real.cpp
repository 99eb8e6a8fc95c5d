#include "wiener/extended_real.hpp"

#include <charconv>
#include <system_error>

#include "wiener/errors.hpp"

namespace wiener {

double parse_extended(std::string_view text, const std::string& field) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return kInf;
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw InvalidArgument(field, "expected a positive number or `inf`, got `" + std::string(text) + "`");
  require_positive_extended(value, field);
  return value;
}

void require_positive_extended(double x, const std::string& field) {
  if (!(x > 0)) throw InvalidArgument(field, "must be in (0, inf]");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace wiener
