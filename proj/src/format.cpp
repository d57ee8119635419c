#include "ugraphon/format.hpp"

#include <charconv>
#include <cmath>

namespace ugraphon {

std::string fmt_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

}  // namespace ugraphon
