#pragma once

#include <string>

namespace ugraphon {

/// Shortest round-trip decimal form ("%.17g" trimmed), stable across runs.
std::string fmt_double(double v);

}  // namespace ugraphon
