#pragma once

#include <map>
#include <string>
#include <vector>

#include "ugraphon/config.hpp"

namespace ugraphon {

/// Named graphon blocks ({"tree", "kernel", "one_level"?}) shipped with the tool:
/// two-block, three-level, example-abc, fig9-threshold, sis-homogeneous,
/// sis-heterogeneous.
const std::map<std::string, json>& builtin_fixtures();

std::vector<std::string> fixture_names();
const json& fixture_config(const std::string& name);
std::string fixture_description(const std::string& name);
Graphon make_fixture(const std::string& name);

/// Ready-to-run config of an experiment kind on a fixture (default fixture per
/// kind when `fixture` is empty).
json default_experiment(const std::string& kind, const std::string& fixture = "");

}  // namespace ugraphon
