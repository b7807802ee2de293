#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dgmorl/env.hpp"

namespace dgmorl {

/// Built-in demonstration tiers. Optimal demos follow exact shortest paths;
/// medium and low demos waste 2 and 6 steps stalling before following the
/// same path, so they reach the same outcome later and are strictly
/// dominated by their optimal counterparts.
enum class DemoQuality { optimal, medium, low };

DemoQuality parse_demo_quality(const std::string& name);
std::string demo_quality_name(DemoQuality q);

/// Action sequences for `count` built-in demonstrations. When fewer demos
/// than available outcomes are requested, the outcomes are spread evenly
/// across the list (low to high); requesting more raises
/// CountExceedsAvailable. The lock environment only has optimal tiers.
std::vector<std::vector<int>> generate_demos(Env& env, DemoQuality quality, std::size_t count);

/// How many distinct built-in demonstrations the environment offers.
std::size_t available_demo_count(Env& env);

} // namespace dgmorl
