#pragma once

#include <string>
#include <string_view>

namespace biphoton {

enum class Pipeline { HOM, MZ, NLMZ, GMZ, FERMION_MZ, SINGLE_COUNT };

std::string to_string(Pipeline p);
/// Accepts the enum spelling in any case; throws ConfigError otherwise.
Pipeline pipeline_from_string(std::string_view name);

enum class Port { A, B };

}  // namespace biphoton
