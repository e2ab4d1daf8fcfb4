#pragma once

#include <cstdint>
#include <string>

#include "concentrix/models.hpp"

namespace concentrix {

struct ModelDescriptor {
  SamplerModel model;
  std::uint64_t seed = 0;
};

/// JSON document {"kind", "params", "seed"}.
std::string model_to_json(const SamplerModel& model, std::uint64_t seed);
ModelDescriptor model_from_json(const std::string& text);

}  // namespace concentrix
