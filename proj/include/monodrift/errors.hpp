#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace monodrift {

/// Invalid configuration or preset parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A trajectory left the representable range; carries the failing step.
struct BlowupError : std::runtime_error {
    BlowupError(const std::string& msg, std::int64_t step_, double time_)
        : std::runtime_error(msg + " (step " + std::to_string(step_) + ", t=" +
                             std::to_string(time_) + ")"),
          step(step_),
          time(time_) {}
    std::int64_t step;
    double time;
};

/// eps outside the admissible range of the constants engine.
struct InadmissibleEpsError : std::runtime_error {
    explicit InadmissibleEpsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace monodrift
