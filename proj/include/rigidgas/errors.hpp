#pragma once

#include <stdexcept>
#include <string>

namespace rigidgas {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RIGIDGAS_ERROR(Name)                 \
    struct Name : Error {                    \
        explicit Name(const std::string& m)  \
            : Error(#Name ": " + m) {}       \
    }

RIGIDGAS_ERROR(InvalidSpec);
RIGIDGAS_ERROR(ConvexityViolation);
RIGIDGAS_ERROR(NoConvergence);
RIGIDGAS_ERROR(DegenerateVelocity);
RIGIDGAS_ERROR(PackingFailure);
RIGIDGAS_ERROR(EnvelopeBreach);
RIGIDGAS_ERROR(OverlapDetected);
RIGIDGAS_ERROR(InsufficientData);
RIGIDGAS_ERROR(ConfigError);

#undef RIGIDGAS_ERROR

}  // namespace rigidgas
