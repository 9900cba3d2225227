#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gapwatch {

/// Base error carrying a stable machine-readable code alongside the message.
/// The CLI prints these as "ERROR <code>: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define GAPWATCH_DEFINE_ERROR(Name)                                \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& message)                  \
            : Error(#Name, message) {}                             \
    }

GAPWATCH_DEFINE_ERROR(MalformedRow);
GAPWATCH_DEFINE_ERROR(NonMonotonicTime);
GAPWATCH_DEFINE_ERROR(EmptyProfile);
GAPWATCH_DEFINE_ERROR(InvalidRange);
GAPWATCH_DEFINE_ERROR(CollisionDetected);
GAPWATCH_DEFINE_ERROR(SingularPrior);
GAPWATCH_DEFINE_ERROR(InvalidConfig);
GAPWATCH_DEFINE_ERROR(UnknownKey);
GAPWATCH_DEFINE_ERROR(TypeMismatch);
GAPWATCH_DEFINE_ERROR(InvariantViolation);
GAPWATCH_DEFINE_ERROR(EmptyStream);

#undef GAPWATCH_DEFINE_ERROR

}  // namespace gapwatch
