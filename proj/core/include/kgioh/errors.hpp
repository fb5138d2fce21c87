#pragma once

#include <stdexcept>
#include <string>

namespace kgioh {

// Base of every numerical failure raised by the library. name() is the
// stable identifier surfaced by the CLI ("TruncationError", ...).
class Error : public std::runtime_error {
public:
    Error(const char* name, const std::string& what);
    const char* name() const noexcept { return name_; }

private:
    const char* name_;
};

#define KGIOH_DEFINE_ERROR(Name)                                             \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    };

KGIOH_DEFINE_ERROR(PoleError)
KGIOH_DEFINE_ERROR(OverflowError)
KGIOH_DEFINE_ERROR(AccuracyError)
KGIOH_DEFINE_ERROR(DimensionError)
KGIOH_DEFINE_ERROR(ConvergenceError)
KGIOH_DEFINE_ERROR(TruncationError)
KGIOH_DEFINE_ERROR(DivergenceError)
KGIOH_DEFINE_ERROR(QuadratureError)
KGIOH_DEFINE_ERROR(SingularTimeError)
KGIOH_DEFINE_ERROR(DomainError)
KGIOH_DEFINE_ERROR(FitError)

#undef KGIOH_DEFINE_ERROR

}  // namespace kgioh
