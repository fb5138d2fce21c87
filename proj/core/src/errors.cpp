#include "kgioh/errors.hpp"

namespace kgioh {

Error::Error(const char* name, const std::string& what)
    : std::runtime_error(std::string(name) + ": " + what), name_(name) {}

}  // namespace kgioh
