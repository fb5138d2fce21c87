#pragma once

namespace kgioh {

const char* version();
const char* eigen_version();
const char* boost_version();

}  // namespace kgioh
