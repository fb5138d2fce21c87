#include "kgioh/version.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

#define KGIOH_STR2(x) #x
#define KGIOH_STR(x) KGIOH_STR2(x)

namespace kgioh {

const char* version() { return "1.0.0"; }

const char* eigen_version() {
    return KGIOH_STR(EIGEN_WORLD_VERSION) "." KGIOH_STR(EIGEN_MAJOR_VERSION) "." KGIOH_STR(EIGEN_MINOR_VERSION);
}

const char* boost_version() { return BOOST_LIB_VERSION; }

}  // namespace kgioh
