#include "hodgefan/cones.hpp"

namespace hodgefan {}
