#include "hodgefan/subspace.hpp"

namespace hodgefan {

template struct Subspace<Rat>;
template struct Subspace<GaussRat>;

}  // namespace hodgefan
