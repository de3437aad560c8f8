/* The trivial CwA over an arbitrary finite base category: Ty is the terminal
   presheaf, extension acts trivially, every dependent projection is an
   identity and all structure bundles exist uniquely. */
#pragma once

#include "cwa.hpp"

namespace cwa {

ModelPtr make_trivial_model(const FinCategory& base);

}  // namespace cwa
