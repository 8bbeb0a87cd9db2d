#include "mdiw/numeric.hpp"

namespace mdiw {

NumericPolicy& numeric_policy() {
  static NumericPolicy policy;
  return policy;
}

}  // namespace mdiw
