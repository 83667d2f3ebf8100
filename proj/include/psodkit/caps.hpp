#pragma once

#include <cstddef>

namespace psodkit {

struct Caps {
  std::size_t max_enumeration = 100000;  // listed characters / tuples
  std::size_t max_preorder = 4096;       // elements of a materialized relation
  unsigned max_level = 8;                // factorial level for enumerations
  unsigned nerve_depth = 3;
  std::size_t max_verify_carrier = 12;   // total vertex carrier for verify_colimit
  std::size_t max_verify_work = 50000000;
};

}  // namespace psodkit
