#pragma once

// The running example (\x.(\y.(\z.x)(x y)) x) (\a.a) and its derivations,
// built by hand node by node with the weights written out literally.

#include "spacekam/derivation.hpp"

namespace fixture {

inline constexpr const char* kRunningExample = "(\\x.(\\y.(\\z.x)(x y)) x) (\\a.a)";
inline constexpr const char* kOmega = "(\\x.x x) (\\x.x x)";

spacekam::DerivPtr space_derivation();
spacekam::DerivPtr time_derivation();
spacekam::DerivPtr kam_derivation();

/// Path of the T-lambda2 node typing \z.x in the closure derivations.
inline constexpr const char* kLam2Path = "$.0.0.0.0.0";

}  // namespace fixture
