#pragma once

#include "ricci/classify.hpp"
#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/generators.hpp"
#include "ricci/graph.hpp"
#include "ricci/graph_io.hpp"
#include "ricci/histogram.hpp"
#include "ricci/kernel.hpp"
#include "ricci/parallel.hpp"
#include "ricci/random.hpp"
#include "ricci/transport.hpp"

namespace ricci {

inline constexpr const char* version = "0.1.0";

}  // namespace ricci
