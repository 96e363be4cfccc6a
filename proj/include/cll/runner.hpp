#pragma once

#include "cll/config.hpp"

namespace cll {

// Executes one experiment, writing CSV artifacts (plus a metadata sidecar and
// optional SVG plots) into config.output_dir. Returns the process exit code:
// 0 success, 1 failed --assert thresholds.
int run(const RunConfig& config);

}  // namespace cll
