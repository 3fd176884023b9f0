// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <ostream>

namespace ncfr::cli {

// Exit codes: 0 success / feasible / reproduced, 2 mathematical negative
// (infeasible, not psd, verification failure), 1 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace ncfr::cli
