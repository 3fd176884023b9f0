// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/cli.hpp"

int main(int argc, char** argv) { return ncfr::cli::run(argc, argv); }
