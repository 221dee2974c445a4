// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cli_app.hpp"

int main(int argc, char** argv) { return cccp::cli::cli_main(argc, argv); }
