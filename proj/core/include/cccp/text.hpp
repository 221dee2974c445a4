// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cccp {

// Fixed 6-decimal rendering used by every emitted table.
std::string format_fixed6(double value);

// Shortest round-trippable rendering (17 significant digits) used by model
// files so save/load is value-exact.
std::string format_g17(double value);

std::vector<std::string_view> split_tab(std::string_view line);

// Parses a base-10 signed integer; returns false on any non-numeric content.
bool parse_int64(std::string_view text, std::int64_t& out);
bool parse_double(std::string_view text, double& out);

// FNV-1a, used for corpus checksums in run manifests.
std::uint64_t fnv1a64(std::string_view data);

std::string to_hex(std::uint64_t value);

}  // namespace cccp
