#pragma once

#include <filesystem>

#include "nsstab/field.hpp"

namespace nsstab {

/// Binary field dump; the layout is described in docs/formats.md.
void write_snapshot(const std::filesystem::path& path, const Field& field);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace nsstab
