#pragma once

#include <filesystem>
#include <string_view>

#include "superwave/field.hpp"

namespace superwave {

enum class FieldFormat { csv, binary };

FieldFormat field_format_from_string(std::string_view name);
/// Picks the format from the extension: .csv is CSV, anything else binary.
FieldFormat field_format_for(const std::filesystem::path& path);

// Binary layout (little endian): "SWF1", u32 ndim, u32 dims[2], f64 spacing[2],
// f64 origin[2], f64 log_scale, 8 zero bytes, then (re, im) f64 pairs with x
// fastest. 1D fields store dims[1] = 1.
void write_field(const SampledField& field, const std::filesystem::path& path, FieldFormat format);
SampledField read_field(const std::filesystem::path& path, FieldFormat format);

inline void write_field(const SampledField& field, const std::filesystem::path& path) {
  write_field(field, path, field_format_for(path));
}
inline SampledField read_field(const std::filesystem::path& path) {
  return read_field(path, field_format_for(path));
}

}  // namespace superwave
