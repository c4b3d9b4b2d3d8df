#pragma once

#include <filesystem>
#include <iosfwd>

#include "tvpce/tensor.hpp"

namespace tvpce {

// CPT1 binary tensor file:
//   "CPT1" | u8 order | order x u64 LE extents | prod(extents) x (f64 re, f64 im) LE
// Data follows the column-major element order of ComplexTensor.
void write_cpt(std::ostream& os, const ComplexTensor& t);
ComplexTensor read_cpt(std::istream& is);

void save_cpt(const std::filesystem::path& path, const ComplexTensor& t);
ComplexTensor load_cpt(const std::filesystem::path& path);

} // namespace tvpce
