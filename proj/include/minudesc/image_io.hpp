#pragma once

#include <string>

#include "minudesc/image.hpp"

namespace minudesc {

// Reads an 8-bit grayscale image. Supported: binary PGM (P5) and PNG
// (grayscale; RGB/palette inputs are converted). Throws Error on
// malformed_file / io_error.
GrayImage read_image(const std::string& path);

// Binary PGM writer used for debug dumps and the synth generator output.
// Stores dpi in a comment so a later read_image round-trips it.
void write_pgm(const std::string& path, const GrayImage& img);

}  // namespace minudesc
