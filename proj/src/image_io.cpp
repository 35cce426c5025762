#include "minudesc/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace minudesc {

namespace {

// Reads the next PGM header token, skipping whitespace and '#' comments.
// Comments of the form "# dpi:NNN" carry resolution metadata.
std::string next_token(std::istream& in, int* dpi) {
  std::string tok;
  while (in) {
    int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      int v = 0;
      if (dpi && std::sscanf(comment.c_str(), " dpi:%d", &v) == 1 && v > 0) *dpi = v;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  int dpi = 500;
  std::string magic = next_token(in, &dpi);
  if (magic != "P5") throw Error(Errc::malformed_file, path + ": not a binary PGM (P5)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token(in, &dpi));
    h = std::stoi(next_token(in, &dpi));
    maxval = std::stoi(next_token(in, &dpi));
  } catch (const std::exception&) {
    throw Error(Errc::malformed_file, path + ": bad PGM header");
  }
  if (w <= 0 || h <= 0 || maxval != 255)
    throw Error(Errc::malformed_file, path + ": unsupported PGM header");
  GrayImage img(w, h, 0, dpi);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw Error(Errc::malformed_file, path + ": truncated PGM payload");
  return img;
}

GrayImage read_png(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw Error(Errc::io_error, "cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw Error(Errc::io_error, "libpng init failed");
  }
  std::vector<png_bytep> rows;
  GrayImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw Error(Errc::malformed_file, path + ": PNG decode failed");
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  img = GrayImage(static_cast<int>(w), static_cast<int>(h));
  png_uint_32 res_x = 0, res_y = 0;
  int unit = 0;
  if (png_get_pHYs(png, info, &res_x, &res_y, &unit) && unit == PNG_RESOLUTION_METER && res_x > 0)
    img.dpi = static_cast<int>(std::lround(res_x * 0.0254));

  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.pixels.data() + static_cast<size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

}  // namespace

GrayImage read_image(const std::string& path) {
  if (path.size() >= 4) {
    std::string ext = path.substr(path.size() - 4);
    for (char& ch : ext) ch = static_cast<char>(std::tolower(ch));
    if (ext == ".png") return read_png(path);
  }
  return read_pgm(path);
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << "P5\n# dpi:" << img.dpi << "\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

}  // namespace minudesc
