#include "hedseg/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace hedseg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

bool sniff_png(std::FILE* f) {
  unsigned char sig[8] = {};
  const size_t n = std::fread(sig, 1, 8, f);
  std::rewind(f);
  return n == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

bool sniff_jpeg(std::FILE* f) {
  unsigned char sig[2] = {};
  const size_t n = std::fread(sig, 1, 2, f);
  std::rewind(f);
  return n == 2 && sig[0] == 0xFF && sig[1] == 0xD8;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw std::runtime_error("libpng allocation failed");
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw std::runtime_error("libpng allocation failed");
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

RgbImage decode_png(std::FILE* f, const std::string& path) {
  PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw std::runtime_error("corrupt PNG: " + path);
  png_init_io(r.png, f);
  png_read_info(r.png, r.info);

  const png_uint_32 w = png_get_image_width(r.png, r.info);
  const png_uint_32 h = png_get_image_height(r.png, r.info);
  if (w == 0 || h == 0) throw std::runtime_error("zero-sized PNG: " + path);

  // Normalize every color type to 8-bit RGB.
  png_set_expand(r.png);
  if (png_get_bit_depth(r.png, r.info) == 16) png_set_strip_16(r.png);
  const png_byte color = png_get_color_type(r.png, r.info);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(r.png);
  png_set_strip_alpha(r.png);
  if (png_get_interlace_type(r.png, r.info) != PNG_INTERLACE_NONE)
    png_set_interlace_handling(r.png);
  png_read_update_info(r.png, r.info);

  if (png_get_rowbytes(r.png, r.info) != static_cast<size_t>(w) * 3)
    throw std::runtime_error("unexpected PNG row layout: " + path);

  std::vector<Rgb> pixels(static_cast<size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = reinterpret_cast<png_bytep>(pixels.data() + static_cast<size_t>(y) * w);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return RgbImage(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

struct JpegErrorJump {
  jpeg_error_mgr mgr;
  jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  longjmp(reinterpret_cast<JpegErrorJump*>(cinfo->err)->jump, 1);
}

RgbImage decode_jpeg(std::FILE* f, const std::string& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorJump err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  jpeg_create_decompress(&cinfo);
  struct Guard {
    jpeg_decompress_struct* c;
    ~Guard() { jpeg_destroy_decompress(c); }
  } guard{&cinfo};

  if (setjmp(err.jump)) throw std::runtime_error("corrupt JPEG: " + path);

  jpeg_stdio_src(&cinfo, f);
  if (jpeg_read_header(&cinfo, TRUE) != JPEG_HEADER_OK)
    throw std::runtime_error("corrupt JPEG: " + path);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  if (w == 0 || h == 0) throw std::runtime_error("zero-sized JPEG: " + path);

  std::vector<Rgb> pixels(static_cast<size_t>(w) * h);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = reinterpret_cast<JSAMPROW>(
        pixels.data() + static_cast<size_t>(cinfo.output_scanline) * w);
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  return RgbImage(w, h, std::move(pixels));
}

}  // namespace

RgbImage load_image(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  if (sniff_png(f.get())) return decode_png(f.get(), path);
  if (sniff_jpeg(f.get())) return decode_jpeg(f.get(), path);
  throw std::runtime_error("unsupported image format: " + path);
}

BinaryMask load_mask(const std::string& path) {
  const RgbImage img = load_image(path);
  BinaryMask mask(img.width(), img.height());
  const auto& px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i)
    mask.bits()[i] = (px[i].r | px[i].g | px[i].b) ? 1 : 0;
  return mask;
}

void save_png(const std::string& path, const RgbImage& img) {
  FilePtr f = open_file(path, "wb");
  PngWriter wtr;
  if (setjmp(png_jmpbuf(wtr.png))) throw std::runtime_error("PNG write failed: " + path);
  png_init_io(wtr.png, f.get());
  png_set_IHDR(wtr.png, wtr.info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(wtr.png, reinterpret_cast<png_const_bytep>(
                               img.pixels().data() + static_cast<size_t>(y) * img.width()));
  }
  png_write_end(wtr.png, nullptr);
}

void save_png_gray16(const std::string& path, int width, int height,
                     const std::vector<uint16_t>& values) {
  if (values.size() != static_cast<size_t>(width) * height)
    throw std::invalid_argument("save_png_gray16: value count does not match dimensions");
  FilePtr f = open_file(path, "wb");
  PngWriter wtr;
  if (setjmp(png_jmpbuf(wtr.png))) throw std::runtime_error("PNG write failed: " + path);
  png_init_io(wtr.png, f.get());
  png_set_IHDR(wtr.png, wtr.info, width, height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  std::vector<unsigned char> row(static_cast<size_t>(width) * 2);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const uint16_t v = values[static_cast<size_t>(y) * width + x];
      row[2 * x] = static_cast<unsigned char>(v >> 8);  // network byte order
      row[2 * x + 1] = static_cast<unsigned char>(v & 0xFF);
    }
    png_write_row(wtr.png, row.data());
  }
  png_write_end(wtr.png, nullptr);
}

std::vector<uint16_t> load_png_gray16(const std::string& path, int* width, int* height) {
  FilePtr f = open_file(path, "rb");
  if (!sniff_png(f.get())) throw std::runtime_error("not a PNG: " + path);
  PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw std::runtime_error("corrupt PNG: " + path);
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  const int w = static_cast<int>(png_get_image_width(r.png, r.info));
  const int h = static_cast<int>(png_get_image_height(r.png, r.info));
  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY ||
      png_get_bit_depth(r.png, r.info) != 16)
    throw std::runtime_error("expected 16-bit grayscale PNG: " + path);

  std::vector<uint16_t> values(static_cast<size_t>(w) * h);
  std::vector<unsigned char> row(static_cast<size_t>(w) * 2);
  for (int y = 0; y < h; ++y) {
    png_read_row(r.png, row.data(), nullptr);
    for (int x = 0; x < w; ++x)
      values[static_cast<size_t>(y) * w + x] =
          static_cast<uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
  }
  png_read_end(r.png, nullptr);
  if (width) *width = w;
  if (height) *height = h;
  return values;
}

void save_png_mask(const std::string& path, const BinaryMask& mask) {
  FilePtr f = open_file(path, "wb");
  PngWriter wtr;
  if (setjmp(png_jmpbuf(wtr.png))) throw std::runtime_error("PNG write failed: " + path);
  png_init_io(wtr.png, f.get());
  png_set_IHDR(wtr.png, wtr.info, mask.width(), mask.height(), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  std::vector<unsigned char> row(mask.width());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
    png_write_row(wtr.png, row.data());
  }
  png_write_end(wtr.png, nullptr);
}

}  // namespace hedseg
