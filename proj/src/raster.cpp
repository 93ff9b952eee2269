#include "courtprior/raster.hpp"

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

namespace courtprior {

namespace {

bool has_png_magic(std::span<const uint8_t> b) {
  static const uint8_t magic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::memcmp(b.data(), magic, 8) == 0;
}

bool has_jpeg_magic(std::span<const uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// ---- PNG ----

struct PngReadState {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + n > st->size) png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, st->data + st->pos, n);
  st->pos += n;
}

void png_mem_write(png_structp png, png_bytep in, png_size_t n) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + n);
}

void png_mem_flush(png_structp) {}

[[noreturn]] void png_raise(png_structp png, png_const_charp msg) {
  *static_cast<std::string*>(png_get_error_ptr(png)) = msg ? msg : "libpng error";
  longjmp(png_jmpbuf(png), 1);
}

void png_quiet_warn(png_structp, png_const_charp) {}

Raster decode_png(std::span<const uint8_t> bytes) {
  std::string errmsg;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_raise, png_quiet_warn);
  if (!png) throw MalformedImage("failed to initialize PNG reader");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw MalformedImage("failed to initialize PNG reader");
  }

  std::vector<uint8_t> pixels;
  std::vector<png_bytep> rows;
  PngReadState st{bytes.data(), bytes.size(), 0};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw MalformedImage("invalid PNG stream: " + errmsg);
  }

  png_set_read_fn(png, &st, png_mem_read);
  png_read_info(png, info);

  png_set_expand(png);          // palette -> rgb, low bit depth -> 8
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw MalformedImage("unexpected PNG row layout");
  }

  pixels.resize(static_cast<size_t>(w) * h * 3);
  rows.resize(h);
  for (int y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<size_t>(y) * stride;

  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  return Raster(w, h, 3, std::move(pixels));
}

// ---- JPEG ----

struct JpegErrorMgr {
  jpeg_error_mgr base;
  jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_raise(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  longjmp(err->jump, 1);
}

void jpeg_quiet(j_common_ptr, int) {}

Raster decode_jpeg(std::span<const uint8_t> bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_raise;
  err.base.emit_message = jpeg_quiet;

  std::vector<uint8_t> pixels;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw MalformedImage(std::string("invalid JPEG stream: ") + err.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  pixels.resize(static_cast<size_t>(w) * h * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    uint8_t* row = pixels.data() + static_cast<size_t>(cinfo.output_scanline) * w * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  return Raster(w, h, 3, std::move(pixels));
}

} // namespace

Raster decode(std::span<const uint8_t> bytes) {
  if (has_png_magic(bytes)) return decode_png(bytes);
  if (has_jpeg_magic(bytes)) return decode_jpeg(bytes);
  throw UnsupportedFormat("not a PNG or JPEG stream");
}

std::vector<uint8_t> encode_png(const Raster& img) {
  if (img.empty()) throw DimensionMismatch("cannot encode empty raster");
  std::string errmsg;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_raise, png_quiet_warn);
  if (!png) throw MalformedImage("failed to initialize PNG writer");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw MalformedImage("failed to initialize PNG writer");
  }

  std::vector<uint8_t> out;
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = const_cast<png_bytep>(img.row(y));

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw MalformedImage("PNG encode failed: " + errmsg);
  }

  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, img.width(), img.height(), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<uint8_t> encode_jpeg(const Raster& img, int quality) {
  if (img.empty()) throw DimensionMismatch("cannot encode empty raster");
  jpeg_compress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_raise;
  err.base.emit_message = jpeg_quiet;

  unsigned char* buf = nullptr;
  unsigned long buf_size = 0;

  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buf) free(buf);
    throw MalformedImage(std::string("JPEG encode failed: ") + err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &buf_size);
  cinfo.image_width = img.width();
  cinfo.image_height = img.height();
  cinfo.input_components = img.channels();
  cinfo.in_color_space = img.channels() == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, std::clamp(quality, 1, 100), TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.row(static_cast<int>(cinfo.next_scanline)));
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::vector<uint8_t> out(buf, buf + buf_size);
  jpeg_destroy_compress(&cinfo);
  free(buf);
  return out;
}

Raster load_image(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open image file: " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode(bytes);
  } catch (const Error& e) {
    throw MalformedImage(path.string() + ": " + e.what());
  }
}

void save_png(const Raster& img, const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = encode_png(img);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("short write to " + path.string());
}

Raster to_gray(const Raster& img) {
  if (img.channels() == 1) return img;
  Raster out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* src = img.row(y);
    uint8_t* dst = out.row(y);
    for (int x = 0; x < img.width(); ++x) {
      const double g = 0.299 * src[3 * x] + 0.587 * src[3 * x + 1] + 0.114 * src[3 * x + 2];
      dst[x] = static_cast<uint8_t>(std::clamp<long>(std::lround(g), 0, 255));
    }
  }
  return out;
}

Raster crop(const Raster& img, const Rect& r) {
  const Rect bounds{0, 0, img.width(), img.height()};
  const Rect clipped = r.intersect(bounds);
  if (clipped.empty()) throw EmptyCrop("crop rectangle does not intersect the image");
  Raster out(clipped.w, clipped.h, img.channels());
  const size_t row_bytes = static_cast<size_t>(clipped.w) * img.channels();
  for (int y = 0; y < clipped.h; ++y) {
    const uint8_t* src = img.row(clipped.y + y) + static_cast<size_t>(clipped.x) * img.channels();
    std::memcpy(out.row(y), src, row_bytes);
  }
  return out;
}

Raster resize(const Raster& img, int w, int h) {
  if (w <= 0 || h <= 0) throw DimensionMismatch("resize dimensions must be positive");
  const int ch = img.channels();
  Raster out(w, h, ch);
  const double scale_x = static_cast<double>(img.width()) / w;
  const double scale_y = static_cast<double>(img.height()) / h;

  for (int yo = 0; yo < h; ++yo) {
    const double sy = (yo + 0.5) * scale_y - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, img.height() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = std::clamp(sy - y0, 0.0, 1.0);
    const uint8_t* r0 = img.row(y0);
    const uint8_t* r1 = img.row(y1);
    uint8_t* dst = out.row(yo);
    for (int xo = 0; xo < w; ++xo) {
      const double sx = (xo + 0.5) * scale_x - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, img.width() - 1);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = std::clamp(sx - x0, 0.0, 1.0);
      for (int c = 0; c < ch; ++c) {
        const double top = (1.0 - fx) * r0[x0 * ch + c] + fx * r0[x1 * ch + c];
        const double bot = (1.0 - fx) * r1[x0 * ch + c] + fx * r1[x1 * ch + c];
        const double v = (1.0 - fy) * top + fy * bot;
        dst[xo * ch + c] = static_cast<uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
      }
    }
  }
  return out;
}

Raster hflip(const Raster& img) {
  const int ch = img.channels();
  Raster out(img.width(), img.height(), ch);
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* src = img.row(y);
    uint8_t* dst = out.row(y);
    for (int x = 0; x < img.width(); ++x) {
      const uint8_t* s = src + static_cast<size_t>(img.width() - 1 - x) * ch;
      uint8_t* d = dst + static_cast<size_t>(x) * ch;
      for (int c = 0; c < ch; ++c) d[c] = s[c];
    }
  }
  return out;
}

} // namespace courtprior
