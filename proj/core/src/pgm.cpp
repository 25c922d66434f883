#include "sortnetc/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sortnetc/error.hpp"

namespace sortnetc {

std::string encode_pgm(const GrayImage& image) {
  if (image.maxval == 0 || image.maxval > 255) {
    throw Error(ErrorKind::invalid_argument, "only 8-bit PGM is supported");
  }
  if (image.data.size() != image.width * image.height) {
    throw Error(ErrorKind::dimension_mismatch, "pixel buffer does not match image size");
  }
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n" + std::to_string(image.maxval) + "\n";
  out.append(image.data.begin(), image.data.end());
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      t.push_back(bytes_[pos_++]);
    }
    if (t.empty()) throw Error(ErrorKind::parse_error, "truncated PGM header");
    return t;
  }

  std::size_t number() {
    const std::string t = token();
    std::size_t v = 0;
    for (char ch : t) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        throw Error(ErrorKind::parse_error, "bad number '" + t + "' in PGM header");
      }
      v = v * 10 + static_cast<std::size_t>(ch - '0');
    }
    return v;
  }

  // exactly one whitespace byte separates maxval from the raster
  std::size_t raster_start() {
    if (pos_ >= bytes_.size()) throw Error(ErrorKind::parse_error, "PGM raster missing");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  HeaderReader reader(bytes);
  if (reader.token() != "P5") throw Error(ErrorKind::parse_error, "not a binary PGM (P5)");
  GrayImage image;
  image.width = reader.number();
  image.height = reader.number();
  image.maxval = static_cast<std::uint32_t>(reader.number());
  if (image.maxval == 0 || image.maxval > 255) {
    throw Error(ErrorKind::parse_error, "only 8-bit PGM is supported");
  }
  const std::size_t start = reader.raster_start();
  const std::size_t n = image.width * image.height;
  if (bytes.size() < start + n) throw Error(ErrorKind::parse_error, "truncated PGM raster");
  image.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                    bytes.begin() + static_cast<std::ptrdiff_t>(start + n));
  return image;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::file_io, "cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pgm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::file_io, "failed writing " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::file_io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

}  // namespace sortnetc
