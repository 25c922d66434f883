#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sortnetc {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint8_t> data;
};

/// Binary P5 with maxval <= 255.
std::string encode_pgm(const GrayImage& image);
GrayImage decode_pgm(const std::string& bytes);

void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace sortnetc
