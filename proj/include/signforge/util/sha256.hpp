#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace signforge::util {

/// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::array<std::uint8_t, 32> digest();

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
  bool finalized_ = false;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_hex(const void* data, std::size_t len);
std::string digest_hex(const std::array<std::uint8_t, 32>& digest);

/// Hash of a file's raw bytes. Throws IoError if unreadable.
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace signforge::util
