#pragma once

#include <filesystem>
#include <string>

#include "signforge/models/network.hpp"

namespace signforge::models {

/// Versioned binary container: magic, header (architecture id, class count,
/// temperature, width factor, manifest JSON as a length-prefixed field),
/// then little-endian float64 weight blobs in layer order.
std::string serialize_model(const Network& net);

/// Parses serialize_model() bytes. Distinct FormatError kinds for bad magic,
/// bad version, truncation, and weight-shape mismatch against the rebuilt
/// architecture.
Network deserialize_model(const std::string& bytes);

void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

}  // namespace signforge::models
