#include "signforge/models/model_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "signforge/models/architectures.hpp"
#include "signforge/util/csv.hpp"
#include "signforge/util/error.hpp"

namespace signforge::models {

namespace {

constexpr char kMagic[4] = {'S', 'G', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::string& out, const void* data, std::size_t len) {
  out.append(static_cast<const char*>(data), len);
}

template <typename T>
void put_pod(std::string& out, const T& v) {
  put_bytes(out, &v, sizeof(T));
}

void put_string(std::string& out, const std::string& s) {
  put_pod(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void read_bytes(void* dst, std::size_t len, const char* what) {
    if (pos_ + len > bytes_.size()) {
      throw FormatError(FormatError::Kind::Truncated,
                        std::string("model file truncated while reading ") + what);
    }
    std::memcpy(dst, bytes_.data() + pos_, len);
    pos_ += len;
  }

  template <typename T>
  T read_pod(const char* what) {
    T v{};
    read_bytes(&v, sizeof(T), what);
    return v;
  }

  std::string read_string(const char* what) {
    auto len = read_pod<std::uint32_t>(what);
    std::string s(len, '\0');
    read_bytes(s.data(), len, what);
    return s;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const Network& net) {
  std::string out;
  put_bytes(out, kMagic, sizeof(kMagic));
  put_pod(out, kVersion);
  put_pod(out, static_cast<std::uint8_t>(net.architecture()));
  put_pod(out, static_cast<std::uint32_t>(net.num_classes()));
  put_pod(out, net.temperature());
  put_pod(out, net.width_factor());
  put_pod(out, static_cast<std::uint8_t>(net.final_relu() ? 1 : 0));
  put_string(out, net.manifest().to_json());

  auto params = const_cast<Network&>(net).params();
  put_pod(out, static_cast<std::uint32_t>(params.size()));
  for (const numcore::Tensor* p : params) {
    put_pod(out, static_cast<std::uint32_t>(p->rank()));
    for (std::size_t d : p->shape()) put_pod(out, static_cast<std::uint64_t>(d));
    put_bytes(out, p->data(), p->size() * sizeof(double));
  }
  return out;
}

Network deserialize_model(const std::string& bytes) {
  Reader r(bytes);
  char magic[4];
  r.read_bytes(magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(FormatError::Kind::BadMagic, "not a model file (bad magic bytes)");
  }
  auto version = r.read_pod<std::uint32_t>("version");
  if (version != kVersion) {
    throw FormatError(FormatError::Kind::BadVersion,
                      "unsupported model format version " + std::to_string(version));
  }

  auto arch_byte = r.read_pod<std::uint8_t>("architecture id");
  if (arch_byte > 1) {
    throw FormatError(FormatError::Kind::Corrupt,
                      "unknown architecture id " + std::to_string(arch_byte));
  }
  auto id = static_cast<ArchitectureId>(arch_byte);
  auto num_classes = r.read_pod<std::uint32_t>("class count");
  auto temperature = r.read_pod<double>("temperature");
  auto width_factor = r.read_pod<double>("width factor");
  bool final_relu = r.read_pod<std::uint8_t>("final relu flag") != 0;
  std::string manifest_json = r.read_string("training manifest");

  if (num_classes < 2 || !(temperature > 0.0) || !(width_factor > 0.0 && width_factor <= 1.0)) {
    throw FormatError(FormatError::Kind::Corrupt, "model header fields out of range");
  }

  Network net = build_architecture(id, num_classes, temperature, width_factor, final_relu);
  net.set_manifest(TrainingManifest::from_json(manifest_json));

  auto params = net.params();
  auto blob_count = r.read_pod<std::uint32_t>("weight blob count");
  if (blob_count != params.size()) {
    throw FormatError(FormatError::Kind::ShapeMismatch,
                      "model carries " + std::to_string(blob_count) + " weight blobs, " +
                          std::string(architecture_name(id)) + " expects " +
                          std::to_string(params.size()));
  }
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto rank = r.read_pod<std::uint32_t>("blob rank");
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = r.read_pod<std::uint64_t>("blob dimension");
    if (shape != params[t]->shape()) {
      throw FormatError(FormatError::Kind::ShapeMismatch,
                        "weight blob " + std::to_string(t) + " has shape " +
                            numcore::shape_to_string(shape) + ", architecture expects " +
                            numcore::shape_to_string(params[t]->shape()));
    }
    r.read_bytes(params[t]->data(), params[t]->size() * sizeof(double), "weight data");
    if (!params[t]->all_finite()) {
      throw FormatError(FormatError::Kind::Corrupt,
                        "weight blob " + std::to_string(t) + " contains non-finite values");
    }
  }
  if (!r.exhausted()) {
    throw FormatError(FormatError::Kind::Corrupt, "trailing bytes after model weights");
  }
  return net;
}

void save_model(const Network& net, const std::filesystem::path& path) {
  util::write_text_file(path, serialize_model(net));
}

Network load_model(const std::filesystem::path& path) {
  return deserialize_model(util::read_text_file(path));
}

}  // namespace signforge::models
