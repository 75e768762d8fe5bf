#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "veritas/embedding.hpp"
#include "veritas/error.hpp"
#include "veritas/text.hpp"

namespace veritas {

namespace {

constexpr char kMagic[4] = {'F', 'R', 'V', 'E'};

template <class T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  template <class T>
  T get_le(Errc on_short, const char* what) {
    need(sizeof(T), on_short, what);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::string_view take(std::size_t n, Errc on_short, const char* what) {
    need(n, on_short, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n, Errc code, const char* what) const {
    if (remaining() < n) {
      throw Error(code, std::string(what) + " needs " + std::to_string(n) + " bytes, " +
                            std::to_string(remaining()) + " left");
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_string16(std::string& out, const std::string& s, const char* what) {
  if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(Errc::InvalidArgument, std::string(what) + " longer than 65535 bytes");
  }
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.append(s);
}

}  // namespace

std::string encode_embedding_file(const EmbeddingMatrix& m) {
  std::string out;
  out.reserve(24 + m.values().size() * 4 + m.rows() * 16);
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kFrveVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.dim());
  for (float v : m.values()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  for (const auto& id : m.ids()) put_string16(out, id, "review id");
  put_string16(out, m.provider_fingerprint(), "provider fingerprint");
  return out;
}

EmbeddingMatrix decode_embedding_file(std::string_view bytes) {
  Reader in(bytes);
  const auto magic = in.take(4, Errc::TruncatedPayload, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw Error(Errc::BadMagic, "expected \"FRVE\"");
  const auto version = in.get_le<std::uint32_t>(Errc::TruncatedPayload, "version");
  if (version != kFrveVersion) throw Error(Errc::UnsupportedVersion, "FRVE version " + std::to_string(version));
  const auto n = in.get_le<std::uint64_t>(Errc::TruncatedPayload, "row count");
  const auto d = in.get_le<std::uint64_t>(Errc::TruncatedPayload, "dimension");
  if (d == 0) throw Error(Errc::DimensionMismatch, "FRVE dimension is 0");
  if (n > std::numeric_limits<std::uint64_t>::max() / 4 / d || n * d * 4 > in.remaining()) {
    throw Error(Errc::TruncatedPayload, "payload of " + std::to_string(n) + "x" + std::to_string(d) +
                                            " floats exceeds the " + std::to_string(in.remaining()) +
                                            " remaining bytes");
  }

  std::vector<float> values(n * d);
  for (auto& v : values) v = std::bit_cast<float>(in.get_le<std::uint32_t>(Errc::TruncatedPayload, "payload"));

  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (in.remaining() < 2) {
      throw Error(Errc::IdCountMismatch, "id section ends after " + std::to_string(i) + " of " + std::to_string(n));
    }
    const auto len = in.get_le<std::uint16_t>(Errc::IdCountMismatch, "id length");
    auto id = in.take(len, Errc::IdCountMismatch, "id bytes");
    if (!text::is_valid_utf8(id)) throw Error(Errc::EncodingError, "review id " + std::to_string(i) + " is not UTF-8");
    ids.emplace_back(id);
  }
  const auto fp_len = in.get_le<std::uint16_t>(Errc::TruncatedPayload, "fingerprint length");
  std::string fingerprint(in.take(fp_len, Errc::TruncatedPayload, "fingerprint"));
  if (in.remaining() != 0) {
    throw Error(Errc::IdCountMismatch, std::to_string(in.remaining()) + " trailing bytes after fingerprint");
  }
  return EmbeddingMatrix(std::move(ids), std::move(values), d, std::move(fingerprint));
}

void write_embedding_file(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  const std::string bytes = encode_embedding_file(matrix);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write to '" + path.string() + "' failed");
}

EmbeddingMatrix read_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_embedding_file(buf.str());
}

}  // namespace veritas
