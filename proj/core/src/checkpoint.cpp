#include "cnsdecay/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

namespace {

constexpr char kMagic[4] = {'C', 'N', 'S', 'D'};

template <class U>
U swap_bytes(U v) {
  U out = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) out = (out << 8) | ((v >> (8 * i)) & 0xff);
  return out;
}

template <class T>
void put(std::vector<char>& buf, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U raw = std::bit_cast<U>(v);
  if constexpr (std::endian::native == std::endian::big) raw = swap_bytes(raw);
  char bytes[sizeof(U)];
  std::memcpy(bytes, &raw, sizeof(U));
  buf.insert(buf.end(), bytes, bytes + sizeof(U));
}

class Reader {
 public:
  Reader(const std::vector<char>& buf, const std::string& path) : buf_(buf), path_(path) {}

  template <class T>
  T get(const char* what) {
    if (buf_.size() - pos_ < sizeof(T)) throw FormatError(path_ + ": truncated while reading " + what);
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U raw;
    std::memcpy(&raw, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big) raw = swap_bytes(raw);
    return std::bit_cast<T>(raw);
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  std::size_t pos_ = 4;
  const std::vector<char>& buf_;
  const std::string& path_;
};

}  // namespace

PerturbationState Checkpoint::to_state() const {
  return PerturbationState::from_real(SpectralGrid(box_length, points), fields.rho, fields.m, t);
}

void write_checkpoint(const std::string& path, const PerturbationState& state, const FluidParams& params) {
  const SpectralGrid& g = state.grid();
  const RealState rs = state.to_real();
  std::vector<char> buf(kMagic, kMagic + 4);
  buf.reserve(4 + 4 + 8 * 6 + 8 * 4 * g.real_size());
  put<std::uint32_t>(buf, kCheckpointVersion);
  put<std::int64_t>(buf, g.points());
  for (double v : {g.box_length(), params.gamma, params.mu, params.lambda, state.time()}) put(buf, v);
  for (double v : rs.rho) put(buf, v);
  for (const auto& c : rs.m)
    for (double v : c) put(buf, v);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write to " + path + " failed");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path);
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) throw FormatError(path + ": bad magic");
  Reader r(buf, path);
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported version " + std::to_string(version));
  const auto n = r.get<std::int64_t>("N");
  if (n < 2 || n > 4096 || n % 2 != 0) throw FormatError(path + ": invalid N " + std::to_string(n));
  Checkpoint c;
  c.points = static_cast<int>(n);
  c.box_length = r.get<double>("L");
  c.params.gamma = r.get<double>("gamma");
  c.params.mu = r.get<double>("mu");
  c.params.lambda = r.get<double>("lambda");
  c.t = r.get<double>("t");
  if (!(c.box_length > 0.0) || !std::isfinite(c.box_length)) throw FormatError(path + ": invalid L");
  const std::size_t count = static_cast<std::size_t>(n) * n * n;
  if (r.remaining() != 4 * count * sizeof(double))
    throw FormatError(path + ": payload has " + std::to_string(r.remaining()) + " bytes, expected " +
                      std::to_string(4 * count * sizeof(double)));
  auto fill = [&](RealField& f) {
    f.resize(count);
    for (auto& v : f) v = r.get<double>("field");
  };
  fill(c.fields.rho);
  for (auto& comp : c.fields.m) fill(comp);
  return c;
}

}  // namespace cnsdecay
