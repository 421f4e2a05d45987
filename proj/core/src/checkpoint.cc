#include "tdk/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <vector>

#include <zlib.h>

namespace tdk {

namespace {

const char kMagic[8] = {'T', 'D', 'K', 'S', 'I', 'M', '0', '1'};

void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) b.push_back(static_cast<unsigned char>(v >> (8 * k)));
}

void put_f64(std::vector<unsigned char>& b, double v) {
  put_u64(b, std::bit_cast<std::uint64_t>(v));
}

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) b.push_back(static_cast<unsigned char>(v >> (8 * k)));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | p[k];
  return v;
}

double get_f64(const unsigned char* p) {
  return std::bit_cast<double>(get_u64(p));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint32_t checksum(const unsigned char* p, std::size_t n) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), p, static_cast<uInt>(n)));
}

}  // namespace

void checkpoint_write(const std::string& path, const CheckpointData& data) {
  const std::size_t n_modes = data.wbar.n_modes();
  const std::size_t n_y = data.wbar.n_y();
  if (data.A.n_modes() != n_modes)
    throw std::invalid_argument("checkpoint_write: field shapes disagree");

  std::vector<unsigned char> buf;
  buf.reserve(8 + 16 + 7 * 8 + 16 * (n_modes * n_y + n_modes) + 4);
  buf.insert(buf.end(), kMagic, kMagic + 8);
  put_u64(buf, n_modes);
  put_u64(buf, n_y);
  put_f64(buf, data.t);
  put_f64(buf, data.tau);
  put_f64(buf, data.eps);
  put_f64(buf, data.delta);
  put_f64(buf, data.r);
  put_f64(buf, data.half_length);
  put_f64(buf, data.y_max);
  const complex* w = data.wbar.data();
  for (std::size_t q = 0; q < n_modes * n_y; ++q) {
    put_f64(buf, w[q].real());
    put_f64(buf, w[q].imag());
  }
  for (std::size_t i = 0; i < n_modes; ++i) {
    put_f64(buf, data.A[i].real());
    put_f64(buf, data.A[i].imag());
  }
  put_u32(buf, checksum(buf.data(), buf.size()));

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr)
    throw std::runtime_error("checkpoint_write: cannot open " + path);
  const std::size_t written = std::fwrite(buf.data(), 1, buf.size(), f);
  std::fclose(f);
  if (written != buf.size())
    throw std::runtime_error("checkpoint_write: short write to " + path);
}

CheckpointData checkpoint_read(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr)
    throw std::runtime_error("checkpoint_read: cannot open " + path);
  std::vector<unsigned char> buf;
  unsigned char chunk[65536];
  std::size_t got;
  while ((got = std::fread(chunk, 1, sizeof chunk, f)) > 0)
    buf.insert(buf.end(), chunk, chunk + got);
  std::fclose(f);

  const std::size_t header = 8 + 16 + 7 * 8;
  if (buf.size() < header + 4)
    throw CorruptCheckpointError("checkpoint: truncated file");
  if (std::memcmp(buf.data(), kMagic, 8) != 0)
    throw CorruptCheckpointError("checkpoint: bad magic");

  const std::uint64_t n_modes = get_u64(buf.data() + 8);
  const std::uint64_t n_y = get_u64(buf.data() + 16);
  const std::size_t expected =
      header + 16 * (n_modes * n_y + n_modes) + 4;
  if (n_modes == 0 || n_y == 0 || n_modes > (1u << 24) || n_y > (1u << 24) ||
      buf.size() != expected)
    throw CorruptCheckpointError("checkpoint: length mismatch");
  const std::uint32_t stored = get_u32(buf.data() + buf.size() - 4);
  if (stored != checksum(buf.data(), buf.size() - 4))
    throw CorruptCheckpointError("checkpoint: checksum mismatch");

  CheckpointData data;
  const unsigned char* p = buf.data() + 24;
  data.t = get_f64(p);
  data.tau = get_f64(p + 8);
  data.eps = get_f64(p + 16);
  data.delta = get_f64(p + 24);
  data.r = get_f64(p + 32);
  data.half_length = get_f64(p + 40);
  data.y_max = get_f64(p + 48);
  p += 56;
  data.wbar = SpectralField(n_modes, n_y);
  complex* w = data.wbar.data();
  for (std::size_t q = 0; q < n_modes * n_y; ++q, p += 16)
    w[q] = complex(get_f64(p), get_f64(p + 8));
  data.A = SurfaceSpectrum(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i, p += 16)
    data.A[i] = complex(get_f64(p), get_f64(p + 8));
  return data;
}

}  // namespace tdk
