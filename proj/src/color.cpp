#include "rpewl/color.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <numeric>

#include "rpewl/error.hpp"

namespace rpewl {

namespace {

static_assert(sizeof(crypto_generichash_state) <= 384);

constexpr std::array<std::uint8_t, 16> kKey = {0x72, 0x70, 0x65, 0x77, 0x6c, 0x2d, 0x63, 0x6f,
                                               0x6c, 0x6f, 0x72, 0x2d, 0x6b, 0x65, 0x79, 0x31};

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw Error("refine", "libsodium failed to initialize");
}

void put_le(std::uint8_t* out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(x >> (8 * i));
}

}  // namespace

std::string ColorId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(32);
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

double ColorId::as_token() const {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x = (x << 8) | bytes[i];
  return static_cast<double>(x >> 12);
}

ColorHasher::ColorHasher(std::uint8_t tag) {
  ensure_sodium();
  auto* st = reinterpret_cast<crypto_generichash_state*>(state_.data());
  crypto_generichash_init(st, kKey.data(), kKey.size(), 16);
  raw(&tag, 1);
}

void ColorHasher::raw(const void* p, std::size_t len) {
  if (done_) throw Error("refine", "hasher already finished");
  crypto_generichash_update(reinterpret_cast<crypto_generichash_state*>(state_.data()),
                            static_cast<const unsigned char*>(p), len);
}

ColorHasher& ColorHasher::add(const ColorId& c) {
  raw(c.bytes.data(), c.bytes.size());
  return *this;
}

ColorHasher& ColorHasher::add(std::int64_t x) {
  std::uint8_t b[8];
  put_le(b, static_cast<std::uint64_t>(x));
  raw(b, 8);
  return *this;
}

ColorHasher& ColorHasher::add(std::span<const std::int64_t> xs) {
  add(static_cast<std::int64_t>(xs.size()));
  for (auto x : xs) add(x);
  return *this;
}

ColorHasher& ColorHasher::add(const std::string& s) {
  add(static_cast<std::int64_t>(s.size()));
  raw(s.data(), s.size());
  return *this;
}

ColorHasher& ColorHasher::add_multiset(std::vector<std::uint8_t>& records, std::size_t record_size) {
  if (record_size == 0 || records.size() % record_size != 0) throw Error("refine", "malformed multiset records");
  const std::size_t count = records.size() / record_size;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  const std::uint8_t* base = records.data();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::memcmp(base + a * record_size, base + b * record_size, record_size) < 0;
  });
  add(static_cast<std::int64_t>(count));
  add(static_cast<std::int64_t>(record_size));
  for (std::size_t i : order) raw(base + i * record_size, record_size);
  return *this;
}

ColorId ColorHasher::finish() {
  ColorId id;
  crypto_generichash_final(reinterpret_cast<crypto_generichash_state*>(state_.data()), id.bytes.data(), 16);
  done_ = true;
  return id;
}

ColorId multiset_digest(std::vector<ColorId> colors) {
  std::sort(colors.begin(), colors.end());
  ColorHasher h(0x7f);
  h.add(static_cast<std::int64_t>(colors.size()));
  for (const auto& c : colors) h.add(c);
  return h.finish();
}

}  // namespace rpewl
