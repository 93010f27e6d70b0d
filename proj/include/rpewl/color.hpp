#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rpewl {

// 128-bit content hash identifying a color by its full construction.
struct ColorId {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  /// Leading 52 bits as an exactly representable double, for token tensors.
  double as_token() const;
  friend auto operator<=>(const ColorId&, const ColorId&) = default;
};

// Incremental keyed BLAKE2b-128. Every field is length- or width-prefixed so
// distinct constructions never share a byte stream.
class ColorHasher {
 public:
  explicit ColorHasher(std::uint8_t tag);
  ColorHasher& add(const ColorId& c);
  ColorHasher& add(std::int64_t x);
  ColorHasher& add(std::span<const std::int64_t> xs);
  ColorHasher& add(const std::string& s);
  /// Sorted multiset of fixed-width records, hashed in byte order.
  ColorHasher& add_multiset(std::vector<std::uint8_t>& records, std::size_t record_size);
  ColorId finish();

 private:
  void raw(const void* p, std::size_t len);
  alignas(64) std::array<std::uint8_t, 384> state_{};
  bool done_ = false;
};

/// Digest of the multiset of colors (order-insensitive).
ColorId multiset_digest(std::vector<ColorId> colors);

}  // namespace rpewl
