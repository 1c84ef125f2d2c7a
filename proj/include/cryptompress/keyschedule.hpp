#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cryptompress/engine.hpp"

namespace cryptompress {

inline constexpr std::size_t kBaseKeyBytes = 16;
inline constexpr int kBaseKeyBits = 128;
inline constexpr int kStickyBits = 32;

/// The 128-bit base key, stored in its wire order: ASM key (6 bytes), RM key
/// (2), TM key (2), SM key (6).
class BaseKey {
 public:
  BaseKey() = default;
  explicit BaseKey(const std::array<std::uint8_t, kBaseKeyBytes>& bytes) : bytes_(bytes) {}
  // Throws WrongLength unless exactly 16 bytes are given.
  static BaseKey from_bytes(std::span<const std::uint8_t> bytes);
  // 32 hex digits; whitespace, brackets and "0x" prefixes are ignored.
  static BaseKey from_hex(std::string_view hex);

  const std::array<std::uint8_t, kBaseKeyBytes>& bytes() const noexcept { return bytes_; }
  std::string to_hex() const;

  // 4-bit group `index` counted from the most significant nibble (0..31).
  std::uint8_t nibble(int index) const noexcept;
  void set_nibble(int index, std::uint8_t v) noexcept;
  // Bit `index` counted from the most significant bit (0..127).
  bool bit(int index) const noexcept;
  void flip_bit(int index) noexcept;

  std::uint16_t asm_orders() const noexcept { return word16(0); }
  std::uint16_t asm_horizontal() const noexcept { return word16(2); }
  std::uint16_t asm_vertical() const noexcept { return word16(4); }
  std::uint16_t rm_key() const noexcept { return word16(6); }
  std::uint16_t tm_key() const noexcept { return word16(8); }
  std::uint16_t sm_arrangement() const noexcept { return word16(10); }
  std::uint32_t sm_xor() const noexcept;

  friend bool operator==(const BaseKey&, const BaseKey&) = default;

 private:
  std::uint16_t word16(std::size_t offset) const noexcept {
    return static_cast<std::uint16_t>((bytes_[offset] << 8) | bytes_[offset + 1]);
  }

  std::array<std::uint8_t, kBaseKeyBytes> bytes_{};
};

struct KeyChain {
  BaseKey base;
  std::vector<std::uint32_t> sticky;  // application order

  int effective_bits() const noexcept {
    return kBaseKeyBits + kStickyBits * static_cast<int>(sticky.size());
  }

  friend bool operator==(const KeyChain&, const KeyChain&) = default;
};

// Column order of the ciphertext grid, which is also the cycle order of the
// keyed placement.
enum class MatrixKind : std::uint8_t { AsmH = 0, AsmV = 1, Rm = 2, Sm = 3, Tm = 4 };
inline constexpr int kMatrixKinds = 5;

// One placement nibble per (matrix kind, target slot).
struct NibbleTable {
  std::array<std::array<std::uint8_t, 4>, kMatrixKinds> values{};

  std::uint8_t at(MatrixKind kind, int slot) const noexcept {
    return values[static_cast<std::size_t>(kind)][static_cast<std::size_t>(slot)];
  }

  friend bool operator==(const NibbleTable&, const NibbleTable&) = default;
};

// s1..s8; (s1, s2) serve prime 2, (s3, s4) prime 3, and so on.
using XorSubkeys = std::array<std::uint8_t, 8>;

struct ParsedKey {
  AddSubMatrix asm_table;
  NibbleTable table;
  XorSubkeys subkeys{};
};

// Splits a 16-bit word into four nibbles, most significant first.
std::array<std::uint8_t, 4> split_nibbles(std::uint16_t word) noexcept;
// Splits a 32-bit word into eight nibbles, most significant first.
std::array<std::uint8_t, 8> split_nibbles(std::uint32_t word) noexcept;

ParsedKey parse_key(const BaseKey& key);
// Throws WrongLength unless exactly 16 bytes are given.
ParsedKey parse_key(std::span<const std::uint8_t> raw);

AddSubMatrix build_asm(const std::array<std::uint8_t, 4>& orders);

/// Source of key material. Production code uses SystemEntropy; tests and
/// the analysis harness inject a seeded generator.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  // Throws EntropyUnavailable if the source cannot deliver.
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint32_t next_u32();
};

class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic, not for real keys.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

BaseKey generate_key(EntropySource& entropy);
KeyChain extend_key(KeyChain chain, EntropySource& entropy);

}  // namespace cryptompress
