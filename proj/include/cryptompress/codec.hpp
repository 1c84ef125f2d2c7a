#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cryptompress {

inline constexpr int kBlockBits = 30;
inline constexpr int kBlockSymbols = kBlockBits / 2;

// The four primes a bit pair maps to: 00 -> 2, 01 -> 3, 10 -> 5, 11 -> 7.
enum class Prime : std::uint8_t { P2 = 2, P3 = 3, P5 = 5, P7 = 7 };

inline constexpr std::array<Prime, 4> kPrimes = {Prime::P2, Prime::P3, Prime::P5, Prime::P7};

constexpr int value(Prime p) noexcept { return static_cast<int>(p); }

// Slot index 0..3 in target order (2, 3, 5, 7); identical to the bit pair.
constexpr int index_of(Prime p) noexcept {
  switch (p) {
    case Prime::P2: return 0;
    case Prime::P3: return 1;
    case Prime::P5: return 2;
    case Prime::P7: return 3;
  }
  return 0;
}

constexpr Prime prime_at(int index) noexcept { return kPrimes[static_cast<std::size_t>(index & 3)]; }

// Throws ValueOutOfRange unless v is one of 2, 3, 5, 7.
Prime prime_from_value(int v);

/// One 30-bit block. Bit 29 is the first (left-most) bit of the block.
class Block30 {
 public:
  constexpr Block30() = default;
  // Throws ValueOutOfRange if bits has anything set above bit 29.
  explicit Block30(std::uint32_t bits);

  // Exactly 30 entries of 0/1, left-most first. Throws WrongLength otherwise.
  static Block30 from_bits(std::span<const std::uint8_t> bits);
  // Accepts '0'/'1' with optional whitespace, e.g. "10 10 10 11 ...".
  static Block30 from_bit_string(std::string_view text);

  constexpr std::uint32_t value() const noexcept { return bits_; }
  std::string to_bit_string() const;

  friend constexpr bool operator==(Block30, Block30) = default;

 private:
  std::uint32_t bits_ = 0;
};

using SymbolBlock = std::array<Prime, kBlockSymbols>;

SymbolBlock map_bits_to_symbols(Block30 block);
// Throws WrongLength unless bits holds exactly 30 entries.
SymbolBlock map_bits_to_symbols(std::span<const std::uint8_t> bits);

Block30 unmap_symbols_to_bits(const SymbolBlock& block);
// Throws WrongLength unless symbols holds exactly 15 entries.
Block30 unmap_symbols_to_bits(std::span<const Prime> symbols);

struct PaddedMessage {
  std::vector<Block30> blocks;
  int tail_bits = kBlockBits;  // meaningful bits in the final block, 1..30

  friend bool operator==(const PaddedMessage&, const PaddedMessage&) = default;
};

// Splits the payload into 30-bit units, right zero-padding the final one.
// Throws EmptyInput on an empty payload.
PaddedMessage segment_message(std::span<const std::uint8_t> payload);

// Inverse of segment_message. Throws ValueOutOfRange if tail_bits is outside
// 1..30 or the meaningful bit count is not a whole number of bytes.
std::vector<std::uint8_t> reassemble_message(const PaddedMessage& message);

std::string to_string(const SymbolBlock& block);

}  // namespace cryptompress
