#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptompress/cipher.hpp"
#include "cryptompress/keyschedule.hpp"

namespace cryptompress {

// Key file: "CMK1" | sticky_count u8 | base key (16) | sticky keys (4 each, big-endian).
// Cipher file: "CMC1" | version u8 | sticky_rounds u8 | block_count u32 BE | tail_bits u8 |
//   per block: packed order nibbles (2) then 20 cells row-major, each a tag byte plus payload.
inline constexpr std::uint8_t kCipherVersion = 1;
inline constexpr std::size_t kKeyHeaderBytes = 21;

struct CipherFile {
  int sticky_rounds = 0;
  int tail_bits = kBlockBits;
  std::vector<CipherGrid> blocks;

  friend bool operator==(const CipherFile&, const CipherFile&) = default;
};

std::vector<std::uint8_t> write_key(const KeyChain& chain);
// Throws BadMagic, Truncated or TrailingBytes.
KeyChain read_key(std::span<const std::uint8_t> bytes);

// Throws ValueOutOfRange for grids that cannot be represented (values beyond
// their field widths, block count or sticky rounds disagreeing).
std::vector<std::uint8_t> write_cipher(const CipherFile& file);
// Throws BadMagic, BadVersion, Truncated, MalformedCell, InventoryMismatch or
// TrailingBytes.
CipherFile read_cipher(std::span<const std::uint8_t> bytes);

// Bytes of one grid's 20 cells in wire form (no order nibbles).
std::vector<std::uint8_t> encode_cells(const CellTable& cells);

}  // namespace cryptompress
