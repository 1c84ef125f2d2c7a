#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cryptompress/codec.hpp"
#include "cryptompress/engine.hpp"
#include "cryptompress/error.hpp"
#include "cryptompress/keyschedule.hpp"

namespace cryptompress {

struct EmptyCell {
  friend bool operator==(const EmptyCell&, const EmptyCell&) = default;
};

// One row or column of the add-sub table: the position of the X marker and
// the signs of the other three entries (bit set = +1, columns MSB first,
// the X bit always clear).
struct AsmString {
  std::uint8_t x_position = 0;
  std::uint8_t sign_mask = 0;
  friend bool operator==(const AsmString&, const AsmString&) = default;
};

struct RmOutcome {
  std::int32_t value = 0;
  friend bool operator==(const RmOutcome&, const RmOutcome&) = default;
};

struct SmList {
  std::vector<SequenceEvent> pairs;
  friend bool operator==(const SmList&, const SmList&) = default;
};

struct TmPair {
  std::uint8_t prime_code = 0;  // 0..3 for primes 2, 3, 5, 7
  std::uint8_t last_seq = 0;
  friend bool operator==(const TmPair&, const TmPair&) = default;
};

// Alternative order doubles as the wire tag.
using GridCell = std::variant<EmptyCell, AsmString, RmOutcome, SmList, TmPair>;

enum class CellTag : std::uint8_t { Empty = 0, AsmString = 1, RmOutcome = 2, SmList = 3, TmPair = 4 };

inline CellTag tag_of(const GridCell& cell) noexcept { return static_cast<CellTag>(cell.index()); }

inline constexpr int kGridRows = 4;
inline constexpr int kGridCells = kGridRows * kMatrixKinds;

/// 4 rows (target slots 2, 3, 5, 7) by 5 data columns (ASMH, ASMV, RM, SM, TM).
struct CellTable {
  std::array<std::array<GridCell, kMatrixKinds>, kGridRows> rows;

  GridCell& at(MatrixKind kind, int slot) {
    return rows[static_cast<std::size_t>(slot)][static_cast<std::size_t>(kind)];
  }
  const GridCell& at(MatrixKind kind, int slot) const {
    return rows[static_cast<std::size_t>(slot)][static_cast<std::size_t>(kind)];
  }

  friend bool operator==(const CellTable&, const CellTable&) = default;
};

/// Ciphertext of one block. The order column travels in clear, which leaks
/// the add-sub orders; this mirrors the published cipher layout.
struct CipherGrid {
  std::array<std::uint8_t, 4> orders{};
  CellTable cells;
  int sticky_rounds = 0;

  friend bool operator==(const CipherGrid&, const CipherGrid&) = default;
};

// Throws `code` unless the table holds exactly the item inventory a block can
// produce: 8 ASM strings, 4 SM lists, and equal numbers (1..4) of RM outcomes
// and TM pairs, the rest empty.
void check_inventory(const CellTable& cells, ErrorCode code);

// Unscrambled cell table for a compressed block.
CellTable to_items(const CompressedBlock& cb, const AddSubMatrix& asm_table);
// Throws IntegrityFailure if any cell has the wrong kind for its slot or the
// ASM strings disagree with asm_table.
CompressedBlock from_items(const CellTable& items, const AddSubMatrix& asm_table);

// Throws ValueOutOfRange if any S or R exceeds a nibble.
SequenceMatrix xor_sequence_matrix(SequenceMatrix sm, const XorSubkeys& subkeys);

SequenceMatrix sticky_round_apply(SequenceMatrix sm, std::uint32_t sticky);
SequenceMatrix sticky_round_invert(SequenceMatrix sm, std::uint32_t sticky);

// Cell that cell (kind, slot) trades places with under placement nibble `nibble`.
std::pair<MatrixKind, int> swap_partner(MatrixKind kind, int slot, std::uint8_t nibble) noexcept;

// Throws IncompleteGrid if `items` is not a full item inventory.
CellTable scramble(CellTable items, const NibbleTable& table);
CellTable unscramble(CellTable cells, const NibbleTable& table);

CipherGrid encrypt_block(Block30 block, const KeyChain& chain);
// Throws RoundCountMismatch or IntegrityFailure.
Block30 decrypt_block(const CipherGrid& grid, const KeyChain& chain);

// Appends one sticky key and rewrites the SM cells of the grid with it.
std::pair<CipherGrid, KeyChain> harden(const CipherGrid& grid, const KeyChain& chain, EntropySource& entropy);
// Same, applying one new sticky key to every block of a message.
KeyChain harden(std::span<CipherGrid> grids, const KeyChain& chain, EntropySource& entropy);

std::string to_string(const GridCell& cell);
std::string order_string(std::uint8_t order);

}  // namespace cryptompress
