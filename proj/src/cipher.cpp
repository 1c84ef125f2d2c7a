#include "cryptompress/cipher.hpp"

#include <string>

#include "cryptompress/error.hpp"

namespace cryptompress {

namespace {

[[noreturn]] void integrity(const std::string& what) { throw Error(ErrorCode::IntegrityFailure, what); }

constexpr std::uint8_t bit_for_column(int column) noexcept { return static_cast<std::uint8_t>(1u << (3 - column)); }

AsmString row_string(const AddSubMatrix& table, int row) {
  const auto order = table.orders()[static_cast<std::size_t>(row)];
  return {static_cast<std::uint8_t>(row), static_cast<std::uint8_t>(order & ~bit_for_column(row) & 0xF)};
}

AsmString column_string(const AddSubMatrix& table, int column) {
  std::uint8_t mask = 0;
  for (int row = 0; row < 4; ++row) {
    if (row == column) continue;
    if (table.orders()[static_cast<std::size_t>(row)] & bit_for_column(column)) mask |= bit_for_column(row);
  }
  return {static_cast<std::uint8_t>(column), mask};
}

void check_nibbles(const SequenceMatrix& sm) {
  for (const auto& events : sm.events) {
    for (const auto& e : events) {
      if (e.seq > 0xF || e.redundant > 0xF) {
        throw Error(ErrorCode::ValueOutOfRange, "sequence value exceeds a nibble");
      }
    }
  }
}

// Placement schedule: (kind, slot) visited in cycle order, slot order.
template <typename Visit>
void for_each_swap(const NibbleTable& table, Visit&& visit) {
  for (int k = 0; k < kMatrixKinds; ++k) {
    for (int slot = 0; slot < kGridRows; ++slot) {
      const auto kind = static_cast<MatrixKind>(k);
      visit(kind, slot, swap_partner(kind, slot, table.at(kind, slot)));
    }
  }
}

SequenceMatrix sm_column(const CellTable& items) {
  SequenceMatrix sm;
  for (int slot = 0; slot < kGridRows; ++slot) {
    const auto* list = std::get_if<SmList>(&items.at(MatrixKind::Sm, slot));
    if (list == nullptr) integrity("SM slot does not hold a sequence list");
    sm.events[static_cast<std::size_t>(slot)] = list->pairs;
  }
  return sm;
}

void set_sm_column(CellTable& items, const SequenceMatrix& sm) {
  for (int slot = 0; slot < kGridRows; ++slot) {
    items.at(MatrixKind::Sm, slot) = SmList{sm.events[static_cast<std::size_t>(slot)]};
  }
}

}  // namespace

void check_inventory(const CellTable& cells, ErrorCode code) {
  std::array<int, 5> counts{};
  for (const auto& row : cells.rows) {
    for (const auto& cell : row) ++counts[cell.index()];
  }
  const int asm_strings = counts[static_cast<std::size_t>(CellTag::AsmString)];
  const int sm_lists = counts[static_cast<std::size_t>(CellTag::SmList)];
  const int rm = counts[static_cast<std::size_t>(CellTag::RmOutcome)];
  const int tm = counts[static_cast<std::size_t>(CellTag::TmPair)];
  if (asm_strings != 8 || sm_lists != 4 || rm != tm || rm < 1 || rm > 4) {
    throw Error(code, "cell inventory is not a complete block: " + std::to_string(asm_strings) + " ASM, " +
                          std::to_string(rm) + " RM, " + std::to_string(sm_lists) + " SM, " + std::to_string(tm) +
                          " TM");
  }
}

CellTable to_items(const CompressedBlock& cb, const AddSubMatrix& asm_table) {
  CellTable items;
  for (int slot = 0; slot < kGridRows; ++slot) {
    const Prime p = prime_at(slot);
    items.at(MatrixKind::AsmH, slot) = row_string(asm_table, slot);
    items.at(MatrixKind::AsmV, slot) = column_string(asm_table, slot);
    if (const auto& outcome = cb.rm[p]) {
      items.at(MatrixKind::Rm, slot) = RmOutcome{*outcome};
    } else {
      items.at(MatrixKind::Rm, slot) = EmptyCell{};
    }
    items.at(MatrixKind::Sm, slot) = SmList{cb.sm[p]};
    if (const auto& entry = cb.tm.slots[static_cast<std::size_t>(slot)]) {
      items.at(MatrixKind::Tm, slot) =
          TmPair{static_cast<std::uint8_t>(index_of(entry->prime)), static_cast<std::uint8_t>(entry->last_seq)};
    } else {
      items.at(MatrixKind::Tm, slot) = EmptyCell{};
    }
  }
  return items;
}

CompressedBlock from_items(const CellTable& items, const AddSubMatrix& asm_table) {
  CompressedBlock cb;
  for (int slot = 0; slot < kGridRows; ++slot) {
    const Prime p = prime_at(slot);

    const auto* row = std::get_if<AsmString>(&items.at(MatrixKind::AsmH, slot));
    const auto* column = std::get_if<AsmString>(&items.at(MatrixKind::AsmV, slot));
    if (row == nullptr || column == nullptr) integrity("ASM slot does not hold an ASM string");
    if (*row != row_string(asm_table, slot) || *column != column_string(asm_table, slot)) {
      integrity("ASM strings disagree with the key");
    }

    const GridCell& rm = items.at(MatrixKind::Rm, slot);
    if (const auto* outcome = std::get_if<RmOutcome>(&rm)) {
      cb.rm[p] = outcome->value;
    } else if (!std::holds_alternative<EmptyCell>(rm)) {
      integrity("RM slot holds a foreign cell");
    }

    const auto* list = std::get_if<SmList>(&items.at(MatrixKind::Sm, slot));
    if (list == nullptr) integrity("SM slot does not hold a sequence list");
    cb.sm[p] = list->pairs;

    const GridCell& tm = items.at(MatrixKind::Tm, slot);
    if (const auto* pair = std::get_if<TmPair>(&tm)) {
      if (pair->prime_code > 3) integrity("TM prime code out of range");
      cb.tm.slots[static_cast<std::size_t>(slot)] = TermEntry{prime_at(pair->prime_code), pair->last_seq};
    } else if (!std::holds_alternative<EmptyCell>(tm)) {
      integrity("TM slot holds a foreign cell");
    }
  }
  return cb;
}

SequenceMatrix xor_sequence_matrix(SequenceMatrix sm, const XorSubkeys& subkeys) {
  check_nibbles(sm);
  for (std::size_t t = 0; t < 4; ++t) {
    for (auto& e : sm.events[t]) {
      e.seq = static_cast<std::uint8_t>(e.seq ^ subkeys[2 * t]);
      e.redundant = static_cast<std::uint8_t>(e.redundant ^ subkeys[2 * t + 1]);
    }
  }
  return sm;
}

SequenceMatrix sticky_round_apply(SequenceMatrix sm, std::uint32_t sticky) {
  check_nibbles(sm);
  const auto k = split_nibbles(sticky);
  for (std::size_t t = 0; t < 4; ++t) {
    for (auto& e : sm.events[t]) {
      const auto s = static_cast<std::uint8_t>(e.seq ^ k[2 * t]);
      const auto r = static_cast<std::uint8_t>(e.redundant ^ k[2 * t + 1]);
      e.seq = r;
      e.redundant = s;
    }
  }
  return sm;
}

SequenceMatrix sticky_round_invert(SequenceMatrix sm, std::uint32_t sticky) {
  check_nibbles(sm);
  const auto k = split_nibbles(sticky);
  for (std::size_t t = 0; t < 4; ++t) {
    for (auto& e : sm.events[t]) {
      const auto s = static_cast<std::uint8_t>(e.redundant ^ k[2 * t]);
      const auto r = static_cast<std::uint8_t>(e.seq ^ k[2 * t + 1]);
      e.seq = s;
      e.redundant = r;
    }
  }
  return sm;
}

std::pair<MatrixKind, int> swap_partner(MatrixKind kind, int /*slot*/, std::uint8_t nibble) noexcept {
  // The 16 nibble values address the 16 cells outside the own column,
  // counted column by column starting at the next matrix in the cycle.
  const int column = (static_cast<int>(kind) + 1 + (nibble & 0xF) / kGridRows) % kMatrixKinds;
  return {static_cast<MatrixKind>(column), nibble % kGridRows};
}

CellTable scramble(CellTable items, const NibbleTable& table) {
  check_inventory(items, ErrorCode::IncompleteGrid);
  for_each_swap(table, [&](MatrixKind kind, int slot, std::pair<MatrixKind, int> partner) {
    std::swap(items.at(kind, slot), items.at(partner.first, partner.second));
  });
  return items;
}

CellTable unscramble(CellTable cells, const NibbleTable& table) {
  std::vector<std::pair<std::pair<MatrixKind, int>, std::pair<MatrixKind, int>>> schedule;
  schedule.reserve(kGridCells);
  for_each_swap(table, [&](MatrixKind kind, int slot, std::pair<MatrixKind, int> partner) {
    schedule.push_back({{kind, slot}, partner});
  });
  for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
    std::swap(cells.at(it->first.first, it->first.second), cells.at(it->second.first, it->second.second));
  }
  return cells;
}

CipherGrid encrypt_block(Block30 block, const KeyChain& chain) {
  const ParsedKey key = parse_key(chain.base);
  CompressedBlock cb = compress_block(map_bits_to_symbols(block), key.asm_table);
  cb.sm = xor_sequence_matrix(std::move(cb.sm), key.subkeys);
  for (std::uint32_t sticky : chain.sticky) cb.sm = sticky_round_apply(std::move(cb.sm), sticky);

  CipherGrid grid;
  grid.orders = key.asm_table.orders();
  grid.cells = scramble(to_items(cb, key.asm_table), key.table);
  grid.sticky_rounds = static_cast<int>(chain.sticky.size());
  return grid;
}

Block30 decrypt_block(const CipherGrid& grid, const KeyChain& chain) {
  if (grid.sticky_rounds != static_cast<int>(chain.sticky.size())) {
    throw Error(ErrorCode::RoundCountMismatch, "ciphertext carries " + std::to_string(grid.sticky_rounds) +
                                                   " sticky rounds, key chain has " +
                                                   std::to_string(chain.sticky.size()));
  }
  const ParsedKey key = parse_key(chain.base);
  if (grid.orders != key.asm_table.orders()) integrity("order column disagrees with the key");

  CompressedBlock cb = from_items(unscramble(grid.cells, key.table), key.asm_table);
  try {
    for (auto it = chain.sticky.rbegin(); it != chain.sticky.rend(); ++it) {
      cb.sm = sticky_round_invert(std::move(cb.sm), *it);
    }
    cb.sm = xor_sequence_matrix(std::move(cb.sm), key.subkeys);
  } catch (const Error& e) {
    integrity(std::string("sequence list unusable: ") + e.what());
  }
  return unmap_symbols_to_bits(decompress_block(cb, key.asm_table));
}

KeyChain harden(std::span<CipherGrid> grids, const KeyChain& chain, EntropySource& entropy) {
  for (const CipherGrid& grid : grids) {
    if (grid.sticky_rounds != static_cast<int>(chain.sticky.size())) {
      throw Error(ErrorCode::RoundCountMismatch, "ciphertext and key chain disagree on sticky rounds");
    }
  }
  KeyChain extended = extend_key(chain, entropy);
  const std::uint32_t sticky = extended.sticky.back();
  const NibbleTable table = parse_key(chain.base).table;

  for (CipherGrid& grid : grids) {
    CellTable items = unscramble(grid.cells, table);
    SequenceMatrix sm;
    try {
      sm = sticky_round_apply(sm_column(items), sticky);
    } catch (const Error& e) {
      integrity(std::string("cannot harden: ") + e.what());
    }
    set_sm_column(items, sm);
    grid.cells = scramble(std::move(items), table);
    grid.sticky_rounds += 1;
  }
  return extended;
}

std::pair<CipherGrid, KeyChain> harden(const CipherGrid& grid, const KeyChain& chain, EntropySource& entropy) {
  CipherGrid out = grid;
  KeyChain extended = harden(std::span<CipherGrid>(&out, 1), chain, entropy);
  return {std::move(out), std::move(extended)};
}

std::string order_string(std::uint8_t order) {
  std::string out;
  for (int b = 3; b >= 0; --b) out.push_back(((order >> b) & 1u) ? '1' : '0');
  return out;
}

std::string to_string(const GridCell& cell) {
  struct Render {
    std::string operator()(const EmptyCell&) const { return "-"; }
    std::string operator()(const AsmString& s) const {
      std::string out;
      for (int column = 0; column < 4; ++column) {
        if (column == s.x_position) {
          out += "X";
        } else {
          out += (s.sign_mask & bit_for_column(column)) ? "+1" : "-1";
        }
      }
      return out;
    }
    std::string operator()(const RmOutcome& r) const { return std::to_string(r.value); }
    std::string operator()(const SmList& l) const {
      if (l.pairs.empty()) return "{}";
      std::string out;
      for (std::size_t i = 0; i < l.pairs.size(); ++i) {
        if (i != 0) out += " ; ";
        out += std::to_string(l.pairs[i].seq) + "|" + std::to_string(l.pairs[i].redundant);
      }
      return out;
    }
    std::string operator()(const TmPair& t) const {
      return std::to_string(value(prime_at(t.prime_code))) + "|" + std::to_string(t.last_seq);
    }
  };
  return std::visit(Render{}, cell);
}

}  // namespace cryptompress
