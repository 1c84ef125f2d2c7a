#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cryptompress/codec.hpp"

namespace cryptompress {

/// Lookup table of +1/-1 deltas applied when a target crosses a different
/// prime. Row t is the order nibble for target t; its bits are read MSB to
/// LSB as columns (2, 3, 5, 7), 1 meaning +1 and 0 meaning -1. The diagonal
/// bit is the absorption marker and is never read.
class AddSubMatrix {
 public:
  AddSubMatrix() = default;
  // Throws ValueOutOfRange if any order exceeds a nibble.
  explicit AddSubMatrix(const std::array<std::uint8_t, 4>& orders);

  // Delta for target crossing a cell of another prime. Returns 0 on the
  // diagonal, which the traversal never consults.
  int delta(Prime target, Prime crossed) const noexcept {
    if (target == crossed) return 0;
    const int bit = 3 - index_of(crossed);
    return ((orders_[static_cast<std::size_t>(index_of(target))] >> bit) & 1u) ? 1 : -1;
  }

  std::uint8_t order(Prime target) const noexcept {
    return orders_[static_cast<std::size_t>(index_of(target))];
  }
  const std::array<std::uint8_t, 4>& orders() const noexcept { return orders_; }

  friend bool operator==(const AddSubMatrix&, const AddSubMatrix&) = default;

 private:
  std::array<std::uint8_t, 4> orders_{};
};

struct SequenceEvent {
  std::uint8_t seq = 0;        // S_n
  std::uint8_t redundant = 0;  // R_n

  friend bool operator==(const SequenceEvent&, const SequenceEvent&) = default;
};

struct SequenceMatrix {
  std::array<std::vector<SequenceEvent>, 4> events;

  std::vector<SequenceEvent>& operator[](Prime p) { return events[static_cast<std::size_t>(index_of(p))]; }
  const std::vector<SequenceEvent>& operator[](Prime p) const {
    return events[static_cast<std::size_t>(index_of(p))];
  }

  friend bool operator==(const SequenceMatrix&, const SequenceMatrix&) = default;
};

struct ReducedMatrix {
  std::array<std::optional<std::int32_t>, 4> outcomes;

  std::optional<std::int32_t>& operator[](Prime p) { return outcomes[static_cast<std::size_t>(index_of(p))]; }
  const std::optional<std::int32_t>& operator[](Prime p) const {
    return outcomes[static_cast<std::size_t>(index_of(p))];
  }

  friend bool operator==(const ReducedMatrix&, const ReducedMatrix&) = default;
};

struct TermEntry {
  Prime prime = Prime::P2;
  int last_seq = 0;

  friend bool operator==(const TermEntry&, const TermEntry&) = default;
};

// Occupied slots form a left prefix; slot 0 names the target processed last.
struct TermMatrix {
  std::array<std::optional<TermEntry>, 4> slots;

  friend bool operator==(const TermMatrix&, const TermMatrix&) = default;
};

struct CompressedBlock {
  ReducedMatrix rm;
  SequenceMatrix sm;
  TermMatrix tm;

  friend bool operator==(const CompressedBlock&, const CompressedBlock&) = default;
};

/// One row of the step-by-step traversal view: the cursor value after step
/// `seq`, with the cells already crossed on its left and the untouched cells
/// on its right.
struct TraceStep {
  Prime target = Prime::P2;
  int seq = 0;
  int value = 0;
  bool absorbed = false;
  std::vector<Prime> left;
  std::vector<Prime> right;
};

struct TargetTraversal {
  Prime target = Prime::P2;
  int outcome = 0;
  std::vector<SequenceEvent> events;
  int last_seq = 0;
  std::vector<Prime> residual;
};

// Runs one target across the residual block. Throws EmptyResidual.
TargetTraversal traverse_target(std::span<const Prime> residual, const AddSubMatrix& asm_table,
                                std::vector<TraceStep>* trace = nullptr);

CompressedBlock compress_block(const SymbolBlock& block, const AddSubMatrix& asm_table,
                               std::vector<TraceStep>* trace = nullptr);

// Rebuilds the block. Throws IntegrityFailure whenever the matrices cannot
// have come from compress_block under this table, which is how a wrong key
// or a damaged ciphertext surfaces.
SymbolBlock decompress_block(const CompressedBlock& cb, const AddSubMatrix& asm_table);

}  // namespace cryptompress
