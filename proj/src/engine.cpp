#include "cryptompress/engine.hpp"

#include <string>

#include "cryptompress/error.hpp"

namespace cryptompress {

namespace {

[[noreturn]] void integrity(const std::string& what) { throw Error(ErrorCode::IntegrityFailure, what); }

}  // namespace

AddSubMatrix::AddSubMatrix(const std::array<std::uint8_t, 4>& orders) : orders_(orders) {
  for (auto o : orders_) {
    if (o > 0xF) throw Error(ErrorCode::ValueOutOfRange, "order exceeds a nibble");
  }
}

TargetTraversal traverse_target(std::span<const Prime> residual, const AddSubMatrix& asm_table,
                                std::vector<TraceStep>* trace) {
  if (residual.empty()) throw Error(ErrorCode::EmptyResidual, "nothing left to traverse");

  TargetTraversal out;
  out.target = residual.front();
  const Prime target = out.target;
  int cursor = value(target);
  int n = 0;

  // `crossed` collects the non-target cells the cursor has moved past; once
  // the cursor reaches the end it is exactly the next residual.
  std::vector<Prime>& crossed = out.residual;
  crossed.reserve(residual.size());

  std::size_t pos = 1;
  while (pos < residual.size()) {
    bool absorbed = false;
    if (residual[pos] == target) {
      std::size_t run = 0;
      while (pos + run < residual.size() && residual[pos + run] == target) ++run;
      pos += run;
      cursor += static_cast<int>(run) * value(target);
      ++n;
      out.events.push_back({static_cast<std::uint8_t>(n), static_cast<std::uint8_t>(run)});
      absorbed = true;
    } else {
      cursor += asm_table.delta(target, residual[pos]);
      crossed.push_back(residual[pos]);
      ++pos;
      ++n;
    }
    if (trace != nullptr) {
      TraceStep step;
      step.target = target;
      step.seq = n;
      step.value = cursor;
      step.absorbed = absorbed;
      step.left = crossed;
      step.right.assign(residual.begin() + static_cast<std::ptrdiff_t>(pos), residual.end());
      trace->push_back(std::move(step));
    }
  }

  if (n == 0 && trace != nullptr) {
    // A lone target never moves; it still produces a row holding its outcome.
    trace->push_back(TraceStep{target, 0, cursor, false, {}, {}});
  }

  out.outcome = cursor;
  out.last_seq = n;
  return out;
}

CompressedBlock compress_block(const SymbolBlock& block, const AddSubMatrix& asm_table,
                               std::vector<TraceStep>* trace) {
  CompressedBlock cb;
  std::vector<Prime> residual(block.begin(), block.end());
  std::vector<TermEntry> processed;
  processed.reserve(4);

  while (!residual.empty()) {
    TargetTraversal t = traverse_target(residual, asm_table, trace);
    cb.rm[t.target] = t.outcome;
    cb.sm[t.target] = std::move(t.events);
    processed.push_back({t.target, t.last_seq});
    residual = std::move(t.residual);
  }

  const std::size_t m = processed.size();
  for (std::size_t j = 0; j < m; ++j) cb.tm.slots[j] = processed[m - 1 - j];
  return cb;
}

SymbolBlock decompress_block(const CompressedBlock& cb, const AddSubMatrix& asm_table) {
  std::array<bool, 4> seen{};
  bool gap = false;
  for (const auto& slot : cb.tm.slots) {
    if (!slot) {
      gap = true;
      continue;
    }
    if (gap) integrity("term matrix slots are not a prefix");
    const int idx = index_of(slot->prime);
    if (seen[static_cast<std::size_t>(idx)]) integrity("prime named twice in term matrix");
    seen[static_cast<std::size_t>(idx)] = true;
    if (slot->last_seq < 0 || slot->last_seq > kBlockSymbols) integrity("last sequence out of range");
  }
  for (Prime p : kPrimes) {
    const bool present = seen[static_cast<std::size_t>(index_of(p))];
    if (present != cb.rm[p].has_value()) integrity("reduced matrix disagrees with term matrix");
    if (!present && !cb.sm[p].empty()) integrity("sequence events for an absent prime");
  }
  if (!cb.tm.slots[0]) integrity("term matrix is empty");

  std::vector<Prime> cells;
  cells.reserve(kBlockSymbols);

  for (const auto& slot : cb.tm.slots) {
    if (!slot) break;
    const Prime target = slot->prime;
    const std::vector<SequenceEvent>& events = cb.sm[target];

    // Events must be strictly increasing inside 1..last_seq so that walking
    // the sequence numbers downwards consumes every one of them.
    int prev = 0;
    for (const SequenceEvent& e : events) {
      if (e.seq <= prev || e.seq > slot->last_seq) integrity("sequence numbers out of order");
      if (e.redundant == 0) integrity("event absorbs no cells");
      prev = e.seq;
    }

    long long cursor_value = *cb.rm[target];
    std::size_t cursor = cells.size();
    auto next_event = events.rbegin();

    for (int n = slot->last_seq; n >= 1; --n) {
      if (next_event != events.rend() && next_event->seq == n) {
        const int run = next_event->redundant;
        if (cells.size() + static_cast<std::size_t>(run) >= kBlockSymbols) {
          integrity("reconstruction overflows the block");
        }
        cursor_value -= static_cast<long long>(run) * value(target);
        cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(cursor), static_cast<std::size_t>(run), target);
        ++next_event;
      } else {
        if (cursor == 0) integrity("inverse crossing with no cell to the left");
        const Prime left = cells[cursor - 1];
        if (left == target) integrity("inverse crossing over a same-prime cell");
        cursor_value -= asm_table.delta(target, left);
        --cursor;
      }
    }

    if (cursor != 0 || cursor_value != value(target)) integrity("cursor did not restore its prime");
    if (cells.size() >= kBlockSymbols) integrity("reconstruction overflows the block");
    cells.insert(cells.begin(), target);
  }

  if (cells.size() != kBlockSymbols) integrity("reconstructed block has wrong length");
  SymbolBlock out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cells[i];
  return out;
}

}  // namespace cryptompress
