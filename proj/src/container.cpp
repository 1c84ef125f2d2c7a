#include "cryptompress/container.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "cryptompress/error.hpp"

namespace cryptompress {

namespace {

constexpr std::array<std::uint8_t, 4> kKeyMagic = {'C', 'M', 'K', '1'};
constexpr std::array<std::uint8_t, 4> kCipherMagic = {'C', 'M', 'C', '1'};
// Smallest possible block: order nibbles plus 20 tag bytes.
constexpr std::size_t kMinBlockBytes = 2 + kGridCells;
constexpr std::size_t kMaxSmPairs = kBlockSymbols;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) {
      throw Error(ErrorCode::TrailingBytes, std::to_string(remaining()) + " unexpected bytes after the payload");
    }
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(ErrorCode::Truncated, "input ends early at offset " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void check_magic(Reader& r, const std::array<std::uint8_t, 4>& magic) {
  const std::size_t available = std::min<std::size_t>(r.remaining(), magic.size());
  const auto got = r.bytes(available);
  if (!std::equal(got.begin(), got.end(), magic.begin())) throw Error(ErrorCode::BadMagic, "unrecognised file magic");
  if (available < magic.size()) throw Error(ErrorCode::Truncated, "input ends inside the magic");
}

void write_cell(Writer& w, const GridCell& cell) {
  w.u8(static_cast<std::uint8_t>(tag_of(cell)));
  struct Encode {
    Writer& w;
    void operator()(const EmptyCell&) const {}
    void operator()(const AsmString& s) const {
      if (s.x_position > 3 || s.sign_mask > 0xF) throw Error(ErrorCode::ValueOutOfRange, "ASM string out of range");
      w.u8(s.x_position);
      w.u8(s.sign_mask);
    }
    void operator()(const RmOutcome& r) const { w.u32(static_cast<std::uint32_t>(r.value)); }
    void operator()(const SmList& l) const {
      if (l.pairs.size() > kMaxSmPairs) throw Error(ErrorCode::ValueOutOfRange, "too many sequence pairs");
      w.u8(static_cast<std::uint8_t>(l.pairs.size()));
      for (const auto& p : l.pairs) {
        if (p.seq > 0xF || p.redundant > 0xF) throw Error(ErrorCode::ValueOutOfRange, "sequence pair out of range");
        w.u8(p.seq);
        w.u8(p.redundant);
      }
    }
    void operator()(const TmPair& t) const {
      if (t.prime_code > 3) throw Error(ErrorCode::ValueOutOfRange, "TM prime code out of range");
      w.u8(t.prime_code);
      w.u8(t.last_seq);
    }
  };
  std::visit(Encode{w}, cell);
}

GridCell read_cell(Reader& r) {
  const std::uint8_t tag = r.u8();
  switch (static_cast<CellTag>(tag)) {
    case CellTag::Empty:
      return EmptyCell{};
    case CellTag::AsmString: {
      AsmString s{r.u8(), 0};
      s.sign_mask = r.u8();
      if (s.x_position > 3 || s.sign_mask > 0xF) throw Error(ErrorCode::MalformedCell, "ASM string out of range");
      return s;
    }
    case CellTag::RmOutcome:
      return RmOutcome{static_cast<std::int32_t>(r.u32())};
    case CellTag::SmList: {
      const std::uint8_t count = r.u8();
      if (count > kMaxSmPairs) throw Error(ErrorCode::MalformedCell, "too many sequence pairs");
      SmList list;
      list.pairs.reserve(count);
      for (int i = 0; i < count; ++i) {
        SequenceEvent e{r.u8(), 0};
        e.redundant = r.u8();
        if (e.seq > 0xF || e.redundant > 0xF) throw Error(ErrorCode::MalformedCell, "sequence pair out of range");
        list.pairs.push_back(e);
      }
      return list;
    }
    case CellTag::TmPair: {
      TmPair t{r.u8(), 0};
      t.last_seq = r.u8();
      if (t.prime_code > 3) throw Error(ErrorCode::MalformedCell, "TM prime code out of range");
      return t;
    }
  }
  throw Error(ErrorCode::MalformedCell, "unknown cell tag " + std::to_string(tag));
}

void write_cells(Writer& w, const CellTable& cells) {
  for (const auto& row : cells.rows) {
    for (const auto& cell : row) write_cell(w, cell);
  }
}

}  // namespace

std::vector<std::uint8_t> write_key(const KeyChain& chain) {
  if (chain.sticky.size() > 0xFF) throw Error(ErrorCode::ValueOutOfRange, "more than 255 sticky keys");
  Writer w;
  w.bytes(kKeyMagic);
  w.u8(static_cast<std::uint8_t>(chain.sticky.size()));
  w.bytes(chain.base.bytes());
  for (std::uint32_t s : chain.sticky) w.u32(s);
  return w.take();
}

KeyChain read_key(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_magic(r, kKeyMagic);
  const std::uint8_t count = r.u8();
  KeyChain chain;
  chain.base = BaseKey::from_bytes(r.bytes(kBaseKeyBytes));
  chain.sticky.reserve(count);
  for (int i = 0; i < count; ++i) chain.sticky.push_back(r.u32());
  r.expect_end();
  return chain;
}

std::vector<std::uint8_t> encode_cells(const CellTable& cells) {
  Writer w;
  write_cells(w, cells);
  return w.take();
}

std::vector<std::uint8_t> write_cipher(const CipherFile& file) {
  if (file.blocks.empty()) throw Error(ErrorCode::ValueOutOfRange, "cipher file needs at least one block");
  if (file.sticky_rounds < 0 || file.sticky_rounds > 0xFF) {
    throw Error(ErrorCode::ValueOutOfRange, "sticky rounds must fit a byte");
  }
  if (file.tail_bits < 1 || file.tail_bits > kBlockBits) throw Error(ErrorCode::ValueOutOfRange, "tail_bits out of range");

  Writer w;
  w.bytes(kCipherMagic);
  w.u8(kCipherVersion);
  w.u8(static_cast<std::uint8_t>(file.sticky_rounds));
  w.u32(static_cast<std::uint32_t>(file.blocks.size()));
  w.u8(static_cast<std::uint8_t>(file.tail_bits));
  for (const CipherGrid& grid : file.blocks) {
    if (grid.sticky_rounds != file.sticky_rounds) {
      throw Error(ErrorCode::ValueOutOfRange, "block sticky rounds disagree with the file header");
    }
    for (auto o : grid.orders) {
      if (o > 0xF) throw Error(ErrorCode::ValueOutOfRange, "order exceeds a nibble");
    }
    w.u8(static_cast<std::uint8_t>((grid.orders[0] << 4) | grid.orders[1]));
    w.u8(static_cast<std::uint8_t>((grid.orders[2] << 4) | grid.orders[3]));
    write_cells(w, grid.cells);
  }
  return w.take();
}

CipherFile read_cipher(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  check_magic(r, kCipherMagic);
  const std::uint8_t version = r.u8();
  if (version != kCipherVersion) throw Error(ErrorCode::BadVersion, "unsupported version " + std::to_string(version));

  CipherFile file;
  file.sticky_rounds = r.u8();
  const std::uint32_t block_count = r.u32();
  file.tail_bits = r.u8();
  if (file.tail_bits < 1 || file.tail_bits > kBlockBits) {
    throw Error(ErrorCode::MalformedCell, "tail_bits " + std::to_string(file.tail_bits) + " outside 1..30");
  }
  if (block_count == 0) throw Error(ErrorCode::InventoryMismatch, "cipher file holds no blocks");
  if (static_cast<std::uint64_t>(block_count) * kMinBlockBytes > r.remaining()) {
    throw Error(ErrorCode::Truncated, "declared block count exceeds the input");
  }

  file.blocks.reserve(block_count);
  for (std::uint32_t b = 0; b < block_count; ++b) {
    CipherGrid grid;
    const std::uint8_t hi = r.u8();
    const std::uint8_t lo = r.u8();
    grid.orders = {static_cast<std::uint8_t>(hi >> 4), static_cast<std::uint8_t>(hi & 0xF),
                   static_cast<std::uint8_t>(lo >> 4), static_cast<std::uint8_t>(lo & 0xF)};
    for (auto& row : grid.cells.rows) {
      for (auto& cell : row) cell = read_cell(r);
    }
    check_inventory(grid.cells, ErrorCode::InventoryMismatch);
    grid.sticky_rounds = file.sticky_rounds;
    file.blocks.push_back(std::move(grid));
  }
  r.expect_end();
  return file;
}

}  // namespace cryptompress
