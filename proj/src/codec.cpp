#include "cryptompress/codec.hpp"

#include <cctype>

#include "cryptompress/error.hpp"

namespace cryptompress {

namespace {

constexpr std::uint32_t kBlockMask = (1u << kBlockBits) - 1;

}  // namespace

Prime prime_from_value(int v) {
  switch (v) {
    case 2: return Prime::P2;
    case 3: return Prime::P3;
    case 5: return Prime::P5;
    case 7: return Prime::P7;
    default: throw Error(ErrorCode::ValueOutOfRange, "not a block prime: " + std::to_string(v));
  }
}

Block30::Block30(std::uint32_t bits) : bits_(bits) {
  if ((bits & ~kBlockMask) != 0) {
    throw Error(ErrorCode::ValueOutOfRange, "block value exceeds 30 bits");
  }
}

Block30 Block30::from_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() != kBlockBits) {
    throw Error(ErrorCode::WrongLength,
                "expected 30 bits, got " + std::to_string(bits.size()));
  }
  std::uint32_t v = 0;
  for (auto b : bits) {
    if (b > 1) throw Error(ErrorCode::ValueOutOfRange, "bit value must be 0 or 1");
    v = (v << 1) | b;
  }
  return Block30(v);
}

Block30 Block30::from_bit_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(kBlockBits);
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::ValueOutOfRange, std::string("unexpected character '") + c + "'");
    }
  }
  return from_bits(bits);
}

std::string Block30::to_bit_string() const {
  std::string out;
  out.reserve(kBlockBits);
  for (int i = kBlockBits - 1; i >= 0; --i) out.push_back(((bits_ >> i) & 1u) ? '1' : '0');
  return out;
}

SymbolBlock map_bits_to_symbols(Block30 block) {
  SymbolBlock out{};
  for (int i = 0; i < kBlockSymbols; ++i) {
    const int shift = kBlockBits - 2 * (i + 1);
    out[static_cast<std::size_t>(i)] = prime_at(static_cast<int>((block.value() >> shift) & 3u));
  }
  return out;
}

SymbolBlock map_bits_to_symbols(std::span<const std::uint8_t> bits) {
  return map_bits_to_symbols(Block30::from_bits(bits));
}

Block30 unmap_symbols_to_bits(const SymbolBlock& block) {
  std::uint32_t v = 0;
  for (Prime p : block) v = (v << 2) | static_cast<std::uint32_t>(index_of(p));
  return Block30(v);
}

Block30 unmap_symbols_to_bits(std::span<const Prime> symbols) {
  if (symbols.size() != kBlockSymbols) {
    throw Error(ErrorCode::WrongLength,
                "expected 15 symbols, got " + std::to_string(symbols.size()));
  }
  SymbolBlock block{};
  for (std::size_t i = 0; i < block.size(); ++i) block[i] = symbols[i];
  return unmap_symbols_to_bits(block);
}

PaddedMessage segment_message(std::span<const std::uint8_t> payload) {
  if (payload.empty()) throw Error(ErrorCode::EmptyInput, "payload is empty");

  const std::size_t total_bits = payload.size() * 8;
  const std::size_t block_count = (total_bits + kBlockBits - 1) / kBlockBits;

  PaddedMessage msg;
  msg.blocks.reserve(block_count);
  std::uint32_t acc = 0;
  int filled = 0;
  for (std::uint8_t byte : payload) {
    for (int b = 7; b >= 0; --b) {
      acc = (acc << 1) | ((byte >> b) & 1u);
      if (++filled == kBlockBits) {
        msg.blocks.emplace_back(acc);
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) {
    msg.blocks.emplace_back(acc << (kBlockBits - filled));
    msg.tail_bits = filled;
  } else {
    msg.tail_bits = kBlockBits;
  }
  return msg;
}

std::vector<std::uint8_t> reassemble_message(const PaddedMessage& message) {
  if (message.blocks.empty()) throw Error(ErrorCode::EmptyInput, "message has no blocks");
  if (message.tail_bits < 1 || message.tail_bits > kBlockBits) {
    throw Error(ErrorCode::ValueOutOfRange, "tail_bits must be in 1..30");
  }
  const std::size_t total_bits =
      (message.blocks.size() - 1) * kBlockBits + static_cast<std::size_t>(message.tail_bits);
  if (total_bits % 8 != 0) {
    throw Error(ErrorCode::ValueOutOfRange, "meaningful bit count is not a whole number of bytes");
  }

  std::vector<std::uint8_t> out;
  out.reserve(total_bits / 8);
  std::uint8_t acc = 0;
  int filled = 0;
  std::size_t emitted = 0;
  for (const Block30& block : message.blocks) {
    for (int i = kBlockBits - 1; i >= 0 && emitted < total_bits; --i, ++emitted) {
      acc = static_cast<std::uint8_t>((acc << 1) | ((block.value() >> i) & 1u));
      if (++filled == 8) {
        out.push_back(acc);
        acc = 0;
        filled = 0;
      }
    }
  }
  return out;
}

std::string to_string(const SymbolBlock& block) {
  std::string out;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += std::to_string(value(block[i]));
  }
  return out;
}

}  // namespace cryptompress
