#include <doctest.h>

#include "cryptompress/error.hpp"
#include "support.hpp"

using namespace cryptompress;
using namespace testsupport;

namespace {

std::vector<SequenceEvent> ev(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<SequenceEvent> out;
  for (auto [s, r] : pairs) out.push_back({static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(r)});
  return out;
}

CompressedBlock example_compressed() {
  CompressedBlock cb;
  cb.rm[Prime::P2] = 4;
  cb.rm[Prime::P3] = 4;
  cb.rm[Prime::P5] = 31;
  cb.rm[Prime::P7] = 42;
  cb.sm[Prime::P2] = ev({{1, 1}});
  cb.sm[Prime::P3] = ev({{3, 1}});
  cb.sm[Prime::P5] = ev({{1, 2}, {8, 1}, {12, 1}});
  cb.sm[Prime::P7] = ev({{1, 1}, {3, 1}, {5, 1}, {7, 2}});
  cb.tm.slots = {TermEntry{Prime::P2, 1}, TermEntry{Prime::P3, 3}, TermEntry{Prime::P7, 8},
                 TermEntry{Prime::P5, 13}};
  return cb;
}

int count_runs_after_head(const std::vector<Prime>& residual) {
  int runs = 0;
  for (std::size_t i = 1; i < residual.size(); ++i) {
    if (residual[i] == residual[0] && (i == 1 || residual[i - 1] != residual[0])) ++runs;
  }
  return runs;
}

}  // namespace

TEST_CASE("delta lookups match the worked-example table") {
  const AddSubMatrix t = example_asm();
  CHECK(t.delta(Prime::P5, Prime::P2) == -1);
  CHECK(t.delta(Prime::P5, Prime::P7) == 1);
  CHECK(t.delta(Prime::P3, Prime::P2) == -1);
  CHECK(t.delta(Prime::P7, Prime::P3) == 1);
  CHECK_THROWS_AS(AddSubMatrix({0x10, 0, 0, 0}), Error);
}

TEST_CASE("traverse the first target of the worked example") {
  const auto residual = prime_vec({5, 5, 5, 7, 7, 3, 7, 2, 7, 5, 2, 7, 7, 5, 3});
  std::vector<TraceStep> trace;
  const TargetTraversal t = traverse_target(residual, example_asm(), &trace);
  CHECK(t.target == Prime::P5);
  CHECK(t.outcome == 31);
  CHECK(t.events == ev({{1, 2}, {8, 1}, {12, 1}}));
  CHECK(t.last_seq == 13);
  CHECK(t.residual == prime_vec({7, 7, 3, 7, 2, 7, 2, 7, 7, 3}));

  std::vector<int> values;
  for (const auto& s : trace) values.push_back(s.value);
  CHECK(values == std::vector<int>{15, 16, 17, 18, 19, 18, 19, 24, 23, 24, 25, 30, 31});
  CHECK(trace.front().right == prime_vec({7, 7, 3, 7, 2, 7, 5, 2, 7, 7, 5, 3}));
  CHECK(trace.back().right.empty());
}

TEST_CASE("traverse the second target of the worked example") {
  const auto residual = prime_vec({7, 7, 3, 7, 2, 7, 2, 7, 7, 3});
  const TargetTraversal t = traverse_target(residual, example_asm());
  CHECK(t.target == Prime::P7);
  CHECK(t.outcome == 42);
  CHECK(t.events == ev({{1, 1}, {3, 1}, {5, 1}, {7, 2}}));
  CHECK(t.last_seq == 8);
  CHECK(t.residual == prime_vec({3, 2, 2, 3}));
}

TEST_CASE("single run and empty residual") {
  const std::vector<Prime> twos(15, Prime::P2);
  const TargetTraversal t = traverse_target(twos, AddSubMatrix({0xF, 0, 0x3, 0x9}));
  CHECK(t.outcome == 30);
  CHECK(t.events == ev({{1, 14}}));
  CHECK(t.last_seq == 1);
  CHECK(t.residual.empty());

  try {
    traverse_target(std::span<const Prime>{}, example_asm());
    FAIL("expected EmptyResidual");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyResidual);
  }
}

TEST_CASE("compress the worked example") {
  const CompressedBlock cb =
      compress_block(symbols({5, 5, 5, 7, 7, 3, 7, 2, 7, 5, 2, 7, 7, 5, 3}), example_asm());
  CHECK(cb == example_compressed());
}

TEST_CASE("compress and decompress a constant block") {
  SymbolBlock twos{};
  twos.fill(Prime::P2);
  const CompressedBlock cb = compress_block(twos, example_asm());
  CHECK(cb.rm[Prime::P2] == 30);
  CHECK_FALSE(cb.rm[Prime::P3].has_value());
  CHECK(cb.sm[Prime::P2] == ev({{1, 14}}));
  CHECK(cb.tm.slots[0] == TermEntry{Prime::P2, 1});
  CHECK_FALSE(cb.tm.slots[1].has_value());
  CHECK(decompress_block(cb, example_asm()) == twos);
}

TEST_CASE("decompress the worked example") {
  CHECK(decompress_block(example_compressed(), example_asm()) ==
        symbols({5, 5, 5, 7, 7, 3, 7, 2, 7, 5, 2, 7, 7, 5, 3}));
}

TEST_CASE("decompression rejects inconsistent matrices") {
  auto expect_integrity = [](const CompressedBlock& cb, const AddSubMatrix& t) {
    try {
      decompress_block(cb, t);
      FAIL("expected IntegrityFailure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IntegrityFailure);
    }
  };

  CompressedBlock wrong_outcome = example_compressed();
  wrong_outcome.rm[Prime::P5] = 30;
  expect_integrity(wrong_outcome, example_asm());

  // A different order for 5 changes what its crossings add up to.
  expect_integrity(example_compressed(), build_asm({0x2, 0x3, 0xD, 0x7}));

  CompressedBlock too_far = example_compressed();
  too_far.tm.slots[0] = TermEntry{Prime::P2, 3};  // needs crossings with nothing to the left
  expect_integrity(too_far, example_asm());

  CompressedBlock gap = example_compressed();
  gap.tm.slots[1].reset();
  expect_integrity(gap, example_asm());

  CompressedBlock extra_cells = example_compressed();
  extra_cells.sm[Prime::P2] = ev({{1, 3}});
  extra_cells.rm[Prime::P2] = 8;
  expect_integrity(extra_cells, example_asm());

  CompressedBlock zero_run = example_compressed();
  zero_run.sm[Prime::P3] = ev({{3, 0}});
  expect_integrity(zero_run, example_asm());

  CompressedBlock stray = example_compressed();
  stray.sm[Prime::P7].push_back({9, 1});
  expect_integrity(stray, example_asm());

  expect_integrity(CompressedBlock{}, example_asm());
}

TEST_CASE("closed-form outcomes, conservation and event counts") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const SymbolBlock block = random_block(rng);
    const AddSubMatrix table = random_asm(rng);
    const CompressedBlock cb = compress_block(block, table);
    const ClosedForm oracle = closed_form(block, table);

    int consumed = 0;
    for (Prime p : kPrimes) {
      const auto idx = static_cast<std::size_t>(index_of(p));
      REQUIRE(cb.rm[p].has_value() == oracle.present[idx]);
      if (!oracle.present[idx]) continue;
      CHECK(*cb.rm[p] == oracle.outcome[idx]);
      consumed += 1;
      for (const auto& e : cb.sm[p]) {
        consumed += e.redundant;
        CHECK(e.seq >= 1);
        CHECK(e.seq <= 14);
        CHECK(e.redundant >= 1);
        CHECK(e.redundant <= 14);
      }
    }
    CHECK(consumed == 15);
  }
}

TEST_CASE("event-count identity per target") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    std::vector<Prime> residual = [&] {
      const SymbolBlock b = random_block(rng);
      return std::vector<Prime>(b.begin(), b.end());
    }();
    const AddSubMatrix table = random_asm(rng);
    while (!residual.empty()) {
      const TargetTraversal t = traverse_target(residual, table);
      CHECK(static_cast<int>(t.events.size()) == count_runs_after_head(residual));
      CHECK(t.last_seq == static_cast<int>(t.events.size() + t.residual.size()));
      for (std::size_t k = 1; k < t.events.size(); ++k) CHECK(t.events[k].seq > t.events[k - 1].seq);
      residual = t.residual;
    }
  }
}

TEST_CASE("term matrix names the last processed target first") {
  const CompressedBlock cb = compress_block(symbols({3, 2, 3, 3, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7}), example_asm());
  // processing order 3, 2, 7
  REQUIRE(cb.tm.slots[0].has_value());
  CHECK(cb.tm.slots[0]->prime == Prime::P7);
  CHECK(cb.tm.slots[1]->prime == Prime::P2);
  CHECK(cb.tm.slots[2]->prime == Prime::P3);
  CHECK_FALSE(cb.tm.slots[3].has_value());
}

TEST_CASE("decompress inverts compress") {
  std::mt19937_64 rng(5);
  std::vector<AddSubMatrix> tables;
  for (int i = 0; i < 100; ++i) tables.push_back(random_asm(rng));
  for (int i = 0; i < 10000; ++i) {
    const SymbolBlock block = random_block(rng);
    const AddSubMatrix& table = tables[static_cast<std::size_t>(i) % tables.size()];
    REQUIRE(decompress_block(compress_block(block, table), table) == block);
  }
}

TEST_CASE("adversarial orders drive values negative without clamping") {
  const AddSubMatrix all_minus = build_asm({0, 0, 0, 0});
  const SymbolBlock block = symbols({2, 3, 5, 7, 3, 5, 7, 3, 5, 7, 3, 5, 7, 3, 5});
  const CompressedBlock cb = compress_block(block, all_minus);
  CHECK(*cb.rm[Prime::P2] == 2 - 14);
  CHECK(decompress_block(cb, all_minus) == block);
}
