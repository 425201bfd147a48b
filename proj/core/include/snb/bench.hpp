#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snb/engine.hpp"
#include "snb/generator.hpp"

namespace snb {

/// Unordered-rule invocations made by the reductions tried from one state
/// with `s` signs on the stack and maximum branching `n`: the top is fixed
/// and joined by every subset of size i-1 of the other s-1 signs,
/// i = 1..min(n, s). Throws std::invalid_argument unless s, n >= 1.
std::uint64_t predicted_calls(std::size_t s, std::size_t n);

struct CallCountModel {
  std::size_t s = 0;
  std::size_t n = 0;
  std::uint64_t predicted = 0;

  static CallCountModel make(std::size_t s, std::size_t n) { return {s, n, predicted_calls(s, n)}; }
};

struct BenchSentence {
  std::string id;
  std::string text;
};

/// The three test sentences: 3, 6 and 9 words.
std::vector<BenchSentence> fixture_sentences();

/// One row per sentence, measured on its grammatical target bag.
/// Times are medians in seconds; negative means the mode was not run.
struct BenchRow {
  std::string sentence;
  std::size_t bag_size = 0;
  std::uint64_t calls = 0;
  double naive_first = -1;
  double naive_total = -1;
  double memo_int_first = -1;
  double memo_int_total = -1;
  double memo_list_first = -1;
  double memo_list_total = -1;
  std::uint64_t hits = 0;
  double hit_ratio = 0;
  std::uint64_t misses = 0;
  std::size_t bags = 0;
  std::size_t productive_bags = 0;
  std::size_t bag_id = 0;
  double speedup = -1;  // naive_total / memo_int_total
};

struct BenchCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GenReport {
  std::vector<BenchRow> rows;
  std::vector<BenchCheck> checks;

  bool all_passed() const;
};

struct BenchOptions {
  std::vector<GenMode> modes{GenMode::Naive, GenMode::MemoIndex, GenMode::MemoTagList};
  int runs = 5;
};

/// For each sentence: parse, transfer, pick the first target bag that
/// generates anything, then time every requested mode on it. Also checks
/// the counter laws, mode equivalence, the hit-ratio trend across rows and
/// memo-int speedup on the largest bag. Errors are rethrown prefixed with
/// the sentence id.
GenReport run_bench(const Engine& engine, std::span<const BenchSentence> sentences,
                    const BenchOptions& options = {});

enum class ReportFormat { Table, Tsv, JsonLines };

std::string emit_report(const GenReport& report, ReportFormat format);
std::string emit_checks(const GenReport& report);

/// Hit ratio as printed in reports: two decimals.
std::string format_ratio(double ratio);

}  // namespace snb
