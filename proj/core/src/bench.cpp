#include "snb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "snb/error.hpp"

namespace snb {

namespace {

using Clock = std::chrono::steady_clock;

struct ModeRun {
  double first = -1;
  double total = 0;
  std::uint64_t calls = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::vector<std::string> sentences;  // sorted, joined with spaces
};

ModeRun time_mode(const Engine& engine, const SignBag& bag, GenMode mode) {
  ModeRun run;
  GenSession session(mode);
  const auto start = Clock::now();
  shake_generate(engine.target_grammar(), bag, engine.target_goal(), session,
                 [&](const GenResult& r) {
                   if (run.first < 0)
                     run.first = std::chrono::duration<double>(Clock::now() - start).count();
                   std::string s;
                   for (const auto& w : r.sentence) s += (s.empty() ? "" : " ") + w;
                   run.sentences.push_back(std::move(s));
                   return true;
                 });
  run.total = std::chrono::duration<double>(Clock::now() - start).count();
  if (run.first < 0) run.first = run.total;
  run.calls = session.calls();
  if (const MemoTable* memo = session.memo()) {
    run.hits = memo->hits();
    run.misses = memo->misses();
  }
  std::sort(run.sentences.begin(), run.sentences.end());
  return run;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

std::string seconds(double t) {
  if (t < 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

std::string fixed2(double v) {
  if (v < 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const std::vector<std::string>& columns() {
  static const std::vector<std::string> c = {
      "sentence",       "bag_size",        "calls",      "naive_first", "naive_total",
      "memo_int_first", "memo_int_total",  "memo_list_first", "memo_list_total",
      "hits",           "hit_ratio",       "misses",     "bags",        "productive_bags",
      "bag_id",         "speedup"};
  return c;
}

std::vector<std::string> cells(const BenchRow& r) {
  return {r.sentence,
          std::to_string(r.bag_size),
          std::to_string(r.calls),
          seconds(r.naive_first),
          seconds(r.naive_total),
          seconds(r.memo_int_first),
          seconds(r.memo_int_total),
          seconds(r.memo_list_first),
          seconds(r.memo_list_total),
          std::to_string(r.hits),
          format_ratio(r.hit_ratio),
          std::to_string(r.misses),
          std::to_string(r.bags),
          std::to_string(r.productive_bags),
          std::to_string(r.bag_id),
          fixed2(r.speedup)};
}

}  // namespace

std::uint64_t predicted_calls(std::size_t s, std::size_t n) {
  if (s < 1 || n < 1) throw std::invalid_argument("predicted_calls: s and n must be positive");
  if (s > 63) throw std::overflow_error("predicted_calls: stack too large for 64-bit count");
  const std::uint64_t m = s - 1;
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(m, 0)
  for (std::uint64_t j = 0; j < std::min<std::uint64_t>(n, s); ++j) {
    total += binom;
    binom = binom * (m - j) / (j + 1);
  }
  return total;
}

std::vector<BenchSentence> fixture_sentences() {
  return {{"s1", "john loves mary"},
          {"s2", "kim gives the cookie to mary"},
          {"s3", "mary gives the good cat to the small girl"}};
}

bool GenReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const BenchCheck& c) { return c.passed; });
}

std::string format_ratio(double ratio) { return fixed2(ratio); }

GenReport run_bench(const Engine& engine, std::span<const BenchSentence> sentences,
                    const BenchOptions& options) {
  if (options.modes.empty()) throw std::invalid_argument("run_bench: no modes requested");
  if (options.runs < 1) throw std::invalid_argument("run_bench: runs must be positive");

  GenReport report;
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  for (const auto& sentence : sentences) {
    BenchRow row;
    row.sentence = sentence.id;
    try {
      const auto parses = engine.parse(sentence.text);
      if (parses.empty()) throw Error("no parse");
      const TransferResult transfer = engine.transfer(parses.front().bag);
      row.bags = transfer.bags.size();

      const TargetBag* chosen = nullptr;
      for (std::size_t b = 0; b < transfer.bags.size(); ++b) {
        GenSession probe(options.modes.front());
        const bool any = !engine.generate(transfer.bags[b].bag, probe, true).results.empty();
        if (any) {
          ++row.productive_bags;
          if (!chosen) {
            chosen = &transfer.bags[b];
            row.bag_id = b + 1;
          }
        }
      }
      check(sentence.id + ": grammatical bag found", chosen != nullptr,
            std::to_string(row.productive_bags) + " of " + std::to_string(row.bags) + " bags");
      if (!chosen) {
        report.rows.push_back(row);
        continue;
      }
      row.bag_size = chosen->bag.size();

      std::map<GenMode, ModeRun> runs;
      for (GenMode mode : options.modes) {
        std::vector<double> firsts;
        std::vector<double> totals;
        ModeRun last;
        for (int k = 0; k < options.runs; ++k) {
          last = time_mode(engine, chosen->bag, mode);
          firsts.push_back(last.first);
          totals.push_back(last.total);
        }
        last.first = median(firsts);
        last.total = median(totals);
        runs[mode] = std::move(last);
      }

      auto set_times = [&](GenMode m, double& first, double& total) {
        if (auto it = runs.find(m); it != runs.end()) {
          first = it->second.first;
          total = it->second.total;
        }
      };
      set_times(GenMode::Naive, row.naive_first, row.naive_total);
      set_times(GenMode::MemoIndex, row.memo_int_first, row.memo_int_total);
      set_times(GenMode::MemoTagList, row.memo_list_first, row.memo_list_total);

      const ModeRun* counted = nullptr;
      for (GenMode m : {GenMode::MemoIndex, GenMode::MemoTagList})
        if (!counted && runs.count(m)) counted = &runs[m];
      if (counted) {
        row.calls = counted->hits + counted->misses;
        row.hits = counted->hits;
        row.misses = counted->misses;
        row.hit_ratio = row.calls ? static_cast<double>(row.hits) / static_cast<double>(row.calls) : 0;
      } else {
        row.calls = runs.begin()->second.calls;
      }
      if (row.naive_total >= 0 && row.memo_int_total > 0)
        row.speedup = row.naive_total / row.memo_int_total;

      for (const auto& [mode, run] : runs) {
        if (mode == GenMode::Naive) continue;
        check(sentence.id + ": hits + misses = calls (" + std::string(mode_name(mode)) + ")",
              run.hits + run.misses == run.calls,
              std::to_string(run.hits) + " + " + std::to_string(run.misses) + " vs " +
                  std::to_string(run.calls));
      }
      if (runs.count(GenMode::MemoIndex) && runs.count(GenMode::MemoTagList)) {
        const auto& a = runs[GenMode::MemoIndex];
        const auto& b = runs[GenMode::MemoTagList];
        check(sentence.id + ": key modes agree on counters", a.hits == b.hits && a.misses == b.misses);
      }
      const auto& reference = runs.begin()->second.sentences;
      bool same = true;
      for (const auto& [mode, run] : runs) same = same && run.sentences == reference;
      check(sentence.id + ": all modes generate the same sentences", same,
            std::to_string(reference.size()) + " sentence(s)");
    } catch (const std::exception& e) {
      throw Error(sentence.id + ": " + e.what());
    }
    report.rows.push_back(row);
  }

  const bool memoized = std::any_of(options.modes.begin(), options.modes.end(),
                                    [](GenMode m) { return m != GenMode::Naive; });
  if (memoized && report.rows.size() > 1) {
    bool increasing = true;
    std::string detail;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (i) detail += " -> ";
      detail += format_ratio(report.rows[i].hit_ratio);
      if (i && !(report.rows[i].hit_ratio > report.rows[i - 1].hit_ratio)) increasing = false;
    }
    check("hit ratio strictly increases with bag size", increasing, detail);
  }
  if (!report.rows.empty()) {
    const auto largest = std::max_element(
        report.rows.begin(), report.rows.end(),
        [](const BenchRow& a, const BenchRow& b) { return a.bag_size < b.bag_size; });
    if (largest->speedup >= 0)
      check(largest->sentence + ": memo-int total time <= naive total time", largest->speedup >= 1.0,
            "speedup " + fixed2(largest->speedup));
  }
  return report;
}

std::string emit_report(const GenReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Tsv: {
      const auto& cols = columns();
      for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
      out << '\n';
      for (const auto& r : report.rows) {
        const auto c = cells(r);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "\t" : "") << c[i];
        out << '\n';
      }
      break;
    }
    case ReportFormat::JsonLines: {
      for (const auto& r : report.rows) {
        nlohmann::ordered_json j;
        const auto c = cells(r);
        const auto& cols = columns();
        j[cols[0]] = r.sentence;
        j[cols[1]] = r.bag_size;
        j[cols[2]] = r.calls;
        auto time_or_null = [](double t) { return t < 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(t); };
        j[cols[3]] = time_or_null(r.naive_first);
        j[cols[4]] = time_or_null(r.naive_total);
        j[cols[5]] = time_or_null(r.memo_int_first);
        j[cols[6]] = time_or_null(r.memo_int_total);
        j[cols[7]] = time_or_null(r.memo_list_first);
        j[cols[8]] = time_or_null(r.memo_list_total);
        j[cols[9]] = r.hits;
        j[cols[10]] = c[10];
        j[cols[11]] = r.misses;
        j[cols[12]] = r.bags;
        j[cols[13]] = r.productive_bags;
        j[cols[14]] = r.bag_id;
        j[cols[15]] = time_or_null(r.speedup);
        out << j.dump() << '\n';
      }
      break;
    }
    case ReportFormat::Table: {
      std::vector<std::vector<std::string>> grid{columns()};
      for (const auto& r : report.rows) grid.push_back(cells(r));
      std::vector<std::size_t> width(columns().size(), 0);
      for (const auto& line : grid)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
      for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
          if (i) out << "  ";
          if (i == 0) {
            out << line[i] << std::string(width[i] - line[i].size(), ' ');
          } else {
            out << std::string(width[i] - line[i].size(), ' ') << line[i];
          }
        }
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

std::string emit_checks(const GenReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) out << "  [" << c.detail << "]";
    out << '\n';
  }
  return out.str();
}

}  // namespace snb
