// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "snb/bench.hpp"
#include "snb/generator.hpp"
#include "snb/memo.hpp"

using namespace snb;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tags_str(const std::vector<Tag>& t) {
  std::string s;
  for (Tag x : t) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::multiset<std::string> run_bag(const SignBag& bag, GenSession& session,
                                   std::span<const Tag> tags = {}) {
  const Engine& e = testfx::engine();
  std::multiset<std::string> out;
  auto visit = [&](const GenResult& r) {
    out.insert(testfx::join(r.sentence));
    return true;
  };
  if (tags.empty()) {
    shake_generate(e.target_grammar(), bag, e.target_goal(), session, visit);
  } else {
    shake_generate(e.target_grammar(), tag_bag(bag, tags), e.target_goal(), session, visit);
  }
  return out;
}

// --- 1 ----------------------------------------------------------------------
Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  for (unsigned s = 1; s <= 12; ++s)
    for (unsigned n = 1; n <= 6; ++n)
      o.require(predicted_calls(s, n) == oracle::brute_force_calls(s, n),
                "mismatch at s=" + std::to_string(s) + " n=" + std::to_string(n));
  for (unsigned n = 1; n <= 6; ++n) o.require(predicted_calls(1, n) == 1, "(1, n) != 1");
  for (unsigned n = 2; n <= 6; ++n) o.require(predicted_calls(2, n) == 2, "(2, n>=2) != 2");
  for (unsigned n = 3; n <= 6; ++n) o.require(predicted_calls(3, n) == 4, "(3, n>=3) != 4");
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "took " + fmt(secs) + " s");
  if (o.passed) o.detail = "72 (s, n) pairs exact, anchors 1/2/4 hold, " + fmt(secs, 4) + " s";
  return o;
}

// --- 2 ----------------------------------------------------------------------
Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  SignBag bag;
  for (int i = 0; i < 8; ++i) bag.signs.push_back(parse_avm("{cat: x, phon: [w" + std::to_string(i) + "]}"));
  std::size_t checked = 0;
  for (std::size_t n : {2u, 3u, 4u}) {
    std::string text;
    for (std::size_t k = 1; k <= n; ++k) {
      text += "rule r" + std::to_string(k) + ": {cat: never} ->";
      for (std::size_t d = 0; d < k; ++d) text += " {cat: never}";
      text += " head=1 constraints=[].\n";
    }
    const Grammar g = Grammar::compile(text);
    for (GenMode mode : {GenMode::Naive, GenMode::MemoIndex, GenMode::MemoTagList}) {
      GenSession session(mode);
      std::map<std::size_t, std::vector<std::size_t>> per_state;
      session.observer.state_reduced = [&](std::size_t s, std::size_t calls) { per_state[s].push_back(calls); };
      shake_generate(g, bag, parse_avm("{cat: x}"), session, [](const GenResult&) { return true; });
      for (std::size_t s = 1; s <= 8; ++s) {
        const auto it = per_state.find(s);
        o.require(it != per_state.end() && it->second.size() == 1,
                  "stack size " + std::to_string(s) + " not reached exactly once");
        if (it == per_state.end()) continue;
        for (std::size_t c : it->second) {
          o.require(c == predicted_calls(s, n), "s=" + std::to_string(s) + " n=" + std::to_string(n) +
                                                    ": " + std::to_string(c) + " calls, predicted " +
                                                    std::to_string(predicted_calls(s, n)));
          ++checked;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + fmt(secs) + " s");
  if (o.passed) o.detail = std::to_string(checked) + " states across 3 modes match, " + fmt(secs, 4) + " s";
  return o;
}

// --- 3 ----------------------------------------------------------------------
Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 rng(1995);

  std::set<std::string> seen;
  for (unsigned mask = 0; mask < 4096; ++mask) {
    std::vector<Tag> tags;
    for (Tag t = 1; t <= 12; ++t)
      if (mask & (1u << (t - 1))) tags.push_back(t);
    const std::string v = calc_index(tags).str();
    o.require(v == oracle::sum_powers(tags), "wrong value for {" + tags_str(tags) + "}");
    std::shuffle(tags.begin(), tags.end(), rng);
    o.require(calc_index(tags).str() == v, "order changes value for {" + tags_str(tags) + "}");
    seen.insert(v);
  }
  o.require(seen.size() == 4096, "collision among subsets of 1..12");

  std::uniform_int_distribution<int> size_dist(1, 40);
  std::vector<Tag> pool(200);
  std::iota(pool.begin(), pool.end(), 1u);
  std::size_t equal_pairs = 0;
  for (int i = 0; i < 10000; ++i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Tag> a(pool.begin(), pool.begin() + size_dist(rng));
    std::vector<Tag> b;
    if (i % 10 == 0) {
      b = a;  // force some equal sets, in another order
      std::shuffle(b.begin(), b.end(), rng);
    } else {
      std::shuffle(pool.begin(), pool.end(), rng);
      b.assign(pool.begin(), pool.begin() + size_dist(rng));
    }
    const bool same_set = std::set<Tag>(a.begin(), a.end()) == std::set<Tag>(b.begin(), b.end());
    const bool same_index = calc_index(a) == calc_index(b);
    o.require(same_set == same_index, "injectivity fails on pair " + std::to_string(i));
    if (same_set) ++equal_pairs;
    if (i % 100 == 0) o.require(calc_index(a).str() == oracle::sum_powers(a), "wide value mismatch");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + fmt(secs) + " s");
  if (o.passed)
    o.detail = "4096 subsets distinct and order-free; 10000 random pairs (" + std::to_string(equal_pairs) +
               " equal) consistent, " + fmt(secs, 3) + " s";
  return o;
}

// --- 4 and 8 ----------------------------------------------------------------
struct Criterion4Run {
  Outcome equivalence;
  Outcome purity;
  // Memo-mode counters from these runs, reused by criterion 6.
  std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t, std::uint64_t>> counters;
};

Criterion4Run criterion4_and_8() {
  Criterion4Run run;
  const auto t0 = Clock::now();
  const auto& bags = testfx::target_bags();
  run.equivalence.require(bags.size() == 19, std::to_string(bags.size()) + " fixture bags, expected 19");
  std::size_t hits_checked = 0;
  std::size_t total_sentences = 0;
  for (const auto& fb : bags) {
    const std::string id = "s" + std::to_string(fb.sentence + 1) + " bag " + std::to_string(fb.bag);
    GenSession naive(GenMode::Naive);
    const auto reference = run_bag(fb.target.bag, naive);
    total_sentences += reference.size();
    for (GenMode mode : {GenMode::MemoIndex, GenMode::MemoTagList}) {
      GenSession session(mode);
      session.observer.memo_hit = [&](std::span<const TaggedSign> daughters, const MemoOutcome& outcome) {
        Trail trail;
        std::vector<std::string> fresh;
        unordered_rule_naive(testfx::engine().target_grammar(), daughters, trail, [&](const Avm& m) {
          fresh.push_back(canonical(m));
          return true;
        });
        std::vector<std::string> stored;
        for (const auto& m : outcome.mothers) stored.push_back(canonical(m.sign));
        run.purity.require(stored == fresh, id + ": stored mothers differ from naive recomputation");
        ++hits_checked;
      };
      const auto got = run_bag(fb.target.bag, session, {});
      run.equivalence.require(got == reference, id + ": " + std::string(mode_name(mode)) + " differs from naive");
      run.counters.emplace_back(id + " " + std::string(mode_name(mode)), session.memo()->hits(),
                                session.memo()->misses(), session.calls());
    }
  }
  const double secs = seconds_since(t0);
  run.equivalence.require(secs < 60.0, "took " + fmt(secs) + " s");
  if (run.equivalence.passed)
    run.equivalence.detail = "19 bags, naive = memo-int = memo-list (" + std::to_string(total_sentences) +
                             " sentences in total), " + fmt(secs, 3) + " s";
  run.purity.require(hits_checked > 0, "no memo hits observed");
  if (run.purity.passed) run.purity.detail = std::to_string(hits_checked) + " hits match a fresh naive recomputation";
  return run;
}

// --- 5 ----------------------------------------------------------------------
Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  {
    std::ostringstream out, err;
    const int code = cli::run_cli({"snb", "translate", "john loves mary"}, out, err);
    o.require(code == 0 && out.str() == "bag 1: jean aime marie\n",
              "translate \"john loves mary\" printed: " + out.str());
  }
  const std::vector<std::size_t> expected_bags{1, 2, 16};
  std::string summary;
  for (std::size_t s = 0; s < 3; ++s) {
    const auto t = testfx::engine().translate(testfx::sentences()[s]);
    o.require(t.size() == 1, "sentence " + std::to_string(s + 1) + " parses " + std::to_string(t.size()) + " ways");
    if (t.empty()) continue;
    o.require(t[0].bags.size() == expected_bags[s],
              "sentence " + std::to_string(s + 1) + ": " + std::to_string(t[0].bags.size()) + " target bags");
    o.require(t[0].productive_bags() == 1, "sentence " + std::to_string(s + 1) + ": " +
                                               std::to_string(t[0].productive_bags()) + " productive bags");
    o.require(t[0].sentence_count() >= 1, "sentence " + std::to_string(s + 1) + " yields nothing");
    for (const auto& b : t[0].bags) {
      if (b.results.empty()) continue;
      summary += (summary.empty() ? "" : "; ") + std::to_string(t[0].bags.size()) + " bags, bag " +
                 std::to_string(b.bag_id) + " -> \"" + testfx::join(b.results[0].sentence) + "\"";
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "took " + fmt(secs) + " s");
  if (o.passed) o.detail = summary + ", " + fmt(secs, 3) + " s";
  return o;
}

// --- 6 and 7 ----------------------------------------------------------------
struct BenchRun {
  Outcome counters;
  Outcome speed;
};

BenchRun criterion6_and_7(const Criterion4Run& c4) {
  BenchRun out;
  for (const auto& [id, hits, misses, calls] : c4.counters)
    out.counters.require(hits + misses == calls, id + ": hits + misses != calls");

  BenchOptions opts;
  opts.runs = 5;
  const GenReport report = run_bench(testfx::engine(), fixture_sentences(), opts);
  const std::string tsv = emit_report(report, ReportFormat::Tsv);

  // Read the printed ratio column back and compare with hits / calls.
  std::istringstream lines(tsv);
  std::string header;
  std::getline(lines, header);
  std::vector<std::string> cols;
  {
    std::istringstream h(header);
    for (std::string c; std::getline(h, c, '\t');) cols.push_back(c);
  }
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
  };
  std::vector<double> printed;
  std::string trend;
  std::size_t row = 0;
  for (std::string l; std::getline(lines, l); ++row) {
    std::vector<std::string> f;
    std::istringstream in(l);
    for (std::string c; std::getline(in, c, '\t');) f.push_back(c);
    const double ratio = std::stod(f.at(col("hit_ratio")));
    const double hits = std::stod(f.at(col("hits")));
    const double calls = std::stod(f.at(col("calls")));
    const double misses = std::stod(f.at(col("misses")));
    out.counters.require(hits + misses == calls, f[0] + ": hits + misses != calls in report");
    out.counters.require(f.at(col("hit_ratio")).size() == 4, f[0] + ": ratio not printed to 2 dp");
    out.counters.require(std::fabs(ratio - hits / calls) <= 0.005 + 1e-12,
                         f[0] + ": printed ratio " + f.at(col("hit_ratio")) + " vs " + fmt(hits / calls, 4));
    printed.push_back(ratio);
    trend += (trend.empty() ? "" : " -> ") + f.at(col("hit_ratio")) + " (" + f.at(col("hits")) + "/" +
             f.at(col("calls")) + ")";
  }
  out.counters.require(printed.size() == 3, "report has " + std::to_string(printed.size()) + " rows");
  for (std::size_t i = 1; i < printed.size(); ++i)
    out.counters.require(printed[i] > printed[i - 1], "ratio not strictly increasing: " + trend);
  for (const auto& c : report.checks)
    if (c.name.find("speedup") == std::string::npos && c.name.find("time") == std::string::npos)
      out.counters.require(c.passed, "bench check failed: " + c.name);
  if (out.counters.passed)
    out.counters.detail = std::to_string(c4.counters.size()) + " memo runs conserve counters; ratio " + trend;

  const BenchRow* nine = nullptr;
  for (const auto& r : report.rows)
    if (r.bag_size == 9) nine = &r;
  out.speed.require(nine != nullptr, "no 9-sign row");
  if (nine) {
    out.speed.require(nine->speedup >= 1.0, "memo-int " + fmt(nine->memo_int_total, 6) + " s vs naive " +
                                                fmt(nine->naive_total, 6) + " s");
    if (out.speed.passed)
      out.speed.detail = "9-sign bag: naive " + fmt(nine->naive_total, 6) + " s, memo-int " +
                         fmt(nine->memo_int_total, 6) + " s, memo-list " + fmt(nine->memo_list_total, 6) +
                         " s (median of 5), speedup " + fmt(nine->speedup);
  }
  return out;
}

// --- 9 ----------------------------------------------------------------------
Outcome criterion9() {
  Outcome o;
  const auto& bags = testfx::target_bags();
  const auto it = std::find_if(bags.begin(), bags.end(), [](const auto& fb) { return fb.sentence == 1 && fb.bag == 1; });
  if (it == bags.end() || std::next(it) == bags.end() || std::next(it)->sentence != 1) {
    o.require(false, "sentence 2 does not have two bags");
    return o;
  }
  const TargetBag& first = it->target;
  const TargetBag& second = std::next(it)->target;
  Tag max_token = 0;
  for (Tag t : first.tokens) max_token = std::max(max_token, t);
  for (Tag t : second.tokens) max_token = std::max(max_token, t);

  std::string detail;
  for (GenMode mode : {GenMode::MemoIndex, GenMode::MemoTagList}) {
    GenSession shared(mode);
    shared.reserve_tags(max_token);
    run_bag(first.bag, shared, first.tokens);
    const MemoTable after_first = *shared.memo();
    const KeyMode km = mode == GenMode::MemoIndex ? KeyMode::Index : KeyMode::TagList;
    std::size_t cross = 0;
    shared.observer.memo_hit = [&](std::span<const TaggedSign> daughters, const MemoOutcome&) {
      std::vector<Tag> tags;
      for (const auto& d : daughters) tags.push_back(d.tag);
      if (after_first.find(MemoKey::make(km, tags))) ++cross;
    };
    const auto with_carry = run_bag(second.bag, shared, second.tokens);
    GenSession fresh(mode);
    const auto alone = run_bag(second.bag, fresh);
    o.require(with_carry == alone, std::string(mode_name(mode)) + ": carried table changes bag 2's sentences");
    o.require(cross >= 1, std::string(mode_name(mode)) + ": no cross-bag hit");
    detail += (detail.empty() ? "" : "; ") + std::string(mode_name(mode)) + ": " + std::to_string(cross) +
              " cross-bag hits, " + std::to_string(alone.size()) + " sentences either way";
  }
  if (o.passed) o.detail = detail;
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  results.emplace_back("call-count formula equals brute force", guarded(criterion1));
  results.emplace_back("instrumented call-count law", guarded(criterion2));
  results.emplace_back("index soundness", guarded(criterion3));

  Criterion4Run c4;
  try {
    c4 = criterion4_and_8();
  } catch (const std::exception& e) {
    c4.equivalence = {false, std::string("exception: ") + e.what()};
    c4.purity = c4.equivalence;
  }
  results.emplace_back("mode equivalence over 19 bags", c4.equivalence);
  results.emplace_back("end-to-end translation", guarded(criterion5));

  BenchRun b;
  try {
    b = criterion6_and_7(c4);
  } catch (const std::exception& e) {
    b.counters = {false, std::string("exception: ") + e.what()};
    b.speed = b.counters;
  }
  results.emplace_back("counter laws and hit-ratio trend", b.counters);
  results.emplace_back("memo-int not slower than naive on 9 signs", b.speed);
  results.emplace_back("memo purity", c4.purity);
  results.emplace_back("shared-memo soundness", guarded(criterion9));

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, o] = results[i];
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << name;
    if (!o.detail.empty()) std::cout << "  [" << o.detail << "]";
    std::cout << '\n';
  }
  return all ? 0 : 1;
}
