#pragma once

#include "snb/engine.hpp"

namespace testfx {

/// The Appendix-style English/French fixtures, loaded once.
inline const snb::Engine& engine() {
  static const snb::Engine e =
      snb::Engine::load(snb::EngineConfig::from_directory(snb::EngineConfig::default_fixture_dir()));
  return e;
}

inline const std::vector<std::string>& sentences() {
  static const std::vector<std::string> s{"john loves mary", "kim gives the cookie to mary",
                                          "mary gives the good cat to the small girl"};
  return s;
}

struct FixtureBag {
  std::size_t sentence = 0;  // 0-based into sentences()
  std::size_t bag = 0;       // 1-based, transfer order
  snb::TargetBag target;
};

/// Every target bag of the three sentences (1 + 2 + 16), computed once.
inline const std::vector<FixtureBag>& target_bags() {
  static const std::vector<FixtureBag> bags = [] {
    std::vector<FixtureBag> out;
    for (std::size_t s = 0; s < sentences().size(); ++s) {
      const auto parses = engine().parse(sentences()[s]);
      const auto t = engine().transfer(parses.at(0).bag);
      for (std::size_t b = 0; b < t.bags.size(); ++b) out.push_back({s, b + 1, t.bags[b]});
    }
    return out;
  }();
  return bags;
}

inline std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

}  // namespace testfx
