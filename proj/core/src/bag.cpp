#include "snb/bag.hpp"

#include <set>

#include "snb/grammar.hpp"
#include "snb/lexer.hpp"

namespace snb {

std::vector<std::string> SignBag::words() const {
  std::vector<std::string> out;
  for (const auto& s : signs) {
    if (auto phon = phon_of(s)) out.insert(out.end(), phon->begin(), phon->end());
  }
  return out;
}

std::vector<BagRecord> read_bag_file(std::string_view text, const std::string& source) {
  std::vector<BagRecord> bags;
  BagRecord current;
  VarScope scope;
  bool tagged = false;
  int line_no = 0;
  std::set<std::uint32_t> seen_tags;

  auto flush = [&]() {
    if (!current.bag.empty()) bags.push_back(std::move(current));
    current = BagRecord{};
    scope.clear();
    tagged = false;
    seen_tags.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    Lexer lex(line, source, line_no);
    if (lex.at_end()) {
      // Blank (or comment-only) lines end a bag only when truly blank.
      if (line.find('%') == std::string_view::npos) flush();
      continue;
    }
    std::uint32_t tag = 0;
    const std::string& head = lex.peek().text;
    if (lex.peek().kind == Lexer::Kind::Ident && head.size() > 3 && head.rfind("tag", 0) == 0 &&
        head.find_first_not_of("0123456789", 3) == std::string::npos) {
      tag = static_cast<std::uint32_t>(std::stoul(lex.next().text.substr(3)));
      if (tag == 0) lex.fail("tags must be positive");
      if (!seen_tags.insert(tag).second) lex.fail("duplicate tag " + std::to_string(tag));
      lex.expect(":");
    }
    const bool first = current.bag.empty();
    if (!first && (tag != 0) != tagged) lex.fail("either every sign of a bag has a tag or none does");
    tagged = tag != 0;
    current.bag.signs.push_back(read_avm(lex, scope));
    if (tagged) current.tags.push_back(tag);
    if (!lex.at_end()) lex.fail("trailing input after sign");
  }
  flush();
  return bags;
}

std::string write_bag(const SignBag& bag, const std::vector<std::uint32_t>& tags) {
  const std::string joint = canonical(bag.signs, "\n");
  if (tags.empty()) return joint + "\n";
  std::string out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= joint.size() && line < tags.size()) {
    const std::size_t end = std::min(joint.find('\n', start), joint.size());
    out += "tag" + std::to_string(tags[line++]) + ": ";
    out += joint.substr(start, end - start);
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace snb
