#include "snb/avm.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_set>

#include "snb/lexer.hpp"

namespace snb {

const NodePtr* find_feature(const Node& rec, Symbol f) {
  auto it = std::lower_bound(rec.features.begin(), rec.features.end(), f,
                             [](const auto& p, Symbol s) { return p.first < s; });
  if (it == rec.features.end() || it->first != f) return nullptr;
  return &it->second;
}

namespace {

class SymbolTable {
 public:
  Symbol intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<Symbol>(names_.size()));
    if (inserted) names_.push_back(it->first);
    return it->second;
  }

  const std::string& name(Symbol s) {
    std::shared_lock lock(mutex_);
    return names_.at(s);
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::string, Symbol> ids_;
  std::deque<std::string> names_;  // deque: references stay valid on growth
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

NodePtr make_atom(Symbol s) {
  auto n = std::make_shared<Node>(NodeKind::Atom);
  n->atom = s;
  return n;
}

NodePtr make_var() { return std::make_shared<Node>(NodeKind::Var); }

bool occurs_in(const Node* var, const NodePtr& term) {
  const NodePtr& t = deref(term);
  if (t.get() == var) return true;
  switch (t->kind) {
    case NodeKind::Record:
      for (const auto& [f, v] : t->features)
        if (occurs_in(var, v)) return true;
      return false;
    case NodeKind::List:
      for (const auto& v : t->items)
        if (occurs_in(var, v)) return true;
      return false;
    default:
      return false;
  }
}

bool unify_nodes(const NodePtr& x, const NodePtr& y, Trail& trail) {
  NodePtr a = deref(x);
  NodePtr b = deref(y);
  if (a == b) return true;

  if (a->kind == NodeKind::Var) {
    if (trail.occurs_check() && occurs_in(a.get(), b)) return false;
    trail.bind(a, b);
    return true;
  }
  if (b->kind == NodeKind::Var) {
    if (trail.occurs_check() && occurs_in(b.get(), a)) return false;
    trail.bind(b, a);
    return true;
  }
  if (a->kind != b->kind) return false;

  switch (a->kind) {
    case NodeKind::Atom:
      return a->atom == b->atom;
    case NodeKind::List:
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!unify_nodes(a->items[i], b->items[i], trail)) return false;
      return true;
    case NodeKind::Record: {
      bool a_extra = false;
      bool b_extra = false;
      auto ia = a->features.begin();
      auto ib = b->features.begin();
      while (ia != a->features.end() && ib != b->features.end()) {
        if (ia->first < ib->first) {
          a_extra = true;
          ++ia;
        } else if (ib->first < ia->first) {
          b_extra = true;
          ++ib;
        } else {
          if (!unify_nodes(ia->second, ib->second, trail)) return false;
          ++ia;
          ++ib;
        }
      }
      a_extra = a_extra || ia != a->features.end();
      b_extra = b_extra || ib != b->features.end();
      // Either side may have been forwarded by the recursive calls when the
      // two records share substructure.
      if (a->ref || b->ref) return unify_nodes(a, b, trail);
      if (!b_extra) {
        trail.bind(b, a);
      } else if (!a_extra) {
        trail.bind(a, b);
      } else {
        auto merged = std::make_shared<Node>(NodeKind::Record);
        merged->features.reserve(a->features.size() + b->features.size());
        std::merge(a->features.begin(), a->features.end(), b->features.begin(),
                   b->features.end(), std::back_inserter(merged->features),
                   [](const auto& p, const auto& q) { return p.first < q.first; });
        merged->features.erase(
            std::unique(merged->features.begin(), merged->features.end(),
                        [](const auto& p, const auto& q) { return p.first == q.first; }),
            merged->features.end());
        trail.bind(a, merged);
        trail.bind(b, merged);
      }
      return true;
    }
    case NodeKind::Var:
      break;
  }
  return false;
}

NodePtr copy_node(const NodePtr& n, std::unordered_map<const Node*, NodePtr>& seen) {
  const NodePtr& d = deref(n);
  if (d->kind == NodeKind::Atom) return d;  // atoms are never forwarded
  if (auto it = seen.find(d.get()); it != seen.end()) return it->second;
  auto out = std::make_shared<Node>(d->kind);
  seen.emplace(d.get(), out);
  if (d->kind == NodeKind::Record) {
    out->features.reserve(d->features.size());
    for (const auto& [f, v] : d->features) out->features.emplace_back(f, copy_node(v, seen));
  } else if (d->kind == NodeKind::List) {
    out->items.reserve(d->items.size());
    for (const auto& v : d->items) out->items.push_back(copy_node(v, seen));
  }
  return out;
}

class Printer {
 public:
  void print(const NodePtr& n, std::string& out) {
    const NodePtr& d = deref(n);
    switch (d->kind) {
      case NodeKind::Atom:
        out += symbol_name(d->atom);
        return;
      case NodeKind::Var: {
        auto [it, inserted] = vars_.try_emplace(d.get(), static_cast<int>(vars_.size()) + 1);
        out += '#';
        out += std::to_string(it->second);
        return;
      }
      case NodeKind::List:
        out += '[';
        for (std::size_t i = 0; i < d->items.size(); ++i) {
          if (i) out += ", ";
          print(d->items[i], out);
        }
        out += ']';
        return;
      case NodeKind::Record: {
        std::vector<std::pair<const std::string*, const NodePtr*>> sorted;
        sorted.reserve(d->features.size());
        for (const auto& [f, v] : d->features) sorted.emplace_back(&symbol_name(f), &v);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& p, const auto& q) { return *p.first < *q.first; });
        out += '{';
        for (std::size_t i = 0; i < sorted.size(); ++i) {
          if (i) out += ", ";
          out += *sorted[i].first;
          out += ": ";
          print(*sorted[i].second, out);
        }
        out += '}';
        return;
      }
    }
  }

 private:
  std::unordered_map<const Node*, int> vars_;
};

bool acyclic(const Node* n, std::unordered_set<const Node*>& on_path,
             std::unordered_set<const Node*>& done) {
  if (done.count(n)) return true;
  if (!on_path.insert(n).second) return false;
  auto visit = [&](const NodePtr& c) { return acyclic(deref(c).get(), on_path, done); };
  if (n->kind == NodeKind::Record) {
    for (const auto& [f, v] : n->features)
      if (!visit(v)) return false;
  } else if (n->kind == NodeKind::List) {
    for (const auto& v : n->items)
      if (!visit(v)) return false;
  }
  on_path.erase(n);
  done.insert(n);
  return true;
}

void collect_vars(const NodePtr& n, std::vector<Node*>& order,
                  std::unordered_set<const Node*>& seen) {
  const NodePtr& d = deref(n);
  if (!seen.insert(d.get()).second) return;
  if (d->kind == NodeKind::Var) {
    order.push_back(d.get());
  } else if (d->kind == NodeKind::Record) {
    for (const auto& [f, v] : d->features) collect_vars(v, order, seen);
  } else if (d->kind == NodeKind::List) {
    for (const auto& v : d->items) collect_vars(v, order, seen);
  }
}

}  // namespace

Symbol intern(std::string_view name) { return symbols().intern(name); }
const std::string& symbol_name(Symbol s) { return symbols().name(s); }

Path::Path(std::initializer_list<std::string_view> steps) {
  steps_.reserve(steps.size());
  for (auto s : steps) steps_.push_back(intern(s));
}

std::string Path::str() const {
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out += '|';
    out += symbol_name(steps_[i]);
  }
  return out;
}

Avm::Avm() : node_(make_var()) {}

Avm Avm::atom(std::string_view name) { return Avm(make_atom(intern(name))); }

Avm Avm::record(std::initializer_list<std::pair<std::string_view, Avm>> features) {
  std::vector<std::pair<std::string, Avm>> fs;
  for (const auto& [k, v] : features) fs.emplace_back(std::string(k), v);
  return record(fs);
}

Avm Avm::record(const std::vector<std::pair<std::string, Avm>>& features) {
  auto n = std::make_shared<Node>(NodeKind::Record);
  for (const auto& [k, v] : features) n->features.emplace_back(intern(k), v.node());
  std::sort(n->features.begin(), n->features.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });
  return Avm(std::move(n));
}

Avm Avm::list(const std::vector<Avm>& items) {
  auto n = std::make_shared<Node>(NodeKind::List);
  for (const auto& v : items) n->items.push_back(v.node());
  return Avm(std::move(n));
}

std::string_view Avm::atom_name() const {
  const NodePtr& d = deref(node_);
  if (d->kind != NodeKind::Atom) return {};
  return symbol_name(d->atom);
}

std::vector<Avm> Avm::items() const {
  std::vector<Avm> out;
  const NodePtr& d = deref(node_);
  if (d->kind == NodeKind::List)
    for (const auto& v : d->items) out.emplace_back(v);
  return out;
}

std::optional<Avm> Avm::feature(std::string_view name) const {
  const NodePtr& d = deref(node_);
  if (d->kind != NodeKind::Record) return std::nullopt;
  if (const NodePtr* v = find_feature(*d, intern(name))) return Avm(*v);
  return std::nullopt;
}

std::vector<std::string> Avm::feature_names() const {
  std::vector<std::string> out;
  const NodePtr& d = deref(node_);
  if (d->kind == NodeKind::Record)
    for (const auto& [f, v] : d->features) out.push_back(symbol_name(f));
  std::sort(out.begin(), out.end());
  return out;
}

std::string Avm::str() const { return canonical(*this); }

void Trail::undo(Mark m) {
  while (bound_.size() > m) {
    bound_.back()->ref.reset();
    bound_.pop_back();
  }
}

void Trail::bind(const NodePtr& node, NodePtr target) {
  node->ref = std::move(target);
  bound_.push_back(node);
}

bool unify(const Avm& a, const Avm& b, Trail& trail) {
  const Trail::Mark m = trail.mark();
  if (unify_nodes(a.node(), b.node(), trail)) return true;
  trail.undo(m);
  return false;
}

bool unify_path(const Avm& a, const Path& path, const Avm& value, Trail& trail) {
  NodePtr wrapped = value.node();
  const auto steps = path.steps();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    auto rec = std::make_shared<Node>(NodeKind::Record);
    rec->features.emplace_back(*it, std::move(wrapped));
    wrapped = std::move(rec);
  }
  return unify(a, Avm(std::move(wrapped)), trail);
}

std::optional<Avm> get_path(const Avm& a, const Path& path) {
  const NodePtr* cur = &deref(a.node());
  for (Symbol step : path.steps()) {
    if ((*cur)->kind != NodeKind::Record) return std::nullopt;
    const NodePtr* next = find_feature(**cur, step);
    if (!next) return std::nullopt;
    cur = &deref(*next);
  }
  return Avm(*cur);
}

Avm fresh_variant(const Avm& a) {
  std::unordered_map<const Node*, NodePtr> seen;
  return Avm(copy_node(a.node(), seen));
}

std::vector<Avm> fresh_variants(std::span<const Avm> as) {
  std::unordered_map<const Node*, NodePtr> seen;
  std::vector<Avm> out;
  out.reserve(as.size());
  for (const auto& a : as) out.emplace_back(copy_node(a.node(), seen));
  return out;
}

std::string canonical(const Avm& a) {
  std::string out;
  Printer().print(a.node(), out);
  return out;
}

std::string canonical(std::span<const Avm> as, std::string_view separator) {
  std::string out;
  Printer p;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (i) out += separator;
    p.print(as[i].node(), out);
  }
  return out;
}

bool is_acyclic(const Avm& a) {
  std::unordered_set<const Node*> on_path;
  std::unordered_set<const Node*> done;
  return acyclic(deref(a.node()).get(), on_path, done);
}

std::size_t ground_variables(std::span<const Avm> as, std::string_view prefix, bool shared_only) {
  std::vector<Node*> order;
  std::unordered_map<const Node*, int> owners;
  for (const auto& a : as) {
    std::vector<Node*> vars;
    std::unordered_set<const Node*> seen;
    collect_vars(a.node(), vars, seen);
    for (Node* v : vars) {
      if (owners[v]++ == 0) order.push_back(v);
    }
  }
  std::size_t count = 0;
  for (Node* v : order) {
    if (shared_only && owners[v] < 2) continue;
    ++count;
    v->ref = make_atom(intern(std::string(prefix) + std::to_string(count)));
  }
  return count;
}

Avm read_avm(Lexer& lex, VarScope& scope) {
  const auto& tok = lex.peek();
  switch (tok.kind) {
    case Lexer::Kind::Ident:
      return Avm::atom(lex.next().text);
    case Lexer::Kind::Var: {
      std::string name = lex.next().text;
      if (name == "_") return Avm::variable();
      auto [it, inserted] = scope.try_emplace(name, Avm::variable());
      return it->second;
    }
    case Lexer::Kind::Punct:
      if (lex.accept("{")) {
        std::vector<std::pair<std::string, Avm>> features;
        if (!lex.accept("}")) {
          do {
            std::string name = lex.expect_ident("feature name");
            for (const auto& [k, v] : features)
              if (k == name) lex.fail("duplicate feature '" + name + "'");
            lex.expect(":");
            features.emplace_back(std::move(name), read_avm(lex, scope));
          } while (lex.accept(","));
          lex.expect("}");
        }
        return Avm::record(features);
      }
      if (lex.accept("[")) {
        std::vector<Avm> items;
        if (!lex.accept("]")) {
          do {
            items.push_back(read_avm(lex, scope));
          } while (lex.accept(","));
          lex.expect("]");
        }
        return Avm::list(items);
      }
      break;
    case Lexer::Kind::End:
      break;
  }
  lex.fail("expected an AVM but found " +
           (lex.at_end() ? std::string("end of input") : "'" + tok.text + "'"));
}

Avm parse_avm(std::string_view text) {
  VarScope scope;
  return parse_avm(text, scope);
}

Avm parse_avm(std::string_view text, VarScope& scope) {
  Lexer lex(text, "<avm>");
  Avm out = read_avm(lex, scope);
  if (!lex.at_end()) lex.fail("trailing input after AVM");
  return out;
}

}  // namespace snb
