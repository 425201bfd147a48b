#pragma once

// Attribute-value structures with shared variables and destructive
// unification undone through a trail.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace snb {

class Lexer;

using Symbol = std::uint32_t;

/// Interns `name`; the returned id is stable for the life of the process.
Symbol intern(std::string_view name);
const std::string& symbol_name(Symbol s);

enum class NodeKind : std::uint8_t { Atom, Var, Record, List };

struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Node {
  explicit Node(NodeKind k) : kind(k) {}

  NodeKind kind;
  Symbol atom = 0;
  std::vector<std::pair<Symbol, NodePtr>> features;  // sorted by Symbol
  std::vector<NodePtr> items;
  // Forwarding pointer: set on a bound variable, or on a record that was
  // merged into another one during unification.
  NodePtr ref;
};

/// Follows forwarding pointers to the representative node.
inline const NodePtr& deref(const NodePtr& n) {
  const NodePtr* p = &n;
  while ((*p)->ref) p = &(*p)->ref;
  return *p;
}

/// Value of feature `f` in a record node, or null.
const NodePtr* find_feature(const Node& rec, Symbol f);

/// A feature path such as head|agr.
class Path {
 public:
  Path() = default;
  Path(std::initializer_list<std::string_view> steps);
  explicit Path(std::vector<Symbol> steps) : steps_(std::move(steps)) {}

  std::span<const Symbol> steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  std::string str() const;

 private:
  std::vector<Symbol> steps_;
};

/// Handle to an AVM node. Copying the handle shares the structure; use
/// fresh_variant() for a renamed copy.
class Avm {
 public:
  /// A fresh unbound variable.
  Avm();

  static Avm atom(std::string_view name);
  static Avm variable() { return Avm(); }
  static Avm record(std::initializer_list<std::pair<std::string_view, Avm>> features);
  static Avm record(const std::vector<std::pair<std::string, Avm>>& features);
  static Avm list(const std::vector<Avm>& items);

  explicit Avm(NodePtr node) : node_(std::move(node)) {}

  NodeKind kind() const { return deref(node_)->kind; }
  bool is_atom() const { return kind() == NodeKind::Atom; }
  bool is_var() const { return kind() == NodeKind::Var; }
  bool is_record() const { return kind() == NodeKind::Record; }
  bool is_list() const { return kind() == NodeKind::List; }

  /// Name of an atom; empty for any other kind.
  std::string_view atom_name() const;
  /// Items of a list; empty for any other kind.
  std::vector<Avm> items() const;
  std::optional<Avm> feature(std::string_view name) const;
  std::vector<std::string> feature_names() const;

  /// True when both handles dereference to the same node.
  bool same(const Avm& other) const { return deref(node_) == deref(other.node_); }

  const NodePtr& node() const { return node_; }

  /// Canonical serialization (see canonical()).
  std::string str() const;

 private:
  NodePtr node_;
};

/// Undo log for destructive unification. Every binding made through a trail
/// is recorded and can be rolled back to a mark; bindings still on the trail
/// when it is destroyed become permanent.
class Trail {
 public:
  using Mark = std::size_t;

  explicit Trail(bool occurs_check = false) : occurs_check_(occurs_check) {}
  Trail(const Trail&) = delete;
  Trail& operator=(const Trail&) = delete;

  Mark mark() const { return bound_.size(); }
  void undo(Mark m);
  std::size_t size() const { return bound_.size(); }

  bool occurs_check() const { return occurs_check_; }
  void set_occurs_check(bool on) { occurs_check_ = on; }

  /// Points `node` (currently unforwarded) at `target`.
  void bind(const NodePtr& node, NodePtr target);

 private:
  std::vector<NodePtr> bound_;
  bool occurs_check_;
};

/// Unifies a and b. On failure every binding made by this call is undone
/// before returning false; on success the bindings stay on the trail.
bool unify(const Avm& a, const Avm& b, Trail& trail);

/// Unifies the value at `path` inside `a` with `value`, adding the features
/// along the path when a lacks them.
bool unify_path(const Avm& a, const Path& path, const Avm& value, Trail& trail);

std::optional<Avm> get_path(const Avm& a, const Path& path);

/// Structurally identical copy with all-new variables. Bindings are
/// resolved, so the copy is independent of the trail.
Avm fresh_variant(const Avm& a);

/// Joint copy: variables shared between inputs stay shared between outputs.
std::vector<Avm> fresh_variants(std::span<const Avm> as);

/// Depth-first, features in lexicographic order, variables as #N numbered in
/// first-visit order starting at 1.
std::string canonical(const Avm& a);

/// Joint canonical form of several AVMs with one variable numbering,
/// joined by `separator`.
std::string canonical(std::span<const Avm> as, std::string_view separator = "\n");

bool is_acyclic(const Avm& a);

/// Permanently binds unbound variables to atoms named prefix1, prefix2, ...
/// in first-visit order. With `shared_only`, only variables reachable from
/// two or more of the inputs are bound. Returns the number bound.
std::size_t ground_variables(std::span<const Avm> as, std::string_view prefix, bool shared_only);

/// Variable names used while reading AVM text; `_` is always fresh.
using VarScope = std::unordered_map<std::string, Avm>;

/// Reads one AVM in canonical syntax (variables may also be written as
/// Prolog-style capitalised names).
Avm read_avm(Lexer& lex, VarScope& scope);

Avm parse_avm(std::string_view text);
Avm parse_avm(std::string_view text, VarScope& scope);

}  // namespace snb
