#pragma once

// Hash-consed abstract syntax of mu-regular expressions.
//
// Every Expr is a handle to an immutable node owned by a process-wide intern
// table. Two handles are structurally equal iff they point to the same node,
// so equality and hashing are O(1). Ordering is structural (not by creation
// order) so that sets of expressions iterate identically in every process.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace mure {

using VarId = std::uint32_t;

enum class Kind : std::uint8_t { EmptySet, EmptyWord, Sym, Alt, Cat, Star, Var, Mu };

namespace detail {

struct Node {
	Kind kind;
	char symbol = 0;
	VarId var = 0;
	std::string name;
	const Node* left = nullptr;
	const Node* right = nullptr;

	std::size_t hash = 0;
	std::size_t size = 1;
	bool mu_free = true;
	std::vector<VarId> free_vars;  // sorted, unique
};

inline std::size_t mix(std::size_t seed, std::size_t v) {
	return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t content_hash(const Node& n) {
	std::size_t h = static_cast<std::size_t>(n.kind);
	h = mix(h, static_cast<unsigned char>(n.symbol));
	h = mix(h, n.var);
	h = mix(h, std::hash<std::string>{}(n.name));
	h = mix(h, std::hash<const void*>{}(n.left));
	h = mix(h, std::hash<const void*>{}(n.right));
	return h;
}

struct NodePtrHash {
	std::size_t operator()(const Node* n) const { return n->hash; }
};

struct NodePtrEq {
	bool operator()(const Node* a, const Node* b) const {
		return a->kind == b->kind && a->symbol == b->symbol && a->var == b->var &&
		       a->left == b->left && a->right == b->right && a->name == b->name;
	}
};

class Interner {
public:
	static Interner& instance() {
		static Interner table;
		return table;
	}

	const Node* intern(Node proto) {
		proto.hash = content_hash(proto);
		std::lock_guard lock(mutex_);
		if (auto it = index_.find(&proto); it != index_.end()) return *it;
		finish(proto);
		nodes_.push_back(std::move(proto));
		const Node* stored = &nodes_.back();
		index_.insert(stored);
		return stored;
	}

	std::size_t size() const {
		std::lock_guard lock(mutex_);
		return nodes_.size();
	}

private:
	static void finish(Node& n) {
		n.size = 1 + (n.left ? n.left->size : 0) + (n.right ? n.right->size : 0);
		n.mu_free = n.kind != Kind::Var && n.kind != Kind::Mu && (!n.left || n.left->mu_free) &&
		            (!n.right || n.right->mu_free);
		switch (n.kind) {
		case Kind::Var: n.free_vars = {n.var}; break;
		case Kind::Mu:
			n.free_vars = n.left->free_vars;
			std::erase(n.free_vars, n.var);
			break;
		case Kind::Star: n.free_vars = n.left->free_vars; break;
		case Kind::Alt:
		case Kind::Cat:
			std::set_union(n.left->free_vars.begin(), n.left->free_vars.end(), n.right->free_vars.begin(),
			               n.right->free_vars.end(), std::back_inserter(n.free_vars));
			break;
		default: break;
		}
	}

	mutable std::mutex mutex_;
	std::deque<Node> nodes_;
	std::unordered_set<const Node*, NodePtrHash, NodePtrEq> index_;
};

} // namespace detail

class Expr {
public:
	Expr();
	explicit Expr(const detail::Node* node) : node_(node) {}

	Kind kind() const { return node_->kind; }
	char symbol() const { return node_->symbol; }
	VarId var() const { return node_->var; }
	const std::string& name() const { return node_->name; }

	Expr left() const { return Expr(node_->left); }
	Expr right() const { return Expr(node_->right); }
	/// Operand of Star and Mu.
	Expr body() const { return Expr(node_->left); }

	/// Number of AST nodes.
	std::size_t size() const { return node_->size; }
	/// True if the expression contains neither Mu binders nor variables.
	bool mu_free() const { return node_->mu_free; }
	bool closed() const { return node_->free_vars.empty(); }
	const std::vector<VarId>& free_vars() const { return node_->free_vars; }
	bool has_free(VarId x) const { return std::binary_search(node_->free_vars.begin(), node_->free_vars.end(), x); }

	std::size_t hash() const { return node_->hash; }
	const detail::Node* node() const { return node_; }

	bool is(Kind k) const { return node_->kind == k; }

	friend bool operator==(const Expr& a, const Expr& b) { return a.node_ == b.node_; }
	friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

private:
	const detail::Node* node_;
};

namespace detail {

inline const Node* make(Kind kind, char symbol = 0, VarId var = 0, std::string name = {},
                        const Node* left = nullptr, const Node* right = nullptr) {
	Node n;
	n.kind = kind;
	n.symbol = symbol;
	n.var = var;
	n.name = std::move(name);
	n.left = left;
	n.right = right;
	return Interner::instance().intern(std::move(n));
}

inline std::strong_ordering compare(const Node* a, const Node* b) {
	if (a == b) return std::strong_ordering::equal;
	if (auto c = a->kind <=> b->kind; c != 0) return c;
	if (auto c = a->symbol <=> b->symbol; c != 0) return c;
	if (auto c = a->var <=> b->var; c != 0) return c;
	if (auto c = a->name.compare(b->name); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
	if (a->left != b->left) return compare(a->left, b->left);
	if (a->right != b->right) return compare(a->right, b->right);
	return std::strong_ordering::equal;
}

} // namespace detail

inline std::strong_ordering operator<=>(const Expr& a, const Expr& b) { return detail::compare(a.node_, b.node_); }

inline Expr empty_set() { return Expr(detail::make(Kind::EmptySet)); }
inline Expr empty_word() { return Expr(detail::make(Kind::EmptyWord)); }
inline Expr sym(char a) { return Expr(detail::make(Kind::Sym, a)); }
inline Expr alt(const Expr& l, const Expr& r) { return Expr(detail::make(Kind::Alt, 0, 0, {}, l.node(), r.node())); }
inline Expr cat(const Expr& l, const Expr& r) { return Expr(detail::make(Kind::Cat, 0, 0, {}, l.node(), r.node())); }
inline Expr star(const Expr& b) { return Expr(detail::make(Kind::Star, 0, 0, {}, b.node())); }
inline Expr var(VarId x, std::string name) { return Expr(detail::make(Kind::Var, 0, x, std::move(name))); }
inline Expr mu(VarId x, std::string name, const Expr& b) {
	return Expr(detail::make(Kind::Mu, 0, x, std::move(name), b.node()));
}

inline Expr::Expr() : node_(empty_set().node()) {}

struct ExprHash {
	std::size_t operator()(const Expr& e) const { return e.hash(); }
};

/// Lowercase symbols occurring in e, sorted.
inline std::string alphabet(const Expr& e) {
	bool seen[26] = {};
	std::vector<const detail::Node*> todo{e.node()};
	std::unordered_set<const detail::Node*> visited;
	while (!todo.empty()) {
		const auto* n = todo.back();
		todo.pop_back();
		if (!visited.insert(n).second) continue;
		if (n->kind == Kind::Sym) seen[n->symbol - 'a'] = true;
		if (n->left) todo.push_back(n->left);
		if (n->right) todo.push_back(n->right);
	}
	std::string out;
	for (int i = 0; i < 26; ++i)
		if (seen[i]) out.push_back(static_cast<char>('a' + i));
	return out;
}

} // namespace mure

template <>
struct std::hash<mure::Expr> {
	std::size_t operator()(const mure::Expr& e) const { return e.hash(); }
};
