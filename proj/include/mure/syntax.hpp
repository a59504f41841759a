#pragma once

// Concrete syntax, canonical variable numbering, substitutions, and
// subexpression addressing for mu-regular expressions.
//
// Concrete syntax:
//   0        empty set          1        empty word
//   a .. z   alphabet symbol    X, FOO   variable ([A-Z][A-Z0-9_]*)
//   r + s    union              r s, r·s concatenation (juxtaposition)
//   r*       Kleene star        mu X. r  least fixed point, scope extends right
// Precedence: * binds tighter than concatenation, which binds tighter than +.
// The UTF-8 spellings μ, ε and ∅ are accepted as well.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mure/expr.hpp"

namespace mure {

class ParseError : public std::runtime_error {
public:
	ParseError(const std::string& what, std::size_t line, std::size_t column)
	    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
	      line_(line), column_(column) {}

	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }

private:
	std::size_t line_;
	std::size_t column_;
};

/// Raised when a substitution or expression violates the variable ordering.
class OrderError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(Kind k) {
	switch (k) {
	case Kind::Mu: return 0;
	case Kind::Alt: return 1;
	case Kind::Cat: return 2;
	case Kind::Star: return 3;
	default: return 4;
	}
}

inline bool wordlike(const Expr& e) { return e.is(Kind::Sym) || e.is(Kind::Var); }

inline void print(std::string& out, const Expr& e, int min_prec) {
	const bool parens = precedence(e.kind()) < min_prec;
	if (parens) out.push_back('(');
	switch (e.kind()) {
	case Kind::EmptySet: out.push_back('0'); break;
	case Kind::EmptyWord: out.push_back('1'); break;
	case Kind::Sym: out.push_back(e.symbol()); break;
	case Kind::Var: out += e.name(); break;
	case Kind::Alt:
		print(out, e.left(), 1);
		out += " + ";
		print(out, e.right(), 2);
		break;
	case Kind::Cat: {
		print(out, e.left(), 2);
		const Expr last = e.left().is(Kind::Cat) ? e.left().right() : e.left();
		out += wordlike(last) && wordlike(e.right()) ? " " : "·";
		print(out, e.right(), 3);
		break;
	}
	case Kind::Star:
		print(out, e.body(), 3);
		out.push_back('*');
		break;
	case Kind::Mu:
		out += "mu ";
		out += e.name();
		out += ". ";
		print(out, e.body(), 0);
		break;
	}
	if (parens) out.push_back(')');
}

} // namespace detail

/// Renders e in the concrete syntax; the output parses back to the same tree.
inline std::string to_string(const Expr& e) {
	std::string out;
	detail::print(out, e, 0);
	return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
	explicit Parser(std::string_view text) : text_(text) {}

	Expr parse() {
		skip_space();
		if (at_end()) fail("empty expression");
		Expr e = expr();
		skip_space();
		if (!at_end()) fail("unexpected input");
		return e;
	}

private:
	static bool upper(char c) { return c >= 'A' && c <= 'Z'; }
	static bool lower(char c) { return c >= 'a' && c <= 'z'; }
	static bool ident_char(char c) { return upper(c) || (c >= '0' && c <= '9') || c == '_'; }

	bool at_end() const { return pos_ >= text_.size(); }
	char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }
	bool looking_at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

	[[noreturn]] void fail(const std::string& what) const {
		std::size_t line = 1, column = 1;
		for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
			const auto c = static_cast<unsigned char>(text_[i]);
			if (c == '\n') {
				++line;
				column = 1;
			} else if ((c & 0xC0) != 0x80) {
				++column;
			}
		}
		throw ParseError(what, line, column);
	}

	void skip_space() {
		while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
	}

	// "mu" (or "μ") followed by optional blanks and an uppercase letter.
	std::size_t mu_keyword_length() const {
		std::size_t len = 0;
		if (looking_at("mu")) len = 2;
		else if (looking_at("μ")) len = 2;
		else return 0;
		std::size_t i = pos_ + len;
		while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t' || text_[i] == '\n' || text_[i] == '\r')) ++i;
		if (i < text_.size() && upper(text_[i])) return len;
		if (looking_at("μ")) return len;  // μ is never a symbol; report the missing name below
		return 0;
	}

	bool starts_factor() const {
		const char c = peek();
		return lower(c) || upper(c) || c == '0' || c == '1' || c == '(' || looking_at("μ") ||
		       looking_at("ε") || looking_at("∅");
	}

	VarId id_for(const std::string& name) {
		auto [it, inserted] = ids_.try_emplace(name, static_cast<VarId>(ids_.size()));
		return it->second;
	}

	std::string identifier() {
		skip_space();
		if (!upper(peek())) fail("expected variable name");
		std::string name;
		while (!at_end() && ident_char(peek())) name.push_back(text_[pos_++]);
		return name;
	}

	Expr expr() {
		skip_space();
		if (mu_keyword_length()) return mu_expr();
		return alternation();
	}

	Expr mu_expr() {
		pos_ += mu_keyword_length();
		std::string name = identifier();
		skip_space();
		if (peek() != '.') fail("expected '.' after bound variable");
		++pos_;
		const VarId x = id_for(name);
		Expr body = expr();
		return mu(x, std::move(name), body);
	}

	Expr alternation() {
		Expr e = concatenation();
		for (;;) {
			skip_space();
			if (peek() != '+') return e;
			++pos_;
			e = alt(e, concatenation());
		}
	}

	Expr concatenation() {
		skip_space();
		if (mu_keyword_length()) return mu_expr();
		Expr e = postfix();
		for (;;) {
			skip_space();
			bool explicit_dot = false;
			if (looking_at("·")) {
				pos_ += 2;
				skip_space();
				explicit_dot = true;
			}
			if (mu_keyword_length()) return cat(e, mu_expr());
			if (!starts_factor()) {
				if (explicit_dot) fail("expected expression after '·'");
				return e;
			}
			e = cat(e, postfix());
		}
	}

	Expr postfix() {
		Expr e = atom();
		for (;;) {
			skip_space();
			if (peek() != '*') return e;
			++pos_;
			e = star(e);
		}
	}

	Expr atom() {
		skip_space();
		if (at_end()) fail("unexpected end of input");
		const char c = peek();
		if (c == '0') {
			++pos_;
			return empty_set();
		}
		if (c == '1') {
			++pos_;
			return empty_word();
		}
		if (looking_at("∅")) {
			pos_ += 3;
			return empty_set();
		}
		if (looking_at("ε")) {
			pos_ += 2;
			return empty_word();
		}
		if (lower(c)) {
			++pos_;
			return sym(c);
		}
		if (upper(c)) {
			std::string name = identifier();
			const VarId x = id_for(name);
			return var(x, std::move(name));
		}
		if (c == '(') {
			++pos_;
			Expr e = expr();
			skip_space();
			if (peek() != ')') fail("expected ')'");
			++pos_;
			return e;
		}
		if (looking_at("μ")) fail("expected variable name");
		fail(std::string("unexpected character '") + c + "'");
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	std::unordered_map<std::string, VarId> ids_;
};

} // namespace detail

/// Parses the concrete syntax. Variables are numbered by first appearance of
/// their name; binders are not made unique (see canonicalize).
inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Variables

/// Finite stand-in for a language environment: each variable maps to a set of words.
using LangEnv = std::map<VarId, std::set<std::string>>;

inline std::set<VarId> free_vars(const Expr& e) { return {e.free_vars().begin(), e.free_vars().end()}; }

/// Renames binders to unique indices in preorder. Free variables are numbered
/// first (by first occurrence), so every variable is smaller than any binder
/// that encloses it and the result is order-respecting.
inline Expr canonicalize(const Expr& e) {
	struct Binding {
		VarId id;
		std::string name;
	};
	std::map<VarId, Binding> free_map;
	std::set<std::string> used_names;

	// Free variables by first preorder occurrence.
	{
		std::vector<VarId> bound;
		auto visit = [&](auto&& self, const Expr& n) -> void {
			switch (n.kind()) {
			case Kind::Var:
				if (std::find(bound.begin(), bound.end(), n.var()) == bound.end() && !free_map.count(n.var())) {
					const auto id = static_cast<VarId>(free_map.size());
					free_map.emplace(n.var(), Binding{id, n.name()});
					used_names.insert(n.name());
				}
				break;
			case Kind::Mu:
				bound.push_back(n.var());
				self(self, n.body());
				bound.pop_back();
				break;
			case Kind::Star: self(self, n.body()); break;
			case Kind::Alt:
			case Kind::Cat:
				self(self, n.left());
				self(self, n.right());
				break;
			default: break;
			}
		};
		visit(visit, e);
	}

	auto next = static_cast<VarId>(free_map.size());
	std::map<VarId, std::vector<Binding>> scope;
	auto rebuild = [&](auto&& self, const Expr& n) -> Expr {
		switch (n.kind()) {
		case Kind::Var: {
			if (auto it = scope.find(n.var()); it != scope.end() && !it->second.empty())
				return var(it->second.back().id, it->second.back().name);
			const auto& b = free_map.at(n.var());
			return var(b.id, b.name);
		}
		case Kind::Mu: {
			const VarId id = next++;
			std::string name = n.name();
			if (!used_names.insert(name).second) {
				name += "_" + std::to_string(id);
				used_names.insert(name);
			}
			scope[n.var()].push_back(Binding{id, name});
			Expr b = self(self, n.body());
			scope[n.var()].pop_back();
			return mu(id, name, b);
		}
		case Kind::Star: return star(self(self, n.body()));
		case Kind::Alt: return alt(self(self, n.left()), self(self, n.right()));
		case Kind::Cat: return cat(self(self, n.left()), self(self, n.right()));
		default: return n;
		}
	};
	return rebuild(rebuild, e);
}

/// Every subterm mu x.r has only free variables strictly below x.
inline bool is_order_respecting(const Expr& e) {
	std::unordered_map<const detail::Node*, bool> memo;
	auto check = [&](auto&& self, const Expr& n) -> bool {
		if (n.closed() && n.mu_free()) return true;
		if (auto it = memo.find(n.node()); it != memo.end()) return it->second;
		bool ok = true;
		switch (n.kind()) {
		case Kind::Mu:
			ok = (n.free_vars().empty() || n.free_vars().back() < n.var()) && self(self, n.body());
			break;
		case Kind::Star: ok = self(self, n.body()); break;
		case Kind::Alt:
		case Kind::Cat: ok = self(self, n.left()) && self(self, n.right()); break;
		default: break;
		}
		memo.emplace(n.node(), ok);
		return ok;
	};
	return check(check, e);
}

// ---------------------------------------------------------------------------
// Substitutions

/// Variable-to-expression map; well-formed instances are order-closed.
using Subst = std::map<VarId, Expr>;

inline bool is_order_closed(const Subst& sigma) {
	for (const auto& [x, image] : sigma) {
		if (!is_order_respecting(image)) return false;
		for (VarId y : image.free_vars())
			if (!(y < x) || !sigma.count(y)) return false;
	}
	return true;
}

/// Replaces the free occurrences of x in r by image.
inline Expr substitute(const Expr& r, VarId x, const Expr& image) {
	std::unordered_map<const detail::Node*, Expr> memo;
	auto go = [&](auto&& self, const Expr& n) -> Expr {
		if (!n.has_free(x)) return n;
		if (auto it = memo.find(n.node()); it != memo.end()) return it->second;
		Expr out;
		switch (n.kind()) {
		case Kind::Var: out = image; break;
		case Kind::Mu: out = mu(n.var(), n.name(), self(self, n.body())); break;
		case Kind::Star: out = star(self(self, n.body())); break;
		case Kind::Alt: out = alt(self(self, n.left()), self(self, n.right())); break;
		case Kind::Cat: out = cat(self(self, n.left()), self(self, n.right())); break;
		default: out = n; break;
		}
		memo.emplace(n.node(), out);
		return out;
	};
	return go(go, r);
}

namespace detail {

// Substitutes maximal free variables until r is closed. Only checks that the
// sequence of eliminated variables strictly descends, which holds for every
// order-closed substitution.
inline Expr apply_subst_unchecked(const Subst& sigma, Expr r) {
	while (!r.closed()) {
		const VarId x = r.free_vars().back();
		auto it = sigma.find(x);
		if (it == sigma.end()) throw OrderError("free variable outside the substitution domain");
		r = substitute(r, x, it->second);
		if (!r.closed() && r.free_vars().back() >= x) throw OrderError("substitution is not order-closed");
	}
	return r;
}

} // namespace detail

/// Applies an order-closed substitution to an order-respecting expression,
/// always eliminating the numerically largest free variable first.
inline Expr apply_subst(const Subst& sigma, const Expr& r) {
	if (!is_order_closed(sigma)) throw OrderError("substitution is not order-closed");
	if (!is_order_respecting(r)) throw OrderError("expression is not order-respecting");
	for (VarId y : r.free_vars())
		if (!sigma.count(y)) throw OrderError("free variable outside the substitution domain");
	return detail::apply_subst_unchecked(sigma, r);
}

// ---------------------------------------------------------------------------
// Addressing

/// Path from the root to a subterm occurrence; child indices are 1 and 2.
struct Address {
	std::vector<std::uint8_t> path;

	Address child(std::uint8_t i) const {
		Address a{path};
		a.path.push_back(i);
		return a;
	}

	friend bool operator==(const Address&, const Address&) = default;
	friend auto operator<=>(const Address&, const Address&) = default;
};

inline std::string to_string(const Address& a) {
	if (a.path.empty()) return "ε";
	std::string s;
	for (auto i : a.path) s.push_back(static_cast<char>('0' + i));
	return s;
}

/// w1 occurs before w2 (reflexive): the empty path precedes everything,
/// differing heads compare numerically, equal heads recurse.
inline bool occurs_before(const Address& w1, const Address& w2) {
	std::size_t i = 0;
	for (;;) {
		if (i == w1.path.size()) return true;
		if (i == w2.path.size()) return false;
		if (w1.path[i] < w2.path[i]) return true;
		if (w1.path[i] > w2.path[i]) return false;
		++i;
	}
}

inline bool occurs_strictly_before(const Address& w1, const Address& w2) {
	return occurs_before(w1, w2) && w1 != w2;
}

using AddressMap = std::map<Address, Expr>;

inline AddressMap address_map(const Expr& t) {
	AddressMap out;
	auto go = [&](auto&& self, const Expr& n, const Address& at) -> void {
		out.emplace(at, n);
		switch (n.kind()) {
		case Kind::Alt:
		case Kind::Cat:
			self(self, n.left(), at.child(1));
			self(self, n.right(), at.child(2));
			break;
		case Kind::Star:
		case Kind::Mu: self(self, n.body(), at.child(1)); break;
		default: break;
		}
	};
	go(go, t, Address{});
	return out;
}

/// Maps every binder x of t to its subterm mu x.r.
inline Subst unfolding_subst(const Expr& t) {
	Subst sigma;
	auto go = [&](auto&& self, const Expr& n) -> void {
		switch (n.kind()) {
		case Kind::Mu:
			if (!sigma.emplace(n.var(), n).second) throw OrderError("variable bound more than once");
			self(self, n.body());
			break;
		case Kind::Star: self(self, n.body()); break;
		case Kind::Alt:
		case Kind::Cat:
			self(self, n.left());
			self(self, n.right());
			break;
		default: break;
		}
	};
	go(go, t);
	return sigma;
}

/// Parses and canonicalizes, rejecting expressions with free variables.
inline Expr parse_closed(std::string_view text) {
	Expr e = canonicalize(parse(text));
	if (!e.closed()) throw ParseError("expression has free variables", 1, 1);
	return e;
}

} // namespace mure
