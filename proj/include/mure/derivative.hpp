#pragma once

// Partial derivatives.
//
// antimirov_deriv is the classic set-of-expressions derivative for the
// mu-free fragment. pderiv generalizes it to mu-regular expressions: the
// result is a set of non-empty stacks, where entering a binder pushes a fresh
// bottom frame and recursion variables are unfolded only through the
// deferred substitution sigma. Deriving by ε unfolds one level of left
// recursion and corresponds to the spontaneous moves of the pushdown
// automaton built in pda.hpp.

#include <cassert>
#include <compare>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mure/nullability.hpp"
#include "mure/syntax.hpp"

namespace mure {

/// A derivation step: an input symbol or the empty word.
class Alpha {
public:
	static Alpha epsilon() { return Alpha(); }
	static Alpha symbol(char a) { return Alpha(a); }

	bool is_epsilon() const { return !symbol_.has_value(); }
	char symbol() const { return *symbol_; }

	friend bool operator==(const Alpha&, const Alpha&) = default;

private:
	Alpha() = default;
	explicit Alpha(char a) : symbol_(a) {}
	std::optional<char> symbol_;
};

/// Non-empty sequence of expressions; front() is the top, back() the bottom.
class Stack {
public:
	explicit Stack(std::vector<Expr> items) : items_(std::move(items)) {
		if (items_.empty()) throw std::invalid_argument("stack must be non-empty");
	}
	Stack(std::initializer_list<Expr> items) : Stack(std::vector<Expr>(items)) {}

	const Expr& top() const { return items_.front(); }
	const Expr& bottom() const { return items_.back(); }
	std::size_t size() const { return items_.size(); }
	const Expr& operator[](std::size_t i) const { return items_[i]; }
	auto begin() const { return items_.begin(); }
	auto end() const { return items_.end(); }
	const std::vector<Expr>& items() const { return items_; }

	friend bool operator==(const Stack&, const Stack&) = default;
	/// Shorter stacks first, then element-wise.
	friend std::strong_ordering operator<=>(const Stack& a, const Stack& b) {
		if (auto c = a.items_.size() <=> b.items_.size(); c != 0) return c;
		for (std::size_t i = 0; i < a.items_.size(); ++i)
			if (auto c = a.items_[i] <=> b.items_[i]; c != 0) return c;
		return std::strong_ordering::equal;
	}

private:
	std::vector<Expr> items_;
};

using DerivSet = std::set<Stack>;

inline std::string to_string(const Stack& s) {
	std::string out = "[";
	for (std::size_t i = 0; i < s.size(); ++i) {
		if (i) out += ", ";
		out += to_string(s[i]);
	}
	return out + "]";
}

/// Concatenates b onto the bottom element.
inline Stack stack_concat(const Stack& s, const Expr& b) {
	std::vector<Expr> items = s.items();
	items.back() = cat(items.back(), b);
	return Stack(std::move(items));
}

/// Stack s on top of stack below.
inline Stack stack_push(const Stack& s, const Stack& below) {
	std::vector<Expr> items = s.items();
	items.insert(items.end(), below.begin(), below.end());
	return Stack(std::move(items));
}

inline DerivSet set_concat(const DerivSet& r, const Expr& b) {
	DerivSet out;
	for (const auto& s : r) out.insert(stack_concat(s, b));
	return out;
}

inline DerivSet set_push(const DerivSet& r, const Stack& below) {
	DerivSet out;
	for (const auto& s : r) out.insert(stack_push(s, below));
	return out;
}

class NotRegular : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// Antimirov's partial derivative of a mu-free expression.
inline std::set<Expr> antimirov_deriv(char a, const Expr& r) {
	switch (r.kind()) {
	case Kind::EmptySet:
	case Kind::EmptyWord: return {};
	case Kind::Sym:
		if (r.symbol() == a) return {empty_word()};
		return {};
	case Kind::Alt: {
		auto out = antimirov_deriv(a, r.left());
		out.merge(antimirov_deriv(a, r.right()));
		return out;
	}
	case Kind::Cat: {
		std::set<Expr> out;
		for (const auto& d : antimirov_deriv(a, r.left())) out.insert(cat(d, r.right()));
		if (null(r.left())) out.merge(antimirov_deriv(a, r.right()));
		return out;
	}
	case Kind::Star: {
		std::set<Expr> out;
		for (const auto& d : antimirov_deriv(a, r.body())) out.insert(cat(d, r));
		return out;
	}
	case Kind::Var:
	case Kind::Mu: throw NotRegular("antimirov_deriv requires an expression without mu or variables");
	}
	return {};
}

/// Partial derivative of r by alpha under the deferred unfoldings sigma and
/// the variable nullabilities nu. Every stack in the result holds closed
/// expressions only.
inline DerivSet pderiv(const Alpha& alpha, const Subst& sigma, const NullEnv& nu, const Expr& r) {
	switch (r.kind()) {
	case Kind::EmptySet:
	case Kind::EmptyWord: return {};
	case Kind::Sym:
		if (!alpha.is_epsilon() && alpha.symbol() == r.symbol()) return {Stack{empty_word()}};
		return {};
	case Kind::Alt: {
		auto out = pderiv(alpha, sigma, nu, r.left());
		out.merge(pderiv(alpha, sigma, nu, r.right()));
		return out;
	}
	case Kind::Cat: {
		auto out = set_concat(pderiv(alpha, sigma, nu, r.left()), detail::apply_subst_unchecked(sigma, r.right()));
		if (null(r.left(), nu)) out.merge(pderiv(alpha, sigma, nu, r.right()));
		return out;
	}
	case Kind::Star:
		return set_concat(pderiv(alpha, sigma, nu, r.body()), detail::apply_subst_unchecked(sigma, r));
	case Kind::Mu: {
		Subst inner_sigma = sigma;
		inner_sigma.insert_or_assign(r.var(), r);
		NullEnv assume_empty = nu;
		assume_empty[r.var()] = false;
		NullEnv inner_nu = nu;
		inner_nu[r.var()] = null(r.body(), assume_empty);
		return set_push(pderiv(alpha, inner_sigma, inner_nu, r.body()), Stack{empty_word()});
	}
	case Kind::Var: {
		if (!sigma.count(r.var()) || !nu.count(r.var()))
			throw UnboundVariable("variable " + r.name() + " missing from the derivation environment");
		if (alpha.is_epsilon()) return {Stack{detail::apply_subst_unchecked(sigma, r)}};
		return {};
	}
	}
	return {};
}

inline DerivSet pderiv(const Alpha& alpha, const Expr& r) { return pderiv(alpha, Subst{}, NullEnv{}, r); }

struct ClosureResult {
	DerivSet stacks;
	/// Spontaneous expansions were still pending when the budget ran out.
	bool exhausted = false;
};

/// Derivation closure of s by a, limited to at most eps_budget spontaneous
/// steps before the symbol step. For left-recursive expressions the full
/// closure is infinite; the result is then a subset.
inline ClosureResult closure(char a, const Stack& s, std::size_t eps_budget) {
	ClosureResult result;
	std::set<Stack> visited{s};
	std::vector<Stack> frontier{s};
	for (std::size_t depth = 0; !frontier.empty(); ++depth) {
		std::vector<Stack> next;
		for (const auto& st : frontier) {
			const std::vector<Expr> below(st.begin() + 1, st.end());
			auto lift = [&](const Stack& d) {
				std::vector<Expr> items = d.items();
				items.insert(items.end(), below.begin(), below.end());
				return Stack(std::move(items));
			};
			for (const auto& d : pderiv(Alpha::symbol(a), st.top())) result.stacks.insert(lift(d));
			for (const auto& d : pderiv(Alpha::epsilon(), st.top())) {
				Stack grown = lift(d);
				if (visited.count(grown)) continue;
				if (depth == eps_budget) {
					result.exhausted = true;
					continue;
				}
				visited.insert(grown);
				next.push_back(std::move(grown));
			}
		}
		frontier = std::move(next);
	}
	return result;
}

} // namespace mure
