#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mure/mure.hpp"

namespace mure::fixtures {

inline std::vector<Expr> corpus() {
	std::vector<Expr> out;
	for (const auto& entry : read_corpus_file(MURE_CORPUS)) out.push_back(parse_closed(entry.text));
	return out;
}

/// Random expressions over {a, b}, bounded node count and binder count.
/// Variable names come from `names`; those not bound by an enclosing mu stay free.
class RandomExpr {
public:
	explicit RandomExpr(std::uint32_t seed) : rng_(seed) {}

	Expr operator()(std::size_t max_nodes, std::size_t max_binders, std::vector<std::string> names = {"X", "Y"}) {
		names_ = std::move(names);
		binders_ = max_binders;
		return canonicalize(gen(max_nodes, {}));
	}

	/// Closed variant: variables are only drawn from enclosing binders.
	Expr closed(std::size_t max_nodes, std::size_t max_binders) {
		names_.clear();
		binders_ = max_binders;
		return canonicalize(gen(max_nodes, {}));
	}

	std::mt19937& rng() { return rng_; }

private:
	// Raw ids by name; canonicalize renumbers afterwards.
	static VarId id_of(const std::string& name) { return static_cast<VarId>(name[0] - 'A'); }

	std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

	Expr leaf(const std::vector<std::string>& bound) {
		std::vector<std::string> vars = bound;
		for (const auto& n : names_) vars.push_back(n);
		const std::size_t choice = pick(vars.empty() ? 4 : 6);
		switch (choice) {
		case 0: return empty_set();
		case 1: return empty_word();
		case 2: return sym('a');
		case 3: return sym('b');
		default: {
			const auto& name = vars[pick(vars.size())];
			return var(id_of(name), name);
		}
		}
	}

	// Node count of the result is at most `budget`.
	Expr gen(std::size_t budget, std::vector<std::string> bound) {
		if (budget <= 1) return leaf(bound);
		const std::size_t choice = pick(binders_ > 0 ? 5 : 4);
		switch (choice) {
		case 0: return leaf(bound);
		case 1: return star(gen(budget - 1, bound));
		case 2:
		case 3: {
			if (budget < 3) return star(gen(budget - 1, bound));
			const std::size_t left = 1 + pick(budget - 2);
			Expr l = gen(left, bound);
			Expr r = gen(budget - 1 - left, bound);
			return choice == 2 ? alt(l, r) : cat(l, r);
		}
		default: {
			--binders_;
			const std::string name = names_.empty() ? (bound.empty() ? "X" : "Y") : names_[pick(names_.size())];
			bound.push_back(name);
			return mu(id_of(name), name, gen(budget - 1, bound));
		}
		}
	}

	std::mt19937 rng_;
	std::vector<std::string> names_;
	std::size_t binders_ = 0;
};

/// L(r) ∩ Σ^{≤n} by set algebra; mu by Kleene iteration from the empty set.
/// Truncation commutes with every operator, so the result is exact.
inline std::set<std::string> bounded_language(const Expr& r, std::size_t n,
                                              std::map<VarId, std::set<std::string>> env = {}) {
	using Lang = std::set<std::string>;
	auto concat = [n](const Lang& x, const Lang& y) {
		Lang out;
		for (const auto& u : x)
			for (const auto& v : y)
				if (u.size() + v.size() <= n) out.insert(u + v);
		return out;
	};
	switch (r.kind()) {
	case Kind::EmptySet: return {};
	case Kind::EmptyWord: return {""};
	case Kind::Sym: return n >= 1 ? Lang{std::string(1, r.symbol())} : Lang{};
	case Kind::Alt: {
		Lang out = bounded_language(r.left(), n, env);
		out.merge(bounded_language(r.right(), n, env));
		return out;
	}
	case Kind::Cat: return concat(bounded_language(r.left(), n, env), bounded_language(r.right(), n, env));
	case Kind::Star: {
		const Lang body = bounded_language(r.body(), n, env);
		Lang out{""};
		for (;;) {
			Lang next = out;
			next.merge(concat(out, body));
			if (next == out) return out;
			out = std::move(next);
		}
	}
	case Kind::Var: return env.at(r.var());
	case Kind::Mu: {
		env[r.var()] = {};
		for (;;) {
			Lang next = bounded_language(r.body(), n, env);
			if (next == env[r.var()]) return next;
			env[r.var()] = std::move(next);
		}
	}
	}
	return {};
}

inline std::size_t word_bound(const Expr& t) { return alphabet(t).size() == 2 ? 6 : 8; }

} // namespace mure::fixtures
