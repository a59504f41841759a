#pragma once

// Iterated partial derivatives and their normal forms.
//
// IPD(t) is the least set containing 1·t and every element of every stack of
// a symbol or ε derivative of a member. It is always finite, because each
// member is the unfolding sigma_t applied to h·s1·...·sk where h is 1 or a
// mu-subterm of t and s1..sk are subterms of t at strictly increasing
// addresses. Classifier recovers such a decomposition for a given expression.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mure/derivative.hpp"

namespace mure {

class IpdCapExceeded : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultIpdCap = 100000;

class IpdSet {
public:
	explicit IpdSet(Expr origin) : origin_(origin) {}

	const Expr& origin() const { return origin_; }
	/// Members in discovery order.
	const std::vector<Expr>& elements() const& { return elements_; }
	/// By value on temporaries, so `for (auto& e : ipd(t).elements())` is safe.
	std::vector<Expr> elements() && { return std::move(elements_); }
	std::size_t size() const { return elements_.size(); }
	bool contains(const Expr& e) const { return index_.count(e) != 0; }
	std::size_t index_of(const Expr& e) const { return index_.at(e); }

	bool insert(const Expr& e) {
		if (!index_.emplace(e, elements_.size()).second) return false;
		elements_.push_back(e);
		return true;
	}

private:
	Expr origin_;
	std::vector<Expr> elements_;
	std::unordered_map<Expr, std::size_t> index_;
};

/// Worklist fixpoint over symbol and ε derivatives, seeded with 1·t.
inline IpdSet ipd(const Expr& t, std::size_t cap = kDefaultIpdCap) {
	if (!t.closed()) throw std::invalid_argument("ipd requires a closed expression");
	IpdSet out(t);
	const std::string sigma = alphabet(t);
	std::vector<Alpha> steps{Alpha::epsilon()};
	for (char a : sigma) steps.push_back(Alpha::symbol(a));

	out.insert(cat(empty_word(), t));
	for (std::size_t next = 0; next < out.size(); ++next) {
		const Expr r = out.elements()[next];
		for (const auto& alpha : steps)
			for (const auto& s : pderiv(alpha, r))
				for (const auto& e : s)
					if (out.insert(e) && out.size() > cap)
						throw IpdCapExceeded("iterated derivative set exceeded " + std::to_string(cap) +
						                     " elements; the set is finite, so this indicates a bug");
	}
	return out;
}

/// Loose upper bound on |IPD(t)|: (mu-subterms + 1) * 2^nodes, saturating.
inline double ipd_size_bound(const Expr& t) {
	const auto subterms = address_map(t);
	const auto mus = std::count_if(subterms.begin(), subterms.end(),
	                               [](const auto& kv) { return kv.second.is(Kind::Mu); });
	return static_cast<double>(mus + 1) * std::pow(2.0, static_cast<double>(subterms.size()));
}

enum class FormTag { Top, Rec, Other };

inline std::string to_string(FormTag tag) {
	switch (tag) {
	case FormTag::Top: return "top";
	case FormTag::Rec: return "rec";
	case FormTag::Other: return "other";
	}
	return "other";
}

struct Form {
	FormTag tag = FormTag::Other;
	/// 1 for top, the unfolded mu-subterm for rec.
	std::optional<Expr> head;
	/// Address of the mu-subterm (rec only).
	std::optional<Address> head_address;
	/// Strictly increasing addresses of the vector factors.
	std::vector<Address> vector;
};

/// Order used to decide whether vector factors strictly increase.
/// Lexicographic is occurs_before as defined on addresses, which puts an
/// enclosing term before its subterms. Postorder puts subterms first; stars
/// need it, since a derivative of (ab)* is 1·b·(ab)* whose factors sit at
/// 12 and then at the root.
enum class VectorOrder { Lexicographic, Postorder };

inline bool precedes(VectorOrder order, const Address& w1, const Address& w2) {
	if (order == VectorOrder::Lexicographic) return occurs_strictly_before(w1, w2);
	const auto [i1, i2] = std::mismatch(w1.path.begin(), w1.path.end(), w2.path.begin(), w2.path.end());
	if (i1 != w1.path.end() && i2 != w2.path.end()) return *i1 < *i2;
	return i2 == w2.path.end() && i1 != w1.path.end();  // w2 is a proper prefix of w1
}

enum class StackForm { TopPlus, RecTopStar, Other };

inline std::string to_string(StackForm f) {
	switch (f) {
	case StackForm::TopPlus: return "top+";
	case StackForm::RecTopStar: return "rec.top*";
	case StackForm::Other: return "other";
	}
	return "other";
}

/// Decides the top / rec normal forms relative to a fixed closed expression t.
class Classifier {
public:
	explicit Classifier(const Expr& t, VectorOrder order = VectorOrder::Postorder)
	    : t_(t), order_(order), addresses_(address_map(t)), sigma_(unfolding_subst(t)) {
		const auto before = [this](const Address& a, const Address& b) { return precedes(order_, a, b); };
		for (const auto& [w, sub] : addresses_) {
			const Expr image = detail::apply_subst_unchecked(sigma_, sub);
			occurrences_[image].push_back(w);
			if (sub.is(Kind::Mu)) {
				Address lowest = w;
				for (const auto& [v, inner] : addresses_)
					if (inner.is(Kind::Var) && inner.var() == sub.var() && before(v, lowest)) lowest = v;
				mu_heads_.push_back({w, image, lowest});
			}
		}
		for (auto& [image, ws] : occurrences_) std::sort(ws.begin(), ws.end(), before);
	}

	const Expr& origin() const { return t_; }
	VectorOrder order() const { return order_; }

	std::optional<Form> find(const Expr& e, FormTag want) const {
		// Peel the left-nested concatenation spine from the bottom: e = ((h·s1)·s2)···sk.
		std::vector<Expr> factors;  // reversed
		Expr head = e;
		for (;;) {
			if (auto f = match(head, factors, want)) return f;
			if (!head.is(Kind::Cat)) return std::nullopt;
			factors.push_back(head.right());
			head = head.left();
		}
	}

	Form classify(const Expr& e) const {
		if (auto f = find(e, FormTag::Top)) return *f;
		if (auto f = find(e, FormTag::Rec)) return *f;
		return Form{};
	}

	bool has_form(const Expr& e, FormTag want) const { return find(e, want).has_value(); }

	bool has_stack_form(const Stack& s, StackForm want) const {
		if (want == StackForm::Other) return stack_form(s) == StackForm::Other;
		if (want == StackForm::RecTopStar && !has_form(s.top(), FormTag::Rec)) return false;
		const std::size_t first = want == StackForm::RecTopStar ? 1 : 0;
		for (std::size_t i = first; i < s.size(); ++i)
			if (!has_form(s[i], FormTag::Top)) return false;
		return true;
	}

	StackForm stack_form(const Stack& s) const {
		if (has_stack_form(s, StackForm::TopPlus)) return StackForm::TopPlus;
		if (has_stack_form(s, StackForm::RecTopStar)) return StackForm::RecTopStar;
		return StackForm::Other;
	}

private:
	struct MuHead {
		Address address;
		Expr image;
		/// Earliest of the binder and its variable occurrences.
		Address earliest;
	};

	// Greedy choice of the earliest admissible address per factor; strictly
	// after `after` when given.
	std::optional<std::vector<Address>> chain(const std::vector<Expr>& reversed,
	                                          std::optional<Address> after) const {
		std::vector<Address> out;
		for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
			auto occ = occurrences_.find(*it);
			if (occ == occurrences_.end()) return std::nullopt;
			const auto& ws = occ->second;
			auto pick = ws.begin();
			if (after) pick = std::find_if(ws.begin(), ws.end(), [&](const Address& w) { return precedes(order_, *after, w); });
			if (pick == ws.end()) return std::nullopt;
			after = *pick;
			out.push_back(*pick);
		}
		return out;
	}

	std::optional<Form> match(const Expr& head, const std::vector<Expr>& reversed, FormTag want) const {
		if (want == FormTag::Top) {
			if (!head.is(Kind::EmptyWord)) return std::nullopt;
			if (auto v = chain(reversed, std::nullopt)) return Form{FormTag::Top, head, std::nullopt, std::move(*v)};
			return std::nullopt;
		}
		for (const auto& m : mu_heads_) {
			if (m.image != head) continue;
			if (auto v = chain(reversed, m.earliest)) return Form{FormTag::Rec, head, m.address, std::move(*v)};
		}
		return std::nullopt;
	}

	Expr t_;
	VectorOrder order_;
	AddressMap addresses_;
	Subst sigma_;
	std::unordered_map<Expr, std::vector<Address>> occurrences_;
	std::vector<MuHead> mu_heads_;
};

inline Form classify(const Expr& t, const Expr& e, VectorOrder order = VectorOrder::Postorder) {
	return Classifier(t, order).classify(e);
}

inline StackForm stack_form(const Expr& t, const Stack& s, VectorOrder order = VectorOrder::Postorder) {
	return Classifier(t, order).stack_form(s);
}

} // namespace mure
