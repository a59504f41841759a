#pragma once

// The single-state pushdown automaton whose pushdown alphabet is IPD(t),
// accepting by empty stack, plus Antimirov's NFA for mu-free expressions.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mure/derivative.hpp"
#include "mure/ipd.hpp"
#include "mure/oracle.hpp"

namespace mure {

using GammaIndex = std::uint32_t;

struct Transition {
	/// Input symbol, or nullopt for a spontaneous move.
	std::optional<char> input;
	GammaIndex pop = 0;
	/// Replaces the popped symbol; front() becomes the new top.
	std::vector<GammaIndex> push;
	/// Spontaneous move taken from an ε-derivative (as opposed to a nullable pop).
	bool from_eps_deriv = false;

	friend bool operator==(const Transition&, const Transition&) = default;
	friend auto operator<=>(const Transition& a, const Transition& b) {
		return std::tie(a.pop, a.input, a.push, a.from_eps_deriv) <=> std::tie(b.pop, b.input, b.push, b.from_eps_deriv);
	}
};

class Pda {
public:
	Pda(Expr origin, std::vector<Expr> gamma, std::vector<Transition> delta, GammaIndex z0)
	    : origin_(origin), gamma_(std::move(gamma)), delta_(std::move(delta)), z0_(z0) {
		by_pop_.resize(gamma_.size());
		for (std::size_t i = 0; i < delta_.size(); ++i) by_pop_[delta_[i].pop].push_back(i);
	}

	const Expr& origin() const { return origin_; }
	/// Pushdown symbols in discovery order.
	const std::vector<Expr>& gamma() const& { return gamma_; }
	std::vector<Expr> gamma() && { return std::move(gamma_); }
	const std::vector<Transition>& delta() const& { return delta_; }
	std::vector<Transition> delta() && { return std::move(delta_); }
	GammaIndex z0() const { return z0_; }
	std::string alphabet() const { return alphabet_of(origin_); }

	/// Transitions that pop `s`.
	std::vector<const Transition*> from(GammaIndex s) const {
		std::vector<const Transition*> out;
		for (auto i : by_pop_.at(s)) out.push_back(&delta_[i]);
		return out;
	}

private:
	static std::string alphabet_of(const Expr& e) { return mure::alphabet(e); }

	Expr origin_;
	std::vector<Expr> gamma_;
	std::vector<Transition> delta_;
	GammaIndex z0_;
	std::vector<std::vector<std::size_t>> by_pop_;
};

inline Pda build_pda(const Expr& t, std::size_t cap = kDefaultIpdCap) {
	const IpdSet gamma = ipd(t, cap);
	auto index = [&](const Stack& s) {
		std::vector<GammaIndex> out;
		for (const auto& e : s) out.push_back(static_cast<GammaIndex>(gamma.index_of(e)));
		return out;
	};
	std::vector<Transition> delta;
	const std::string sigma = alphabet(t);
	for (std::size_t i = 0; i < gamma.size(); ++i) {
		const Expr& s = gamma.elements()[i];
		const auto pop = static_cast<GammaIndex>(i);
		for (char a : sigma)
			for (const auto& d : pderiv(Alpha::symbol(a), s)) delta.push_back(Transition{a, pop, index(d), false});
		for (const auto& d : pderiv(Alpha::epsilon(), s)) delta.push_back(Transition{std::nullopt, pop, index(d), true});
		if (null(s)) delta.push_back(Transition{std::nullopt, pop, {}, false});
	}
	return Pda(t, gamma.elements(), std::move(delta), static_cast<GammaIndex>(gamma.index_of(cat(empty_word(), t))));
}

// ---------------------------------------------------------------------------
// Configurations

struct Config {
	/// Pushdown contents, top first.
	std::vector<GammaIndex> stack;
	std::string remaining;

	bool accepting() const { return stack.empty() && remaining.empty(); }
	friend bool operator==(const Config&, const Config&) = default;
	friend auto operator<=>(const Config&, const Config&) = default;
};

inline std::string to_string(const Pda& p, const Config& c) {
	std::string out = "[";
	for (std::size_t i = 0; i < c.stack.size(); ++i) {
		if (i) out += ", ";
		out += to_string(p.gamma()[c.stack[i]]);
	}
	return out + "] ⊢ " + display_word(c.remaining);
}

/// All one-step successors of c.
inline std::vector<Config> step(const Pda& p, const Config& c) {
	std::vector<Config> out;
	if (c.stack.empty()) return out;
	for (const auto* tr : p.from(c.stack.front())) {
		if (tr->input && (c.remaining.empty() || c.remaining.front() != *tr->input)) continue;
		Config next;
		next.stack = tr->push;
		next.stack.insert(next.stack.end(), c.stack.begin() + 1, c.stack.end());
		next.remaining = tr->input ? c.remaining.substr(1) : c.remaining;
		out.push_back(std::move(next));
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

enum class Verdict { Accept, Reject, Unknown };

inline std::string to_string(Verdict v) {
	switch (v) {
	case Verdict::Accept: return "accept";
	case Verdict::Reject: return "reject";
	case Verdict::Unknown: return "unknown";
	}
	return "unknown";
}

struct SearchResult {
	Verdict verdict = Verdict::Unknown;
	/// Accepting run from the initial configuration, when found.
	std::vector<Config> run;
	/// Configurations in the order they were expanded.
	std::vector<Config> explored;
};

/// Bounded search over configurations. The budget limits the number of
/// growing steps on a run (symbol reads and ε-derivative moves); popping a
/// nullable symbol is free since it shrinks the stack. Stacks taller than
/// |w|·|Γ|·4 + 16 are cut off. Any cut-off yields Unknown, never a wrong answer.
inline SearchResult search(const Pda& p, std::string_view w, std::size_t step_budget) {
	SearchResult result;
	const std::size_t height_cap = w.size() * p.gamma().size() * 4 + 16;

	struct Visit {
		std::size_t cost;
		std::optional<std::size_t> parent;
		Config config;
	};
	std::vector<Visit> nodes;
	std::map<std::pair<std::vector<GammaIndex>, std::size_t>, std::size_t> best;  // (stack, |remaining|) -> cost
	std::deque<std::size_t> queue;

	auto offer = [&](Config c, std::size_t cost, std::optional<std::size_t> parent, bool free_step) {
		auto key = std::make_pair(c.stack, c.remaining.size());
		if (auto it = best.find(key); it != best.end() && it->second <= cost) return;
		best[key] = cost;
		nodes.push_back(Visit{cost, parent, std::move(c)});
		if (free_step) queue.push_front(nodes.size() - 1);
		else queue.push_back(nodes.size() - 1);
	};

	bool cut = false;
	offer(Config{{p.z0()}, std::string(w)}, 0, std::nullopt, true);
	while (!queue.empty()) {
		const std::size_t id = queue.front();
		queue.pop_front();
		const Visit current = nodes[id];
		if (best.at({current.config.stack, current.config.remaining.size()}) < current.cost) continue;
		result.explored.push_back(current.config);
		if (current.config.accepting()) {
			result.verdict = Verdict::Accept;
			for (std::optional<std::size_t> at = id; at; at = nodes[*at].parent) result.run.push_back(nodes[*at].config);
			std::reverse(result.run.begin(), result.run.end());
			return result;
		}
		if (current.config.stack.empty()) continue;
		for (const auto* tr : p.from(current.config.stack.front())) {
			if (tr->input && (current.config.remaining.empty() || current.config.remaining.front() != *tr->input)) continue;
			const bool free_step = !tr->input && tr->push.empty();
			const std::size_t cost = current.cost + (free_step ? 0 : 1);
			if (cost > step_budget) {
				cut = true;
				continue;
			}
			Config next;
			next.stack = tr->push;
			next.stack.insert(next.stack.end(), current.config.stack.begin() + 1, current.config.stack.end());
			if (next.stack.size() > height_cap) {
				cut = true;
				continue;
			}
			next.remaining = tr->input ? current.config.remaining.substr(1) : current.config.remaining;
			offer(std::move(next), cost, id, free_step);
		}
	}
	result.verdict = cut ? Verdict::Unknown : Verdict::Reject;
	return result;
}

inline Verdict accepts_bfs(const Pda& p, std::string_view w, std::size_t step_budget) {
	return search(p, w, step_budget).verdict;
}

// ---------------------------------------------------------------------------
// Exact recognition

/// N_s for every pushdown symbol s; N_s -> α N_{s1} ... N_{sk} for every
/// transition, N_s -> ε for every pop. The start symbol is N_{Z0}.
inline Grammar pda_to_grammar(const Pda& p) {
	Grammar g;
	for (std::size_t i = 0; i < p.gamma().size(); ++i) g.add_nonterminal("G" + std::to_string(i));
	for (const auto& tr : p.delta()) {
		std::vector<GSym> body;
		if (tr.input) body.push_back(GSym::t(*tr.input));
		for (auto s : tr.push) body.push_back(GSym::nt(s));
		g.add_production(tr.pop, std::move(body));
	}
	g.set_start(p.z0());
	return g;
}

/// Exact membership, decided on the equivalent grammar.
inline bool accepts(const Pda& p, std::string_view w) { return recognize(pda_to_grammar(p), w); }

// ---------------------------------------------------------------------------
// Antimirov NFA

class Nfa {
public:
	struct Edge {
		std::size_t from;
		char symbol;
		std::size_t to;
		friend bool operator==(const Edge&, const Edge&) = default;
		friend auto operator<=>(const Edge&, const Edge&) = default;
	};

	Nfa(std::vector<Expr> states, std::vector<Edge> delta, std::vector<bool> final)
	    : states_(std::move(states)), delta_(std::move(delta)), final_(std::move(final)) {}

	/// states()[0] is the start expression.
	const std::vector<Expr>& states() const& { return states_; }
	std::vector<Expr> states() && { return std::move(states_); }
	const std::vector<Edge>& delta() const& { return delta_; }
	std::vector<Edge> delta() && { return std::move(delta_); }
	bool is_final(std::size_t q) const { return final_.at(q); }
	std::size_t start() const { return 0; }

	bool accepts(std::string_view w) const {
		std::set<std::size_t> current{0};
		for (char a : w) {
			std::set<std::size_t> next;
			for (const auto& e : delta_)
				if (e.symbol == a && current.count(e.from)) next.insert(e.to);
			current = std::move(next);
			if (current.empty()) return false;
		}
		return std::any_of(current.begin(), current.end(), [&](std::size_t q) { return final_[q]; });
	}

private:
	std::vector<Expr> states_;
	std::vector<Edge> delta_;
	std::vector<bool> final_;
};

/// States are the iterated Antimirov derivatives of r; finals are the nullable ones.
inline Nfa build_nfa(const Expr& r) {
	if (!r.mu_free()) throw NotRegular("build_nfa requires an expression without mu or variables");
	std::vector<Expr> states{r};
	std::unordered_map<Expr, std::size_t> index{{r, 0}};
	std::vector<Nfa::Edge> delta;
	const std::string sigma = alphabet(r);
	for (std::size_t q = 0; q < states.size(); ++q) {
		const Expr from = states[q];
		for (char a : sigma) {
			for (const auto& d : antimirov_deriv(a, from)) {
				auto [it, inserted] = index.emplace(d, states.size());
				if (inserted) states.push_back(d);
				delta.push_back({q, a, it->second});
			}
		}
	}
	std::vector<bool> final;
	for (const auto& q : states) final.push_back(null(q));
	return Nfa(std::move(states), std::move(delta), std::move(final));
}

// ---------------------------------------------------------------------------
// Guardedness

/// True if no variable occurrence can be reached from the start of a mu body
/// without first consuming a symbol (the right side of a concatenation is
/// entered only when the left side is nullable). An ε-derivative is non-empty
/// exactly when it meets such a variable, so guarded expressions yield no
/// ε-derivative transitions. Outer variables count too: in mu X. a (mu Y. X)
/// the inner body unfolds X spontaneously.
inline bool is_guarded(const Expr& t) {
	bool guarded = true;
	auto enter = [](const Expr& m, const NullEnv& nu) {
		NullEnv inner = nu;
		NullEnv assume = nu;
		assume[m.var()] = false;
		inner[m.var()] = null(m.body(), assume);
		return inner;
	};
	// Positions an ε-derivative of n visits.
	auto reach = [&](auto&& self, const Expr& n, const NullEnv& nu) -> void {
		switch (n.kind()) {
		case Kind::Var: guarded = false; break;
		case Kind::Alt:
			self(self, n.left(), nu);
			self(self, n.right(), nu);
			break;
		case Kind::Cat:
			self(self, n.left(), nu);
			if (null(n.left(), nu)) self(self, n.right(), nu);
			break;
		case Kind::Star: self(self, n.body(), nu); break;
		case Kind::Mu: self(self, n.body(), enter(n, nu)); break;
		default: break;
		}
	};
	auto walk = [&](auto&& self, const Expr& n, const NullEnv& nu) -> void {
		switch (n.kind()) {
		case Kind::Alt:
		case Kind::Cat:
			self(self, n.left(), nu);
			self(self, n.right(), nu);
			break;
		case Kind::Star: self(self, n.body(), nu); break;
		case Kind::Mu: {
			const NullEnv inner = enter(n, nu);
			reach(reach, n.body(), inner);
			self(self, n.body(), inner);
			break;
		}
		default: break;
		}
	};
	walk(walk, t, NullEnv{});
	return guarded;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string dot_escape(std::string_view s) {
	std::string out;
	for (char c : s) {
		if (c == '"' || c == '\\') out.push_back('\\');
		out.push_back(c);
	}
	return out;
}

} // namespace detail

inline std::string transition_label(const Pda& p, const Transition& tr) {
	std::string out = tr.input ? std::string(1, *tr.input) : std::string("ε");
	out += " / " + to_string(p.gamma()[tr.pop]) + " → [";
	for (std::size_t i = 0; i < tr.push.size(); ++i) {
		if (i) out += ", ";
		out += to_string(p.gamma()[tr.push[i]]);
	}
	return out + "]";
}

/// DOT digraph: one node per pushdown symbol (Z0 bold, nullable symbols
/// double-bordered to mark their pop move), one edge per pushing transition
/// towards the new top.
inline std::string to_dot(const Pda& p) {
	std::ostringstream os;
	os << "digraph pda {\n  rankdir=LR;\n  node [shape=box];\n";
	std::vector<bool> pops(p.gamma().size(), false);
	for (const auto& tr : p.delta())
		if (!tr.input && tr.push.empty()) pops[tr.pop] = true;
	for (std::size_t i = 0; i < p.gamma().size(); ++i) {
		os << "  g" << i << " [label=\"" << detail::dot_escape(to_string(p.gamma()[i])) << "\"";
		if (i == p.z0()) os << ", style=bold, xlabel=\"Z0\"";
		if (pops[i]) os << ", peripheries=2";
		os << "];\n";
	}
	for (const auto& tr : p.delta()) {
		if (tr.push.empty()) continue;
		os << "  g" << tr.pop << " -> g" << tr.push.front() << " [label=\"" << detail::dot_escape(transition_label(p, tr))
		   << "\"];\n";
	}
	os << "}\n";
	return os.str();
}

} // namespace mure
