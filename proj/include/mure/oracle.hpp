#pragma once

// Ground truth for language membership that does not use derivatives:
// a structural translation to a context-free grammar, an Earley recognizer,
// bounded enumeration, and a direct least-fixed-point evaluation of the
// inductive membership rules.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mure/syntax.hpp"

namespace mure {

// ---------------------------------------------------------------------------
// Grammars

struct GSym {
	bool terminal = false;
	char symbol = 0;
	std::uint32_t nonterminal = 0;

	static GSym t(char a) { return GSym{true, a, 0}; }
	static GSym nt(std::uint32_t n) { return GSym{false, 0, n}; }

	friend bool operator==(const GSym&, const GSym&) = default;
};

struct Production {
	std::uint32_t head = 0;
	std::vector<GSym> body;
};

class Grammar {
public:
	std::uint32_t add_nonterminal(std::string name) {
		names_.push_back(std::move(name));
		return static_cast<std::uint32_t>(names_.size() - 1);
	}

	void add_production(std::uint32_t head, std::vector<GSym> body) {
		if (head >= names_.size()) throw std::out_of_range("undeclared nonterminal");
		for (const auto& s : body) {
			if (s.terminal) terminals_.insert(s.symbol);
			else if (s.nonterminal >= names_.size()) throw std::out_of_range("undeclared nonterminal");
		}
		productions_.push_back(Production{head, std::move(body)});
	}

	void set_start(std::uint32_t s) {
		if (s >= names_.size()) throw std::out_of_range("undeclared start symbol");
		start_ = s;
	}

	std::uint32_t start() const { return start_; }
	std::size_t nonterminal_count() const { return names_.size(); }
	const std::string& name(std::uint32_t n) const { return names_.at(n); }
	const std::vector<Production>& productions() const { return productions_; }
	const std::set<char>& terminals() const { return terminals_; }

private:
	std::vector<std::string> names_;
	std::set<char> terminals_;
	std::vector<Production> productions_;
	std::uint32_t start_ = 0;
};

/// Line format: an optional "%start N" line, then one "N -> body" line per
/// production. Body tokens are separated by blanks; single lowercase letters
/// are terminals and "%eps" is the empty body.
inline std::string to_string(const Grammar& g) {
	std::ostringstream os;
	os << "%start " << g.name(g.start()) << "\n";
	for (const auto& p : g.productions()) {
		os << g.name(p.head) << " ->";
		if (p.body.empty()) os << " %eps";
		for (const auto& s : p.body) {
			os << ' ';
			if (s.terminal) os << s.symbol;
			else os << g.name(s.nonterminal);
		}
		os << "\n";
	}
	return os.str();
}

inline Grammar parse_grammar(std::string_view text) {
	Grammar g;
	std::unordered_map<std::string, std::uint32_t> ids;
	auto id = [&](const std::string& name) {
		auto it = ids.find(name);
		if (it != ids.end()) return it->second;
		const auto n = g.add_nonterminal(name);
		ids.emplace(name, n);
		return n;
	};
	std::istringstream in{std::string(text)};
	std::string line;
	std::size_t lineno = 0;
	std::optional<std::string> start;
	while (std::getline(in, line)) {
		++lineno;
		if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
		std::istringstream tokens(line);
		std::vector<std::string> tok;
		for (std::string s; tokens >> s;) tok.push_back(s);
		if (tok.empty()) continue;
		if (tok[0] == "%start") {
			if (tok.size() != 2) throw ParseError("expected '%start NAME'", lineno, 1);
			start = tok[1];
			id(tok[1]);
			continue;
		}
		if (tok.size() < 2 || tok[1] != "->") throw ParseError("expected 'NAME -> body'", lineno, 1);
		if (std::islower(static_cast<unsigned char>(tok[0][0])) && tok[0].size() == 1)
			throw ParseError("production head must be a nonterminal", lineno, 1);
		const auto head = id(tok[0]);
		if (!start) start = tok[0];
		std::vector<GSym> body;
		for (std::size_t i = 2; i < tok.size(); ++i) {
			const auto& s = tok[i];
			if (s == "%eps") continue;
			if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'z') body.push_back(GSym::t(s[0]));
			else body.push_back(GSym::nt(id(s)));
		}
		g.add_production(head, std::move(body));
	}
	if (!start) throw ParseError("grammar has no productions", lineno == 0 ? 1 : lineno, 1);
	g.set_start(ids.at(*start));
	return g;
}

// ---------------------------------------------------------------------------
// Earley recognizer

/// Incremental Earley recognizer with the Aycock-Horspool treatment of
/// nullable nonterminals; handles ε-productions and left recursion.
class Recognizer {
public:
	explicit Recognizer(Grammar g) : g_(std::move(g)) {
		by_head_.resize(g_.nonterminal_count());
		for (std::uint32_t i = 0; i < g_.productions().size(); ++i) by_head_[g_.productions()[i].head].push_back(i);
		nullable_.assign(g_.nonterminal_count(), false);
		for (bool changed = true; changed;) {
			changed = false;
			for (const auto& p : g_.productions()) {
				if (nullable_[p.head]) continue;
				const bool all = std::all_of(p.body.begin(), p.body.end(),
				                             [&](const GSym& s) { return !s.terminal && nullable_[s.nonterminal]; });
				if (all) nullable_[p.head] = changed = true;
			}
		}
		reset();
	}

	const Grammar& grammar() const { return g_; }
	bool nullable(std::uint32_t nt) const { return nullable_.at(nt); }

	void reset() {
		sets_.clear();
		sets_.emplace_back();
		for (auto p : by_head_[g_.start()]) add(0, Item{p, 0, 0});
		close(0);
	}

	/// Number of symbols consumed so far.
	std::size_t position() const { return sets_.size() - 1; }

	void push(char a) {
		const std::size_t k = sets_.size() - 1;
		sets_.emplace_back();
		if (auto it = sets_[k].scanning.find(a); it != sets_[k].scanning.end()) {
			const auto items = it->second;
			for (const auto& item : items) add(k + 1, Item{item.prod, item.dot + 1, item.origin});
		}
		close(k + 1);
	}

	void pop() {
		if (sets_.size() > 1) sets_.pop_back();
	}

	/// No continuation of the consumed prefix can be accepted.
	bool dead() const { return sets_.back().items.empty(); }

	bool accepts() const {
		for (const auto& item : sets_.back().items) {
			const auto& p = g_.productions()[item.prod];
			if (p.head == g_.start() && item.origin == 0 && item.dot == p.body.size()) return true;
		}
		return false;
	}

	bool recognize(std::string_view w) {
		reset();
		for (char a : w) {
			push(a);
			if (dead()) return false;
		}
		return accepts();
	}

private:
	struct Item {
		std::uint32_t prod;
		std::uint32_t dot;
		std::uint32_t origin;
	};

	struct ItemSet {
		std::vector<Item> items;
		std::unordered_set<std::uint64_t> seen;
		std::unordered_map<std::uint32_t, std::vector<Item>> waiting;  // next symbol is this nonterminal
		std::unordered_map<char, std::vector<Item>> scanning;          // next symbol is this terminal
	};

	static std::uint64_t key(const Item& i) {
		return (static_cast<std::uint64_t>(i.prod) << 40) | (static_cast<std::uint64_t>(i.dot) << 24) | i.origin;
	}

	void add(std::size_t k, Item item) {
		auto& set = sets_[k];
		if (!set.seen.insert(key(item)).second) return;
		set.items.push_back(item);
		const auto& body = g_.productions()[item.prod].body;
		if (item.dot < body.size()) {
			const auto& next = body[item.dot];
			if (next.terminal) set.scanning[next.symbol].push_back(item);
			else set.waiting[next.nonterminal].push_back(item);
		}
	}

	void close(std::size_t k) {
		for (std::size_t i = 0; i < sets_[k].items.size(); ++i) {
			const Item item = sets_[k].items[i];
			const auto& p = g_.productions()[item.prod];
			if (item.dot == p.body.size()) {
				auto& origin = sets_[item.origin];
				auto it = origin.waiting.find(p.head);
				if (it == origin.waiting.end()) continue;
				auto& waiters = it->second;
				for (std::size_t j = 0; j < waiters.size(); ++j) {
					const Item w = waiters[j];
					add(k, Item{w.prod, w.dot + 1, w.origin});
				}
				continue;
			}
			const auto& next = p.body[item.dot];
			if (next.terminal) continue;
			for (auto q : by_head_[next.nonterminal]) add(k, Item{q, 0, static_cast<std::uint32_t>(k)});
			if (nullable_[next.nonterminal]) add(k, Item{item.prod, item.dot + 1, item.origin});
		}
	}

	Grammar g_;
	std::vector<std::vector<std::uint32_t>> by_head_;
	std::vector<bool> nullable_;
	std::vector<ItemSet> sets_;
};

inline bool recognize(const Grammar& g, std::string_view w) { return Recognizer(g).recognize(w); }

// ---------------------------------------------------------------------------
// Translation

/// One nonterminal per subexpression; a binder and its variable occurrences
/// share a nonterminal. Free variables are read from env as finite languages.
inline Grammar mu_to_grammar(const Expr& r, const LangEnv& env = {}) {
	Grammar g;
	std::map<VarId, std::vector<std::uint32_t>> scope;
	std::map<VarId, std::uint32_t> free_nt;
	std::map<std::pair<const detail::Node*, std::vector<std::uint32_t>>, GSym> memo;
	std::uint32_t empty_word_nt = UINT32_MAX;

	auto fresh = [&] { return g.add_nonterminal("N" + std::to_string(g.nonterminal_count())); };

	auto lookup = [&](VarId x) -> std::uint32_t {
		if (auto it = scope.find(x); it != scope.end() && !it->second.empty()) return it->second.back();
		if (auto it = free_nt.find(x); it != free_nt.end()) return it->second;
		auto lang = env.find(x);
		if (lang == env.end()) throw std::invalid_argument("free variable without a language in the environment");
		const auto n = fresh();
		for (const auto& w : lang->second) {
			std::vector<GSym> body;
			for (char c : w) body.push_back(GSym::t(c));
			g.add_production(n, std::move(body));
		}
		free_nt.emplace(x, n);
		return n;
	};

	auto go = [&](auto&& self, const Expr& e) -> GSym {
		std::vector<std::uint32_t> context;
		for (VarId x : e.free_vars()) context.push_back(lookup(x));
		auto key = std::make_pair(e.node(), context);
		if (auto it = memo.find(key); it != memo.end()) return it->second;

		GSym out;
		switch (e.kind()) {
		case Kind::EmptySet: out = GSym::nt(fresh()); break;
		case Kind::EmptyWord:
			if (empty_word_nt == UINT32_MAX) {
				empty_word_nt = fresh();
				g.add_production(empty_word_nt, {});
			}
			out = GSym::nt(empty_word_nt);
			break;
		case Kind::Sym: out = GSym::t(e.symbol()); break;
		case Kind::Alt: {
			const auto n = fresh();
			const GSym l = self(self, e.left());
			const GSym rr = self(self, e.right());
			g.add_production(n, {l});
			g.add_production(n, {rr});
			out = GSym::nt(n);
			break;
		}
		case Kind::Cat: {
			const auto n = fresh();
			const GSym l = self(self, e.left());
			const GSym rr = self(self, e.right());
			g.add_production(n, {l, rr});
			out = GSym::nt(n);
			break;
		}
		case Kind::Star: {
			const auto n = fresh();
			const GSym b = self(self, e.body());
			g.add_production(n, {});
			g.add_production(n, {b, GSym::nt(n)});
			out = GSym::nt(n);
			break;
		}
		case Kind::Var: out = GSym::nt(lookup(e.var())); break;
		case Kind::Mu: {
			const auto n = fresh();
			scope[e.var()].push_back(n);
			const GSym b = self(self, e.body());
			scope[e.var()].pop_back();
			g.add_production(n, {b});
			out = GSym::nt(n);
			break;
		}
		}
		memo.emplace(std::move(key), out);
		return out;
	};

	const GSym top = go(go, r);
	if (top.terminal) {
		const auto s = fresh();
		g.add_production(s, {top});
		g.set_start(s);
	} else {
		g.set_start(top.nonterminal);
	}
	return g;
}

inline bool member(const Expr& r, std::string_view w) { return recognize(mu_to_grammar(r), w); }

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr std::size_t kEnumerateCap = 10;

inline bool shortlex_less(const std::string& a, const std::string& b) {
	return a.size() != b.size() ? a.size() < b.size() : a < b;
}

/// Exactly the words of a language up to a length bound, in shortlex order.
struct WordSet {
	std::vector<std::string> words;
	std::size_t max_len = 0;

	bool contains(const std::string& w) const {
		return std::binary_search(words.begin(), words.end(), w, shortlex_less);
	}
	std::size_t size() const { return words.size(); }
	friend bool operator==(const WordSet&, const WordSet&) = default;
};

inline std::string display_word(std::string_view w) { return w.empty() ? "ε" : std::string(w); }

/// Every word over `letters` of length at most max_len, in shortlex order.
inline std::vector<std::string> all_words(std::string_view letters, std::size_t max_len) {
	std::vector<std::string> out{""};
	for (std::size_t begin = 0, len = 0; len < max_len; ++len) {
		const std::size_t end = out.size();
		for (std::size_t i = begin; i < end; ++i)
			for (char a : letters) out.push_back(out[i] + a);
		begin = end;
	}
	return out;
}

/// Enumerates L(g) over `letters` up to max_len, pruning dead prefixes.
inline WordSet enumerate(const Grammar& g, std::string_view letters, std::size_t max_len,
                         std::size_t cap = kEnumerateCap) {
	if (max_len > cap) throw std::length_error("enumeration bound exceeds cap " + std::to_string(cap));
	Recognizer rec(g);
	WordSet out;
	out.max_len = max_len;
	std::string w;
	auto dfs = [&](auto&& self) -> void {
		if (rec.accepts()) out.words.push_back(w);
		if (w.size() == max_len) return;
		for (char a : letters) {
			rec.push(a);
			if (!rec.dead()) {
				w.push_back(a);
				self(self);
				w.pop_back();
			}
			rec.pop();
		}
	};
	dfs(dfs);
	std::sort(out.words.begin(), out.words.end(), shortlex_less);
	return out;
}

/// L(r) ∩ Σ(r)^{≤max_len}.
inline WordSet enumerate(const Expr& r, std::size_t max_len, std::size_t cap = kEnumerateCap) {
	return enumerate(mu_to_grammar(r), alphabet(r), max_len, cap);
}

/// Words of r up to max_len when its free variables denote the finite languages in env.
inline WordSet enumerate(const Expr& r, const LangEnv& env, std::size_t max_len, std::size_t cap = kEnumerateCap) {
	std::string letters = alphabet(r);
	for (const auto& [x, lang] : env)
		for (const auto& w : lang) letters += w;
	std::sort(letters.begin(), letters.end());
	letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
	return enumerate(mu_to_grammar(r, env), letters, max_len, cap);
}

// ---------------------------------------------------------------------------
// Inductive membership rules

inline constexpr std::size_t kRuleWordCap = 6;

/// Evaluates the judgment σ ⊢ w ∈ r and its stack form as the least fixed
/// point over all judgments reachable from the goals. Judgments are keyed
/// on (node, span, σ restricted to what the node can reach).
class RuleProver {
public:
	explicit RuleProver(std::string_view w, std::size_t cap = kRuleWordCap) : w_(w) {
		if (w.size() > cap) throw std::length_error("word longer than the rule prover cap " + std::to_string(cap));
	}

	/// Registers σ ⊢ w[i,j) ∈ r and returns its handle.
	std::size_t goal(const Expr& r, const Subst& sigma, std::size_t i, std::size_t j) {
		Env env;
		for (const auto& [x, image] : sigma) env.emplace_back(x, image.node());
		for (VarId y : r.free_vars())
			if (!sigma.count(y)) throw std::invalid_argument("free variable outside the substitution domain");
		solved_ = false;
		return judgment(r.node(), env, i, j);
	}

	bool holds(std::size_t handle) {
		solve();
		return value_[handle];
	}

	bool member(const Expr& r, const Subst& sigma = {}) {
		const auto h = goal(r, sigma, 0, w_.size());
		return holds(h);
	}

	/// ∅ ⊢ w ∈ [r1, ..., rn] for closed r1..rn.
	bool stack_member(const std::vector<Expr>& stack) {
		const std::size_t n = w_.size();
		const std::size_t k = stack.size();
		std::vector<std::vector<std::vector<std::size_t>>> handles(k);
		for (std::size_t s = 0; s < k; ++s) {
			handles[s].assign(n + 1, std::vector<std::size_t>(n + 1, SIZE_MAX));
			for (std::size_t i = 0; i <= n; ++i)
				for (std::size_t j = i; j <= n; ++j) handles[s][i][j] = goal(stack[s], {}, i, j);
		}
		solve();
		// reach[i]: the first s stack entries can consume w[0,i).
		std::vector<bool> reach(n + 1, false);
		reach[0] = true;
		for (std::size_t s = 0; s < k; ++s) {
			std::vector<bool> next(n + 1, false);
			for (std::size_t i = 0; i <= n; ++i) {
				if (!reach[i]) continue;
				for (std::size_t j = i; j <= n; ++j)
					if (value_[handles[s][i][j]]) next[j] = true;
			}
			reach = std::move(next);
		}
		return reach[n];
	}

	std::size_t judgment_count() const { return rules_.size(); }

private:
	using Env = std::vector<std::pair<VarId, const detail::Node*>>;  // sorted by variable

	static const detail::Node* lookup(const Env& env, VarId x) {
		auto it = std::lower_bound(env.begin(), env.end(), x, [](const auto& p, VarId v) { return p.first < v; });
		return it != env.end() && it->first == x ? it->second : nullptr;
	}

	// Restricts env to the variables reachable from n through env's images.
	static Env restrict(const Env& env, const detail::Node* n) {
		std::set<VarId> need(n->free_vars.begin(), n->free_vars.end());
		std::vector<VarId> todo(need.begin(), need.end());
		while (!todo.empty()) {
			const VarId x = todo.back();
			todo.pop_back();
			if (const auto* image = lookup(env, x))
				for (VarId y : image->free_vars)
					if (need.insert(y).second) todo.push_back(y);
		}
		Env out;
		for (VarId x : need)
			if (const auto* image = lookup(env, x)) out.emplace_back(x, image);
		return out;
	}

	static Env extend(Env env, VarId x, const detail::Node* image) {
		auto it = std::lower_bound(env.begin(), env.end(), x, [](const auto& p, VarId v) { return p.first < v; });
		if (it != env.end() && it->first == x) it->second = image;
		else env.insert(it, {x, image});
		return env;
	}

	std::uint32_t env_id(const Env& env) {
		auto [it, inserted] = env_ids_.try_emplace(env, static_cast<std::uint32_t>(env_ids_.size()));
		return it->second;
	}

	struct KeyHash {
		std::size_t operator()(const std::tuple<const detail::Node*, std::uint32_t, std::size_t, std::size_t>& k) const {
			auto [n, e, i, j] = k;
			return detail::mix(detail::mix(detail::mix(std::hash<const void*>{}(n), e), i), j);
		}
	};

	std::size_t judgment(const detail::Node* n, const Env& full_env, std::size_t i, std::size_t j) {
		const Env env = restrict(full_env, n);
		const auto key = std::make_tuple(n, env_id(env), i, j);
		if (auto it = index_.find(key); it != index_.end()) return it->second;
		const std::size_t id = rules_.size();
		index_.emplace(key, id);
		rules_.emplace_back();
		value_.push_back(false);

		std::vector<std::vector<std::size_t>> alts;
		const Expr e(n);
		switch (e.kind()) {
		case Kind::EmptySet: break;
		case Kind::EmptyWord:
			if (i == j) alts.push_back({});
			break;
		case Kind::Sym:
			if (j == i + 1 && w_[i] == e.symbol()) alts.push_back({});
			break;
		case Kind::Alt:
			alts.push_back({judgment(e.left().node(), env, i, j)});
			alts.push_back({judgment(e.right().node(), env, i, j)});
			break;
		case Kind::Cat:
			for (std::size_t k = i; k <= j; ++k)
				alts.push_back({judgment(e.left().node(), env, i, k), judgment(e.right().node(), env, k, j)});
			break;
		case Kind::Star:
			if (i == j) alts.push_back({});
			for (std::size_t k = i; k <= j; ++k)
				alts.push_back({judgment(e.body().node(), env, i, k), judgment(n, env, k, j)});
			break;
		case Kind::Mu: alts.push_back({judgment(e.body().node(), extend(env, e.var(), n), i, j)}); break;
		case Kind::Var: {
			// σ[μx.r/x] ⊢ w ∈ x  from  σ ⊢ w ∈ μx.r
			const auto* image = lookup(env, e.var());
			if (image && image->kind == Kind::Mu && image->var == e.var()) alts.push_back({judgment(image, env, i, j)});
			break;
		}
		}
		rules_[id] = std::move(alts);
		return id;
	}

	void solve() {
		if (solved_) return;
		for (bool changed = true; changed;) {
			changed = false;
			for (std::size_t id = 0; id < rules_.size(); ++id) {
				if (value_[id]) continue;
				for (const auto& premises : rules_[id]) {
					if (std::all_of(premises.begin(), premises.end(), [&](std::size_t p) { return value_[p]; })) {
						value_[id] = changed = true;
						break;
					}
				}
			}
		}
		solved_ = true;
	}

	std::string w_;
	std::vector<std::vector<std::vector<std::size_t>>> rules_;
	std::vector<bool> value_;
	std::map<Env, std::uint32_t> env_ids_;
	std::unordered_map<std::tuple<const detail::Node*, std::uint32_t, std::size_t, std::size_t>, std::size_t, KeyHash> index_;
	bool solved_ = false;
};

/// σ ⊢ w ∈ r by the inductive membership rules.
inline bool check_membership_rules(const Expr& r, std::string_view w, const Subst& sigma = {},
                                   std::size_t cap = kRuleWordCap) {
	return RuleProver(w, cap).member(r, sigma);
}

/// ∅ ⊢ w ∈ [r1, ..., rn].
inline bool check_stack_membership(const std::vector<Expr>& stack, std::string_view w, std::size_t cap = kRuleWordCap) {
	return RuleProver(w, cap).stack_member(stack);
}

} // namespace mure
