#include <gtest/gtest.h>

#include "support.hpp"

using namespace mure;

namespace {

const Expr one = empty_word();
const Expr a = sym('a');
const Expr r_left = parse_closed("mu X. 1 + X a");

GammaIndex index_of(const Pda& p, const Expr& e) {
	const auto& g = p.gamma();
	const auto it = std::find(g.begin(), g.end(), e);
	if (it == g.end()) throw std::logic_error("not in gamma: " + to_string(e));
	return static_cast<GammaIndex>(it - g.begin());
}

bool has_transition(const Pda& p, std::optional<char> input, const Expr& pop, const std::vector<Expr>& push) {
	std::vector<GammaIndex> ids;
	for (const auto& e : push) ids.push_back(index_of(p, e));
	const GammaIndex from = index_of(p, pop);
	return std::any_of(p.delta().begin(), p.delta().end(),
	                   [&](const Transition& t) { return t.input == input && t.pop == from && t.push == ids; });
}

} // namespace

TEST(BuildPda, SingleSymbol) {
	const Pda p = build_pda(a);
	EXPECT_EQ(p.gamma().size(), 2u);
	EXPECT_EQ(p.gamma()[p.z0()], cat(one, a));
	EXPECT_EQ(p.delta().size(), 2u);
	EXPECT_TRUE(has_transition(p, 'a', cat(one, a), {one}));
	EXPECT_TRUE(has_transition(p, std::nullopt, one, {}));
	EXPECT_FALSE(has_transition(p, std::nullopt, cat(one, a), {}));
}

TEST(BuildPda, LeftRecursiveStar) {
	const Pda p = build_pda(r_left);
	EXPECT_EQ(p.gamma().size(), 4u);
	EXPECT_TRUE(has_transition(p, std::nullopt, cat(one, r_left), {cat(r_left, a), one}));
	EXPECT_TRUE(has_transition(p, 'a', cat(r_left, a), {one, cat(one, a)}));
	EXPECT_TRUE(has_transition(p, 'a', cat(r_left, a), {one}));
	EXPECT_TRUE(has_transition(p, std::nullopt, cat(r_left, a), {cat(r_left, a), cat(one, a)}));
	EXPECT_TRUE(has_transition(p, 'a', cat(one, r_left), {one, one}));
}

TEST(BuildPda, EmptyLanguage) {
	const Pda p = build_pda(empty_set());
	EXPECT_EQ(p.gamma(), std::vector<Expr>{cat(one, empty_set())});
	EXPECT_TRUE(p.delta().empty());
	for (const auto& w : all_words("a", 3)) EXPECT_FALSE(accepts(p, w));
}

TEST(BuildPda, PopsExactlyForNullableSymbols) {
	for (const auto& t : fixtures::corpus()) {
		const Pda p = build_pda(t);
		for (GammaIndex s = 0; s < p.gamma().size(); ++s) {
			const auto out = p.from(s);
			const bool pops = std::any_of(out.begin(), out.end(), [](const Transition* tr) { return tr->push.empty(); });
			EXPECT_EQ(pops, null(p.gamma()[s])) << to_string(p.gamma()[s]);
		}
	}
}

TEST(Step, Examples) {
	const Pda p = build_pda(a);
	const GammaIndex z0 = p.z0();
	const GammaIndex unit = index_of(p, one);
	EXPECT_TRUE(step(p, Config{{z0}, "b"}).empty());
	EXPECT_EQ(step(p, Config{{z0}, "a"}), (std::vector<Config>{Config{{unit}, ""}}));
	EXPECT_EQ(step(p, Config{{unit}, "ab"}), (std::vector<Config>{Config{{}, "ab"}}));
	EXPECT_TRUE(step(p, Config{{}, ""}).empty());
	EXPECT_EQ(to_string(p, Config{{z0}, ""}), "[1·a] ⊢ ε");
}

TEST(AcceptsBfs, Examples) {
	EXPECT_EQ(accepts_bfs(build_pda(a), "a", 100), Verdict::Accept);
	EXPECT_EQ(accepts_bfs(build_pda(a), "b", 100), Verdict::Reject);
	EXPECT_EQ(accepts_bfs(build_pda(r_left), "aa", 10000), Verdict::Accept);
	EXPECT_EQ(accepts_bfs(build_pda(a), "a", 0), Verdict::Unknown);
}

TEST(AcceptsBfs, UnknownOnlyFromCutoff) {
	// Left recursion grows the stack without bound on a rejected word.
	const Pda p = build_pda(parse_closed("mu X. b + X a"));
	EXPECT_EQ(accepts_bfs(p, "ab", 50), Verdict::Unknown);
	EXPECT_FALSE(accepts(p, "ab"));
}

TEST(AcceptsBfs, NeverContradictsAccepts) {
	for (const auto& t : fixtures::corpus()) {
		const Pda p = build_pda(t);
		for (const auto& w : all_words(alphabet(t), 4)) {
			const Verdict v = accepts_bfs(p, w, 200);
			EXPECT_TRUE(v == Verdict::Unknown || (v == Verdict::Accept) == accepts(p, w)) << to_string(t) << " " << w;
		}
	}
}

TEST(Search, RunIsAValidDerivation) {
	const Pda p = build_pda(parse_closed("mu X. 1 + a X b X"));
	const SearchResult r = search(p, "aabbab", 1000);
	ASSERT_EQ(r.verdict, Verdict::Accept);
	ASSERT_FALSE(r.run.empty());
	EXPECT_EQ(r.run.front(), (Config{{p.z0()}, "aabbab"}));
	EXPECT_TRUE(r.run.back().accepting());
	for (std::size_t i = 0; i + 1 < r.run.size(); ++i) {
		const auto next = step(p, r.run[i]);
		EXPECT_TRUE(std::find(next.begin(), next.end(), r.run[i + 1]) != next.end());
	}
}

TEST(PdaToGrammar, Examples) {
	const Pda p = build_pda(a);
	const Grammar g = pda_to_grammar(p);
	EXPECT_EQ(g.start(), p.z0());
	EXPECT_EQ(g.productions().size(), 2u);
	const GammaIndex unit = index_of(p, one);
	bool read = false, pop = false;
	for (const auto& prod : g.productions()) {
		if (prod.head == p.z0()) read = prod.body == std::vector<GSym>{GSym::t('a'), GSym::nt(unit)};
		if (prod.head == unit) pop = prod.body.empty();
	}
	EXPECT_TRUE(read);
	EXPECT_TRUE(pop);

	const Grammar none = pda_to_grammar(build_pda(empty_set()));
	EXPECT_EQ(none.nonterminal_count(), 1u);
	EXPECT_TRUE(none.productions().empty());

	const Grammar left = pda_to_grammar(build_pda(r_left));
	for (const auto& w : all_words("ab", 6)) EXPECT_EQ(recognize(left, w), w.find('b') == std::string::npos) << w;
}

TEST(Accepts, Examples) {
	const Pda anbn = build_pda(parse_closed("mu X. 1 + a X b"));
	EXPECT_TRUE(accepts(anbn, "aabb"));
	EXPECT_FALSE(accepts(anbn, "abb"));
	EXPECT_TRUE(accepts(build_pda(one), ""));
}

TEST(Accepts, AgreesWithLanguageSemanticsOnRandomExpressions) {
	fixtures::RandomExpr gen(61);
	for (int i = 0; i < 300; ++i) {
		const Expr t = gen.closed(12, 2);
		const Pda p = build_pda(t);
		const auto lang = fixtures::bounded_language(t, 5);
		Recognizer rec(pda_to_grammar(p));
		for (const auto& w : all_words("ab", 5)) EXPECT_EQ(rec.recognize(w), lang.count(w) == 1) << to_string(t) << " " << w;
	}
}

TEST(Nfa, Examples) {
	const Nfa single = build_nfa(a);
	EXPECT_EQ(std::set<Expr>(single.states().begin(), single.states().end()), (std::set<Expr>{a, one}));
	EXPECT_TRUE(single.accepts("a"));
	EXPECT_FALSE(single.accepts(""));
	EXPECT_FALSE(single.accepts("aa"));

	const Expr as = parse_closed("a*");
	const Nfa star_nfa = build_nfa(as);
	EXPECT_EQ(std::set<Expr>(star_nfa.states().begin(), star_nfa.states().end()), (std::set<Expr>{as, cat(one, as)}));
	for (std::size_t q = 0; q < star_nfa.states().size(); ++q) EXPECT_TRUE(star_nfa.is_final(q));

	const Nfa ab = build_nfa(parse_closed("(ab)*"));
	EXPECT_TRUE(ab.accepts(""));
	EXPECT_TRUE(ab.accepts("ab"));
	EXPECT_TRUE(ab.accepts("abab"));
	EXPECT_FALSE(ab.accepts("a"));
	EXPECT_FALSE(ab.accepts("ba"));

	EXPECT_THROW(build_nfa(r_left), NotRegular);
}

TEST(Nfa, MatchesLanguageSemantics) {
	fixtures::RandomExpr gen(71);
	for (int i = 0; i < 300; ++i) {
		const Expr r = gen.closed(12, 0);
		const Nfa n = build_nfa(r);
		const auto lang = fixtures::bounded_language(r, 6);
		for (const auto& w : all_words("ab", 6)) EXPECT_EQ(n.accepts(w), lang.count(w) == 1) << to_string(r) << " " << w;
	}
}

TEST(Guarded, Classification) {
	EXPECT_TRUE(is_guarded(parse_closed("mu X. 1 + a X")));
	EXPECT_TRUE(is_guarded(parse_closed("mu X. 1 + a X b")));
	EXPECT_TRUE(is_guarded(parse_closed("a*")));
	EXPECT_FALSE(is_guarded(parse_closed("mu X. 1 + X a")));
	EXPECT_FALSE(is_guarded(parse_closed("mu X. X")));
	EXPECT_FALSE(is_guarded(parse_closed("mu X. (1 + a) X")));
	EXPECT_FALSE(is_guarded(parse_closed("mu X. a (mu Y. X)")));
	EXPECT_TRUE(is_guarded(parse_closed("mu X. a (mu Y. b X)")));
}

TEST(Guarded, NoEpsilonDerivativeTransitions) {
	auto check = [](const Expr& t) {
		const Pda p = build_pda(t);
		const bool any = std::any_of(p.delta().begin(), p.delta().end(), [](const Transition& tr) { return tr.from_eps_deriv; });
		EXPECT_FALSE(is_guarded(t) && any) << to_string(t);
	};
	for (const auto& t : fixtures::corpus()) check(t);
	fixtures::RandomExpr gen(81);
	for (int i = 0; i < 500; ++i) check(gen.closed(12, 2));
}

TEST(Dot, Shapes) {
	const std::string empty = to_dot(build_pda(empty_set()));
	EXPECT_NE(empty.find("g0 ["), std::string::npos);
	EXPECT_EQ(empty.find("->"), std::string::npos);

	const std::string single = to_dot(build_pda(a));
	EXPECT_NE(single.find("g1 ["), std::string::npos);
	EXPECT_EQ(single.find("g2 ["), std::string::npos);
	std::size_t edges = 0;
	for (std::size_t pos = 0; (pos = single.find(" -> g", pos)) != std::string::npos; ++pos) ++edges;
	EXPECT_EQ(edges, 1u);
	std::size_t pops = 0;
	for (std::size_t pos = 0; (pos = single.find("peripheries=2", pos)) != std::string::npos; ++pos) ++pops;
	EXPECT_EQ(pops, 1u);
	EXPECT_NE(single.find("xlabel=\"Z0\""), std::string::npos);

	EXPECT_EQ(to_dot(build_pda(r_left)), to_dot(build_pda(parse_closed("mu X. 1 + X a"))));
}
