#include <gtest/gtest.h>

#include "support.hpp"

using namespace mure;

namespace {

bool is_anbn(const std::string& w) {
	const std::size_t n = w.size() / 2;
	return w.size() % 2 == 0 && w == std::string(n, 'a') + std::string(n, 'b');
}

bool is_dyck(const std::string& w) {
	int depth = 0;
	for (char c : w) {
		depth += c == 'a' ? 1 : -1;
		if (depth < 0) return false;
	}
	return depth == 0;
}

bool is_odd_palindrome(const std::string& w) { return w.size() % 2 == 1 && std::equal(w.begin(), w.end(), w.rbegin()); }

} // namespace

TEST(Grammar, TextRoundTrip) {
	const Grammar g = mu_to_grammar(parse_closed("mu X. 1 + a X b"));
	const std::string text = to_string(g);
	EXPECT_EQ(to_string(parse_grammar(text)), text);
	const Grammar h = parse_grammar("# comment\nS -> a S b\nS -> %eps\n");
	EXPECT_EQ(h.name(h.start()), "S");
	EXPECT_TRUE(recognize(h, "aabb"));
	EXPECT_FALSE(recognize(h, "abab"));
	EXPECT_THROW(parse_grammar("S = a"), ParseError);
	EXPECT_THROW(parse_grammar(""), ParseError);
	EXPECT_THROW(parse_grammar("a -> S"), ParseError);
}

TEST(MuToGrammar, Shapes) {
	const Grammar single = mu_to_grammar(sym('a'));
	ASSERT_EQ(single.productions().size(), 1u);
	EXPECT_EQ(single.productions()[0].head, single.start());
	EXPECT_EQ(single.productions()[0].body, std::vector<GSym>{GSym::t('a')});

	const Grammar star_g = mu_to_grammar(parse_closed("a*"));
	EXPECT_EQ(star_g.productions().size(), 2u);
	EXPECT_TRUE(recognize(star_g, "aaa"));

	// One nonterminal for the binder: X -> ε | a X b, linear size.
	const Expr t = parse_closed("mu X. 1 + a X b");
	const Grammar g = mu_to_grammar(t);
	EXPECT_LE(g.productions().size(), 2 * t.size());
	for (const auto& w : all_words("ab", 8)) EXPECT_EQ(recognize(g, w), is_anbn(w)) << w;
}

TEST(Recognize, Basics) {
	const Grammar g = parse_grammar("S -> a S b\nS -> %eps\n");
	EXPECT_TRUE(recognize(g, "aabb"));
	EXPECT_FALSE(recognize(g, "aab"));
	EXPECT_TRUE(recognize(g, ""));
	const Grammar none = parse_grammar("S -> a S\n");
	EXPECT_FALSE(recognize(none, ""));
	EXPECT_FALSE(recognize(none, "aaa"));
}

TEST(Recognize, LeftRecursionAndNullableChains) {
	const Grammar g = parse_grammar("S -> S S\nS -> A\nA -> %eps\nA -> a\nS -> S b\n");
	for (const auto& w : all_words("ab", 6)) EXPECT_TRUE(recognize(g, w)) << w;
	const Grammar h = parse_grammar("S -> A A b\nA -> B\nB -> %eps\nB -> a\n");
	EXPECT_TRUE(recognize(h, "b"));
	EXPECT_TRUE(recognize(h, "ab"));
	EXPECT_TRUE(recognize(h, "aab"));
	EXPECT_FALSE(recognize(h, "aaab"));
}

TEST(Recognize, IncrementalPushPop) {
	Recognizer rec(parse_grammar("S -> a S b\nS -> %eps\n"));
	EXPECT_TRUE(rec.accepts());
	rec.push('a');
	EXPECT_FALSE(rec.accepts());
	rec.push('b');
	EXPECT_TRUE(rec.accepts());
	rec.pop();
	rec.push('a');
	EXPECT_FALSE(rec.dead());
	rec.push('c');
	EXPECT_TRUE(rec.dead());
}

TEST(Member, Examples) {
	EXPECT_TRUE(member(parse_closed("mu X. 1 + X a"), "aaa"));
	EXPECT_FALSE(member(empty_set(), ""));
	const Expr pal = parse_closed("mu X. a + a X a + b X b + b");
	EXPECT_FALSE(member(pal, "abba"));
	EXPECT_TRUE(member(pal, "abbba"));
}

TEST(Member, KnownLanguages) {
	const Expr anbn = parse_closed("mu X. 1 + a X b");
	const Expr dyck = parse_closed("mu X. 1 + a X b X");
	const Expr pal = parse_closed("mu X. a + a X a + b X b + b");
	const Expr empty = parse_closed("mu X. X");
	const Expr eps = parse_closed("mu X. 1");
	const Expr left = parse_closed("mu X. 1 + X a");
	const Expr right = parse_closed("mu X. 1 + a X");
	for (const auto& w : all_words("ab", 8)) {
		EXPECT_EQ(member(anbn, w), is_anbn(w)) << w;
		EXPECT_EQ(member(dyck, w), is_dyck(w)) << w;
		EXPECT_EQ(member(pal, w), is_odd_palindrome(w)) << w;
		EXPECT_FALSE(member(empty, w));
		EXPECT_EQ(member(eps, w), w.empty());
	}
	for (const auto& w : all_words("a", 8)) {
		EXPECT_TRUE(member(left, w));
		EXPECT_TRUE(member(right, w));
	}
}

TEST(Member, MatchesLanguageSemantics) {
	fixtures::RandomExpr gen(51);
	for (int i = 0; i < 300; ++i) {
		const Expr r = gen.closed(12, 2);
		const auto lang = fixtures::bounded_language(r, 5);
		for (const auto& w : all_words("ab", 5)) EXPECT_EQ(member(r, w), lang.count(w) == 1) << to_string(r) << " " << w;
	}
	for (const auto& t : fixtures::corpus()) {
		const auto lang = fixtures::bounded_language(t, 6);
		for (const auto& w : all_words(alphabet(t), 6)) EXPECT_EQ(member(t, w), lang.count(w) == 1) << to_string(t) << " " << w;
	}
}

TEST(Member, OpenExpressionUnderLanguageEnvironment) {
	const Expr r = parse("a X b");
	const VarId x = r.left().right().var();
	const Grammar g = mu_to_grammar(r, {{x, {"", "c"}}});
	EXPECT_TRUE(recognize(g, "ab"));
	EXPECT_TRUE(recognize(g, "acb"));
	EXPECT_FALSE(recognize(g, "accb"));
}

TEST(Enumerate, Examples) {
	EXPECT_EQ(enumerate(parse_closed("a*"), 3).words, (std::vector<std::string>{"", "a", "aa", "aaa"}));
	EXPECT_EQ(enumerate(parse_closed("mu X. 1 + a X b"), 6).words, (std::vector<std::string>{"", "ab", "aabb", "aaabbb"}));
	EXPECT_TRUE(enumerate(empty_set(), 5).words.empty());
	EXPECT_THROW(enumerate(parse_closed("a*"), 11), std::length_error);
}

TEST(Enumerate, AgreesWithMember) {
	for (const auto& t : fixtures::corpus()) {
		const WordSet ws = enumerate(t, 5);
		for (const auto& w : all_words(alphabet(t), 5)) EXPECT_EQ(ws.contains(w), member(t, w)) << to_string(t) << " " << w;
	}
}

TEST(Enumerate, MonotoneInEnvironment) {
	const Expr r = parse("mu Y. 1 + X Y a + b");
	const VarId x = *free_vars(r).begin();
	const std::vector<std::pair<std::set<std::string>, std::set<std::string>>> pairs{
	    {{}, {"a"}}, {{"a"}, {"a", "bb"}}, {{""}, {"", "b"}}, {{"ab"}, {"ab", "", "a"}}};
	for (const auto& [small, big] : pairs) {
		const WordSet lo = enumerate(r, {{x, small}}, 5);
		const WordSet hi = enumerate(r, {{x, big}}, 5);
		for (const auto& w : lo.words) EXPECT_TRUE(hi.contains(w)) << w;
	}
}

TEST(RuleProver, Examples) {
	EXPECT_TRUE(check_membership_rules(empty_word(), ""));
	EXPECT_TRUE(check_membership_rules(parse_closed("mu X. 1 + X a"), "a"));
	EXPECT_FALSE(check_membership_rules(sym('a'), "b"));
	EXPECT_THROW(check_membership_rules(sym('a'), "aaaaaaa"), std::length_error);
}

TEST(RuleProver, OpenExpressionUsesSubstitution) {
	const Expr t = parse_closed("mu X. 1 + X a");
	const Expr open = cat(var(t.var(), "X"), sym('a'));
	EXPECT_TRUE(check_membership_rules(open, "aa", {{t.var(), t}}));
	EXPECT_FALSE(check_membership_rules(open, "", {{t.var(), t}}));
	EXPECT_THROW(check_membership_rules(open, "a"), std::invalid_argument);
}

TEST(RuleProver, AgreesWithMemberOnCorpus) {
	for (const auto& t : fixtures::corpus()) {
		for (const auto& w : all_words(alphabet(t), 5)) EXPECT_EQ(check_membership_rules(t, w), member(t, w)) << to_string(t) << " " << w;
	}
}

TEST(RuleProver, StackMembership) {
	const Expr t = parse_closed("mu X. 1 + X a");
	const std::vector<Expr> stack{cat(t, sym('a')), empty_word()};
	for (const auto& w : all_words("a", 5)) EXPECT_EQ(check_stack_membership(stack, w), !w.empty()) << w;
	EXPECT_TRUE(check_stack_membership({sym('a'), sym('b')}, "ab"));
	EXPECT_FALSE(check_stack_membership({sym('a'), sym('b')}, "ba"));
}

TEST(Words, ShortlexAndDisplay) {
	EXPECT_EQ(all_words("ab", 2), (std::vector<std::string>{"", "a", "b", "aa", "ab", "ba", "bb"}));
	EXPECT_EQ(display_word(""), "ε");
	EXPECT_TRUE(shortlex_less("b", "aa"));
}
