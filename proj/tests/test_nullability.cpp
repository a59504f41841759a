#include <gtest/gtest.h>

#include "support.hpp"

using namespace mure;

TEST(Null, Examples) {
	EXPECT_TRUE(null(parse_closed("mu X. 1 + X a")));
	EXPECT_FALSE(null(parse_closed("mu X. X")));
	EXPECT_FALSE(null(parse_closed("(mu X. a X b) c")));
	EXPECT_TRUE(null(parse_closed("1")));
	EXPECT_FALSE(null(parse_closed("0")));
	EXPECT_TRUE(null(parse_closed("a*")));
	EXPECT_TRUE(null(parse_closed("a + 1")));
	EXPECT_FALSE(null(parse_closed("a 1")));
}

TEST(Null, Environment) {
	const Expr x = var(0, "X");
	EXPECT_TRUE(null(x, {{0, true}}));
	EXPECT_FALSE(null(x, {{0, false}}));
	EXPECT_THROW(null(x, {}), UnboundVariable);
	// The binder shadows the outer value.
	EXPECT_FALSE(null(mu(0, "X", x), {{0, true}}));
}

TEST(Null, OneStepIsLeastFixpoint) {
	fixtures::RandomExpr gen(3);
	for (int i = 0; i < 300; ++i) {
		const Expr body = gen(10, 2, {"X"});
		if (!body.has_free(0)) continue;
		NullEnv nu{{0, false}};
		const bool b0 = null(body, nu);
		nu[0] = b0;
		EXPECT_EQ(null(body, nu), b0) << to_string(body);
	}
}

TEST(Null, Monotone) {
	fixtures::RandomExpr gen(5);
	for (int i = 0; i < 300; ++i) {
		const Expr r = gen(10, 2, {"X"});
		if (!r.has_free(0)) continue;
		EXPECT_LE(null(r, {{0, false}}), null(r, {{0, true}})) << to_string(r);
	}
}

TEST(Null, AgreesWithOracleOnCorpus) {
	for (const auto& t : fixtures::corpus()) EXPECT_EQ(null(t), member(t, "")) << to_string(t);
}

TEST(Agrees, Examples) {
	EXPECT_TRUE(agrees({}, {}));
	EXPECT_TRUE(agrees({{0, true}}, {{0, {"", "a"}}}));
	EXPECT_FALSE(agrees({{0, false}}, {{0, {""}}}));
	EXPECT_FALSE(agrees({{0, true}}, {{0, {"a"}}}));
	EXPECT_THROW(agrees({{0, true}}, {{1, {"a"}}}), std::invalid_argument);
	EXPECT_THROW(agrees({{0, true}}, {}), std::invalid_argument);
}
