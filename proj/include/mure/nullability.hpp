#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "mure/syntax.hpp"

namespace mure {

/// Nullability assumption for each free variable.
using NullEnv = std::map<VarId, bool>;

class UnboundVariable : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// Decides whether r accepts the empty word under nu. The fixed point of a
/// binder is reached after one step on the two-point lattice, so mu x.r is
/// evaluated as the body with x assumed non-nullable.
inline bool null(const Expr& r, const NullEnv& nu) {
	switch (r.kind()) {
	case Kind::EmptySet: return false;
	case Kind::EmptyWord: return true;
	case Kind::Sym: return false;
	case Kind::Alt: return null(r.left(), nu) || null(r.right(), nu);
	case Kind::Cat: return null(r.left(), nu) && null(r.right(), nu);
	case Kind::Star: return true;
	case Kind::Var: {
		auto it = nu.find(r.var());
		if (it == nu.end()) throw UnboundVariable("no nullability for variable " + r.name());
		return it->second;
	}
	case Kind::Mu: {
		NullEnv inner = nu;
		inner[r.var()] = false;
		return null(r.body(), inner);
	}
	}
	return false;
}

inline bool null(const Expr& r) { return null(r, NullEnv{}); }

/// nu agrees with eta when each variable is nullable exactly if eta's language contains the empty word.
inline bool agrees(const NullEnv& nu, const LangEnv& eta) {
	if (nu.size() != eta.size()) throw std::invalid_argument("environment domains differ");
	for (const auto& [x, nullable] : nu) {
		auto it = eta.find(x);
		if (it == eta.end()) throw std::invalid_argument("environment domains differ");
		if (it->second.count(std::string{}) != static_cast<std::size_t>(nullable)) return false;
	}
	return true;
}

} // namespace mure
