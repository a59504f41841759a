#pragma once

// Differential checks over a corpus of expressions: the pushdown automaton
// against the grammar oracle, the NFA against the automaton on mu-free
// entries, and normal-form classification of every iterated derivative.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mure/ipd.hpp"
#include "mure/oracle.hpp"
#include "mure/pda.hpp"

namespace mure {

struct CheckLine {
	bool passed = true;
	std::string check;
	std::string expr;
	std::string detail;
};

inline std::string to_string(const CheckLine& line) {
	std::string out = (line.passed ? "PASS " : "FAIL ") + line.check + " " + line.expr;
	if (!line.detail.empty()) out += ": " + line.detail;
	return out;
}

struct CorpusEntry {
	std::size_t line = 0;
	std::string text;
};

/// One expression per line; blank lines and '#' comments are skipped.
inline std::vector<CorpusEntry> read_corpus(std::istream& in) {
	std::vector<CorpusEntry> out;
	std::string line;
	for (std::size_t n = 1; std::getline(in, line); ++n) {
		if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
		const auto first = line.find_first_not_of(" \t\r");
		if (first == std::string::npos) continue;
		const auto last = line.find_last_not_of(" \t\r");
		out.push_back({n, line.substr(first, last - first + 1)});
	}
	return out;
}

inline std::vector<CorpusEntry> read_corpus_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw std::runtime_error("cannot open " + path);
	return read_corpus(in);
}

/// Runs the battery on one closed, canonical expression.
inline std::vector<CheckLine> check_expression(const Expr& t, std::size_t max_len) {
	std::vector<CheckLine> lines;
	const std::string shown = to_string(t);
	const Pda pda = build_pda(t);
	Recognizer automaton(pda_to_grammar(pda));
	Recognizer oracle(mu_to_grammar(t));
	const auto words = all_words(alphabet(t), max_len);

	{
		CheckLine line{true, "pda-oracle", shown, std::to_string(words.size()) + " words"};
		for (const auto& w : words) {
			const bool a = automaton.recognize(w);
			const bool o = oracle.recognize(w);
			if (a != o) {
				line = {false, "pda-oracle", shown,
				        "word=" + display_word(w) + " pda=" + (a ? "true" : "false") + " oracle=" + (o ? "true" : "false")};
				break;
			}
		}
		lines.push_back(line);
	}

	if (t.mu_free()) {
		const Nfa nfa = build_nfa(t);
		CheckLine line{true, "nfa-agree", shown, std::to_string(nfa.states().size()) + " states"};
		for (const auto& w : words) {
			const bool n = nfa.accepts(w);
			const bool a = automaton.recognize(w);
			if (n != a) {
				line = {false, "nfa-agree", shown,
				        "word=" + display_word(w) + " nfa=" + (n ? "true" : "false") + " pda=" + (a ? "true" : "false")};
				break;
			}
		}
		lines.push_back(line);
	}

	{
		const Classifier classifier(t);
		CheckLine line{true, "forms", shown, "|IPD|=" + std::to_string(pda.gamma().size())};
		const std::string sigma = alphabet(t);
		for (const auto& e : pda.gamma()) {
			if (classifier.classify(e).tag == FormTag::Other) {
				line = {false, "forms", shown, "element " + to_string(e) + " is neither top nor rec"};
				break;
			}
			bool ok = true;
			for (char a : sigma)
				for (const auto& s : pderiv(Alpha::symbol(a), e))
					if (ok && !classifier.has_stack_form(s, StackForm::TopPlus)) {
						line = {false, "forms", shown, "stack " + to_string(s) + " of ∂_" + a + " is not top+"};
						ok = false;
					}
			for (const auto& s : pderiv(Alpha::epsilon(), e))
				if (ok && !classifier.has_stack_form(s, StackForm::RecTopStar)) {
					line = {false, "forms", shown, "stack " + to_string(s) + " of ∂_ε is not rec.top*"};
					ok = false;
				}
			if (!ok) break;
		}
		lines.push_back(line);
	}
	return lines;
}

/// Compares the automaton of t against an external grammar on all words up to max_len.
inline CheckLine check_against_grammar(const Expr& t, const Grammar& g, std::size_t max_len) {
	std::string letters = alphabet(t);
	for (char a : g.terminals())
		if (letters.find(a) == std::string::npos) letters.push_back(a);
	std::sort(letters.begin(), letters.end());
	Recognizer automaton(pda_to_grammar(build_pda(t)));
	Recognizer external(g);
	const auto words = all_words(letters, max_len);
	for (const auto& w : words) {
		const bool a = automaton.recognize(w);
		const bool e = external.recognize(w);
		if (a != e)
			return {false, "grammar-agree", to_string(t),
			        "word=" + display_word(w) + " pda=" + (a ? "true" : "false") + " grammar=" + (e ? "true" : "false")};
	}
	return {true, "grammar-agree", to_string(t), std::to_string(words.size()) + " words"};
}

} // namespace mure
