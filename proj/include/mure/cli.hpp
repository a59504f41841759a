#pragma once

// Command-line front end. Exit codes: 0 accept/success, 1 reject or failed
// check, 2 usage error, parse error or unknown verdict.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mure/check.hpp"
#include "mure/derivative.hpp"
#include "mure/ipd.hpp"
#include "mure/nullability.hpp"
#include "mure/oracle.hpp"
#include "mure/pda.hpp"
#include "mure/syntax.hpp"

namespace mure {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

inline std::string read_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw std::runtime_error("cannot open " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

/// Expression argument: inline text, or "@path" to read it from a file.
inline Expr load_expr(const std::string& arg) {
	const std::string text = !arg.empty() && arg[0] == '@' ? read_file(arg.substr(1)) : arg;
	return parse_closed(text);
}

inline void check_word(const std::string& w) {
	for (char c : w)
		if (c < 'a' || c > 'z') throw std::invalid_argument("words consist of lowercase symbols only");
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
	CLI::App app{"Partial derivatives and pushdown automata for mu-regular expressions", "mure"};
	app.set_version_flag("--version", kVersion);
	app.require_subcommand(1);

	std::string expr_arg, word, sym, dot_path, corpus_path, grammar_path;
	bool eps = false, stats = false;
	std::size_t budget = 1000, maxlen = 6;

	auto* null_cmd = app.add_subcommand("null", "print whether the expression accepts the empty word");
	null_cmd->add_option("expr", expr_arg, "expression or @file")->required();

	auto* deriv_cmd = app.add_subcommand("deriv", "print the partial derivative, one stack per line");
	auto* sym_opt = deriv_cmd->add_option("--sym", sym, "derive by this symbol");
	auto* eps_opt = deriv_cmd->add_flag("--eps", eps, "spontaneous derivative");
	sym_opt->excludes(eps_opt);
	deriv_cmd->add_option("expr", expr_arg, "expression or @file")->required();

	auto* ipd_cmd = app.add_subcommand("ipd", "list the iterated partial derivatives with their forms");
	ipd_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	ipd_cmd->add_flag("--stats", stats, "print the number of elements");

	auto* pda_cmd = app.add_subcommand("pda", "print the pushdown automaton");
	pda_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	pda_cmd->add_option("--dot", dot_path, "also write a Graphviz file");

	auto* nfa_cmd = app.add_subcommand("nfa", "print Antimirov's NFA of a mu-free expression");
	nfa_cmd->add_option("expr", expr_arg, "expression or @file")->required();

	auto* match_cmd = app.add_subcommand("match", "decide membership with the pushdown automaton");
	match_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	match_cmd->add_option("word", word, "input word; \"\" is the empty word")->required();

	auto* trace_cmd = app.add_subcommand("trace", "bounded configuration search, printing configurations");
	trace_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	trace_cmd->add_option("word", word, "input word")->required();
	trace_cmd->add_option("--budget", budget, "maximum growing steps per run")->capture_default_str();

	auto* enum_cmd = app.add_subcommand("enum", "list the words of the language up to a length");
	enum_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	enum_cmd->add_option("--maxlen", maxlen, "length bound")->capture_default_str();

	auto* cfg_cmd = app.add_subcommand("to-cfg", "print the structural grammar translation");
	cfg_cmd->add_option("expr", expr_arg, "expression or @file")->required();

	auto* oracle_cmd = app.add_subcommand("oracle-match", "decide membership with the grammar oracle");
	oracle_cmd->add_option("expr", expr_arg, "expression or @file")->required();
	oracle_cmd->add_option("word", word, "input word")->required();

	auto* check_cmd = app.add_subcommand("check", "run the differential battery over a corpus");
	check_cmd->add_option("corpus", corpus_path, "corpus file, one expression per line");
	check_cmd->add_option("--grammar", grammar_path, "compare --expr against this grammar file instead");
	check_cmd->add_option("--expr", expr_arg, "expression for --grammar");
	check_cmd->add_option("--maxlen", maxlen, "length bound")->capture_default_str();

	std::vector<const char*> argv{"mure"};
	for (const auto& a : args) argv.push_back(a.c_str());
	try {
		app.parse(static_cast<int>(argv.size()), argv.data());
	} catch (const CLI::CallForHelp&) {
		out << app.help();
		return 0;
	} catch (const CLI::CallForAllHelp&) {
		out << app.help("", CLI::AppFormatMode::All);
		return 0;
	} catch (const CLI::CallForVersion&) {
		out << kVersion << "\n";
		return 0;
	} catch (const CLI::ParseError& e) {
		err << "mure: " << e.what() << "\n";
		return 2;
	}

	try {
		if (null_cmd->parsed()) {
			out << (null(detail::load_expr(expr_arg)) ? "true" : "false") << "\n";
			return 0;
		}
		if (deriv_cmd->parsed()) {
			if (!eps && sym.size() != 1) throw std::invalid_argument("deriv needs --eps or --sym with one symbol");
			if (!eps) detail::check_word(sym);
			const Alpha alpha = eps ? Alpha::epsilon() : Alpha::symbol(sym[0]);
			for (const auto& s : pderiv(alpha, detail::load_expr(expr_arg))) out << to_string(s) << "\n";
			return 0;
		}
		if (ipd_cmd->parsed()) {
			const Expr t = detail::load_expr(expr_arg);
			const IpdSet set = ipd(t);
			const Classifier classifier(t);
			for (const auto& e : set.elements()) out << to_string(classifier.classify(e).tag) << " " << to_string(e) << "\n";
			if (stats) out << "size: " << set.size() << "\n";
			return 0;
		}
		if (pda_cmd->parsed()) {
			const Pda p = build_pda(detail::load_expr(expr_arg));
			out << "gamma:\n";
			for (std::size_t i = 0; i < p.gamma().size(); ++i)
				out << "  " << i << ": " << to_string(p.gamma()[i]) << (i == p.z0() ? "  (Z0)" : "") << "\n";
			out << "transitions:\n";
			for (const auto& tr : p.delta()) out << "  " << transition_label(p, tr) << "\n";
			if (!dot_path.empty()) {
				std::ofstream dot(dot_path);
				if (!dot) throw std::runtime_error("cannot write " + dot_path);
				dot << to_dot(p);
			}
			return 0;
		}
		if (nfa_cmd->parsed()) {
			const Nfa n = build_nfa(detail::load_expr(expr_arg));
			out << "states:\n";
			for (std::size_t q = 0; q < n.states().size(); ++q)
				out << "  " << q << ": " << to_string(n.states()[q]) << (q == n.start() ? "  (start)" : "")
				    << (n.is_final(q) ? "  (final)" : "") << "\n";
			out << "transitions:\n";
			for (const auto& e : n.delta()) out << "  " << e.from << " -" << e.symbol << "-> " << e.to << "\n";
			return 0;
		}
		if (match_cmd->parsed() || oracle_cmd->parsed()) {
			detail::check_word(word);
			const Expr t = detail::load_expr(expr_arg);
			const bool yes = match_cmd->parsed() ? accepts(build_pda(t), word) : member(t, word);
			out << (yes ? "accept" : "reject") << "\n";
			return yes ? 0 : 1;
		}
		if (trace_cmd->parsed()) {
			detail::check_word(word);
			const Pda p = build_pda(detail::load_expr(expr_arg));
			const SearchResult r = search(p, word, budget);
			for (const auto& c : r.verdict == Verdict::Accept ? r.run : r.explored) out << to_string(p, c) << "\n";
			out << to_string(r.verdict) << "\n";
			return r.verdict == Verdict::Accept ? 0 : r.verdict == Verdict::Reject ? 1 : 2;
		}
		if (enum_cmd->parsed()) {
			for (const auto& w : enumerate(detail::load_expr(expr_arg), maxlen).words) out << display_word(w) << "\n";
			return 0;
		}
		if (cfg_cmd->parsed()) {
			out << to_string(mu_to_grammar(detail::load_expr(expr_arg)));
			return 0;
		}
		if (check_cmd->parsed()) {
			if (!grammar_path.empty()) {
				if (expr_arg.empty()) throw std::invalid_argument("check --grammar needs --expr");
				const Grammar g = parse_grammar(detail::read_file(grammar_path));
				const CheckLine line = check_against_grammar(detail::load_expr(expr_arg), g, maxlen);
				out << to_string(line) << "\n" << "1 checked, " << (line.passed ? 0 : 1) << " failed\n";
				return line.passed ? 0 : 1;
			}
			if (corpus_path.empty()) throw std::invalid_argument("check needs a corpus file");
			const auto entries = read_corpus_file(corpus_path);
			std::vector<Expr> exprs;
			for (const auto& entry : entries) {
				try {
					exprs.push_back(parse_closed(entry.text));
				} catch (const ParseError& e) {
					err << corpus_path << ":" << entry.line << ": " << e.what() << ": " << entry.text << "\n";
					return 2;
				}
			}
			std::size_t failed = 0;
			for (const auto& t : exprs) {
				bool ok = true;
				for (const auto& line : check_expression(t, maxlen)) {
					out << to_string(line) << "\n";
					ok = ok && line.passed;
				}
				failed += ok ? 0 : 1;
			}
			out << exprs.size() << " checked, " << failed << " failed\n";
			return failed == 0 ? 0 : 1;
		}
	} catch (const ParseError& e) {
		err << "mure: parse error at " << e.what() << "\n";
		return 2;
	} catch (const std::exception& e) {
		err << "mure: " << e.what() << "\n";
		return 2;
	}
	return 2;
}

} // namespace mure
