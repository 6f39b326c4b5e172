#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "folp/bench.hpp"
#include "folp/cli.hpp"

using namespace folp;
using nlohmann::json;

namespace {

struct Run {
	int code;
	std::string out, err;
};

Run invoke(std::vector<std::string> args) {
	std::ostringstream out, err;
	const int code = folp::cli::run(args, out, err);
	return {code, out.str(), err.str()};
}

std::string prog(const char* name) { return testing::data_path(std::string("programs/") + name + ".folp"); }

std::vector<json> lines(const std::string& s) {
	std::vector<json> out;
	std::istringstream in(s);
	for (std::string l; std::getline(in, l);) {
		if (!l.empty()) out.push_back(json::parse(l));
	}
	return out;
}

std::filesystem::path temp_dir(const std::string& name) {
	auto d = std::filesystem::temp_directory_path() / ("folp-test-" + name);
	std::filesystem::remove_all(d);
	std::filesystem::create_directories(d);
	return d;
}

}  // namespace

TEST_CASE("check exit codes") {
	CHECK(invoke({"check", prog("organization"), "--pred", "smember", "--alg", "both", "--auto-cache"}).code == cli::kSat);
	CHECK(invoke({"check", prog("support_chain"), "--pred", "smember"}).code == cli::kUnsat);
	CHECK(invoke({"check", prog("support_chain"), "--pred", "smember", "--max-depth", "2"}).code == cli::kUnknown);
	CHECK(invoke({"check", "/nonexistent.folp", "--pred", "p"}).code > 2);
	CHECK(invoke({"check", prog("organization")}).code == cli::kInputError);
	CHECK(invoke({"check", prog("organization"), "--pred", "smember", "--alg", "a2"}).code == cli::kInputError);
	CHECK(invoke({"check", prog("organization"), "--pred", "smember", "--alg", "a3"}).code == cli::kInputError);
	CHECK(invoke({"frobnicate"}).code == cli::kInputError);
	CHECK(invoke({"check", prog("organization"), "--pred", "smember", "--max-steps", "3"}).code == cli::kBudget);
}

TEST_CASE("invalid programs are reported") {
	const auto d = temp_dir("invalid");
	std::ofstream(d / "bad.folp") << "p(X) :- not f(X,Y).\n";
	const auto r = invoke({"check", (d / "bad.folp").string(), "--pred", "p"});
	CHECK(r.code == cli::kInputError);
	CHECK(r.err.find("gamma+") != std::string::npos);
	std::ofstream(d / "syntax.folp") << "p(X) :- q(X";
	CHECK(invoke({"check", (d / "syntax.folp").string(), "--pred", "p"}).code == cli::kInputError);
}

TEST_CASE("machine output has sorted keys and is deterministic") {
	const std::vector<std::string> args{"check", prog("support_chain"), "--pred", "smember", "--alg", "both",
	                                    "--auto-cache", "--format", "json", "--deterministic"};
	const auto a = invoke(args), b = invoke(args);
	CHECK(a.code == cli::kUnsat);
	CHECK(a.out == b.out);
	const auto recs = lines(a.out);
	REQUIRE(recs.size() == 2);
	CHECK(recs[0]["alg"] == "a1");
	CHECK(recs[1]["alg"] == "a2");
	CHECK(recs[1]["trace"][0]["node"] == "x.1.1.1.1.1");
	// re-serializing with sorted keys reproduces the line
	std::istringstream in(a.out);
	std::string first;
	std::getline(in, first);
	CHECK(json::parse(first).dump() == first);
}

TEST_CASE("check prints the witness") {
	const auto r = invoke({"check", prog("organization"), "--pred", "smember", "--format", "json"});
	const auto recs = lines(r.out);
	REQUIRE(recs.size() == 1);
	CHECK(recs[0]["verdict"] == "SAT");
	CHECK(recs[0]["witness"]["atoms"].size() == 5);
}

TEST_CASE("compile-units writes a loadable cache") {
	const auto d = temp_dir("compile");
	const auto cache = (d / "blocking.cache").string();
	const auto r = invoke({"compile-units", prog("blocking"), "--cache", cache, "--format", "json"});
	CHECK(r.code == 0);
	const auto rec = lines(r.out).at(0);
	CHECK(rec["retained"] == rec["distinct"].get<int>() - rec["redundant"].get<int>());
	CHECK(rec["final"].get<int>() >= 1);
	CHECK(testing::read_text("golden/blocking_units.cache") == [&] {
		std::ifstream in(cache);
		std::ostringstream ss;
		ss << in.rdbuf();
		return ss.str();
	}());
	CHECK(invoke({"check", prog("blocking"), "--pred", "q", "--alg", "a2", "--cache", cache}).code == cli::kUnsat);
	CHECK(invoke({"check", prog("support_chain"), "--pred", "smember", "--alg", "a2", "--cache", cache}).code == cli::kInputError);
}

TEST_CASE("fact-only programs compile to successor-free units") {
	const auto d = temp_dir("facts");
	std::ofstream(d / "facts.folp") << "p(a).\nq(b).\n";
	const auto r = invoke({"compile-units", (d / "facts.folp").string()});
	CHECK(r.code == 0);
	CHECK(r.out.find("succ") == std::string::npos);
}

TEST_CASE("verify") {
	auto r = invoke({"verify", prog("organization"), "--pred", "smember", "--format", "json"});
	CHECK(r.code == cli::kSat);
	auto rec = lines(r.out).at(0);
	CHECK(rec["a1"]["witness_verified"] == true);
	CHECK(rec["consistent"] == true);

	r = invoke({"verify", prog("support_chain"), "--pred", "smember", "--alg", "a2", "--format", "json"});
	CHECK(r.code == cli::kUnsat);
	rec = lines(r.out).at(0);
	CHECK(rec["oracle"] == "none");
	CHECK(rec["consistent"] == true);

	r = invoke({"verify", prog("blocking"), "--pred", "p", "--alg", "a2", "--format", "json"});
	rec = lines(r.out).at(0);
	CHECK(rec["a2"]["witness_verified"].is_null());
	CHECK(rec["a2"].contains("notice"));
}

TEST_CASE("bench over a directory") {
	const auto d = temp_dir("bench");
	for (const char* n : {"organization", "support_chain", "blocking"}) std::filesystem::copy_file(prog(n), d / (std::string(n) + ".folp"));
	const auto r = invoke({"bench", d.string(), "--format", "json"});
	CHECK(r.code == 0);
	const auto rows = lines(r.out);
	REQUIRE(rows.size() == 3);
	for (const auto& row : rows) {
		CHECK(row["agree"] == true);
		CHECK(row["a1_verdicts"] == row["a2_verdicts"]);
		CHECK(row.contains("a1_ms"));
	}
	CHECK(rows[0]["program"] == "blocking.folp");  // sorted by file name

	const auto empty = temp_dir("bench-empty");
	const auto e = invoke({"bench", empty.string(), "--format", "json"});
	CHECK(e.code == 0);
	CHECK(e.out.empty());
	CHECK(invoke({"bench", "/nonexistent-dir"}).code == cli::kInputError);
}

TEST_CASE("bench marks timeouts") {
	const Program p = testing::organization();
	const auto row = bench_program("organization", p, {"smember"}, {}, std::chrono::milliseconds(0));
	CHECK(row.timeout);
	CHECK(row.a1_verdicts == std::vector<std::string>{"TIMEOUT"});
	CHECK(row.agree());
}

TEST_CASE("query selection") {
	const std::string text = "% query: smember\n" + testing::read_text("programs/support_chain.folp");
	CHECK(bench_queries(text, parse_program(text)) == std::vector<std::string>{"smember"});
	const std::string blocking = testing::read_text("programs/blocking.folp");
	CHECK(bench_queries(blocking, parse_program(blocking)) == std::vector<std::string>{"p", "q"});
	CHECK(synthetic_queries(4, 5) == std::vector<std::string>{"s0", "s1", "s2", "s3", "s0"});
	const Program syn = parse_program(synthetic_program(4, 5));
	CHECK(syn.rules().size() == 21);
	CHECK(validate_folp(syn).empty());
}

TEST_CASE("export-dot") {
	const auto r = invoke({"export-dot", prog("organization"), "--pred", "smember"});
	CHECK(r.code == cli::kSat);
	CHECK(r.out.rfind("digraph", 0) == 0);
	const auto u = invoke({"export-dot", prog("support_chain"), "--pred", "smember"});
	CHECK(u.code == cli::kUnsat);
	CHECK(u.out.rfind("digraph", 0) == 0);
	CHECK(invoke({"check", prog("organization"), "--pred", "smember", "--format", "dot"}).out.rfind("digraph", 0) == 0);
}
