// Command-line front end. Kept in a library so tests can drive it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace folp::cli {

enum ExitCode : int {
	kSat = 0,
	kUnsat = 1,
	kUnknown = 2,
	kInputError = 3,     // usage, parse, validation, I/O, cache
	kInternalError = 4,  // engines disagree, oracle contradicts an engine
	kBudget = 5,         // step or time budget exhausted
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace folp::cli
