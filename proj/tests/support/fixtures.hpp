// Paths and loaders for the sample programs under tests/programs.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "folp/syntax.hpp"

#ifndef FOLP_TEST_DATA
#error "FOLP_TEST_DATA must point at the tests directory"
#endif

namespace folp::testing {

inline std::string data_path(const std::string& rel) { return std::string(FOLP_TEST_DATA) + "/" + rel; }

inline std::string read_text(const std::string& rel) {
	std::ifstream in(data_path(rel), std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

inline Program sample(const std::string& name) { return load_program(data_path("programs/" + name + ".folp")); }

/// Organization example with its constraint removed.
inline Program organization() { return eliminate_constraints(sample("organization")); }

}  // namespace folp::testing
