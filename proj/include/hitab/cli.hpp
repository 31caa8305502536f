#pragma once
// Command-line front end: gen | hash | bound | verify | bench.
// Exit codes: 0 success, 1 check failure, 2 usage/params, 3 input data,
// 4 resource/budget.

#include <iosfwd>
#include <string>
#include <vector>

namespace hitab {

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

} // namespace hitab
