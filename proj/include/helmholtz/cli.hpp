#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace helmholtz::cli {

/// Worker cap from HELMHOLTZ_THREADS; unset or 0 means hardware concurrency.
int worker_count();

/// Exit codes: 0 pass, 1 check failure, 2 usage or spec error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace helmholtz::cli
