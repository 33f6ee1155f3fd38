#pragma once

#include "condrank/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace condrank::cli {

struct BenchRow {
    Index p = 0;
    Index q = 0;
    double seconds = 0.0;
};

/// Median wall time of training on a random complete graph for each size.
std::vector<BenchRow> run_bench(const std::vector<Index>& sizes, SolverKind solver, int repeats,
                                std::uint64_t seed = 7);

/// Runs one command line (args excludes the program name). Returns the exit
/// status; failures print `error: <category>: <message>` on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace condrank::cli
