#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucqlab/query.hpp"

namespace ucq::cli {

// Stable exit codes.
enum ExitCode : int { kOk = 0, kError = 1, kIntractable = 2, kUnsupported = 3 };

UnionQuery read_query_file(const std::filesystem::path& path);

int cmd_classify(const std::filesystem::path& query_file, bool explain, std::ostream& out, std::ostream& err);

int cmd_enumerate(const std::filesystem::path& query_file, const std::filesystem::path& db_dir,
                  std::optional<std::size_t> limit, std::ostream& out, std::ostream& err);

int cmd_reduce(const std::filesystem::path& query_file, const std::filesystem::path& graph_file,
               const std::optional<std::filesystem::path>& out_dir, bool check, std::ostream& out,
               std::ostream& err);

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 1;
  std::size_t reps = 3;
  std::size_t threads = 1;
};

struct BenchRow {
  std::size_t size = 0;          // tuples drawn per relation
  std::size_t database_tuples = 0;
  std::size_t answers = 0;
  double preprocessing_ns = 0;   // minimum over repetitions
  double max_gap_ns = 0;         // max over answers of the per-answer minimum over repetitions
  double median_gap_ns = 0;      // median of the same per-answer minima
  double raw_max_gap_ns = 0;     // minimum over repetitions of the per-run maximum
  std::size_t max_steps_per_answer = 0;
};

// One (query, size) cell; timing excludes database generation.
BenchRow bench_cell(const UnionQuery& u, std::size_t size, std::uint64_t seed, std::size_t reps);

// All sizes with repetitions interleaved round-robin, so a slow stretch of the
// machine is spread over every size rather than landing on one. Size i uses seed + i.
std::vector<BenchRow> bench_sweep(const UnionQuery& u, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                  std::size_t reps);

int cmd_bench(const std::filesystem::path& query_file, const BenchOptions& options, std::ostream& out,
              std::ostream& err);

struct RandomGraphSpec {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  double p = 0.1;
  bool planted = false;
  bool triangle_free = false;
};

int cmd_qc(int c, const std::optional<std::filesystem::path>& graph_file, const std::optional<RandomGraphSpec>& random,
           std::uint64_t seed, std::ostream& out, std::ostream& err);

int cmd_gen_graph(const RandomGraphSpec& spec, std::uint64_t seed, const std::optional<std::filesystem::path>& out_file,
                  std::ostream& out, std::ostream& err);

// Parses argv and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucq::cli
