#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucqlab/database.hpp"
#include "ucqlab/extension.hpp"
#include "ucqlab/hypergraph.hpp"
#include "ucqlab/oracle.hpp"
#include "ucqlab/prepared.hpp"
#include "ucqlab/qc.hpp"
#include "ucqlab/reduction.hpp"
#include "ucqlab/tripartite.hpp"
#include "ucqlab/union_eval.hpp"
#include "ucqlab/workload.hpp"

namespace ucq::cli {

using nlohmann::json;
namespace fs = std::filesystem;

UnionQuery read_query_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read query file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_query(buf.str());
}

namespace {

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::kTractable: return kOk;
    case Verdict::kIntractable: return kIntractable;
    case Verdict::kUnsupported: return kUnsupported;
  }
  return kError;
}

// Runs `body`, mapping exceptions to a message and exit code 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

}  // namespace

int cmd_classify(const fs::path& query_file, bool explain, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const UnionQuery u = read_query_file(query_file);
    try {
      Classification c = classify_union(u);
      out << c.to_json().dump(2) << "\n";
      if (explain) err << c.explain();
      return verdict_code(c.verdict);
    } catch (const UnsupportedScope& e) {
      json report = e.report().to_json();
      report["error"] = e.what();
      out << report.dump(2) << "\n";
      if (explain) err << e.report().explain();
      return static_cast<int>(kUnsupported);
    }
  });
}

int cmd_enumerate(const fs::path& query_file, const fs::path& db_dir, std::optional<std::size_t> limit,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const UnionQuery u = read_query_file(query_file);
    if (!fs::is_directory(db_dir)) throw std::runtime_error("database directory not found: " + db_dir.string());
    const Database d = load_database(db_dir);
    std::optional<Classification> c;
    try {
      c = classify_union(u);
    } catch (const UnsupportedScope&) {
    }
    std::size_t emitted = 0;
    auto room = [&] { return !limit || emitted < *limit; };
    if (c && c->verdict == Verdict::kTractable) {
      StreamPtr s = enumerate_union(c->resolved, d);
      Tuple t;
      while (room() && s->next(t)) {
        out << format_csv_row(d, t) << "\n";
        ++emitted;
      }
      return static_cast<int>(kOk);
    }
    err << "warning: no constant-delay algorithm for this union ("
        << (c ? verdict_name(c->verdict) : "UnsupportedScope") << "); falling back to brute force\n";
    for (const auto& t : brute_force_answers(u, d)) {
      if (!room()) break;
      out << format_csv_row(d, t) << "\n";
      ++emitted;
    }
    return static_cast<int>(kOk);
  });
}

int cmd_reduce(const fs::path& query_file, const fs::path& graph_file, const std::optional<fs::path>& out_dir,
               bool check, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const UnionQuery u = read_query_file(query_file);
    const TripartiteGraph g = read_graph(graph_file);
    Classification c = classify_union(u);
    if (c.verdict != Verdict::kIntractable || !c.plan || !c.hard_disjunct) {
      throw std::runtime_error(std::string("no reduction plan: verdict ") + verdict_name(c.verdict) + " (" +
                               c.reason + ")");
    }
    const ConjunctiveQuery& hard = (*c.normalized)[*c.hard_disjunct];
    ReductionInstance inst = build_reduction_database(hard, *c.plan, g);
    json report{{"hard_disjunct", hard.name()},
                {"plan", plan_to_json(*c.plan)},
                {"conditions", conditions_to_json(*c.conditions)},
                {"parts", {g.n1, g.n2, g.n3}},
                {"radix", inst.radix},
                {"top", inst.top},
                {"database_tuples", inst.database.total_tuples()}};
    if (out_dir) {
      save_database(inst.database, *out_dir);
      report["out"] = out_dir->string();
    }
    int code = kOk;
    if (check) {
      const TriangleSearch truth = triangle_brute_force(g);
      bool witness = false;
      for (const auto& t : brute_force_answers(*c.normalized, inst.database))
        if (inst.is_witness(t)) witness = true;
      report["check"] = {{"triangle", truth.count > 0}, {"witness", witness}, {"agree", witness == (truth.count > 0)}};
      if (witness != (truth.count > 0)) code = kError;
    }
    out << report.dump(2) << "\n";
    return code;
  });
}

namespace {

// Measurement state for one size; each pass is one timed repetition.
class BenchCell {
 public:
  BenchCell(const UnionQuery& u, std::size_t size, std::uint64_t seed)
      : u_(u), d_(random_database(u, size, std::max<std::size_t>(2, size), seed)),
        single_(u.size() == 1 && is_free_connex(u[0])) {
    if (!single_) {
      Classification c = classify_union(u);
      if (c.verdict != Verdict::kTractable) throw std::runtime_error("bench needs a tractable union");
      resolved_ = c.resolved;
    }
    row_.size = size;
    row_.database_tuples = d_.total_tuples();
    row_.preprocessing_ns = row_.raw_max_gap_ns = 1e300;
  }

  void run_once() {
    using Clock = std::chrono::steady_clock;
    // Prefault the gap log before timing; writing it after preparation would evict everything.
    std::vector<Nanos> log(row_.answers);
    StreamPtr s;
    auto t0 = Clock::now();
    if (single_) {
      s = enumerate_prepared(prepare_free_connex(u_[0], d_));
    } else {
      s = enumerate_union(*resolved_, d_);
    }
    const double pre = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
    s->use_gap_buffer(std::move(log));
    Tuple t;
    std::size_t answers = 0;
    while (s->next(t)) ++answers;
    row_.answers = answers;
    row_.preprocessing_ns = std::min(row_.preprocessing_ns, pre);
    row_.raw_max_gap_ns = std::min(row_.raw_max_gap_ns, static_cast<double>(s->stats().max_gap().count()));
    // Enumeration order is deterministic, so the k-th gap of every repetition times
    // the same work; its minimum over repetitions strips preemption spikes.
    const auto& gaps = s->stats().gaps;
    if (best_gap_.empty()) best_gap_.assign(gaps.size(), 1e300);
    for (std::size_t k = 0; k < gaps.size() && k < best_gap_.size(); ++k)
      best_gap_[k] = std::min(best_gap_[k], static_cast<double>(gaps[k].count()));
    row_.max_steps_per_answer = std::max(row_.max_steps_per_answer, s->stats().max_steps_per_answer);
  }

  BenchRow finish() {
    BenchRow row = row_;
    row.max_gap_ns = row.median_gap_ns = 0;
    if (!best_gap_.empty()) {
      row.max_gap_ns = *std::max_element(best_gap_.begin(), best_gap_.end());
      auto mid = best_gap_.begin() + static_cast<std::ptrdiff_t>(best_gap_.size() / 2);
      std::nth_element(best_gap_.begin(), mid, best_gap_.end());
      row.median_gap_ns = *mid;
    }
    return row;
  }

 private:
  const UnionQuery& u_;
  const Database d_;
  const bool single_;
  std::optional<ResolvedUnion> resolved_;
  BenchRow row_;
  std::vector<double> best_gap_;
};

}  // namespace

BenchRow bench_cell(const UnionQuery& u, std::size_t size, std::uint64_t seed, std::size_t reps) {
  BenchCell cell(u, size, seed);
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, reps); ++rep) cell.run_once();
  return cell.finish();
}

std::vector<BenchRow> bench_sweep(const UnionQuery& u, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                  std::size_t reps) {
  std::vector<std::unique_ptr<BenchCell>> cells;
  for (std::size_t i = 0; i < sizes.size(); ++i) cells.push_back(std::make_unique<BenchCell>(u, sizes[i], seed + i));
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, reps); ++rep)
    for (auto& cell : cells) cell->run_once();
  std::vector<BenchRow> rows;
  for (auto& cell : cells) rows.push_back(cell->finish());
  return rows;
}

int cmd_bench(const fs::path& query_file, const BenchOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const UnionQuery u = read_query_file(query_file);
    if (options.sizes.empty()) throw std::runtime_error("--sizes needs at least one entry");
    std::size_t threads = std::max<std::size_t>(1, options.threads);
    if (const char* env = std::getenv("UCQLAB_THREADS")) {
      threads = std::min(threads, static_cast<std::size_t>(std::max(1L, std::strtol(env, nullptr, 10))));
    }
    std::vector<BenchRow> rows(options.sizes.size());
    if (threads == 1) rows = bench_sweep(u, options.sizes, options.seed, options.reps);
    std::atomic<std::size_t> next{threads == 1 ? rows.size() : 0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t i; (i = next++) < rows.size();) {
        try {
          rows[i] = bench_cell(u, options.sizes[i], options.seed + i, options.reps);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(threads, rows.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    out << "seed,size,database_tuples,answers,preprocessing_ns,max_gap_ns,median_gap_ns,raw_max_gap_ns,"
           "max_steps_per_answer\n";
    for (const auto& r : rows) {
      out << options.seed << ',' << r.size << ',' << r.database_tuples << ',' << r.answers << ','
          << static_cast<long long>(r.preprocessing_ns) << ',' << static_cast<long long>(r.max_gap_ns) << ','
          << static_cast<long long>(r.median_gap_ns) << ',' << static_cast<long long>(r.raw_max_gap_ns) << ','
          << r.max_steps_per_answer << "\n";
    }
    err << std::left << std::setw(10) << "size" << std::setw(12) << "tuples" << std::setw(12) << "answers"
        << std::setw(16) << "prep (us)" << std::setw(14) << "max gap (ns)" << std::setw(17) << "median gap (ns)"
        << "raw max gap (ns)\n";
    for (const auto& r : rows) {
      err << std::left << std::setw(10) << r.size << std::setw(12) << r.database_tuples << std::setw(12) << r.answers
          << std::setw(16) << std::fixed << std::setprecision(1) << r.preprocessing_ns / 1000 << std::setw(14)
          << std::setprecision(0) << r.max_gap_ns << std::setw(17) << r.median_gap_ns << r.raw_max_gap_ns << "\n";
    }
    err << "seed " << options.seed << ", " << options.reps << " repetitions, " << threads << " thread(s)\n";
    return static_cast<int>(kOk);
  });
}

namespace {

TripartiteGraph make_random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (spec.planted && spec.triangle_free) throw std::runtime_error("--planted and --triangle-free exclude each other");
  if (spec.planted) return planted_triangle_graph(spec.n1, spec.n2, spec.n3, spec.p, rng);
  if (spec.triangle_free) return triangle_free_graph(spec.n1, spec.n2, spec.n3, spec.p, rng);
  return random_graph(spec.n1, spec.n2, spec.n3, spec.p, rng);
}

}  // namespace

int cmd_qc(int c, const std::optional<fs::path>& graph_file, const std::optional<RandomGraphSpec>& random,
           std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (c < 1) throw std::runtime_error("c must be at least 1");
    if (graph_file.has_value() == random.has_value()) throw std::runtime_error("give exactly one of --graph or --random");
    const TripartiteGraph g = graph_file ? read_graph(*graph_file) : make_random_graph(*random, seed);
    const Database d = qc_database_from_graph(c, g);
    StreamPtr s = qc_evaluate(c, d);
    const Tuple bottom = [&] {
      Tuple t;
      for (const auto& v : qc_bottom_answer(c)) t.push_back(*d.pool().find(v));
      return t;
    }();
    Tuple t;
    std::size_t answers = 0;
    bool witness = false;
    while (s->next(t)) {
      ++answers;
      witness = witness || t == bottom;
    }
    const bool triangle = triangle_brute_force(g).count > 0;
    json report{{"c", c},
                {"seed", seed},
                {"parts", {g.n1, g.n2, g.n3}},
                {"answers", answers},
                {"witness", witness},
                {"triangle", triangle},
                {"result", witness ? "witness found" : "no witness"}};
    out << report.dump(2) << "\n";
    return witness == triangle ? static_cast<int>(kOk) : static_cast<int>(kError);
  });
}

int cmd_gen_graph(const RandomGraphSpec& spec, std::uint64_t seed, const std::optional<fs::path>& out_file,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TripartiteGraph g = make_random_graph(spec, seed);
    if (out_file) {
      write_graph(*out_file, g);
    } else {
      out << "# seed " << seed << "\n";
      write_graph(out, g);
    }
    return static_cast<int>(kOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enumeration complexity toolkit for unions of conjunctive queries"};
  app.require_subcommand(1);

  std::string query, db, graph, out_path;
  bool explain = false, check = false;
  std::size_t limit = 0;
  BenchOptions bench;
  std::string sizes_text = "1024,2048,4096,8192,16384";
  int c = 1;
  std::uint64_t seed = 1;
  std::vector<std::size_t> parts;
  RandomGraphSpec spec;

  auto* classify = app.add_subcommand("classify", "Classify a union; JSON report on stdout");
  classify->add_option("query", query, "query file")->required();
  classify->add_flag("--explain", explain, "human-readable reasoning on stderr");

  auto* enumerate = app.add_subcommand("enumerate", "Stream answers as CSV rows");
  enumerate->add_option("query", query, "query file")->required();
  enumerate->add_option("db", db, "database directory")->required();
  auto* limit_opt = enumerate->add_option("--limit", limit, "stop after this many rows");

  auto* reduce = app.add_subcommand("reduce", "Encode a tripartite graph into the hard disjunct");
  reduce->add_option("query", query, "query file")->required();
  reduce->add_option("graph", graph, "graph file")->required();
  auto* out_opt = reduce->add_option("--out", out_path, "write the database to this directory");
  reduce->add_flag("--check", check, "compare witness answers with brute-force triangle detection");

  auto* benchc = app.add_subcommand("bench", "Preprocessing and delay over a size sweep");
  benchc->add_option("query", query, "query file")->required();
  benchc->add_option("--sizes", sizes_text, "comma-separated tuple counts per relation");
  benchc->add_option("--seed", bench.seed, "random seed");
  benchc->add_option("--reps", bench.reps, "repetitions per size (minimum reported)");
  benchc->add_option("--threads", bench.threads, "worker threads (capped by UCQLAB_THREADS)");

  auto* qc = app.add_subcommand("qc", "Run the qc-family pipeline on a graph");
  qc->add_option("--c", c, "family parameter")->required();
  auto* qc_graph = qc->add_option("--graph", graph, "graph file");
  auto* qc_random = qc->add_option("--random", parts, "random graph part sizes n1 n2 n3")->expected(3);
  qc->add_option("--p", spec.p, "edge probability for --random");
  qc->add_flag("--planted", spec.planted, "plant a triangle");
  qc->add_flag("--triangle-free", spec.triangle_free, "remove every triangle");
  qc->add_option("--seed", seed, "random seed");

  auto* gen = app.add_subcommand("gen-graph", "Write a random tripartite graph");
  gen->add_option("--parts", parts, "part sizes n1 n2 n3")->expected(3)->required();
  gen->add_option("--p", spec.p, "edge probability");
  gen->add_flag("--planted", spec.planted, "plant a triangle");
  gen->add_flag("--triangle-free", spec.triangle_free, "remove every triangle");
  gen->add_option("--seed", seed, "random seed");
  auto* gen_out = gen->add_option("--out", out_path, "output file (stdout otherwise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kError);
  }

  auto spec_from_parts = [&] {
    spec.n1 = parts.at(0);
    spec.n2 = parts.at(1);
    spec.n3 = parts.at(2);
    return spec;
  };

  if (classify->parsed()) return cmd_classify(query, explain, out, err);
  if (enumerate->parsed()) {
    return cmd_enumerate(query, db, limit_opt->count() ? std::optional<std::size_t>(limit) : std::nullopt, out, err);
  }
  if (reduce->parsed()) {
    return cmd_reduce(query, graph, out_opt->count() ? std::optional<fs::path>(out_path) : std::nullopt, check, out,
                      err);
  }
  if (benchc->parsed()) {
    return guarded(err, [&] {
      bench.sizes.clear();
      std::stringstream ss(sizes_text);
      for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        std::size_t used = 0;
        unsigned long long v = std::stoull(item, &used);
        if (used != item.size()) throw std::runtime_error("bad size '" + item + "'");
        bench.sizes.push_back(static_cast<std::size_t>(v));
      }
      return cmd_bench(query, bench, out, err);
    });
  }
  if (qc->parsed()) {
    std::optional<fs::path> g = qc_graph->count() ? std::optional<fs::path>(graph) : std::nullopt;
    std::optional<RandomGraphSpec> r = qc_random->count() ? std::optional(spec_from_parts()) : std::nullopt;
    return cmd_qc(c, g, r, seed, out, err);
  }
  if (gen->parsed()) {
    return cmd_gen_graph(spec_from_parts(), seed, gen_out->count() ? std::optional<fs::path>(out_path) : std::nullopt,
                         out, err);
  }
  return kError;
}

}  // namespace ucq::cli
