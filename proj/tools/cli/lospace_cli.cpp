#include "lospace_cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "lospace/error.hpp"
#include "lospace/io.hpp"
#include "lospace/rational_solver.hpp"
#include "lospace/rng.hpp"
#include "lospace/spectral.hpp"
#include "lospace/workspace.hpp"

namespace lospace::cli {

namespace {

struct OutputFormat {
  bool decimal = false;
  int digits = 12;
};

std::string render(const FloatL& x, const OutputFormat& fmt) { return fmt.decimal ? x.to_decimal(fmt.digits) : x.to_string(); }

std::string render(const FixedL& x, const OutputFormat& fmt) {
  if (fmt.decimal) return x.to_decimal(fmt.digits);
  int bits = std::max<int>(static_cast<int>(bit_length(x.scaled())), 2);
  return FloatL::from_parts(x.scaled(), -x.frac_bits(), bits).to_string();
}

std::string render_row(const std::vector<FixedL>& v, const OutputFormat& fmt) {
  std::string line;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) line += ' ';
    line += render(v[i], fmt);
  }
  return line;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::invalid_argument:
    case Errc::dimension_mismatch:
      return exit_input;
    default:
      return exit_retry;
  }
}

unsigned thread_count(bool parallel) {
  if (!parallel) return 1;
  return std::max(1U, std::thread::hardware_concurrency());
}

std::uint64_t default_seed() {
  const char* env = std::getenv("LOSPACE_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (!end || *end) throw Error(Errc::invalid_argument, "LOSPACE_SEED is not an unsigned integer");
  return v;
}

void report_space(const WorkspaceMeter& meter, std::ostream& err) {
  err << "workspace peak_bits " << meter.peak_bits() << " current_bits " << meter.current_bits() << '\n';
  for (const auto& [label, usage] : meter.breakdown()) {
    err << "workspace label " << label << " peak_bits " << usage.peak_bits << '\n';
  }
}

}  // namespace

SparseMatrix bench_matrix(std::size_t n, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("bench-matrix", n);
  std::vector<Entry> entries;
  std::vector<std::int64_t> row_sum(n, 0);
  const std::int64_t off = kBenchBound / 4;
  auto draw = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.uniform(0, static_cast<std::uint64_t>(hi - lo)));
  };
  auto put = [&](std::size_t i, std::size_t j, std::int64_t v) {
    if (v == 0) return;
    entries.push_back({i, j, v});
    row_sum[i] += v < 0 ? -v : v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) put(i, i - 1, draw(-off, off));
    if (i + 1 < n) put(i, i + 1, draw(-off, off));
    auto j = static_cast<std::size_t>(rng.uniform(0, n - 1));
    if (j + 1 < i || j > i + 1) put(i, j, draw(-2, 2));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t d = std::min(kBenchBound, row_sum[i] + 1 + draw(0, off));
    std::int64_t sign = rng.uniform(0, 1) ? 1 : -1;
    entries.push_back({i, i, sign * d});
  }
  return SparseMatrix(n, n, std::move(entries));
}

std::vector<BenchRow> bench_run(const BenchOptions& opts) {
  if (opts.sizes.empty()) throw Error(Errc::invalid_argument, "bench needs at least one size");
  std::vector<BenchRow> rows;
  for (std::size_t n : opts.sizes) {
    if (n == 0) throw Error(Errc::invalid_argument, "bench sizes must be positive");
    SparseMatrix a = bench_matrix(n, opts.seed);
    Rng vec_rng = Rng(opts.seed).derive("bench-vector", n);
    IntVector b(n);
    for (auto& x : b) x = vec_rng.uniform(BigInt(-kBenchBound), BigInt(kBenchBound));
    Rng rng = Rng(opts.seed).derive("bench-solve", n);
    SolveOptions sopts;
    sopts.threads = opts.threads;
    WorkspaceMeter meter;
    auto start = std::chrono::steady_clock::now();
    {
      MeterScope scope(meter);
      SolveOutcome out = lin_solve(a, b, opts.eps, rng, sopts);
      if (out.singular) throw Error(Errc::invalid_argument, "bench matrix is singular");
    }
    auto stop = std::chrono::steady_clock::now();
    BenchRow row;
    row.n = n;
    row.nnz = a.nnz();
    row.ms = opts.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    row.peak_bits = meter.peak_bits();
    row.ratio = static_cast<double>(row.peak_bits) /
                (static_cast<double>(n) * std::log2(static_cast<double>(n) * static_cast<double>(kBenchBound)));
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n,nnz,ms,peak_bits,ratio\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.nnz << ',' << std::fixed << std::setprecision(3) << r.ms << ',' << r.peak_bits << ','
        << std::setprecision(4) << r.ratio << '\n';
  }
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear-space exact and approximate linear algebra over the integers"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;
  bool report = false;
  bool parallel = false;
  std::string format = "float2exp";
  int digits = 12;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "Random seed (default LOSPACE_SEED or 0)")
      ->trigger_on_parse();
  app.add_flag("--report-space", report, "Print the working-space peak to stderr");
  app.add_flag("--parallel", parallel, "Run parallel-safe loops on all hardware threads");
  app.add_option("--format", format, "Number format")->check(CLI::IsMember({"float2exp", "decimal"}));
  app.add_option("--decimal-digits", digits, "Digits after the point in decimal format")->check(CLI::Range(0, 10000));

  std::string matrix_path;
  std::string vector_path;
  double eps = 0.0;
  std::string sizes_text = "64,128,256";
  bool no_timing = false;

  auto* det = app.add_subcommand("det", "Exact determinant");
  det->add_option("matrix", matrix_path, "Matrix file")->required();
  auto* solve = app.add_subcommand("solve", "Solve A x = b");
  solve->add_option("matrix", matrix_path, "Matrix file")->required();
  solve->add_option("vector", vector_path, "Right-hand side file")->required();
  solve->add_option("--epsilon", eps, "Entry-wise multiplicative accuracy");
  auto* regress = app.add_subcommand("regress", "Least squares min |A x - b|");
  regress->add_option("matrix", matrix_path, "Matrix file")->required();
  regress->add_option("vector", vector_path, "Right-hand side file")->required();
  regress->add_option("--epsilon", eps, "Entry-wise multiplicative accuracy");
  auto* eigs = app.add_subcommand("eigs", "Eigenvalues of a symmetric matrix");
  eigs->add_option("matrix", matrix_path, "Matrix file")->required();
  eigs->add_option("--epsilon", eps, "Additive accuracy");
  auto* eigvecs = app.add_subcommand("eigvecs", "Eigenpairs of a symmetric matrix, streamed");
  eigvecs->add_option("matrix", matrix_path, "Matrix file")->required();
  eigvecs->add_option("--epsilon", eps, "Additive accuracy");
  auto* svd_cmd = app.add_subcommand("svd", "Singular value decomposition, streamed");
  svd_cmd->add_option("matrix", matrix_path, "Matrix file")->required();
  svd_cmd->add_option("--epsilon", eps, "Additive accuracy");
  auto* bench = app.add_subcommand("bench", "Working-space table for lin_solve");
  bench->add_option("--sizes", sizes_text, "Comma-separated sizes");
  bench->add_option("--epsilon", eps, "Solve accuracy");
  bench->add_flag("--no-timing", no_timing, "Print 0 in the ms column");
  for (auto* sub : {det, solve, regress, eigs, eigvecs, svd_cmd, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }

  OutputFormat fmt{format == "decimal", digits};
  unsigned threads = thread_count(parallel);
  WorkspaceMeter meter;
  int code = exit_ok;
  try {
    if (!seed_given) seed = default_seed();
    Rng rng(seed);
    auto default_eps = [&](double value) {
      if (eps == 0.0) eps = value;
      if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "--epsilon must lie in (0, 1)");
    };

    if (*bench) {
      default_eps(1e-6);
      BenchOptions opts;
      opts.eps = eps;
      opts.seed = seed;
      opts.threads = threads;
      opts.timing = !no_timing;
      std::stringstream ss(sizes_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(item.c_str(), &end, 10);
        if (item.empty() || !end || *end || v == 0) throw Error(Errc::invalid_argument, "bad size '" + item + "'");
        opts.sizes.push_back(static_cast<std::size_t>(v));
      }
      out << bench_csv(bench_run(opts)) << std::flush;
      return exit_ok;
    }

    SparseMatrix a = read_matrix_file(matrix_path);
    MeterScope scope(meter);
    if (*det) {
      DeterminantOptions opts;
      opts.threads = threads;
      out << to_decimal(determinant(a, rng, opts)) << '\n';
    } else if (*solve || *regress) {
      default_eps(1e-6);
      IntVector b = read_vector_file(vector_path);
      SolveOptions opts;
      opts.threads = threads;
      SolveOutcome res = *solve ? lin_solve(a, b, eps, rng, opts) : linear_regression(a, b, eps, rng, opts);
      if (res.singular) {
        out << "SINGULAR\n";
        code = exit_singular;
      } else {
        for (const auto& x : res.solution) out << render(x, fmt) << '\n';
      }
    } else if (*eigs) {
      default_eps(0.05);
      SpectrumOptions opts;
      opts.threads = threads;
      for (const auto& v : spectrum(a, eps, rng, nullptr, opts)) out << render(v, fmt) << '\n';
    } else if (*eigvecs) {
      default_eps(0.05);
      EigenOptions opts;
      opts.spectrum.threads = threads;
      eigendecompose(a, eps, rng, [&](const EigenPair& p) {
        out << p.index << ' ' << render(p.value, fmt) << " : " << render_row(p.vector, fmt) << '\n' << std::flush;
      }, opts);
    } else if (*svd_cmd) {
      default_eps(0.05);
      SpectrumOptions opts;
      opts.threads = threads;
      svd(a, eps, rng, [&](const SingularTriple& t) {
        out << t.index << ' ' << (t.has_value ? render(t.sigma, fmt) : std::string("-")) << " : "
            << render_row(t.left, fmt);
        if (t.has_value) out << " : " << render_row(t.right, fmt);
        out << '\n' << std::flush;
      }, opts);
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (const Error& e) {
    err << "error (" << errc_name(e.code()) << "): " << e.what() << '\n';
    return exit_for(e.code());
  }
  if (report) report_space(meter, err);
  return code;
}

}  // namespace lospace::cli
