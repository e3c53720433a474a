#include "msp/msp.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Output
{
  std::string format = "csv";
  std::string out = "-";

  void add_to(CLI::App* app)
  {
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", out, "output path, - for stdout");
  }

  // 0 when no report has a containment violation, 1 otherwise.
  int emit(const std::vector<msp::ExperimentReport>& reports) const
  {
    const auto fmt = msp::parse_report_format(format);
    if (out == "-")
      msp::emit_report(reports, fmt, std::cout);
    else
      msp::emit_report(reports, fmt, out);
    std::size_t bad = 0;
    for (const auto& r : reports)
      if (!r.violations.empty()) {
        ++bad;
        for (const auto& v : r.violations)
          std::fprintf(stderr, "%s: %s\n", r.label.c_str(), v.c_str());
      }
    if (bad)
      std::fprintf(stderr, "%zu of %zu reports have containment violations\n", bad, reports.size());
    return bad ? 1 : 0;
  }
};

msp::SpectrumMethod parse_spectrum(const std::string& s, bool& compute)
{
  compute = s != "none";
  if (s == "dense")
    return msp::SpectrumMethod::dense;
  if (s == "lanczos")
    return msp::SpectrumMethod::lanczos;
  return msp::SpectrumMethod::automatic;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Eigenvalue bounds for preconditioned multiple saddle-point systems"};
  app.require_subcommand(1);
  int status = 0;

  // bounds-table
  auto* bt = app.add_subcommand("bounds-table", "interval hulls I_{k+1} for k = 1..K");
  int max_k = 9;
  Output bt_out;
  bt->add_option("--max-k", max_k, "largest k")->check(CLI::Range(1, 60));
  bt_out.add_to(bt);
  bt->callback([&] {
    if (bt_out.format == "csv") {
      const auto rows = msp::bounds_table(max_k);
      if (bt_out.out == "-") {
        msp::write_bounds_csv(std::cout, rows);
      } else {
        std::ofstream f(bt_out.out);
        if (!f)
          throw msp::IoError("cannot open '" + bt_out.out + "' for writing");
        msp::write_bounds_csv(f, rows);
      }
    } else {
      status = bt_out.emit(msp::bounds_table_reports(max_k));
    }
  });

  // random-multi
  auto* rm = app.add_subcommand("random-multi", "random multi-block systems with exact Schur preconditioning");
  int n_blocks = 2;
  std::string variant = "diag";
  std::uint64_t rm_seed = 1;
  int rm_trials = 1;
  msp::RandomMultiOptions rm_opts;
  Output rm_out;
  rm->add_option("--N", n_blocks, "block count minus one")->check(CLI::Range(1, 8));
  rm->add_option("--variant", variant, "diag or dense")->check(CLI::IsMember({"diag", "dense"}));
  rm->add_option("--seed", rm_seed, "first seed");
  rm->add_option("--trials", rm_trials, "number of seeds, starting at --seed")->check(CLI::PositiveNumber);
  rm->add_option("--n0", rm_opts.n0, "leading block size")->check(CLI::Range(20, 1000));
  rm_out.add_to(rm);
  rm->callback([&] {
    std::vector<msp::ExperimentReport> reports;
    for (int t = 0; t < rm_trials; ++t)
      reports.push_back(msp::random_multi_experiment(n_blocks, msp::parse_multi_variant(variant),
                                                     rm_seed + static_cast<std::uint64_t>(t), rm_opts));
    status = rm_out.emit(reports);
  });

  // dsp-grid
  auto* dg = app.add_subcommand("dsp-grid", "random double saddle-point grid with prescribed indicators");
  msp::DspGridOptions dg_opts;
  bool aggregate = false;
  Output dg_out;
  dg->add_option("--runs", dg_opts.runs_per_case, "trials per case")->check(CLI::PositiveNumber);
  dg->add_option("--seed", dg_opts.seed, "seed");
  dg->add_option("--threads", dg_opts.threads, "worker threads, 0 for all cores");
  dg->add_flag("--aggregate", aggregate, "one row per case with worst-case extremes");
  dg_out.add_to(dg);
  dg->callback([&] {
    auto reports = msp::random_dsp_grid(dg_opts);
    if (aggregate)
      reports = msp::aggregate_dsp_cases(reports, dg_opts.runs_per_case);
    status = dg_out.emit(reports);
  });

  // pdeco
  auto* pd = app.add_subcommand("pdeco", "boundary-observation optimal control with Chebyshev mass solves");
  msp::PdecoOptions pd_opts;
  std::string spectrum = "auto";
  std::string stop = "euclidean";
  Output pd_out;
  pd->add_option("--level", pd_opts.level, "mesh size h = 2^-level")->check(CLI::Range(3, 7));
  pd->add_option("--beta", pd_opts.beta, "regularization parameter")->check(CLI::PositiveNumber);
  pd->add_option("--cheb", pd_opts.cheb.steps, "Chebyshev semi-iteration steps")->check(CLI::Range(1, 100));
  pd->add_option("--tol", pd_opts.rel_tol, "MINRES relative tolerance")->check(CLI::PositiveNumber);
  pd->add_option("--spectrum", spectrum, "auto, dense, lanczos or none")
      ->check(CLI::IsMember({"auto", "dense", "lanczos", "none"}));
  pd->add_option("--stop", stop, "MINRES residual norm: euclidean or preconditioned")
      ->check(CLI::IsMember({"euclidean", "preconditioned"}));
  pd_out.add_to(pd);
  pd->callback([&] {
    pd_opts.spectrum = parse_spectrum(spectrum, pd_opts.compute_spectrum);
    pd_opts.stop = stop == "euclidean" ? msp::MinresStop::euclidean : msp::MinresStop::preconditioned;
    status = pd_out.emit({msp::run_pdeco(pd_opts)});
  });

  // export
  auto* ex = app.add_subcommand("export", "convert a JSON report file, or export the interval hull table");
  std::string in_path;
  int ex_max_k = 9;
  Output ex_out;
  ex->add_option("--in", in_path, "JSON report file written by another subcommand");
  ex->add_option("--max-k", ex_max_k, "table size when --in is not given")->check(CLI::Range(1, 60));
  ex_out.add_to(ex);
  ex->callback([&] {
    status = ex_out.emit(in_path.empty() ? msp::bounds_table_reports(ex_max_k) : msp::read_reports_json(in_path));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const msp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return status;
}
