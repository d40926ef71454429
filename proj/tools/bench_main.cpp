// bench: SVM experiments with the projected stochastic subgradient method.
//
//   bench run    --synthetic n=1000,p=20,noise=0.1 --passes 50 --seeds 0,1 --out runs.csv
//   bench fstar  --data train.libsvm --passes 50 --out fstar.json
//   bench verify

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "sgdavg/bench.hpp"

namespace {

using namespace sgdavg;

struct DataOptions {
  std::string path;
  std::string synthetic;
  std::string lambda = "1/n";
  std::string sampling = "with_replacement";

  void add_to(CLI::App *cmd) {
    auto *data = cmd->add_option("--data", path, "LIBSVM file");
    auto *synth = cmd->add_option("--synthetic", synthetic, "n=<n>,p=<p>,noise=<f>[,seed=<s>]");
    data->excludes(synth);
    cmd->add_option("--lambda", lambda, "regularization: a number or 1/n")->capture_default_str();
    cmd->add_option("--sampling", sampling, "with_replacement | permuted_passes")
        ->capture_default_str();
  }

  DataSource source() const {
    if (!path.empty())
      return path;
    if (!synthetic.empty())
      return parse_synthetic_spec(synthetic);
    throw Error("one of --data or --synthetic is required");
  }

  std::optional<double> lambda_value() const {
    if (lambda == "1/n")
      return std::nullopt;
    return parse_double(lambda, "lambda");
  }
};

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty())
      items.push_back(item);
  return items;
}

std::vector<std::uint64_t> parse_seeds(const std::string &text) {
  std::vector<std::uint64_t> seeds;
  for (const auto &item : split_list(text)) {
    const double v = parse_double(item, "seed");
    if (v != std::floor(v) || v < 0.0)
      throw Error("seeds must be non-negative integers");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  return seeds;
}

int run_command(const DataOptions &data, const std::string &schemes,
                const std::vector<std::string> &steps, std::size_t passes,
                const std::string &seeds, std::size_t evals, std::size_t threads,
                const std::string &out) {
  ExperimentConfig config;
  config.data = data.source();
  config.lambda = data.lambda_value();
  config.schemes = split_list(schemes);
  config.schedules = steps;
  config.passes = passes;
  config.seeds = parse_seeds(seeds);
  config.evaluations_per_pass = evals;
  config.sampling = parse_sampling(data.sampling);
  config.threads = threads;
  config.output = out;

  const ExperimentResult result = run_experiment(config);
  std::cerr << "wrote " << result.records.size() << " rows (" << result.runs.size()
            << " runs, n=" << result.n << ", p=" << result.dimension
            << ", lambda=" << format_double(result.lambda) << ") to " << out << "\n";
  return 0;
}

int fstar_command(const DataOptions &data, std::size_t passes, std::size_t multiplier,
                  std::size_t evals, const std::string &out) {
  const Dataset dataset = load_dataset(data.source());
  const double lambda = resolve_lambda(data.lambda_value(), dataset);
  const FStarEstimate estimate = estimate_fstar(dataset, lambda, passes, multiplier, evals,
                                                parse_sampling(data.sampling));
  const std::string json = fstar_to_json(estimate, lambda, dataset.size());
  std::ofstream file(out);
  if (!file || !(file << json))
    throw Error("cannot write '" + out + "'");
  std::cout << json;

  const double b2 = variance_bound(dataset, lambda);
  std::cerr << "B^2 (unconstrained) = " << format_double(b2) << "\n";
  return 0;
}

int verify_command() {
  const auto report = verify_suite(VerifyConfig{});
  bool ok = true;
  for (const auto &check : report) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail
              << "\n";
    ok = ok && check.passed;
  }
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stochastic subgradient averaging benchmarks"};
  app.require_subcommand(1);

  DataOptions run_data;
  std::string schemes = "0,1,0.5,D,W,W2";
  std::vector<std::string> steps;
  std::size_t passes = 50;
  std::string seeds = "0";
  std::size_t evals = 1;
  std::size_t threads = 1;
  std::string out;

  auto *run = app.add_subcommand("run", "run the scheme x schedule grid and write a CSV");
  run_data.add_to(run);
  run->add_option("--schemes", schemes, "comma list of 0,1,0.5,D,W,W2,poly:<k>,decay:<eta>")
      ->capture_default_str();
  run->add_option("--step", steps,
                  "classical | proposed | general:<c>,<b> (repeatable; default: classical "
                  "for all schemes plus W with proposed)");
  run->add_option("--passes", passes, "effective passes")->capture_default_str();
  run->add_option("--seeds", seeds, "comma list of seeds")->capture_default_str();
  run->add_option("--evals-per-pass", evals)->capture_default_str();
  run->add_option("--threads", threads)->capture_default_str();
  run->add_option("--out", out, "CSV output path")->required();

  DataOptions fstar_data;
  std::size_t fstar_passes = 50;
  std::size_t multiplier = kMinFStarMultiplier;
  std::size_t fstar_evals = 1;
  std::string fstar_out;
  auto *fstar = app.add_subcommand("fstar", "estimate the optimal objective value");
  fstar_data.add_to(fstar);
  fstar->add_option("--passes", fstar_passes, "experiment pass budget")->capture_default_str();
  fstar->add_option("--multiplier", multiplier, "budget multiplier (>= 10)")
      ->capture_default_str();
  fstar->add_option("--evals-per-pass", fstar_evals)->capture_default_str();
  fstar->add_option("--out", fstar_out, "JSON output path")->required();

  app.add_subcommand("verify", "run the built-in consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(run_data, schemes, steps, passes, seeds, evals, threads, out);
    if (fstar->parsed())
      return fstar_command(fstar_data, fstar_passes, multiplier, fstar_evals, fstar_out);
    return verify_command();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
