#include "sgdavg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sgdavg/verify.hpp"

namespace sgdavg {

namespace {

constexpr std::uint64_t kFStarStream = 0xf57a;

std::size_t parse_count(const std::string &text, const std::string &what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || v < 1.0 || v > 1e15)
    throw Error(what + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

} // namespace

SyntheticSpec parse_synthetic_spec(const std::string &text) {
  SyntheticSpec spec;
  bool has_n = false, has_p = false, has_noise = false;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("synthetic spec entries must be key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_count(value, "synthetic n");
      has_n = true;
    } else if (key == "p") {
      spec.p = parse_count(value, "synthetic p");
      has_p = true;
    } else if (key == "noise") {
      spec.noise = parse_double(value, "synthetic noise");
      has_noise = true;
    } else if (key == "seed") {
      const double v = parse_double(value, "synthetic seed");
      if (v != std::floor(v) || v < 0.0)
        throw Error("synthetic seed must be a non-negative integer");
      spec.seed = static_cast<std::uint64_t>(v);
    } else {
      throw Error("unknown synthetic spec key '" + key + "'");
    }
  }
  if (!has_n || !has_p || !has_noise)
    throw Error("synthetic spec needs n=<n>,p=<p>,noise=<f>");
  if (!(spec.noise >= 0.0 && spec.noise < 0.5))
    throw Error("noise fraction must lie in [0, 0.5)");
  return spec;
}

void validate(const ExperimentConfig &config) {
  if (config.schemes.empty())
    throw Error("at least one averaging scheme is required");
  if (config.seeds.empty())
    throw Error("at least one seed is required");
  if (config.passes == 0)
    throw Error("passes must be at least 1");
  if (config.evaluations_per_pass == 0)
    throw Error("evaluations per pass must be at least 1");
  if (config.threads == 0)
    throw Error("threads must be at least 1");
  if (config.lambda && (!(*config.lambda > 0.0) || !std::isfinite(*config.lambda)))
    throw Error("lambda must be positive and finite");
  // Parse every name once so typos fail before any computation.
  for (const auto &name : config.schemes)
    parse_scheme(name, 1);
  for (const auto &name : config.schedules)
    parse_schedule(name, 1.0);
}

std::vector<RunPlan> experiment_plan(const ExperimentConfig &config) {
  std::vector<RunPlan> plans;
  if (!config.schedules.empty()) {
    for (const auto &schedule : config.schedules)
      plans.push_back(RunPlan{schedule, config.schemes});
    return plans;
  }
  plans.push_back(RunPlan{"classical", config.schemes});
  if (std::find(config.schemes.begin(), config.schemes.end(), "W") != config.schemes.end())
    plans.push_back(RunPlan{"proposed", {"W"}});
  return plans;
}

Dataset load_dataset(const DataSource &source) {
  if (const auto *path = std::get_if<std::string>(&source))
    return preprocess(load_libsvm(*path));
  const auto &spec = std::get<SyntheticSpec>(source);
  return preprocess(synthesize(spec.n, spec.p, spec.seed, spec.noise).dataset);
}

double resolve_lambda(const std::optional<double> &lambda, const Dataset &dataset) {
  if (lambda)
    return *lambda;
  return 1.0 / static_cast<double>(dataset.size());
}

ExperimentResult run_grid(const Dataset &dataset, const ExperimentConfig &config) {
  validate(config);
  validate(dataset);

  ExperimentResult out;
  out.lambda = resolve_lambda(config.lambda, dataset);
  out.n = dataset.size();
  out.dimension = dataset.dimension;

  const auto plans = experiment_plan(config);
  const std::size_t total = config.passes * dataset.size();
  const SvmObjective objective(dataset, out.lambda);
  const ObjectiveFn evaluate = [&objective](const WeightVector &w) {
    return svm_objective(w, objective);
  };
  const WeightVector w0 = WeightVector::Zero(static_cast<Eigen::Index>(dataset.dimension));

  const std::size_t jobs = plans.size() * config.seeds.size();
  out.runs.resize(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  const auto work = [&](std::size_t job) {
    const std::size_t plan_index = job / config.seeds.size();
    const std::uint64_t seed = config.seeds[job % config.seeds.size()];
    const RunPlan &plan = plans[plan_index];
    try {
      RunConfig rc;
      rc.schedule = parse_schedule(plan.schedule, out.lambda);
      for (const auto &name : plan.schemes)
        rc.schemes.push_back(parse_scheme(name, total));
      rc.total_iterations = total;
      rc.seed = seed;
      rc.evaluations_per_pass = config.evaluations_per_pass;
      rc.n = dataset.size();
      SvmOracle oracle(objective, config.sampling);
      out.runs[job] = GridRun{job, plan_index, seed, run(oracle, evaluate, rc, w0)};
    } catch (const std::exception &e) {
      errors[job] = std::make_exception_ptr(
          Error("run " + std::to_string(job) + " (schedule " + plan.schedule + ", seed " +
                std::to_string(seed) + "): " + e.what()));
    }
  };

  const std::size_t workers = std::min(config.threads, jobs);
  if (workers <= 1) {
    for (std::size_t job = 0; job < jobs; ++job)
      work(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k)
      pool.emplace_back([&] {
        for (std::size_t job = next++; job < jobs; job = next++)
          work(job);
      });
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  // Canonical order: plan (schedule), scheme, seed, t.
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (const auto &scheme : plans[p].schemes) {
      const std::string name = scheme_name(parse_scheme(scheme, total));
      for (std::size_t s = 0; s < config.seeds.size(); ++s) {
        const GridRun &gr = out.runs[p * config.seeds.size() + s];
        for (const auto &record : gr.result.records) {
          if (record.scheme_name != name)
            continue;
          out.records.push_back(record);
          out.record_run_ids.push_back(gr.run_id);
        }
      }
    }
  }
  return out;
}

void write_csv(const ExperimentResult &result, std::ostream &out) {
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const RunRecord &r = result.records[i];
    out << result.record_run_ids[i] << ',' << r.scheme_name << ',' << r.schedule_name << ','
        << r.seed << ',' << r.t << ',' << format_double(r.effective_passes) << ','
        << format_double(r.objective) << ',' << format_double(r.iterate_norm) << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  validate(config);
  if (config.output.empty())
    throw Error("an output path is required");
  const Dataset dataset = load_dataset(config.data);
  ExperimentResult result = run_grid(dataset, config);

  std::ofstream out(config.output, std::ios::binary);
  if (!out)
    throw Error("cannot open output file '" + config.output + "'");
  write_csv(result, out);
  if (!out.flush())
    throw Error("failed writing output file '" + config.output + "'");
  return result;
}

FStarEstimate estimate_fstar(const OracleFactory &make_oracle, const ObjectiveFn &objective,
                             std::size_t n, std::size_t dimension, double mu,
                             std::size_t base_passes, std::size_t budget_multiplier,
                             std::size_t evaluations_per_pass) {
  if (budget_multiplier < kMinFStarMultiplier)
    throw Error("f* budget multiplier must be at least " + std::to_string(kMinFStarMultiplier));
  if (base_passes == 0 || n == 0)
    throw Error("f* estimation needs a positive pass budget");

  FStarEstimate estimate;
  estimate.value = std::numeric_limits<double>::infinity();
  estimate.iterations = base_passes * budget_multiplier * n;

  RunConfig rc;
  rc.schedule = make_proposed(mu);
  rc.schemes = {PolyWeight{1}};
  rc.total_iterations = estimate.iterations;
  rc.stream_id = kFStarStream;
  rc.evaluations_per_pass = evaluations_per_pass;
  rc.n = n;

  const ObjectiveFn tracked = [&](const WeightVector &w) {
    const double value = objective(w);
    if (value < estimate.value) {
      estimate.value = value;
      estimate.point = w;
    }
    return value;
  };
  const WeightVector w0 = WeightVector::Zero(static_cast<Eigen::Index>(dimension));
  for (std::uint64_t seed = 0; seed < kFStarSeeds; ++seed) {
    rc.seed = seed;
    auto oracle = make_oracle();
    const RunResult result = run(*oracle, tracked, rc, w0);
    tracked(result.final_points.front());
  }
  estimate.method = "min objective of W/proposed over " + std::to_string(kFStarSeeds) +
                    " seeds x " + std::to_string(base_passes * budget_multiplier) + " passes";
  return estimate;
}

FStarEstimate estimate_fstar(const Dataset &dataset, double lambda, std::size_t base_passes,
                             std::size_t budget_multiplier, std::size_t evaluations_per_pass,
                             SamplingStrategy sampling) {
  const SvmObjective objective(dataset, lambda);
  return estimate_fstar(
      [&]() -> std::unique_ptr<SubgradientOracle> {
        return std::make_unique<SvmOracle>(objective, sampling);
      },
      [&](const WeightVector &w) { return svm_objective(w, objective); }, dataset.size(),
      dataset.dimension, lambda, base_passes, budget_multiplier, evaluations_per_pass);
}

FStarEstimate lower_envelope(FStarEstimate estimate, const std::vector<RunRecord> &records) {
  for (const auto &r : records) {
    if (r.objective < estimate.value) {
      estimate.value = r.objective;
      if (estimate.method.find("lower envelope") == std::string::npos)
        estimate.method += " (lower envelope with recorded runs)";
    }
  }
  return estimate;
}

std::string fstar_to_json(const FStarEstimate &estimate, double lambda, std::size_t n) {
  nlohmann::ordered_json j;
  j["value"] = estimate.value;
  j["method"] = estimate.method;
  j["iterations"] = estimate.iterations;
  j["lambda"] = lambda;
  j["n"] = n;
  j["dimension"] = estimate.point.size();
  return j.dump(2) + "\n";
}

std::vector<CheckResult> verify_suite(const VerifyConfig &config) {
  std::vector<CheckResult> report;
  Rng rng = make_stream(config.seed, 0x7e1e);

  {
    const std::vector<double> hand = {5.0, 1.0, 2.0};
    const std::vector<double> zeros(8, 0.0);
    bool ok = telescoping_sum(hand) == -12.0 && telescoping_closed_form(hand) == -12.0 &&
              telescoping_sum(zeros) == 0.0 && telescoping_closed_form(zeros) == 0.0;
    double worst = 0.0;
    for (std::size_t s = 0; s < config.identity_sequences; ++s) {
      std::vector<double> a(1 + uniform_index(rng, config.identity_max_length));
      for (auto &v : a)
        v = -10.0 + 20.0 * uniform01(rng);
      worst = std::max(worst, telescoping_error(a));
    }
    ok = ok && worst <= 1e-9;
    report.push_back({"telescoping identity", ok,
                      "hand case a=(5,1,2) -> -12; worst relative error " + format_double(worst) +
                          " over " + std::to_string(config.identity_sequences) + " sequences"});
  }

  const Dataset dataset = load_dataset(config.data);
  const double lambda = 1.0 / static_cast<double>(dataset.size());
  const std::size_t total = config.passes * dataset.size();

  for (const auto &schedule : {make_classical(lambda), make_proposed(lambda)}) {
    const NormBoundCheck nb = check_norm_bound(dataset, lambda, schedule, total, config.seed);
    report.push_back({"iterate norm bound (" + schedule_name(schedule) + ")", nb.holds(),
                      "max ||w_t|| " + format_double(nb.max_iterate_norm) + " <= L/lambda " +
                          format_double(nb.iterate_bound) + "; mean ||g_t||^2 " +
                          format_double(nb.mean_squared_subgradient) + " <= 4L^2 " +
                          format_double(nb.subgradient_bound)});
  }

  {
    const double b2 = variance_bound(dataset, lambda);
    const FStarEstimate fstar =
        estimate_fstar(dataset, lambda, config.passes, kMinFStarMultiplier);
    ExperimentConfig ec;
    ec.schemes = {"W"};
    ec.schedules = {"proposed"};
    ec.passes = config.passes;
    ec.seeds = config.seeds;
    ec.lambda = lambda;
    const ExperimentResult res = run_grid(dataset, ec);

    bool ok = true;
    double worst_ratio = -std::numeric_limits<double>::infinity();
    const auto &times = res.runs.front().result.records;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const std::size_t t = times[k].t;
      if (t < dataset.size())
        continue;
      double mean_gap = 0.0;
      for (const auto &gr : res.runs)
        mean_gap += gr.result.records[k].objective - fstar.value;
      mean_gap /= static_cast<double>(res.runs.size());
      const double bound = 2.0 * b2 / (lambda * (static_cast<double>(t) + 1.0));
      worst_ratio = std::max(worst_ratio, mean_gap / bound);
      ok = ok && mean_gap <= bound;
    }
    report.push_back({"weighted-average gap bound", ok,
                      "max mean_gap / (2B^2/(lambda(T+1))) = " + format_double(worst_ratio)});
  }

  {
    const AveragingAgreement agree = check_averaging_agreement(
        config.averaging_sequences, config.averaging_max_length, config.seed);
    report.push_back({"online vs closed-form averaging", agree.max_relative_error <= 1e-10,
                      "worst relative error " + format_double(agree.max_relative_error) +
                          " (scheme " + agree.worst_scheme + ")"});
  }
  return report;
}

} // namespace sgdavg
