#include "fshare/harness.hpp"

#include "fshare/errors.hpp"
#include "fshare/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace fshare {

namespace {

// Master-seed stream tags. Branch tags 1 and 2 belong to the privacy audit
// (see adversary.cpp); phase I of an optimize run uses its own root.
constexpr std::uint64_t kOptimizeTag = 3;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  return out;
}

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  if (!j.contains("topology")) throw DomainError("config: missing \"topology\"");
  if (!j.contains("costs")) throw DomainError("config: missing \"costs\"");

  ExperimentConfig config;
  config.topology = topology_from_json(j.at("topology"));
  const int n = config.topology.agent_count();
  if (!is_connected(config.topology)) {
    throw DomainError("config: topology must be connected");
  }

  for (const auto& cj : j.at("costs")) config.costs.push_back(cost_from_json(cj));
  if (config.costs.size() != static_cast<size_t>(n)) {
    throw DomainError("config: expected one cost per agent (" + std::to_string(n) + ")");
  }
  const int m = dimension(config.costs[0]);
  for (size_t i = 0; i < config.costs.size(); ++i) {
    if (dimension(config.costs[i]) != m) {
      throw DomainError("config: costs[" + std::to_string(i) + "] has mismatched dimension");
    }
  }

  config.sigma = j.value("sigma", 1.0);
  if (!(config.sigma > 0.0)) throw DomainError("config: sigma must be positive");

  if (j.contains("corrupted")) {
    config.corrupted = j.at("corrupted").get<std::vector<int>>();
    CorruptedSet::make(config.topology, config.corrupted);  // validates
  }

  if (j.contains("scenario_b")) {
    const auto& sb = j.at("scenario_b");
    ScenarioB b;
    if (sb.contains("degree")) {
      b.degree = sb.at("degree").get<int>();
      const auto coeffs = sb.at("coeffs").get<std::vector<double>>();
      if (coeffs.size() != static_cast<size_t>(n)) {
        throw DomainError("config: scenario_b.coeffs needs one entry per agent");
      }
      b.coeffs.resize(1, n);
      for (int i = 0; i < n; ++i) b.coeffs(0, i) = coeffs[i];
      for (const Cost& c : config.costs) {
        if (!std::holds_alternative<PolynomialCost>(c)) {
          throw DomainError("config: degree scenarios require polynomial costs");
        }
        if (*b.degree < 1 || *b.degree > std::get<PolynomialCost>(c).degree()) {
          throw DomainError("config: scenario_b.degree out of range");
        }
      }
    } else {
      const auto& alphas = sb.at("alpha");
      if (!alphas.is_array() || alphas.size() != static_cast<size_t>(n)) {
        throw DomainError("config: scenario_b.alpha needs one vector per agent");
      }
      b.coeffs.resize(m, n);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd col = vector_from_json(alphas.at(i));
        if (col.size() != m) {
          throw DomainError("config: scenario_b.alpha[" + std::to_string(i) +
                            "] has mismatched dimension");
        }
        b.coeffs.col(i) = col;
      }
    }
    config.scenario_b = std::move(b);
  }

  if (j.contains("dgd")) {
    const auto& d = j.at("dgd");
    config.dgd.max_rounds = d.value("max_rounds", 1000);
    config.dgd.step0 = d.value("step0", 1.0);
    config.dgd.schedule = step_schedule_from_string(d.value("step_schedule", "inverse_sqrt"));
    const std::string weights = d.value("weight_scheme", "metropolis");
    if (weights != "metropolis") {
      throw DomainError("config: unknown weight scheme \"" + weights + "\"");
    }
    config.dgd.tolerance = d.value("tolerance", 1e-9);
    if (d.contains("box")) {
      config.dgd.box = box_from_json(d.at("box"));
    }
    if (d.contains("init") && d.at("init").is_array()) {
      Eigen::MatrixXd init(m, n);
      if (d.at("init").size() != static_cast<size_t>(n)) {
        throw DomainError("config: dgd.init needs one vector per agent");
      }
      for (int i = 0; i < n; ++i) init.col(i) = vector_from_json(d.at("init").at(i));
      config.dgd.init = std::move(init);
    } else if (d.contains("init") && d.at("init") != "box_center") {
      throw DomainError("config: dgd.init must be \"box_center\" or per-agent vectors");
    }
    config.dgd.validate();
  } else {
    config.dgd.box = Box::uniform(m, -100.0, 100.0);
  }
  if (config.dgd.box.dimension() != m) {
    throw DomainError("config: dgd.box dimension must match the costs");
  }

  config.trials = j.value("trials", 100000L);
  if (config.trials < 1) throw DomainError("config: trials must be >= 1");
  config.t = j.value("t", 1);
  if (config.t < 0) throw DomainError("config: t must be nonnegative");
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  config.emit_histograms = j.value("emit_histograms", false);
  config.dump_trace = j.value("dump_trace", false);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["topology"] = topology_to_json(config.topology);
  nlohmann::json costs = nlohmann::json::array();
  for (const Cost& c : config.costs) costs.push_back(cost_to_json(c));
  j["costs"] = std::move(costs);
  j["sigma"] = config.sigma;
  j["corrupted"] = config.corrupted;
  if (config.scenario_b) {
    nlohmann::json sb;
    if (config.scenario_b->degree) {
      sb["degree"] = *config.scenario_b->degree;
      nlohmann::json coeffs = nlohmann::json::array();
      for (int i = 0; i < config.scenario_b->coeffs.cols(); ++i) {
        coeffs.push_back(config.scenario_b->coeffs(0, i));
      }
      sb["coeffs"] = std::move(coeffs);
    } else {
      nlohmann::json alphas = nlohmann::json::array();
      for (int i = 0; i < config.scenario_b->coeffs.cols(); ++i) {
        alphas.push_back(vector_to_json(config.scenario_b->coeffs.col(i)));
      }
      sb["alpha"] = std::move(alphas);
    }
    j["scenario_b"] = std::move(sb);
  }
  nlohmann::json dgd;
  dgd["max_rounds"] = config.dgd.max_rounds;
  dgd["step0"] = config.dgd.step0;
  dgd["step_schedule"] = to_string(config.dgd.schedule);
  dgd["weight_scheme"] = "metropolis";
  dgd["tolerance"] = config.dgd.tolerance;
  dgd["box"] = box_to_json(config.dgd.box);
  if (config.dgd.init) {
    nlohmann::json init = nlohmann::json::array();
    for (int i = 0; i < config.dgd.init->cols(); ++i) {
      init.push_back(vector_to_json(config.dgd.init->col(i)));
    }
    dgd["init"] = std::move(init);
  } else {
    dgd["init"] = "box_center";
  }
  j["dgd"] = std::move(dgd);
  j["trials"] = config.trials;
  j["t"] = config.t;
  if (config.seed) j["seed"] = *config.seed;
  j["emit_histograms"] = config.emit_histograms;
  j["dump_trace"] = config.dump_trace;
  return j;
}

std::uint64_t resolve_seed(const ExperimentConfig& config) {
  if (config.seed) return *config.seed;
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : canonical) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& outdir) {
  nlohmann::json j;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["version"] = manifest.version;
  j["outputs"] = manifest.outputs;
  write_json_file(j, outdir / "manifest.json");
}

namespace {

std::vector<Cost> phase_one_costs(const ExperimentConfig& config, std::uint64_t seed,
                                  PhaseOneRecord* record_out) {
  const RngStream stream = RngStream{seed}.fork(kOptimizeTag);
  if (std::holds_alternative<PolynomialCost>(config.costs[0])) {
    if (record_out) *record_out = PhaseOneRecord{};
    return mask_all_degrees(config.costs, config.topology, config.sigma, stream);
  }
  PhaseOneRecord record =
      run_phase_one(config.topology, config.costs, config.sigma, stream);
  std::vector<Cost> effective = record.effective;
  if (record_out) *record_out = std::move(record);
  return effective;
}

}  // namespace

OptimizeSummary run_optimize(const ExperimentConfig& config,
                             const std::filesystem::path& outdir, std::uint64_t seed) {
  std::filesystem::create_directories(outdir);
  const Eigen::VectorXd oracle = aggregate_minimizer(config.costs, config.dgd.box);

  ExecutionTrace unmasked = dgd_run(config.costs, config.topology, config.dgd, oracle);

  PhaseOneRecord record;
  const std::vector<Cost> effective = phase_one_costs(config, seed, &record);
  ExecutionTrace masked = dgd_run(effective, config.topology, config.dgd, oracle);

  RunManifest manifest;
  manifest.config_hash = config_hash(config);
  manifest.seed = seed;

  auto emit = [&](const ExecutionTrace& trace, const std::string& label) {
    write_trace_csv(trace, outdir / ("trace_" + label + ".csv"));
    write_convergence_csv(trace, outdir / ("convergence_" + label + ".csv"));
    manifest.outputs.push_back("trace_" + label + ".csv");
    manifest.outputs.push_back("convergence_" + label + ".csv");
  };
  emit(unmasked, "unmasked");
  emit(masked, "masked");

  if (config.dump_trace && !record.noise.r.empty()) {
    write_json_file(trace_json(record.noise, record.masks), outdir / "phase1_trace.json");
    manifest.outputs.push_back("phase1_trace.json");
  }

  OptimizeSummary summary;
  summary.oracle = oracle;
  summary.unmasked_final_error = unmasked.oracle_error.back();
  summary.masked_final_error = masked.oracle_error.back();
  summary.unmasked_rounds = unmasked.rounds();
  summary.masked_rounds = masked.rounds();
  summary.unmasked_stopped_early = unmasked.stopped_early;
  summary.masked_stopped_early = masked.stopped_early;

  nlohmann::json sj;
  sj["oracle_minimizer"] = vector_to_json(oracle);
  sj["unmasked"] = {{"final_error", summary.unmasked_final_error},
                    {"rounds", summary.unmasked_rounds},
                    {"stopped_early", summary.unmasked_stopped_early},
                    {"final_mean", vector_to_json(unmasked.final_mean())}};
  sj["masked"] = {{"final_error", summary.masked_final_error},
                  {"rounds", summary.masked_rounds},
                  {"stopped_early", summary.masked_stopped_early},
                  {"final_mean", vector_to_json(masked.final_mean())}};
  write_json_file(sj, outdir / "optimize_summary.json");
  manifest.outputs.push_back("optimize_summary.json");
  write_manifest(manifest, outdir);
  return summary;
}

namespace {

// Coefficient row the audit distinguishes: the affine coefficients, or the
// configured degree's coefficients for polynomial costs.
Eigen::MatrixXd scenario_a_coeffs(const ExperimentConfig& config) {
  if (config.scenario_b && config.scenario_b->degree) {
    const int ell = *config.scenario_b->degree;
    Eigen::MatrixXd a(1, config.topology.agent_count());
    for (int i = 0; i < a.cols(); ++i) {
      a(0, i) = std::get<PolynomialCost>(config.costs[i]).coeffs[ell];
    }
    return a;
  }
  return affine_coefficients(config.costs);
}

void write_moments_csv(const PrivacyReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "branch,statistic,coordinate,agent_i,agent_j,value\n";
  const int h = static_cast<int>(report.honest.size());
  for (int branch = 0; branch < 2; ++branch) {
    const char label = branch == 0 ? 'A' : 'B';
    const Eigen::VectorXd& mean = branch == 0 ? report.mean_a : report.mean_b;
    const Eigen::MatrixXd& cov = branch == 0 ? report.cov_a : report.cov_b;
    for (int k = 0; k < report.dimension; ++k) {
      for (int i = 0; i < h; ++i) {
        out << label << ",mean," << k + 1 << ',' << report.honest[i] << ",0,"
            << format_double(mean[k * h + i]) << '\n';
      }
      for (int i = 0; i < h; ++i) {
        for (int j = 0; j < h; ++j) {
          out << label << ",cov," << k + 1 << ',' << report.honest[i] << ','
              << report.honest[j] << ','
              << format_double(cov(k * h + i, k * h + j)) << '\n';
        }
      }
    }
  }
}

void write_histograms(const PrivacyReport& report, const ScenarioPair& scenario,
                      const Topology& topology, double sigma, std::uint64_t seed,
                      const std::filesystem::path& outdir, RunManifest& manifest) {
  // Regenerates the reduced-view samples per branch (same streams as the
  // audit) and bins each honest agent's coordinate.
  const CorruptedSet& c = scenario.corrupted;
  const int h = static_cast<int>(c.honest.size());
  const int m = report.dimension;
  constexpr int kBins = 81;
  for (int branch = 0; branch < 2; ++branch) {
    const char label = branch == 0 ? 'A' : 'B';
    const Eigen::VectorXd& mean = branch == 0 ? report.mean_a : report.mean_b;
    const Eigen::MatrixXd& cov = branch == 0 ? report.cov_a : report.cov_b;
    const Eigen::MatrixXd coeffs = branch == 0 ? scenario.a : scenario.b;

    std::vector<std::vector<long>> counts(m * h, std::vector<long>(kBins, 0));
    std::vector<double> lo(m * h), width(m * h);
    for (int idx = 0; idx < m * h; ++idx) {
      const double sd = std::sqrt(std::max(cov(idx, idx), 1e-12));
      lo[idx] = mean[idx] - 5.0 * sd;
      width[idx] = 10.0 * sd / kBins;
    }

    const RngStream branch_stream = audit_branch_stream(seed, branch);
    for (long trial = 0; trial < report.trials; ++trial) {
      const RngStream trial_stream = branch_stream.fork(static_cast<std::uint64_t>(trial));
      PairwiseNoise noise = draw_noise(topology, sigma, m, trial_stream);
      MaskSet masks = compute_masks(topology, noise);
      for (int p = 0; p < h; ++p) {
        const int agent = c.honest[p];
        Eigen::VectorXd bar = coeffs.col(agent - 1);
        for (int j : topology.neighbors(agent)) {
          if (std::binary_search(c.honest.begin(), c.honest.end(), j)) {
            bar += noise.r.at({agent, j}) - noise.r.at({j, agent});
          }
        }
        for (int k = 0; k < m; ++k) {
          const int idx = k * h + p;
          const int bin = static_cast<int>(std::floor((bar[k] - lo[idx]) / width[idx]));
          if (bin >= 0 && bin < kBins) ++counts[idx][bin];
        }
      }
    }

    for (int p = 0; p < h; ++p) {
      for (int k = 0; k < m; ++k) {
        const int idx = k * h + p;
        std::string name = "hist_" + std::string(1, label) + "_agent" +
                           std::to_string(c.honest[p]) + "_coord" + std::to_string(k + 1) +
                           ".csv";
        auto out = open_output(outdir / name);
        out << "bin_lo,bin_hi,count,density\n";
        for (int bin = 0; bin < kBins; ++bin) {
          const double bin_lo = lo[idx] + bin * width[idx];
          out << format_double(bin_lo) << ',' << format_double(bin_lo + width[idx]) << ','
              << counts[idx][bin] << ','
              << format_double(static_cast<double>(counts[idx][bin]) /
                               (static_cast<double>(report.trials) * width[idx]))
              << '\n';
        }
        manifest.outputs.push_back(name);
      }
    }
  }
}

}  // namespace

PrivacyReport run_privacy_audit(const ExperimentConfig& config,
                                const std::filesystem::path& outdir, std::uint64_t seed) {
  if (!config.scenario_b) {
    throw DomainError("privacy audit: config needs a \"scenario_b\" section");
  }
  std::filesystem::create_directories(outdir);
  ScenarioPair scenario{scenario_a_coeffs(config), config.scenario_b->coeffs,
                        CorruptedSet::make(config.topology, config.corrupted)};
  PrivacyReport report =
      empirical_kl(scenario, config.topology, config.sigma, config.trials, seed);

  RunManifest manifest;
  manifest.config_hash = config_hash(config);
  manifest.seed = seed;
  write_json_file(report_to_json(report), outdir / "privacy_report.json");
  manifest.outputs.push_back("privacy_report.json");
  write_moments_csv(report, outdir / "moments.csv");
  manifest.outputs.push_back("moments.csv");
  if (config.emit_histograms) {
    write_histograms(report, scenario, config.topology, config.sigma, seed, outdir,
                     manifest);
  }
  write_manifest(manifest, outdir);
  return report;
}

nlohmann::json run_graph_report(const ExperimentConfig& config,
                                const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  const Topology& g = config.topology;
  nlohmann::json j;
  j["n"] = g.agent_count();
  j["edge_count"] = g.edge_count();
  j["algebraic_connectivity"] = g.agent_count() >= 2
                                    ? algebraic_connectivity(laplacian(g))
                                    : 0.0;
  j["sigma"] = config.sigma;
  j["t"] = config.t;

  nlohmann::json flags = nlohmann::json::array();
  try {
    j["vertex_connectivity"] = g.agent_count() >= 2 ? vertex_connectivity(g) : 0;
  } catch (const DomainError& e) {
    j["vertex_connectivity"] = nullptr;
    flags.push_back(std::string("connectivity enumeration skipped: ") + e.what());
  }
  {
    const CorruptedSet c = CorruptedSet::make(g, config.corrupted);
    const bool cut = is_vertex_cut(g, c.corrupted);
    j["corrupted"] = c.corrupted;
    j["corrupted_is_vertex_cut"] = cut;
    if (cut) {
      j["epsilon_configured"] = "no guarantee";
      flags.push_back("C is a vertex cut: no privacy guarantee");
    } else {
      j["epsilon_configured"] = *theoretical_epsilon(g, c, config.sigma);
    }
  }

  try {
    if (g.agent_count() < 2) throw DomainError("graph report: single-agent graph");
    auto worst = corollary_epsilon(g, config.t, config.sigma);
    if (worst) {
      j["worst_case_epsilon"] = *worst;
    } else {
      j["worst_case_epsilon"] = "no guarantee";
    }
    nlohmann::json table = nlohmann::json::array();
    for (int size = 0; size <= std::min(config.t, g.agent_count() - 1); ++size) {
      nlohmann::json row;
      row["size"] = size;
      auto eps = worst_epsilon_of_size(g, size, config.sigma);
      if (eps) {
        row["epsilon"] = *eps;
      } else {
        row["epsilon"] = "no guarantee";
      }
      table.push_back(std::move(row));
    }
    j["per_size"] = table;
  } catch (const DomainError& e) {
    j["worst_case_epsilon"] = nullptr;
    flags.push_back(std::string("worst-case enumeration skipped: ") + e.what());
  }

  j["flags"] = flags;
  write_json_file(j, outdir / "graph_report.json");
  return j;
}

SelftestResult run_selftest(std::uint64_t seed, long trials, SelftestFault fault,
                            std::ostream& log) {
  SelftestResult result;
  auto check = [&](const char* name, bool ok) {
    ++result.checks_run;
    if (!ok) ++result.checks_failed;
    log << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
  };

  const Topology k3(3, {{1, 2}, {1, 3}, {2, 3}});

  // Zero-sum masks over random graphs and sigmas.
  {
    NormalSampler pick(mix64(seed, 101));
    bool ok = true;
    for (int run = 0; run < 100 && ok; ++run) {
      const int n = 2 + static_cast<int>(pick.next_u64() % 7);
      std::vector<std::pair<int, int>> edges;
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          if (pick.uniform() < 0.6) edges.emplace_back(i, j);
        }
      }
      const Topology g(n, edges);
      const double sigma = 0.1 + 9.9 * pick.uniform();
      PairwiseNoise noise = draw_noise(g, sigma, 2, RngStream{mix64(seed, run)});
      MaskSet masks = compute_masks(g, noise);
      if (fault == SelftestFault::mask_zero_sum) {
        masks.u.at(1)[0] += 1e-3 * sigma;
      }
      Eigen::VectorXd total = Eigen::VectorXd::Zero(2);
      for (const auto& [agent, u] : masks.u) total += u;
      ok = total.cwiseAbs().maxCoeff() <= 1e-9 * n * sigma;
    }
    check("zero-sum masks", ok);
  }

  // Mask vector distribution: empirical covariance close to 2 sigma^2 L.
  {
    const double sigma = 1.0;
    const Eigen::MatrixXd target = 2.0 * sigma * sigma * laplacian(k3);
    NormalSampler rng(mix64(seed, 202));
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(3, 3);
    const long n_samples = std::max(trials, 2000L);
    for (long s = 0; s < n_samples; ++s) {
      const Eigen::VectorXd u = sample_mask_vector(k3, sigma, rng);
      outer += u * u.transpose();
    }
    outer /= static_cast<double>(n_samples);
    check("mask covariance matches 2 sigma^2 L",
          (outer - target).norm() <= 0.05 * target.norm());
  }

  // Sum preservation of the effective costs.
  {
    std::vector<Cost> costs;
    costs.emplace_back(QuadraticCost(Eigen::MatrixXd::Constant(1, 1, 2.0),
                                     Eigen::VectorXd::Constant(1, 1.0)));
    costs.emplace_back(QuadraticCost(Eigen::MatrixXd::Constant(1, 1, 2.0),
                                     Eigen::VectorXd::Constant(1, 2.0)));
    costs.emplace_back(QuadraticCost(Eigen::MatrixXd::Constant(1, 1, 2.0),
                                     Eigen::VectorXd::Constant(1, 3.0)));
    NormalSampler xs(mix64(seed, 303));
    bool ok = true;
    for (int run = 0; run < 100 && ok; ++run) {
      PhaseOneRecord record =
          run_phase_one(k3, costs, 1.0, RngStream{mix64(seed, 400 + run)});
      for (int t = 0; t < 100 && ok; ++t) {
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, -10.0 + 20.0 * xs.uniform());
        double before = 0.0, after = 0.0;
        for (int i = 0; i < 3; ++i) {
          before += evaluate(record.costs[i], x);
          after += evaluate(record.effective[i], x);
        }
        ok = std::abs(after - before) <= 1e-7;
      }
    }
    check("sum preservation", ok);
  }

  // Bound compliance on the 3-agent complete graph at reduced trials.
  {
    Eigen::MatrixXd a(1, 3), b(1, 3);
    a << 1, 2, 3;
    b << 2, 1, 3;
    ScenarioPair scenario{a, b, CorruptedSet::make(k3, {3})};
    PrivacyReport report =
        empirical_kl(scenario, k3, 1.0, std::max(trials, 10000L), mix64(seed, 505));
    const bool ok = report.kl_bound &&
                    report.kl_empirical <= *report.kl_bound + 3.0 * report.kl_standard_error;
    check("divergence bound compliance", ok);
  }

  return result;
}

}  // namespace fshare
