#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <adhoclab/runner.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCompareFail = 3;

// "10:70:10" inclusive range, or a plain comma list of counts
std::vector<int> parse_nodes(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    int start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
      throw adhoclab::detail::ConfigError("--nodes: expected START:STOP:STEP, got '" + text +
                                          "'");
    if (step <= 0 || stop < start)
      throw adhoclab::detail::ConfigError("--nodes: bad range '" + text + "'");
    for (int n = start; n <= stop; n += step) out.push_back(n);
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      int n = std::stoi(item, &used);
      if (used != item.size() || n <= 0) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw adhoclab::detail::ConfigError("--nodes: bad count '" + item + "'");
    }
  }
  if (out.empty()) throw adhoclab::detail::ConfigError("--nodes: no values");
  return out;
}

std::vector<adhoclab::sim::Protocol> parse_protocols(const std::vector<std::string>& names) {
  std::vector<adhoclab::sim::Protocol> out;
  for (const std::string& n : names) {
    if (n == "dsdv")
      out.push_back(adhoclab::sim::Protocol::dsdv);
    else if (n == "dsr")
      out.push_back(adhoclab::sim::Protocol::dsr);
    else if (n == "dymo")
      out.push_back(adhoclab::sim::Protocol::dymo);
    else
      throw adhoclab::detail::ConfigError("--protocols: unknown '" + n + "'");
  }
  return out;
}

std::vector<adhoclab::sim::Variant> parse_variants(const std::vector<std::string>& names) {
  std::vector<adhoclab::sim::Variant> out;
  for (const std::string& n : names) {
    if (n == "default")
      out.push_back(adhoclab::sim::Variant::def);
    else if (n == "modified")
      out.push_back(adhoclab::sim::Variant::mod);
    else
      throw adhoclab::detail::ConfigError("--variants: unknown '" + n + "'");
  }
  return out;
}

std::vector<adhoclab::Network> parse_networks(const std::vector<std::string>& names) {
  std::vector<adhoclab::Network> out;
  for (const std::string& n : names) {
    if (n == "manet")
      out.push_back(adhoclab::Network::manet);
    else if (n == "vanet")
      out.push_back(adhoclab::Network::vanet);
    else
      throw adhoclab::detail::ConfigError("--networks: unknown '" + n + "'");
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw adhoclab::detail::ConfigError("cannot open output file " + path);
  f << text;
  if (!f) throw adhoclab::detail::ConfigError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic models and discrete-event simulation for sparse ad-hoc routing"};
  app.require_subcommand(1);

  // model
  std::string model_kind;
  std::vector<double> model_lambdas;
  double model_sigma = 3.0;
  std::string model_out;
  CLI::App* model = app.add_subcommand("model", "evaluate an analytic curve over its grid");
  model->add_option("kind", model_kind, "pdr, delay or nro")
      ->required()
      ->check(CLI::IsMember({"pdr", "delay", "nro"}));
  model->add_option("--lambda", model_lambdas, "density values, vehicles per meter")
      ->delimiter(',');
  model->add_option("--sigma", model_sigma, "velocity standard deviation, m/s");
  model->add_option("--out", model_out, "output CSV path (default stdout)");

  // sim run / sim sweep
  CLI::App* sim = app.add_subcommand("sim", "run simulations");
  sim->require_subcommand(1);

  std::string run_config;
  int run_seed = -1;
  std::string run_out;
  CLI::App* run = sim->add_subcommand("run", "single deterministic run");
  run->add_option("--config", run_config, "scenario file")->required();
  run->add_option("--seed", run_seed, "override the scenario seed");
  run->add_option("--out", run_out, "output CSV path (default stdout)");

  std::string sweep_config;
  std::string sweep_nodes = "10:70:10";
  std::vector<std::string> sweep_protocols{"dsdv", "dsr", "dymo"};
  std::vector<std::string> sweep_variants{"default", "modified"};
  std::vector<std::string> sweep_networks{"manet", "vanet"};
  int sweep_seeds = 5;
  std::string sweep_out;
  CLI::App* sweep = sim->add_subcommand("sweep", "multi-seed grid of runs");
  sweep->add_option("--config", sweep_config, "base scenario file")->required();
  sweep->add_option("--nodes", sweep_nodes, "START:STOP:STEP or comma list");
  sweep->add_option("--protocols", sweep_protocols, "dsdv,dsr,dymo")->delimiter(',');
  sweep->add_option("--variants", sweep_variants, "default,modified")->delimiter(',');
  sweep->add_option("--networks", sweep_networks, "manet,vanet")->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "seed count, runs 1..K")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "output directory for sweep.csv (default stdout)");

  // compare
  std::string cmp_sim, cmp_model;
  CLI::App* compare = app.add_subcommand("compare", "trend report for sim vs model CSVs");
  compare->add_option("--sim", cmp_sim, "sweep CSV")->required();
  compare->add_option("--model", cmp_model, "model CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (model->parsed()) {
      adhoclab::ModelGrid grid;
      grid.sigma = model_sigma;
      if (!model_lambdas.empty()) {
        grid.lambdas = model_lambdas;
        grid.nro_lambda = model_lambdas.front();
      }
      adhoclab::ModelKind kind = model_kind == "pdr"
                                     ? adhoclab::ModelKind::pdr
                                     : (model_kind == "delay" ? adhoclab::ModelKind::delay
                                                              : adhoclab::ModelKind::nro);
      std::ostringstream os;
      adhoclab::write_model_csv(os, kind, grid);
      write_text(model_out, os.str());
      return kExitOk;
    }

    if (run->parsed()) {
      adhoclab::ScenarioConfig cfg = adhoclab::load_config(run_config);
      if (run_seed >= 0) cfg.seed = run_seed;
      adhoclab::MetricsReport m = adhoclab::run_scenario(cfg);
      std::vector<adhoclab::SweepRow> rows{adhoclab::make_sweep_row(cfg, m)};
      std::ostringstream os;
      adhoclab::write_rows_csv(os, rows);
      write_text(run_out, os.str());
      return kExitOk;
    }

    if (sweep->parsed()) {
      adhoclab::ScenarioConfig base = adhoclab::load_config(sweep_config);
      adhoclab::SweepAxes axes;
      axes.node_counts = parse_nodes(sweep_nodes);
      axes.protocols = parse_protocols(sweep_protocols);
      axes.variants = parse_variants(sweep_variants);
      axes.networks = parse_networks(sweep_networks);
      axes.seed_count = sweep_seeds;
      std::vector<adhoclab::SweepRow> rows = adhoclab::run_sweep(base, axes);
      std::ostringstream os;
      adhoclab::write_rows_csv(os, rows);
      if (sweep_out.empty()) {
        std::cout << os.str();
      } else {
        std::filesystem::create_directories(sweep_out);
        write_text((std::filesystem::path(sweep_out) / "sweep.csv").string(), os.str());
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      std::ifstream fs(cmp_sim);
      if (!fs) throw adhoclab::detail::ConfigError("cannot open sim csv " + cmp_sim);
      std::ifstream fm(cmp_model);
      if (!fm) throw adhoclab::detail::ConfigError("cannot open model csv " + cmp_model);
      adhoclab::CompareOutcome outcome = adhoclab::compare_report(fs, fm);
      std::cout << outcome.text;
      return outcome.pass ? kExitOk : kExitCompareFail;
    }
  } catch (const adhoclab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
