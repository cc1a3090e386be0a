// Command-line front end: point evaluations, sweeps, oracle audits and DM runs.
//
// Exit status: 0 success, 1 configuration error, 2 numerical or audit failure.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wtcce/errors.hpp"
#include "wtcce/scenario.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::string swap_extension(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw wtcce::ConfigError("cannot write " + path);
  body(out);
  if (!out) throw wtcce::ConfigError("error writing " + path);
}

int do_point(const wtcce::ScenarioConfig& cfg, const std::string& out_path) {
  const wtcce::PointReport rep = wtcce::run_point(cfg);
  wtcce::print_point(std::cout, rep);
  if (!out_path.empty()) {
    write_file(out_path, [&](std::ostream& os) { wtcce::print_point(os, rep); });
  }
  return 0;
}

int do_sweep(const wtcce::ScenarioConfig& cfg, std::string out_path, bool svg) {
  // --out overrides the config's output block, SVG included.
  std::string svg_path = out_path.empty() ? cfg.svg_path : swap_extension(out_path, ".svg");
  if (out_path.empty()) out_path = cfg.csv_path;
  const wtcce::SweepTable table = wtcce::run_sweep(cfg);
  if (out_path.empty()) {
    wtcce::write_csv(std::cout, table);
  } else {
    write_file(out_path, [&](std::ostream& os) { wtcce::write_csv(os, table); });
    std::cerr << "wrote " << table.rows.size() << " rows to " << out_path << '\n';
  }
  if (svg) {
    if (svg_path.empty()) svg_path = out_path.empty() ? "sweep.svg" : swap_extension(out_path, ".svg");
    write_file(svg_path, [&](std::ostream& os) {
      wtcce::write_svg(os, table, "Achievable secure rates vs " + table.header.front());
    });
    std::cerr << "wrote " << svg_path << '\n';
  }
  return 0;
}

int do_audit(const wtcce::ScenarioConfig& cfg, const std::string& out_path,
             std::optional<std::uint64_t> seed, std::optional<std::size_t> draws) {
  const std::uint64_t s = seed.value_or(cfg.audit.seed);
  const std::size_t n = draws.value_or(cfg.audit.draws);
  wtcce::AuditSummary summary;
  if (out_path.empty()) {
    summary = wtcce::run_audit(cfg, n, s, std::cout);
  } else {
    write_file(out_path, [&](std::ostream& os) { summary = wtcce::run_audit(cfg, n, s, os); });
  }
  for (const auto& [term, t] : summary.terms) {
    std::cerr << term << ": max required |diff| " << t.max_required_diff
              << ", max informational |diff| " << t.max_informational_diff << ", undefined "
              << t.undefined_rows << '\n';
  }
  std::cerr << "audit " << (summary.passed ? "PASS" : "FAIL") << '\n';
  return summary.passed ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable secrecy rates for wiretap channels with constrained colluding eavesdroppers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  bool svg = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> draws;
  std::optional<unsigned> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path");
    sub->add_option("--threads", threads, "worker threads for the correlation search");
  };
  CLI::App* point = app.add_subcommand("point", "evaluate every rate at one parameter point");
  add_common(point);
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter and write CSV");
  add_common(sweep);
  sweep->add_flag("--svg", svg, "also write an SVG chart");
  CLI::App* audit = app.add_subcommand("audit", "compare closed forms with the covariance oracle");
  add_common(audit);
  audit->add_option("--seed", seed, "generator seed");
  audit->add_option("--draws", draws, "number of random draws");
  CLI::App* dm = app.add_subcommand("dm", "sup-inf rate of a discrete memoryless scenario");
  add_common(dm);
  dm->add_flag("--svg", svg, "with a sweep block, also write an SVG chart");

  CLI11_PARSE(app, argc, argv);

  try {
    wtcce::ScenarioConfig cfg = wtcce::load_config(config_path);
    if (threads) {
      cfg.optimizer.threads = *threads;
      cfg.optimizer.validate();
    }
    if (point->parsed()) return do_point(cfg, out_path);
    if (sweep->parsed()) return do_sweep(cfg, out_path, svg);
    if (audit->parsed()) return do_audit(cfg, out_path, seed, draws);
    if (dm->parsed()) {
      if (cfg.model != wtcce::ModelKind::Dm) throw wtcce::ConfigError("dm: config model must be dm");
      return cfg.sweep ? do_sweep(cfg, out_path, svg) : do_point(cfg, out_path);
    }
  } catch (const wtcce::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const wtcce::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
