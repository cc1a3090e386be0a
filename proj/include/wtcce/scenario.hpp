#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtcce/corr_optimizer.hpp"
#include "wtcce/dm_core.hpp"
#include "wtcce/gauss_rates.hpp"
#include "wtcce/lcg.hpp"

namespace wtcce {

enum class ModelKind { OrthogonalGaussian, GeneralGaussian, Dm };

struct SweepSpec {
  std::string parameter = "P_l";
  double start = 0.0;
  double stop = 20.0;
  double step = 0.2;

  // floor((stop - start) / step) + 1, with a 1e-9 guard against round-off.
  std::size_t count() const;
  double value(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

// Binary DM scenario: BSC main links, optional BSC collusion links, or a
// channel file in the plain-text tensor format.
struct DmScenario {
  std::string builder = "orthogonal-bsc";  // or "file"
  double main_crossover = 0.1;
  double eve1_crossover = 0.3;
  double eve2_crossover = 0.3;
  std::optional<double> collusion_crossover;  // unset: no collusion link
  std::string channel_file;
  std::string reduction = "none";  // none | noncolluding | perfectcolluding
  double resolution = 0.05;
  std::size_t budget = dm::kDefaultGridBudget;

  dm::DMChannel build(const std::filesystem::path& base_dir) const;
};

struct AuditSpec {
  std::size_t draws = 1000;
  std::uint64_t seed = 1;
  bool zero_rho = false;  // general model: restrict draws to rho = (0, 0, 0)
};

struct ScenarioConfig {
  ModelKind model = ModelKind::GeneralGaussian;
  std::optional<OrthogonalGaussianParams> orthogonal;
  std::optional<GeneralGaussianParams> general;
  std::optional<DmScenario> dm;
  std::optional<SweepSpec> sweep;
  SearchConfig optimizer;
  bool use_oracle = false;
  AuditSpec audit;
  std::string csv_path;
  std::string svg_path;
  std::filesystem::path base_dir = ".";
};

// Parses a JSON scenario. Unknown keys, missing blocks and invalid values
// raise ConfigError with the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path& path);

// Sets a named model parameter on every block that has it. Returns false if
// no block knows the name.
bool set_parameter(ScenarioConfig& cfg, const std::string& name, double value);

struct PointReport {
  std::optional<double> r_nc, r_pc, r_og;
  std::optional<RateBreakdown> og;
  std::optional<OptimizationResult> g, njg;
  std::optional<dm::SupInfResult> dm;

  // (name, value) pairs in a fixed order, for printing.
  std::vector<std::pair<std::string, double>> fields() const;
};

PointReport run_point(const ScenarioConfig& cfg);
void print_point(std::ostream& os, const PointReport& report);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Gaussian: header <param>,R_nc,R_pc,R_og,R_njg,R_g (needs both parameter
// blocks). DM: header param,R_dm.
SweepTable run_sweep(const ScenarioConfig& cfg);
void write_csv(std::ostream& os, const SweepTable& table);

// Line chart: one polyline per rate column, axes, labels and a legend.
void write_svg(std::ostream& os, const SweepTable& table, const std::string& title);

struct AuditTermSummary {
  double max_required_diff = 0.0;
  double max_informational_diff = 0.0;
  std::size_t required_rows = 0;
  std::size_t informational_rows = 0;
  std::size_t undefined_rows = 0;
};

struct AuditSummary {
  std::map<std::string, AuditTermSummary> terms;
  bool passed = true;
};

constexpr double kAuditTolerance = 1e-9;

// Writes draw,term,closed_form,oracle,abs_diff,status rows and '#' summary
// lines. Gaussian models only.
AuditSummary run_audit(const ScenarioConfig& cfg, std::size_t draws, std::uint64_t seed,
                       std::ostream& csv);

// Seeded draws shared by the audit and the tests. Gains U[-2, 2], powers
// U[0, 10], noise powers U[0.1, 5]; correlations uniform on the cube with
// rejection of non-PSD triples.
OrthogonalGaussianParams draw_orthogonal(Lcg64& rng);
GeneralGaussianParams draw_general(Lcg64& rng);
CorrelationTriple draw_correlation(Lcg64& rng);

}  // namespace wtcce
