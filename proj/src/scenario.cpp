#include "wtcce/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "wtcce/errors.hpp"
#include "wtcce/gauss_oracle.hpp"

namespace wtcce {

using nlohmann::json;

namespace {

template <typename T>
using FieldTable = std::vector<std::pair<const char*, double T::*>>;

const FieldTable<OrthogonalGaussianParams>& orthogonal_fields() {
  using P = OrthogonalGaussianParams;
  static const FieldTable<P> t = {
      {"h_l", &P::h_l},       {"h_1m", &P::h_1m},     {"h_2m", &P::h_2m},
      {"h_1c", &P::h_1c},     {"h_2c", &P::h_2c},     {"P_l", &P::P_l},
      {"P_1e", &P::P_1e},     {"P_2e", &P::P_2e},     {"N_l", &P::N_l},
      {"N_1e_m", &P::N_1e_m}, {"N_2e_m", &P::N_2e_m}, {"N_1e_c", &P::N_1e_c},
      {"N_2e_c", &P::N_2e_c}};
  return t;
}

const FieldTable<GeneralGaussianParams>& general_fields() {
  using P = GeneralGaussianParams;
  static const FieldTable<P> t = {
      {"h_l", &P::h_l},         {"h_1e_l", &P::h_1e_l},   {"h_2e_l", &P::h_2e_l},
      {"h_l_1e", &P::h_l_1e},   {"h_l_2e", &P::h_l_2e},   {"h_2e_1e", &P::h_2e_1e},
      {"h_1e_2e", &P::h_1e_2e}, {"P_l", &P::P_l},         {"P_1e", &P::P_1e},
      {"P_2e", &P::P_2e},       {"N_l", &P::N_l},         {"N_1e", &P::N_1e},
      {"N_2e", &P::N_2e}};
  return t;
}

const FieldTable<DmScenario>& dm_numeric_fields() {
  using D = DmScenario;
  static const FieldTable<D> t = {{"main_crossover", &D::main_crossover},
                                  {"eve1_crossover", &D::eve1_crossover},
                                  {"eve2_crossover", &D::eve2_crossover},
                                  {"resolution", &D::resolution}};
  return t;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

// A number, or {"sqrt": x} for gains quoted as square roots.
double read_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object() && v.size() == 1 && v.contains("sqrt") && v["sqrt"].is_number()) {
    const double x = v["sqrt"].get<double>();
    if (x < 0.0) throw ConfigError(where + ": sqrt of a negative number");
    return std::sqrt(x);
  }
  throw ConfigError(where + ": expected a number or {\"sqrt\": number}");
}

template <typename T>
T read_block(const json& obj, const FieldTable<T>& fields, const std::string& where) {
  std::set<std::string> allowed;
  for (const auto& f : fields) allowed.insert(f.first);
  check_keys(obj, allowed, where);
  T out{};
  for (const auto& [name, member] : fields) {
    if (obj.contains(name)) out.*member = read_number(obj[name], where + "." + name);
  }
  return out;
}

template <typename T>
bool set_field(T& block, const FieldTable<T>& fields, const std::string& name, double value) {
  for (const auto& [n, member] : fields) {
    if (name == n) {
      block.*member = value;
      return true;
    }
  }
  return false;
}

template <typename T>
bool has_field(const FieldTable<T>& fields, const std::string& name) {
  for (const auto& f : fields) {
    if (name == f.first) return true;
  }
  return false;
}

ModelKind parse_model(const json& v) {
  if (!v.is_string()) throw ConfigError("model: expected a string");
  const auto s = v.get<std::string>();
  if (s == "orthogonal-gaussian") return ModelKind::OrthogonalGaussian;
  if (s == "general-gaussian") return ModelKind::GeneralGaussian;
  if (s == "dm") return ModelKind::Dm;
  throw ConfigError("model: expected orthogonal-gaussian, general-gaussian or dm, got '" + s + "'");
}

DmScenario parse_dm(const json& obj) {
  check_keys(obj,
             {"builder", "main_crossover", "eve1_crossover", "eve2_crossover",
              "collusion_crossover", "channel_file", "reduction", "resolution", "budget"},
             "dm");
  DmScenario d;
  for (const auto& [name, member] : dm_numeric_fields()) {
    if (obj.contains(name)) d.*member = read_number(obj[name], std::string("dm.") + name);
  }
  if (obj.contains("builder")) d.builder = obj["builder"].get<std::string>();
  if (d.builder != "orthogonal-bsc" && d.builder != "file") {
    throw ConfigError("dm.builder: expected orthogonal-bsc or file");
  }
  if (obj.contains("collusion_crossover") && !obj["collusion_crossover"].is_null()) {
    d.collusion_crossover = read_number(obj["collusion_crossover"], "dm.collusion_crossover");
  }
  if (obj.contains("channel_file")) d.channel_file = obj["channel_file"].get<std::string>();
  if (d.builder == "file" && d.channel_file.empty()) {
    throw ConfigError("dm.channel_file: required when builder is file");
  }
  if (obj.contains("reduction")) d.reduction = obj["reduction"].get<std::string>();
  if (d.reduction != "none" && d.reduction != "noncolluding" && d.reduction != "perfectcolluding") {
    throw ConfigError("dm.reduction: expected none, noncolluding or perfectcolluding");
  }
  if (d.reduction == "perfectcolluding" && d.builder != "orthogonal-bsc") {
    throw ConfigError("dm.reduction: perfectcolluding needs the orthogonal-bsc builder");
  }
  if (obj.contains("budget")) {
    if (!obj["budget"].is_number_unsigned()) throw ConfigError("dm.budget: expected a positive integer");
    d.budget = obj["budget"].get<std::size_t>();
  }
  for (double c : {d.main_crossover, d.eve1_crossover, d.eve2_crossover}) {
    if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("dm: crossover probabilities must lie in [0, 1]");
  }
  if (d.collusion_crossover && !(*d.collusion_crossover >= 0.0 && *d.collusion_crossover <= 1.0)) {
    throw ConfigError("dm.collusion_crossover: must lie in [0, 1]");
  }
  return d;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void validate_config(const ScenarioConfig& cfg) {
  try {
    if (cfg.orthogonal) cfg.orthogonal->validate();
    if (cfg.general) cfg.general->validate();
    cfg.optimizer.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.sweep) {
    const SweepSpec& s = *cfg.sweep;
    if (!(s.step > 0.0)) throw ConfigError("sweep.step: must be > 0");
    if (!(s.start <= s.stop)) throw ConfigError("sweep: start must be <= stop");
    ScenarioConfig probe = cfg;
    if (!set_parameter(probe, s.parameter, s.start)) {
      throw ConfigError("sweep.parameter: '" + s.parameter + "' is not a parameter of the model");
    }
  }
}

}  // namespace

std::size_t SweepSpec::count() const {
  return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

dm::DMChannel DmScenario::build(const std::filesystem::path& base_dir) const {
  if (builder == "file") {
    std::filesystem::path path = channel_file;
    if (path.is_relative()) path = base_dir / path;
    dm::DMChannel ch = dm::load_channel(path.string());
    if (reduction == "noncolluding") return dm::reduce_noncolluding(ch);
    return ch;
  }
  const dm::MainComponent main =
      dm::main_from_marginals(dm::bsc(main_crossover), dm::bsc(eve1_crossover), dm::bsc(eve2_crossover));
  if (reduction == "perfectcolluding") return dm::reduce_perfectcolluding(main);
  const dm::CollusionComponent col =
      collusion_crossover
          ? dm::collusion_from_links(dm::bsc(*collusion_crossover), dm::bsc(*collusion_crossover))
          : dm::no_collusion();
  dm::DMChannel ch = dm::build_orthogonal_dm(main, col);
  if (reduction == "noncolluding") return dm::reduce_noncolluding(ch);
  return ch;
}

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, {"model", "orthogonal", "general", "dm", "sweep", "optimizer", "audit", "output"},
             "config");
  if (!doc.contains("model")) throw ConfigError("config: missing 'model'");
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  try {
    cfg.model = parse_model(doc["model"]);
    if (doc.contains("orthogonal")) {
      cfg.orthogonal = read_block(doc["orthogonal"], orthogonal_fields(), "orthogonal");
    }
    if (doc.contains("general")) {
      cfg.general = read_block(doc["general"], general_fields(), "general");
    }
    if (doc.contains("dm")) cfg.dm = parse_dm(doc["dm"]);

    if (doc.contains("sweep")) {
      const json& s = doc["sweep"];
      check_keys(s, {"parameter", "start", "stop", "step"}, "sweep");
      SweepSpec sw;
      if (s.contains("parameter")) sw.parameter = s["parameter"].get<std::string>();
      if (s.contains("start")) sw.start = read_number(s["start"], "sweep.start");
      if (s.contains("stop")) sw.stop = read_number(s["stop"], "sweep.stop");
      if (s.contains("step")) sw.step = read_number(s["step"], "sweep.step");
      cfg.sweep = sw;
    }
    if (doc.contains("optimizer")) {
      const json& o = doc["optimizer"];
      check_keys(o,
                 {"coarse_resolution", "refine_iterations", "refine_shrink", "tolerance", "threads",
                  "use_oracle"},
                 "optimizer");
      if (o.contains("coarse_resolution")) cfg.optimizer.coarse_resolution = o["coarse_resolution"].get<double>();
      if (o.contains("refine_iterations")) cfg.optimizer.refine_iterations = o["refine_iterations"].get<int>();
      if (o.contains("refine_shrink")) cfg.optimizer.refine_shrink = o["refine_shrink"].get<double>();
      if (o.contains("tolerance")) cfg.optimizer.tolerance = o["tolerance"].get<double>();
      if (o.contains("threads")) cfg.optimizer.threads = o["threads"].get<unsigned>();
      if (o.contains("use_oracle")) cfg.use_oracle = o["use_oracle"].get<bool>();
    }
    if (doc.contains("audit")) {
      const json& a = doc["audit"];
      check_keys(a, {"draws", "seed", "rho"}, "audit");
      if (a.contains("draws")) cfg.audit.draws = a["draws"].get<std::size_t>();
      if (a.contains("seed")) cfg.audit.seed = a["seed"].get<std::uint64_t>();
      if (a.contains("rho")) {
        const auto mode = a["rho"].get<std::string>();
        if (mode != "zero" && mode != "unrestricted") {
          throw ConfigError("audit.rho: expected zero or unrestricted");
        }
        cfg.audit.zero_rho = mode == "zero";
      }
    }
    if (doc.contains("output")) {
      const json& o = doc["output"];
      check_keys(o, {"csv", "svg"}, "output");
      if (o.contains("csv")) cfg.csv_path = o["csv"].get<std::string>();
      if (o.contains("svg")) cfg.svg_path = o["svg"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  switch (cfg.model) {
    case ModelKind::OrthogonalGaussian:
      if (!cfg.orthogonal) throw ConfigError("config: model orthogonal-gaussian needs an 'orthogonal' block");
      break;
    case ModelKind::GeneralGaussian:
      if (!cfg.general) throw ConfigError("config: model general-gaussian needs a 'general' block");
      break;
    case ModelKind::Dm:
      if (!cfg.dm) throw ConfigError("config: model dm needs a 'dm' block");
      break;
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

bool set_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
  bool found = false;
  if (cfg.model == ModelKind::Dm) {
    if (!cfg.dm) return false;
    if (name == "collusion_crossover") {
      cfg.dm->collusion_crossover = value;
      return true;
    }
    return set_field(*cfg.dm, dm_numeric_fields(), name, value);
  }
  if (cfg.orthogonal) found |= set_field(*cfg.orthogonal, orthogonal_fields(), name, value);
  if (cfg.general) found |= set_field(*cfg.general, general_fields(), name, value);
  return found;
}

std::vector<std::pair<std::string, double>> PointReport::fields() const {
  std::vector<std::pair<std::string, double>> out;
  if (r_nc) out.emplace_back("R_nc", *r_nc);
  if (r_pc) out.emplace_back("R_pc", *r_pc);
  if (r_og) out.emplace_back("R_og", *r_og);
  if (njg) {
    out.emplace_back("R_njg", njg->rate.secure_rate);
    out.emplace_back("R_njg.rho_1", njg->rho_star.rho_1);
    out.emplace_back("R_njg.rho_2", njg->rho_star.rho_2);
    out.emplace_back("R_njg.rho_12", njg->rho_star.rho_12);
  }
  if (g) {
    out.emplace_back("R_g", g->rate.secure_rate);
    out.emplace_back("R_g.rho_1", g->rho_star.rho_1);
    out.emplace_back("R_g.rho_2", g->rho_star.rho_2);
    out.emplace_back("R_g.rho_12", g->rho_star.rho_12);
  }
  if (dm) {
    out.emplace_back("R_dm", dm->rate);
    out.emplace_back("R_dm.inner_recheck", dm->inner_recheck_rate);
    for (std::size_t i = 0; i < dm->r.r.size(); ++i) {
      out.emplace_back("r[" + std::to_string(i) + "]", dm->r.r[i]);
    }
    for (std::size_t i = 0; i < dm->q.q.size(); ++i) {
      out.emplace_back("q[" + std::to_string(i) + "]", dm->q.q[i]);
    }
  }
  return out;
}

PointReport run_point(const ScenarioConfig& cfg) {
  PointReport rep;
  if (cfg.model == ModelKind::Dm) {
    const dm::DMChannel ch = cfg.dm->build(cfg.base_dir);
    rep.dm = dm::sup_inf_rate(ch, cfg.dm->resolution, cfg.dm->budget);
    return rep;
  }
  if (cfg.orthogonal) {
    rep.r_nc = rate_noncolluding(*cfg.orthogonal);
    rep.r_pc = rate_perfectcolluding(*cfg.orthogonal);
    rep.og = rate_orthogonal(*cfg.orthogonal);
    rep.r_og = rep.og->secure_rate;
  }
  if (cfg.general) {
    rep.njg = optimize_general(without_jamming(*cfg.general), cfg.optimizer, cfg.use_oracle);
    rep.g = optimize_general(*cfg.general, cfg.optimizer, cfg.use_oracle);
  }
  return rep;
}

void print_point(std::ostream& os, const PointReport& report) {
  for (const auto& [name, value] : report.fields()) os << name << ',' << fmt6(value) << '\n';
}

SweepTable run_sweep(const ScenarioConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: config has no 'sweep' block");
  const SweepSpec& sw = *cfg.sweep;
  SweepTable table;
  const bool is_dm = cfg.model == ModelKind::Dm;
  if (is_dm) {
    table.header = {"param", "R_dm"};
  } else {
    if (!cfg.orthogonal || !cfg.general) {
      throw ConfigError("sweep: Gaussian sweeps need both 'orthogonal' and 'general' blocks");
    }
    table.header = {sw.parameter, "R_nc", "R_pc", "R_og", "R_njg", "R_g"};
  }

  for (std::size_t i = 0; i < sw.count(); ++i) {
    const double x = sw.value(i);
    ScenarioConfig point = cfg;
    set_parameter(point, sw.parameter, x);
    validate_config(point);
    const PointReport rep = run_point(point);
    if (is_dm) {
      table.rows.push_back({x, rep.dm->rate});
    } else {
      table.rows.push_back({x, *rep.r_nc, *rep.r_pc, *rep.r_og, rep.njg->rate.secure_rate,
                            rep.g->rate.secure_rate});
    }
  }
  return table;
}

void write_csv(std::ostream& os, const SweepTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt6(row[i]);
    os << '\n';
  }
}

void write_svg(std::ostream& os, const SweepTable& table, const std::string& title) {
  constexpr double width = 760, height = 480;
  constexpr double left = 70, right = 150, top = 40, bottom = 60;
  constexpr double plot_w = width - left - right;
  constexpr double plot_h = height - top - bottom;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  double xmin = 0, xmax = 1, ymax = 0;
  if (!table.rows.empty()) {
    xmin = xmax = table.rows.front()[0];
    for (const auto& row : table.rows) {
      xmin = std::min(xmin, row[0]);
      xmax = std::max(xmax, row[0]);
      for (std::size_t c = 1; c < row.size(); ++c) ymax = std::max(ymax, row[c]);
    }
  }
  if (xmax <= xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  ymax = ymax > 0 ? ymax * 1.05 : 1.0;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return top + plot_h - y / ymax * plot_h; };
  char buf[160];

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";

  // Axes and ticks.
  std::snprintf(buf, sizeof buf,
                "<path d=\"M %.2f %.2f L %.2f %.2f L %.2f %.2f\" stroke=\"black\" fill=\"none\"/>\n",
                left, top, left, top + plot_h, left + plot_w, top + plot_h);
  os << buf;
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymax * k / 5.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"11\">%.3g</text>\n",
                  sx(xv), top + plot_h + 16, xv);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-size=\"11\">%.3g</text>\n",
                  left - 6, sy(yv) + 4, yv);
    os << buf;
  }
  const std::string xlabel = table.header.empty() ? "x" : table.header[0];
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(xlabel) << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"13\" "
                "transform=\"rotate(-90 18 %.2f)\">",
                top + plot_h / 2, top + plot_h / 2);
  os << buf << "secure rate (bits/channel use)</text>\n";

  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const char* color = palette[(c - 1) % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", sx(table.rows[i][0]),
                    sy(table.rows[i][c]));
      os << buf;
    }
    os << "\"/>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(c - 1);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  left + plot_w + 15, ly, left + plot_w + 40, ly, color);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">",
                  left + plot_w + 46, ly + 4);
    os << buf << xml_escape(table.header[c]) << "</text>\n";
  }
  os << "</svg>\n";
}

OrthogonalGaussianParams draw_orthogonal(Lcg64& rng) {
  OrthogonalGaussianParams p;
  p.h_l = rng.uniform(-2, 2);
  p.h_1m = rng.uniform(-2, 2);
  p.h_2m = rng.uniform(-2, 2);
  p.h_1c = rng.uniform(-2, 2);
  p.h_2c = rng.uniform(-2, 2);
  p.P_l = rng.uniform(0, 10);
  p.P_1e = rng.uniform(0, 10);
  p.P_2e = rng.uniform(0, 10);
  p.N_l = rng.uniform(0.1, 5);
  p.N_1e_m = rng.uniform(0.1, 5);
  p.N_2e_m = rng.uniform(0.1, 5);
  p.N_1e_c = rng.uniform(0.1, 5);
  p.N_2e_c = rng.uniform(0.1, 5);
  return p;
}

GeneralGaussianParams draw_general(Lcg64& rng) {
  GeneralGaussianParams p;
  p.h_l = rng.uniform(-2, 2);
  p.h_1e_l = rng.uniform(-2, 2);
  p.h_2e_l = rng.uniform(-2, 2);
  p.h_l_1e = rng.uniform(-2, 2);
  p.h_l_2e = rng.uniform(-2, 2);
  p.h_2e_1e = rng.uniform(-2, 2);
  p.h_1e_2e = rng.uniform(-2, 2);
  p.P_l = rng.uniform(0, 10);
  p.P_1e = rng.uniform(0, 10);
  p.P_2e = rng.uniform(0, 10);
  p.N_l = rng.uniform(0.1, 5);
  p.N_1e = rng.uniform(0.1, 5);
  p.N_2e = rng.uniform(0.1, 5);
  return p;
}

CorrelationTriple draw_correlation(Lcg64& rng) {
  for (;;) {
    CorrelationTriple rho{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (is_valid_correlation(rho)) return rho;
  }
}

AuditSummary run_audit(const ScenarioConfig& cfg, std::size_t draws, std::uint64_t seed,
                       std::ostream& csv) {
  if (cfg.model == ModelKind::Dm) throw ConfigError("audit: only Gaussian models can be audited");
  Lcg64 rng(seed);
  AuditSummary summary;
  csv << "draw,term,closed_form,oracle,abs_diff,status\n";

  auto emit = [&](std::size_t draw, const std::string& term, std::optional<double> closed,
                  double oracle, bool required) {
    AuditTermSummary& t = summary.terms[term];
    if (!closed) {
      ++t.undefined_rows;
      csv << draw << ',' << term << ",undefined," << fmt_full(oracle) << ",,undefined\n";
      return;
    }
    const double diff = std::abs(*closed - oracle);
    if (required) {
      ++t.required_rows;
      t.max_required_diff = std::max(t.max_required_diff, diff);
      if (!(diff <= kAuditTolerance)) summary.passed = false;
    } else {
      ++t.informational_rows;
      t.max_informational_diff = std::max(t.max_informational_diff, diff);
    }
    csv << draw << ',' << term << ',' << fmt_full(*closed) << ',' << fmt_full(oracle) << ','
        << fmt_full(diff) << ',' << (required ? "required" : "informational") << '\n';
  };
  auto emit_breakdown = [&](std::size_t draw, const std::optional<RateBreakdown>& c,
                            const RateBreakdown& o, bool required) {
    auto field = [&](double RateBreakdown::*m) -> std::optional<double> {
      if (!c) return std::nullopt;
      return (*c).*m;
    };
    emit(draw, "main", field(&RateBreakdown::main_rate), o.main_rate, required);
    emit(draw, "RL1", field(&RateBreakdown::leak_RL1), o.leak_RL1, required);
    emit(draw, "effective", field(&RateBreakdown::effective_leakage), o.effective_leakage, required);
    emit(draw, "secure", field(&RateBreakdown::secure_rate), o.secure_rate, required);
  };

  for (std::size_t d = 0; d < draws; ++d) {
    if (cfg.model == ModelKind::OrthogonalGaussian) {
      const OrthogonalGaussianParams p = draw_orthogonal(rng);
      const RateBreakdown c = rate_orthogonal(p);
      const RateBreakdown o = rate_orthogonal_oracle(p);
      emit_breakdown(d, c, o, true);
      emit(d, "A1", c.leak_A1, o.leak_A1, true);
      emit(d, "A2", c.leak_A2, o.leak_A2, true);
    } else {
      const GeneralGaussianParams p = draw_general(rng);
      const CorrelationTriple rho = cfg.audit.zero_rho ? CorrelationTriple{} : draw_correlation(rng);
      const bool at_zero = rho == CorrelationTriple{};
      const std::optional<RateBreakdown> c = try_rate_general_paper(p, rho);
      const RateBreakdown o = rate_general_oracle(p, rho);
      emit_breakdown(d, c, o, at_zero);
      emit(d, "A1", leakage_A(1, p, rho), o.leak_A1, true);
      emit(d, "A2", leakage_A(2, p, rho), o.leak_A2, true);
    }
  }

  for (const auto& [term, t] : summary.terms) {
    csv << "# term," << term << ",max_required_diff," << fmt_full(t.max_required_diff)
        << ",max_informational_diff," << fmt_full(t.max_informational_diff) << ",undefined_rows,"
        << t.undefined_rows << '\n';
  }
  csv << "# result," << (summary.passed ? "PASS" : "FAIL") << '\n';
  return summary;
}

}  // namespace wtcce
