#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohprobe/discord.hpp"
#include "cohprobe/kitaev.hpp"
#include "cohprobe/optimize.hpp"
#include "cohprobe/parallel.hpp"
#include "cohprobe/scan.hpp"
#include "cohprobe/xx.hpp"

namespace cohprobe::cli {
namespace {

constexpr double kOracleTol = 2e-2;
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::map<std::string, Command> kCommands{
    {"scan", Command::Scan},       {"point", Command::Point},   {"locus", Command::Locus},
    {"discord", Command::Discord}, {"oracle", Command::Oracle}, {"figures", Command::Figures}};
const std::map<std::string, ModelName> kModels{
    {"tfim", ModelName::Tfim}, {"xx", ModelName::Xx}, {"kitaev", ModelName::Kitaev}};
const std::map<std::string, tfim::StateKind> kStates{
    {"symmetry_broken", tfim::StateKind::SymmetryBroken},
    {"thermal_ground", tfim::StateKind::ThermalGround},
    {"gibbs", tfim::StateKind::Gibbs}};
const std::map<std::string, tfim::Convention> kConventions{
    {"coupling_over_field", tfim::Convention::CouplingOverField},
    {"field_over_coupling", tfim::Convention::FieldOverCoupling}};
const std::map<std::string, ed::Boundary> kBoundaries{
    {"periodic", ed::Boundary::Periodic}, {"open", ed::Boundary::Open}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};
const std::vector<std::string> kFigures{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};

// Keys that are on/off flags on the command line.
const std::set<std::string> kFlagKeys{"richardson", "refine", "xx-no-yy", "locus", "verify", "no-fit"};

template <class Map, class V>
std::string name_of(const Map& m, V v) {
  for (const auto& [k, val] : m) {
    if (val == v) return k;
  }
  return "?";
}

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw UsageError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
};

Range parse_range(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw UsageError("expected a range min:max:step, got '" + text + "'");
  }
  Range r{parse_number(std::string_view(text).substr(0, a)),
          parse_number(std::string_view(text).substr(a + 1, b - a - 1)),
          parse_number(std::string_view(text).substr(b + 1))};
  if (!(r.step > 0.0) || !(r.min < r.max) || !std::isfinite(r.max)) {
    throw UsageError("range '" + text + "' needs min < max and step > 0");
  }
  return r;
}

double parse_single(const std::string& text, const char* what) {
  const auto v = parse_values(text);
  if (v.size() != 1) throw UsageError(std::string(what) + " takes a single value here, got '" + text + "'");
  return v.front();
}

std::string fmt(double v) { return format_double(v); }

std::string point_name(const char* param, double x) { return std::string(param) + " = " + fmt(x); }

[[noreturn]] void numerical_failure(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Numerical, "numerical failure at " + where + ": " + what);
}

// ----------------------------------------------------------------------------
// Output plumbing

Metadata header(const RunConfig& c, const Metadata& extra) {
  Metadata m{{"cohprobe_version", COHPROBE_VERSION}, {"format_version", std::to_string(kFormatVersion)}};
  for (auto& kv : config_entries(c)) m.push_back(std::move(kv));
  for (const auto& kv : extra) m.push_back(kv);
  return m;
}

void emit(const Metadata& meta, const Table& table, Format format, const std::string& path,
          std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (format == Format::Csv) write_csv(os, meta, table);
    else write_json(os, meta, table);
  };
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  write(f);
  if (!f) throw Error(ErrorKind::Numerical, "write failed for " + path);
}

// ----------------------------------------------------------------------------
// Model families

struct Family {
  scan::CoherenceFn f;
  const char* param = "lambda";
  double domain_min = 0.0;
  double domain_max = kInf;
  std::string label;
  double kBT = 0.0;
};

Family make_family(const RunConfig& c) {
  Family fam;
  switch (c.model) {
    case ModelName::Tfim: {
      const auto kind = c.state_or_default();
      fam.label = std::string("tfim-") + tfim::to_string(kind);
      if (kind == tfim::StateKind::SymmetryBroken) {
        fam.f = scan::family::tfim_symmetry_broken(c.quadrature);
      } else if (kind == tfim::StateKind::ThermalGround) {
        fam.f = scan::family::tfim_thermal_ground(c.quadrature);
      } else {
        fam.kBT = parse_single(c.kbt, "--kbt");
        fam.f = scan::family::tfim_gibbs(fam.kBT, c.quadrature);
      }
      break;
    }
    case ModelName::Xx:
      fam.label = "xx";
      fam.f = scan::family::xx_chain(c.xx_no_yy ? xx::YyTreatment::Omit : xx::YyTreatment::FromSymmetry);
      break;
    case ModelName::Kitaev:
      fam.label = "kitaev-path";
      fam.param = "jx";
      fam.domain_max = 1.0;
      fam.f = scan::family::kitaev_path(c.quadrature);
      break;
  }
  return fam;
}

scan::SusceptibilityCurve run_sweep(const Family& fam, const Range& r, double diff_step,
                                    bool richardson, bool refine) {
  scan::SweepSpec s;
  s.param_min = r.min;
  s.param_max = r.max;
  s.step = r.step;
  s.diff_step = diff_step;
  s.richardson = richardson;
  s.refine = refine;
  s.domain_min = fam.domain_min;
  s.domain_max = fam.domain_max;
  return scan::sweep(fam.f, s, fam.label, fam.kBT);
}

// ----------------------------------------------------------------------------
// Commands

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const Family fam = make_family(c);
  const Range r = parse_range(c.lambda_or_default());
  const auto curve = run_sweep(fam, r, c.diff_step, c.richardson, c.refine);
  if (!curve.failures.empty()) {
    const auto& f = curve.failures.front();
    numerical_failure(point_name(fam.param, f.param), f.message);
  }
  Table t;
  t.columns = {fam.param, "coherence", "chi"};
  for (const auto& s : curve.samples) t.rows.push_back({s.param, s.coherence, s.chi});
  Metadata extra{{"info.sweep", fam.label}};
  const auto& peak = curve.samples[curve.extremal_index()];
  extra.emplace_back("result.extremal_param", fmt(peak.param));
  extra.emplace_back("result.extremal_chi", fmt(peak.chi));
  if (curve.singularity) {
    extra.emplace_back("result.singularity_growth", fmt(curve.singularity->growth));
    extra.emplace_back("result.singularity_suspected", curve.singularity->suspected ? "true" : "false");
  }
  emit(header(c, extra), t, c.format, c.output, out);
  return 0;
}

int cmd_point(const RunConfig& c, std::ostream& out) {
  Table t;
  if (c.model == ModelName::Kitaev) {
    kitaev::KitaevPoint p;
    if (!c.couplings.empty()) {
      const auto v = parse_values(c.couplings);
      if (v.size() != 3) throw UsageError("--couplings takes jx,jy,jz");
      p = {v[0], v[1], v[2]};
    } else {
      p = kitaev::KitaevPoint::on_path(parse_single(c.lambda, "--lambda"));
    }
    p.validate();
    const std::string where = "jx = " + fmt(p.jx) + ", jy = " + fmt(p.jy) + ", jz = " + fmt(p.jz);
    try {
      const double g = kitaev::xx_link_correlator(p, c.quadrature);
      const double gap = kitaev::gap(p);
      t.columns = {"jx", "jy", "jz", "gxx", "gap", "coherence"};
      t.rows.push_back({p.jx, p.jy, p.jz, g, gap, kitaev::closed_form_coherence(g)});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      numerical_failure(where, e.what());
    }
  } else if (c.model == ModelName::Xx) {
    const double lambda = parse_single(c.lambda, "--lambda");
    const auto yy = c.xx_no_yy ? xx::YyTreatment::Omit : xx::YyTreatment::FromSymmetry;
    try {
      const auto e = xx::xx_expectations({lambda}, yy);
      t.columns = {"lambda", "sz", "gxx", "gyy", "gzz", "coherence"};
      t.rows.push_back({lambda, e(3, 0), e(1, 1), e(2, 2), e(3, 3), xx::xx_coherence({lambda}, yy)});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      numerical_failure(point_name("lambda", lambda), e.what());
    }
  } else {
    const double lambda = parse_single(c.lambda, "--lambda");
    const auto kind = c.state_or_default();
    try {
      if (kind == tfim::StateKind::Gibbs) {
        const double kBT = parse_single(c.kbt, "--kbt");
        const auto o = tfim::thermal_observables(lambda, kBT, c.quadrature);
        const double coh = tfim::one_site_coherence(tfim::TfimPoint::gibbs(lambda, kBT), c.quadrature);
        const double d = discord::ising_thermal_discord(lambda, kBT, c.quadrature);
        t.columns = {"lambda", "kBT", "sx", "sz", "gxx", "gyy", "gzz", "coherence", "discord"};
        t.rows.push_back({lambda, kBT, o.sx, o.sz, o.gxx, o.gyy, o.gzz, coh, d});
      } else {
        const auto p = kind == tfim::StateKind::SymmetryBroken ? tfim::TfimPoint::symmetry_broken(lambda)
                                                               : tfim::TfimPoint::thermal_ground(lambda);
        const auto e = tfim::one_site_expectations(p, c.quadrature);
        t.columns = {"lambda", "sx", "sy", "sz", "coherence"};
        t.rows.push_back({lambda, e.x, e.y, e.z, tfim::one_site_coherence(p, c.quadrature)});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      numerical_failure(point_name("lambda", lambda), e.what());
    }
  }
  emit(header(c, {}), t, c.format, c.output, out);
  return 0;
}

void write_fit_sidecar(const RunConfig& c, const scan::CrossoverFit& fit, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["format_version"] = kFormatVersion;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header(c, {})) meta[k] = v;
  doc["metadata"] = meta;
  doc["fit"] = {{"model", "continuous two-segment linear lambda_M(kBT)"},
                {"slope", fit.slope},
                {"intercept", fit.intercept},
                {"knee_kBT", fit.knee_kBT},
                {"slope_above", fit.slope_above},
                {"fit_residual", fit.fit_residual}};
  doc["reference_line"] = {{"lambda_c", tfim::kCriticalLambda}, {"slope", 0.5}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << doc.dump(2) << '\n';
}

Metadata fit_metadata(const scan::CrossoverFit& fit) {
  return {{"result.fit_slope", fmt(fit.slope)},
          {"result.fit_intercept", fmt(fit.intercept)},
          {"result.fit_knee_kBT", fmt(fit.knee_kBT)},
          {"result.fit_slope_above", fmt(fit.slope_above)},
          {"result.fit_residual", fmt(fit.fit_residual)}};
}

Table locus_table(const std::vector<scan::LocusPoint>& locus) {
  Table t;
  t.columns = {"kBT", "lambda_M", "crossover_deviation"};
  for (const auto& p : locus) {
    t.rows.push_back({p.kBT, p.lambda_M, p.kBT - 2.0 * (p.lambda_M - tfim::kCriticalLambda)});
  }
  return t;
}

scan::TfimLocusSpec locus_spec(const Range& r, double diff_step, const quad::QuadratureSpec& q) {
  scan::TfimLocusSpec s;
  s.lambda_min = r.min;
  s.lambda_max = r.max;
  s.step = r.step;
  s.diff_step = diff_step;
  s.quadrature = q;
  return s;
}

int cmd_locus(const RunConfig& c, std::ostream& out) {
  const auto temps = parse_values(c.kbt_or_default());
  const Range r = parse_range(c.lambda_or_default());
  const auto locus = scan::tfim_chi_locus(temps, locus_spec(r, c.diff_step, c.quadrature));
  Metadata extra;
  std::optional<scan::CrossoverFit> fit;
  if (c.fit) {
    fit = scan::fit_crossover(locus);
    extra = fit_metadata(*fit);
  }
  emit(header(c, extra), locus_table(locus), c.format, c.output, out);
  if (fit && c.output != "-") write_fit_sidecar(c, *fit, c.output + ".fit.json");
  return 0;
}

discord::DiscordOptions discord_options(const RunConfig& c) {
  discord::DiscordOptions o;
  o.verify = c.verify;
  o.angle_grid_n = c.angle_grid;
  return o;
}

Table discord_sweep_table(const std::vector<double>& temps, const std::vector<double>& lambdas,
                          const quad::QuadratureSpec& q, const discord::DiscordOptions& opts) {
  const std::size_t n = temps.size() * lambdas.size();
  std::vector<double> values(n);
  std::vector<std::string> errors(n);
  parallel::parallel_for(n, [&](std::size_t i) {
    const double kBT = temps[i / lambdas.size()];
    const double lambda = lambdas[i % lambdas.size()];
    try {
      values[i] = discord::ising_thermal_discord(lambda, kBT, q, opts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  Table t;
  t.columns = {"kBT", "lambda", "discord"};
  for (std::size_t i = 0; i < n; ++i) {
    const double kBT = temps[i / lambdas.size()];
    const double lambda = lambdas[i % lambdas.size()];
    if (!errors[i].empty()) {
      numerical_failure("kBT = " + fmt(kBT) + ", lambda = " + fmt(lambda), errors[i]);
    }
    t.rows.push_back({kBT, lambda, values[i]});
  }
  return t;
}

Table discord_locus_table(const std::vector<double>& temps, const Range& r, const quad::QuadratureSpec& q,
                          const discord::DiscordOptions& opts) {
  discord::LocusOptions lo;
  lo.lambda_min = r.min;
  lo.lambda_max = r.max;
  lo.lambda_step = r.step;
  lo.quadrature = q;
  lo.discord = opts;
  const auto maxima = discord::discord_max_locus(temps, lo);
  Table t;
  t.columns = {"kBT", "lambda_at_max", "discord_max", "out_of_range", "tie"};
  for (const auto& m : maxima) t.rows.push_back({m.kBT, m.lambda_at_max, m.discord_max, m.out_of_range, m.tie});
  return t;
}

int cmd_discord(const RunConfig& c, std::ostream& out) {
  const auto temps = parse_values(c.kbt_or_default());
  const Range r = parse_range(c.lambda_or_default());
  const auto opts = discord_options(c);
  const Table t = c.discord_locus ? discord_locus_table(temps, r, c.quadrature, opts)
                                  : discord_sweep_table(temps, optimize::uniform_grid(r.min, r.max, r.step),
                                                        c.quadrature, opts);
  emit(header(c, {}), t, c.format, c.output, out);
  return 0;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ed::ChainSpec spec;
  spec.n_sites = c.n_sites;
  spec.model = c.model == ModelName::Xx ? ed::Model::Xx : ed::Model::Tfim;
  spec.lambda = parse_single(c.lambda, "--lambda");
  spec.kBT = c.kbt.empty() ? 0.0 : parse_single(c.kbt, "--kbt");
  spec.boundary = c.boundary;
  spec.convention = c.convention_or_default();
  const ed::ChainObservables e = ed::gibbs_observables(spec);

  struct Row {
    const char* name;
    double ed;
    double formula;
    bool magnitude;  // compare |values|
  };
  std::vector<Row> rows;
  if (spec.model == ed::Model::Tfim) {
    // H = -l zz - x equals l (-zz - x / l): field 1/l at temperature kBT/l.
    const bool coupling = spec.convention == tfim::Convention::CouplingOverField;
    const double field = coupling ? 1.0 / spec.lambda : spec.lambda;
    const double temp = coupling ? spec.kBT / spec.lambda : spec.kBT;
    const auto o = tfim::thermal_observables(field, temp, c.quadrature);
    rows = {{"sx", e.sx, o.sx, false},
            {"sz", e.sz, o.sz, false},
            {"gxx", e.gxx, o.gxx, false},
            {"gyy", e.gyy, o.gyy, false},
            {"gzz", e.gzz, o.gzz, false}};
  } else {
    const auto x = xx::xx_expectations({spec.lambda});
    // The closed form quotes <xx> with the opposite sign to the chain's
    // ground state; only the magnitude is compared.
    rows = {{"sz", e.sz, x(3, 0), false},
            {"gzz", e.gzz, x(3, 3), false},
            {"gxx", e.gxx, x(1, 1), true},
            {"gyy", e.gyy, x(2, 2), true}};
  }
  Table t;
  t.columns = {"quantity", "ed", "formula", "deviation", "exceeds_tolerance"};
  double worst = 0.0;
  std::vector<std::string> flagged;
  for (const Row& r : rows) {
    const double dev = r.magnitude ? std::abs(std::abs(r.ed) - std::abs(r.formula)) : std::abs(r.ed - r.formula);
    const bool bad = dev > kOracleTol;
    worst = std::max(worst, dev);
    if (bad) flagged.emplace_back(r.name);
    t.rows.push_back({std::string(r.name), r.ed, r.formula, dev, bad});
  }
  const Metadata extra{{"info.tolerance", fmt(kOracleTol)},
                       {"info.compare", spec.model == ed::Model::Xx ? "magnitude for gxx,gyy" : "signed"},
                       {"result.max_deviation", fmt(worst)}};
  emit(header(c, extra), t, c.format, c.output, out);
  for (const auto& name : flagged) {
    err << "warning: " << name << " deviates from the closed form by more than " << fmt(kOracleTol) << '\n';
  }
  return 0;
}

// ----------------------------------------------------------------------------
// Figures

struct FigureData {
  Table table;
  Metadata grid;
};

constexpr double kFigDiff = 1e-4;

FigureData figure1(const quad::QuadratureSpec& q) {
  const Range r{0.0, 2.0, 1e-3};
  Family sb;
  sb.f = scan::family::tfim_symmetry_broken(q);
  sb.label = "tfim-symmetry_broken";
  Family tg;
  tg.f = scan::family::tfim_thermal_ground(q);
  tg.label = "tfim-thermal_ground";
  const auto csb = run_sweep(sb, r, kFigDiff, false, false);
  const auto ctg = run_sweep(tg, r, kFigDiff, false, false);
  for (const auto* cv : {&csb, &ctg}) {
    if (!cv->failures.empty()) numerical_failure("fig1, " + point_name("lambda", cv->failures.front().param),
                                                 cv->failures.front().message);
  }
  FigureData d;
  d.table.columns = {"lambda", "C_symbroken", "C_thermalground", "chi_thermalground"};
  for (std::size_t i = 0; i < csb.samples.size(); ++i) {
    d.table.rows.push_back({csb.samples[i].param, csb.samples[i].coherence, ctg.samples[i].coherence,
                            ctg.samples[i].chi});
  }
  d.grid = {{"grid.lambda", "0:2:0.001"}, {"grid.diff-step", fmt(kFigDiff)},
            {"info.convention", "coupling_over_field"}};
  return d;
}

FigureData figure2() {
  const Range r{0.0, 2.0, 1e-3};
  Family with;
  with.f = scan::family::xx_chain(xx::YyTreatment::FromSymmetry);
  with.label = "xx";
  const auto cw = run_sweep(with, r, kFigDiff, false, false);
  if (!cw.failures.empty()) {
    numerical_failure("fig2, " + point_name("lambda", cw.failures.front().param), cw.failures.front().message);
  }
  const auto omit = scan::family::xx_chain(xx::YyTreatment::Omit);
  FigureData d;
  d.table.columns = {"lambda", "C", "chi", "C_no_yy"};
  for (const auto& s : cw.samples) {
    double c_no = std::numeric_limits<double>::quiet_NaN();
    try {
      c_no = omit(s.param);
    } catch (const Error&) {
      // The table without <yy> is not a state here.
    }
    d.table.rows.push_back({s.param, s.coherence, s.chi, c_no});
  }
  d.grid = {{"grid.lambda", "0:2:0.001"}, {"grid.diff-step", fmt(kFigDiff)},
            {"info.C_no_yy", "nan where the table without yy is not a density matrix"}};
  return d;
}

FigureData figure3(const quad::QuadratureSpec& q) {
  const Range r{0.0, 1.0, 1e-3};
  Family fam;
  fam.f = scan::family::kitaev_path(q);
  fam.label = "kitaev-path";
  fam.param = "jx";
  fam.domain_max = 1.0;
  const auto cv = run_sweep(fam, r, 1e-3, false, false);
  if (!cv.failures.empty()) {
    numerical_failure("fig3, " + point_name("jx", cv.failures.front().param), cv.failures.front().message);
  }
  std::vector<double> gaps(cv.samples.size());
  parallel::parallel_for(cv.samples.size(), [&](std::size_t i) {
    gaps[i] = kitaev::gap(kitaev::KitaevPoint::on_path(cv.samples[i].param));
  });
  FigureData d;
  d.table.columns = {"jx", "C", "chi", "gxx", "gap"};
  for (std::size_t i = 0; i < cv.samples.size(); ++i) {
    const auto& s = cv.samples[i];
    const auto p = kitaev::KitaevPoint::on_path(s.param);
    d.table.rows.push_back({s.param, s.coherence, s.chi, kitaev::xx_link_correlator(p, q), gaps[i]});
  }
  d.grid = {{"grid.jx", "0:1:0.001"}, {"grid.diff-step", "0.001"}, {"info.path", "jy=jz=(1-jx)/2"}};
  return d;
}

const std::vector<double> kFig4Temps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
const std::vector<double> kFig5Temps{0.1, 0.3, 0.5, 0.7, 1.0};

FigureData figure4(const quad::QuadratureSpec& q) {
  const Range r{0.0, 2.0, 5e-3};
  FigureData d;
  d.table.columns = {"kBT", "lambda", "coherence", "chi"};
  for (double kBT : kFig4Temps) {
    Family fam;
    fam.f = scan::family::tfim_gibbs(kBT, q);
    fam.label = "tfim-gibbs";
    fam.kBT = kBT;
    const auto cv = run_sweep(fam, r, kFigDiff, true, false);
    if (!cv.failures.empty()) {
      numerical_failure("fig4, kBT = " + fmt(kBT) + ", " + point_name("lambda", cv.failures.front().param),
                        cv.failures.front().message);
    }
    for (const auto& s : cv.samples) d.table.rows.push_back({kBT, s.param, s.coherence, s.chi});
  }
  d.grid = {{"grid.kBT", "0.1,0.2,0.3,0.4,0.5,0.6"}, {"grid.lambda", "0:2:0.005"},
            {"grid.diff-step", fmt(kFigDiff)}, {"grid.richardson", "true"},
            {"info.convention", "field_over_coupling"}};
  return d;
}

FigureData figure5(const quad::QuadratureSpec& q) {
  FigureData d;
  d.table = discord_sweep_table(kFig5Temps, optimize::uniform_grid(0.0, 2.0, 0.01), q, {});
  d.grid = {{"grid.kBT", "0.1,0.3,0.5,0.7,1"}, {"grid.lambda", "0:2:0.01"},
            {"info.convention", "field_over_coupling"}};
  return d;
}

FigureData figure6(const quad::QuadratureSpec& q) {
  FigureData d;
  d.table = discord_locus_table(parse_values("0.05:0.7:0.05"), {0.0, 2.0, 0.01}, q, {});
  d.grid = {{"grid.kBT", "0.05:0.7:0.05"}, {"grid.lambda", "0:2:0.01"}, {"grid.refine-tol", "1e-05"}};
  return d;
}

int cmd_figures(const RunConfig& c, std::ostream& out) {
  const std::filesystem::path dir = c.output == "-" ? "." : c.output;
  std::filesystem::create_directories(dir);
  const std::vector<std::string> which = c.which == "all" ? kFigures : std::vector<std::string>{c.which};
  const char* ext = c.format == Format::Csv ? ".csv" : ".json";
  for (const auto& name : which) {
    FigureData d;
    if (name == "fig1") d = figure1(c.quadrature);
    else if (name == "fig2") d = figure2();
    else if (name == "fig3") d = figure3(c.quadrature);
    else if (name == "fig4") d = figure4(c.quadrature);
    else if (name == "fig5") d = figure5(c.quadrature);
    else d = figure6(c.quadrature);
    RunConfig single = c;
    single.which = name;
    emit(header(single, d.grid), d.table, c.format, (dir / (name + ext)).string(), out);
    if (name == "fig4") {
      // Right inset: the chi-maximum locus and its two-segment fit.
      const auto locus = scan::tfim_chi_locus(parse_values("0.05:0.6:0.05"),
                                              locus_spec({0.5, 2.0, 1e-2}, kFigDiff, c.quadrature));
      const auto fit = scan::fit_crossover(locus);
      Metadata grid{{"grid.kBT", "0.05:0.6:0.05"}, {"grid.lambda", "0.5:2:0.01"},
                    {"grid.diff-step", fmt(kFigDiff)}};
      for (auto& kv : fit_metadata(fit)) grid.push_back(std::move(kv));
      const auto path = (dir / ("fig4_locus" + std::string(ext))).string();
      emit(header(single, grid), locus_table(locus), c.format, path, out);
      write_fit_sidecar(single, fit, path + ".fit.json");
    }
    out << "wrote " << (dir / (name + ext)).string() << '\n';
  }
  return 0;
}

// ----------------------------------------------------------------------------
// Argument parsing

struct Bindings {
  std::string model;
  std::string state;
  std::string convention;
  std::string boundary = "periodic";
  std::string format = "csv";
  bool no_fit = false;
};

void add_quadrature(CLI::App* sub, RunConfig& c) {
  sub->add_option("--abs-tol", c.quadrature.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  sub->add_option("--rel-tol", c.quadrature.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  sub->add_option("--max-subdivisions", c.quadrature.max_subdivisions, "Quadrature subdivision cap")
      ->capture_default_str();
}

void add_output(CLI::App* sub, RunConfig& c, Bindings& b, const char* help = "Output file, - for stdout") {
  sub->add_option("-o,--output", c.output, help)->capture_default_str();
  sub->add_option("--format", b.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

CLI::Option* add_model(CLI::App* sub, Bindings& b, std::vector<std::string> allowed) {
  return sub->add_option("--model", b.model, "Model")->check(CLI::IsMember(allowed));
}

void add_tfim_state(CLI::App* sub, Bindings& b) {
  sub->add_option("--state", b.state, "symmetry_broken, thermal_ground or gibbs (tfim)")
      ->check(CLI::IsMember({"symmetry_broken", "thermal_ground", "gibbs"}));
  sub->add_option("--convention", b.convention, "coupling_over_field (lambda = J/B) or field_over_coupling")
      ->check(CLI::IsMember({"coupling_over_field", "field_over_coupling"}));
}

std::unique_ptr<CLI::App> build_app(RunConfig& c, Bindings& b) {
  auto app = std::make_unique<CLI::App>("Coherence-susceptibility probes of quantum phase transitions", "cohprobe");
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->require_subcommand(1);
  app->set_version_flag("--version", COHPROBE_VERSION);
  app->add_option("--config", "key=value file, e.g. the header of an earlier output");

  auto* scan = app->add_subcommand("scan", "Coherence and chi over a parameter range");
  add_model(scan, b, {"tfim", "xx", "kitaev"});
  add_tfim_state(scan, b);
  scan->add_option("--lambda", c.lambda, "Range min:max:step (jx for kitaev)");
  scan->add_option("--kbt", c.kbt, "Temperature (tfim gibbs)");
  scan->add_option("--diff-step", c.diff_step, "Finite-difference step")->capture_default_str();
  scan->add_flag("--richardson", c.richardson, "Richardson-extrapolated derivative");
  scan->add_flag("--refine", c.refine, "Add fine samples around the extremal chi");
  scan->add_flag("--xx-no-yy", c.xx_no_yy, "XX: leave <yy> out of the two-site table");
  add_quadrature(scan, c);
  add_output(scan, c, b);

  auto* point = app->add_subcommand("point", "Observables at a single parameter point");
  add_model(point, b, {"tfim", "xx", "kitaev"});
  add_tfim_state(point, b);
  point->add_option("--lambda", c.lambda, "Parameter (jx on the kitaev path)");
  point->add_option("--kbt", c.kbt, "Temperature (tfim gibbs)");
  point->add_option("--couplings", c.couplings, "Kitaev jx,jy,jz summing to 1");
  point->add_flag("--xx-no-yy", c.xx_no_yy, "XX: leave <yy> out of the two-site table");
  add_quadrature(point, c);
  add_output(point, c, b);

  auto* locus = app->add_subcommand("locus", "Location of the chi maximum versus temperature");
  add_model(locus, b, {"tfim"});
  locus->add_option("--lambda", c.lambda, "Sweep range min:max:step");
  locus->add_option("--kbt", c.kbt, "Temperatures, range or list");
  locus->add_option("--diff-step", c.diff_step, "Finite-difference step")->capture_default_str();
  locus->add_flag("--no-fit", b.no_fit, "Skip the two-segment fit");
  add_quadrature(locus, c);
  add_output(locus, c, b, "Output file, - for stdout; the fit goes to <output>.fit.json");

  auto* disc = app->add_subcommand("discord", "Discord of nearest-neighbour TFIM Gibbs states");
  add_model(disc, b, {"tfim"});
  disc->add_option("--lambda", c.lambda, "Range min:max:step");
  disc->add_option("--kbt", c.kbt, "Temperatures, range or list");
  disc->add_flag("--locus", c.discord_locus, "Emit the per-temperature maximum instead of the sweep");
  disc->add_flag("--verify", c.verify, "Cross-check every value against brute-force minimization");
  disc->add_option("--angle-grid", c.angle_grid, "Brute-force angle grid size")->capture_default_str();
  add_quadrature(disc, c);
  add_output(disc, c, b);

  auto* oracle = app->add_subcommand("oracle", "Exact diagonalization versus the closed forms");
  add_model(oracle, b, {"tfim", "xx"});
  oracle->add_option("--n", c.n_sites, "Chain length")->capture_default_str();
  oracle->add_option("--lambda", c.lambda, "Parameter");
  oracle->add_option("--kbt", c.kbt, "Temperature (0 or empty: ground state)");
  oracle->add_option("--boundary", b.boundary, "periodic or open")
      ->check(CLI::IsMember({"periodic", "open"}))
      ->capture_default_str();
  oracle->add_option("--convention", b.convention, "tfim: coupling_over_field or field_over_coupling")
      ->check(CLI::IsMember({"coupling_over_field", "field_over_coupling"}));
  add_quadrature(oracle, c);
  add_output(oracle, c, b);

  auto* figs = app->add_subcommand("figures", "All figure datasets");
  figs->add_option("--which", c.which, "fig1 ... fig6 or all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "all"}))
      ->capture_default_str();
  add_quadrature(figs, c);
  add_output(figs, c, b, "Output directory");
  return app;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(a, e - a + 1);
}

// Reads key=value lines. '#' lines are metadata: unknown keys there are
// skipped. The first other line without '=' ends the block (a CSV header).
// Metadata keys come back prefixed with '#'.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(f, line)) {
    std::string s = trim(line);
    if (s.empty()) continue;
    bool meta = false;
    if (s.front() == '#') {
      meta = true;
      s = trim(s.substr(1));
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      if (meta) continue;
      break;
    }
    out.emplace_back((meta ? "#" : "") + trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return out;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Scan: return "scan";
    case Command::Point: return "point";
    case Command::Locus: return "locus";
    case Command::Discord: return "discord";
    case Command::Oracle: return "oracle";
    case Command::Figures: return "figures";
  }
  return "?";
}

const char* to_string(ModelName m) noexcept {
  switch (m) {
    case ModelName::Tfim: return "tfim";
    case ModelName::Xx: return "xx";
    case ModelName::Kitaev: return "kitaev";
  }
  return "?";
}

std::vector<double> parse_values(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError("empty value list");
  if (t.find(':') != std::string::npos) {
    const Range r = parse_range(t);
    return optimize::uniform_grid(r.min, r.max, r.step);
  }
  std::vector<double> out;
  std::string_view rest(t);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

tfim::StateKind RunConfig::state_or_default() const {
  return state.value_or(tfim::StateKind::ThermalGround);
}

tfim::Convention RunConfig::convention_or_default() const {
  if (convention) return *convention;
  if (command == Command::Oracle || command == Command::Locus || command == Command::Discord) {
    return tfim::Convention::FieldOverCoupling;
  }
  return state_or_default() == tfim::StateKind::Gibbs ? tfim::Convention::FieldOverCoupling
                                                      : tfim::Convention::CouplingOverField;
}

std::string RunConfig::lambda_or_default() const {
  if (!lambda.empty()) return lambda;
  switch (command) {
    case Command::Scan: return model == ModelName::Kitaev ? "0:1:0.001" : "0:2:0.001";
    case Command::Locus: return "0.5:2:0.01";
    case Command::Discord: return "0:2:0.01";
    default: return {};
  }
}

std::string RunConfig::kbt_or_default() const {
  if (!kbt.empty()) return kbt;
  switch (command) {
    case Command::Locus: return "0.05:0.6:0.05";
    case Command::Discord: return discord_locus ? "0.05:0.7:0.05" : "0.1,0.3,0.5";
    default: return {};
  }
}

void RunConfig::validate() const {
  try {
    quadrature.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const bool tfim = model == ModelName::Tfim;
  if (!tfim && (state || convention) && command != Command::Figures) {
    throw UsageError("--state and --convention apply to the tfim model only");
  }
  if (xx_no_yy && model != ModelName::Xx) throw UsageError("--xx-no-yy applies to the xx model only");
  if (!couplings.empty() && (command != Command::Point || model != ModelName::Kitaev)) {
    throw UsageError("--couplings applies to 'point --model kitaev' only");
  }
  if (!(diff_step > 0.0)) throw UsageError("--diff-step must be positive");

  auto check_temps = [&](const std::string& text) {
    for (double t : parse_values(text)) {
      if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("temperatures must be positive and finite");
    }
  };
  auto check_state_temperature = [&] {
    if (tfim && state_or_default() == tfim::StateKind::Gibbs) {
      if (kbt.empty()) throw UsageError("the gibbs state needs --kbt > 0");
      if (!(parse_single(kbt, "--kbt") > 0.0)) throw UsageError("the gibbs state needs --kbt > 0");
    } else if (!kbt.empty()) {
      throw UsageError(tfim ? "ground states take no --kbt; use --state gibbs"
                            : std::string("--kbt is not defined for the ") + cli::to_string(model) + " model");
    }
    if (tfim && convention && *convention != convention_or_default()) {
      // The closed forms are stated in one convention per state kind.
      throw UsageError(std::string("the ") + tfim::to_string(state_or_default()) + " state is defined with --convention " +
                       (state_or_default() == tfim::StateKind::Gibbs ? "field_over_coupling" : "coupling_over_field"));
    }
  };

  switch (command) {
    case Command::Scan: {
      check_state_temperature();
      const Range r = parse_range(lambda_or_default());
      if (diff_step > r.step) throw UsageError("--diff-step must not exceed the grid step");
      if (r.min < 0.0) throw UsageError("the parameter range must be non-negative");
      if (model == ModelName::Kitaev && r.max > 1.0) throw UsageError("the kitaev path needs jx in [0, 1]");
      break;
    }
    case Command::Point:
      check_state_temperature();
      if (couplings.empty() && lambda.empty()) throw UsageError("point needs --lambda");
      if (!lambda.empty()) parse_single(lambda, "--lambda");
      break;
    case Command::Locus: {
      if (!tfim) throw UsageError("locus supports the tfim model only");
      check_temps(kbt_or_default());
      const Range r = parse_range(lambda_or_default());
      if (diff_step > r.step) throw UsageError("--diff-step must not exceed the grid step");
      if (r.min - diff_step < 0.0) throw UsageError("the locus range must start above --diff-step");
      break;
    }
    case Command::Discord:
      if (!tfim) throw UsageError("discord supports the tfim model only");
      check_temps(kbt_or_default());
      if (parse_range(lambda_or_default()).min < 0.0) throw UsageError("lambda must be non-negative");
      if (angle_grid < 181) throw UsageError("--angle-grid must be at least 181");
      break;
    case Command::Oracle: {
      if (model == ModelName::Kitaev) throw UsageError("oracle supports tfim and xx");
      if (lambda.empty()) throw UsageError("oracle needs --lambda");
      const double l = parse_single(lambda, "--lambda");
      const double t = kbt.empty() ? 0.0 : parse_single(kbt, "--kbt");
      if (tfim && !(t > 0.0)) throw UsageError("the tfim oracle compares Gibbs states and needs --kbt > 0");
      if (!tfim && t != 0.0) throw UsageError("the xx closed forms are ground-state results; use --kbt 0");
      if (tfim && convention_or_default() == tfim::Convention::CouplingOverField && !(l > 0.0)) {
        throw UsageError("coupling_over_field needs lambda > 0");
      }
      if (!tfim && convention) throw UsageError("--convention applies to the tfim model only");
      break;
    }
    case Command::Figures:
      break;
  }
}

Metadata config_entries(const RunConfig& c) {
  Metadata m{{"command", to_string(c.command)}};
  auto add = [&](const char* k, std::string v) { m.emplace_back(k, std::move(v)); };
  auto flag = [&](const char* k, bool v) { add(k, v ? "true" : "false"); };
  auto quadrature = [&] {
    add("abs-tol", fmt(c.quadrature.abs_tol));
    add("rel-tol", fmt(c.quadrature.rel_tol));
    add("max-subdivisions", std::to_string(c.quadrature.max_subdivisions));
  };
  const bool tfim = c.model == ModelName::Tfim;
  switch (c.command) {
    case Command::Scan:
    case Command::Point:
      add("model", to_string(c.model));
      if (tfim) {
        add("state", tfim::to_string(c.state_or_default()));
        add("convention", tfim::to_string(c.convention_or_default()));
      }
      if (!c.lambda_or_default().empty()) add("lambda", c.lambda_or_default());
      if (!c.kbt.empty()) add("kbt", c.kbt);
      if (!c.couplings.empty()) add("couplings", c.couplings);
      if (c.command == Command::Scan) {
        add("diff-step", fmt(c.diff_step));
        flag("richardson", c.richardson);
        flag("refine", c.refine);
      }
      if (c.model == ModelName::Xx) flag("xx-no-yy", c.xx_no_yy);
      break;
    case Command::Locus:
      add("model", "tfim");
      add("convention", tfim::to_string(tfim::Convention::FieldOverCoupling));
      add("lambda", c.lambda_or_default());
      add("kbt", c.kbt_or_default());
      add("diff-step", fmt(c.diff_step));
      flag("no-fit", !c.fit);
      break;
    case Command::Discord:
      add("model", "tfim");
      add("lambda", c.lambda_or_default());
      add("kbt", c.kbt_or_default());
      flag("locus", c.discord_locus);
      flag("verify", c.verify);
      add("angle-grid", std::to_string(c.angle_grid));
      break;
    case Command::Oracle:
      add("model", to_string(c.model));
      add("n", std::to_string(c.n_sites));
      add("boundary", c.boundary == ed::Boundary::Periodic ? "periodic" : "open");
      if (tfim) add("convention", tfim::to_string(c.convention_or_default()));
      add("lambda", c.lambda);
      add("kbt", c.kbt.empty() ? "0" : c.kbt);
      break;
    case Command::Figures:
      add("which", c.which);
      break;
  }
  quadrature();
  add("format", c.format == Format::Csv ? "csv" : "json");
  return m;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  std::vector<std::string> user(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < user.size();) {
    if (user[i] == "--config") {
      if (i + 1 >= user.size()) throw UsageError("--config needs a file");
      config_path = user[i + 1];
      user.erase(user.begin() + static_cast<std::ptrdiff_t>(i), user.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (user[i].rfind("--config=", 0) == 0) {
      config_path = user[i].substr(9);
      user.erase(user.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }

  RunConfig c;
  Bindings b;
  auto app = build_app(c, b);

  std::vector<std::string> args{argv[0]};
  if (!config_path.empty()) {
    const auto entries = read_config(config_path);
    std::string command;
    std::vector<std::pair<std::string, std::string>> opts;
    for (const auto& [raw, v] : entries) {
      const bool meta = raw.front() == '#';
      const std::string key = meta ? raw.substr(1) : raw;
      if (key == "command") {
        command = v;
      } else {
        opts.emplace_back(key, v);
        if (!meta) opts.back().first = "!" + key;  // must be known
      }
    }
    auto it = std::find_if(user.begin(), user.end(), [](const std::string& s) { return kCommands.count(s) > 0; });
    if (it != user.end()) {
      command = *it;
      user.erase(it);
    }
    if (command.empty()) throw UsageError("config file names no command and none was given");
    if (!kCommands.count(command)) throw UsageError("unknown command '" + command + "' in config file");
    CLI::App* sub = app->get_subcommand(command);
    args.push_back(command);
    for (auto [key, v] : opts) {
      const bool required = key.front() == '!';
      if (required) key = key.substr(1);
      if (!sub->get_option_no_throw("--" + key)) {
        if (required) throw UsageError("unknown key '" + key + "' in config file");
        continue;
      }
      if (kFlagKeys.count(key)) {
        if (v == "true") args.push_back("--" + key);
        else if (v != "false") throw UsageError("flag '" + key + "' needs true or false");
      } else {
        args.push_back("--" + key);
        args.push_back(v);
      }
    }
  }
  args.insert(args.end(), user.begin(), user.end());

  std::vector<const char*> cargs;
  for (const auto& s : args) cargs.push_back(s.c_str());
  try {
    app->parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << COHPROBE_VERSION << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* sub = app->get_subcommands().front();
  if (sub->get_subcommands().size() > 0) throw UsageError("one command at a time");
  c.command = kCommands.at(sub->get_name());
  if (!b.model.empty()) c.model = kModels.at(b.model);
  if (!b.state.empty()) c.state = kStates.at(b.state);
  if (!b.convention.empty()) c.convention = kConventions.at(b.convention);
  c.boundary = kBoundaries.at(b.boundary);
  c.format = kFormats.at(b.format);
  c.fit = !b.no_fit;
  c.validate();
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.validate();
    switch (c.command) {
      case Command::Scan: return cmd_scan(c, out);
      case Command::Point: return cmd_point(c, out);
      case Command::Locus: return cmd_locus(c, out);
      case Command::Discord: return cmd_discord(c, out);
      case Command::Oracle: return cmd_oracle(c, out, err);
      case Command::Figures: return cmd_figures(c, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) {
      err << "usage error: " << e.what() << '\n';
      return 2;
    }
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> c;
  try {
    c = parse_args(argc, argv, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun 'cohprobe --help' for usage\n";
    return 2;
  }
  if (!c) return 0;
  return run(*c, out, err);
}

}  // namespace cohprobe::cli
