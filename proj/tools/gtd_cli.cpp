// Command-line workbench: curvature grid scans, geodesic shooting sweeps,
// singular-locus roots, and Legendre-invariance verdicts, emitted as
// reproducible CSV/JSON/SVG plus a checksummed run manifest.
//
// Reproducibility contract: identical resolved configuration produces
// byte-identical CSV, JSON, and SVG outputs. The manifest records
// wall-clock duration and is therefore the one file allowed to differ.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <gtd/contact.hpp>
#include <gtd/errors.hpp>
#include <gtd/geodesic.hpp>
#include <gtd/geometry.hpp>
#include <gtd/metric.hpp>
#include <gtd/vdw.hpp>
#include <gtd/version.hpp>

#include "sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- numbers

// Shortest decimal that round-trips the double; grid CSV cells.
std::string fmt_shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Scientific with 17 significant digits; trajectory CSV rows.
std::string fmt_sci17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

// ------------------------------------------------------------------ ranges

// "lo:hi:n" with n points spread inclusively; n=1 collapses to lo, n=0 is
// an empty sweep.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::string text;
};

Range parse_range(const std::string& text) {
  const auto fail = [&text]() {
    return gtd::Error("expected a range of the form lo:hi:n, got '" + text +
                      "'");
  };
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw fail();

  Range r;
  r.text = text;
  const auto number = [&](std::string_view s, auto& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw fail();
  };
  const std::string_view sv(text);
  number(sv.substr(0, c1), r.lo);
  number(sv.substr(c1 + 1, c2 - c1 - 1), r.hi);
  number(sv.substr(c2 + 1), r.n);
  return r;
}

std::vector<double> linspace(const Range& r) {
  std::vector<double> out;
  out.reserve(r.n);
  if (r.n == 1) {
    out.push_back(r.lo);
    return out;
  }
  for (std::size_t i = 0; i < r.n; ++i)
    out.push_back(r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                             static_cast<double>(r.n - 1));
  return out;
}

// ------------------------------------------------- config and flag merging

// A single JSON object whose keys mirror the long flag names (hyphens as
// underscores). Flags win over config values; config wins over defaults.
struct Settings {
  json cfg = json::object();

  void load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw gtd::Error("cannot read config file '" + path + "'");
    try {
      f >> cfg;
    } catch (const std::exception& ex) {
      throw gtd::Error("config file '" + path + "' is not valid JSON: " +
                       ex.what());
    }
    if (!cfg.is_object())
      throw gtd::Error("config root must be a JSON object");
    static const std::set<std::string> known = {
        "a",       "b",        "lambda",  "out",      "formats", "u_range",
        "v_range", "u0_range", "v0",      "du0",      "dv0",     "rtol",
        "atol",    "tau_max",  "pressure", "metric",  "trials",  "seed"};
    for (const auto& item : cfg.items())
      if (known.count(item.key()) == 0)
        throw gtd::Error("unknown config key '" + item.key() + "'");
  }

  // Flag value when the flag was given, else the config value, else the
  // flag variable's default.
  template <class T>
  T pick(const CLI::Option* opt, const T& flag_value, const char* key) const {
    if (opt->count() > 0) return flag_value;
    if (cfg.contains(key)) {
      try {
        return cfg.at(key).get<T>();
      } catch (const std::exception&) {
        throw gtd::Error(std::string("config key '") + key +
                         "' has the wrong type");
      }
    }
    return flag_value;
  }
};

// ------------------------------------------------------ output + manifest

struct RunContext {
  std::string command;
  fs::path out_dir;
  json config = json::object();  // the resolved values this run used
  json outputs = json::array();
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();

  void write_raw(const std::string& name, const std::string& bytes) const {
    const fs::path p = out_dir / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw gtd::Error("cannot open output file '" + p.string() + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw gtd::Error("write failed for '" + p.string() + "'");
  }

  void emit(const std::string& name, const std::string& bytes) {
    write_raw(name, bytes);
    outputs.push_back({{"file", name},
                       {"sha256", gtdcli::sha256_hex(bytes)},
                       {"bytes", bytes.size()}});
  }

  void write_manifest() const {
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const json manifest = {{"version", gtd::version},
                           {"command", command},
                           {"config", config},
                           {"duration_seconds", duration},
                           {"outputs", outputs}};
    write_raw("manifest.json", manifest.dump(2) + "\n");
  }
};

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// -------------------------------------------------------------- common flags

struct CommonFlags {
  std::string config_path;
  std::string out = ".";
  double a = 1.0;
  double b = 1.0;
  double lambda = 1.0;
  std::vector<std::string> formats;

  CLI::Option* out_opt = nullptr;
  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--config", c.config_path,
                  "JSON config file; explicit flags override its values");
  c.out_opt = cmd->add_option("--out", c.out,
                              "Output directory, created if missing");
  c.a_opt = cmd->add_option("--a", c.a, "Interaction constant a");
  c.b_opt = cmd->add_option("--b", c.b, "Covolume b");
  c.lambda_opt =
      cmd->add_option("--lambda", c.lambda, "Metric constant lambda");
  c.format_opt =
      cmd->add_option("--format", c.formats,
                      "Output format (csv, json, svg); repeatable")
          ->check(CLI::IsMember({"csv", "json", "svg"}));
}

struct Common {
  gtd::VdwParams params;
  std::set<std::string> formats;  // intersected with what the command emits
};

Common resolve_common(const Settings& s, const CommonFlags& c,
                      RunContext& ctx,
                      const std::set<std::string>& produced,
                      const std::vector<std::string>& default_formats) {
  Common r;
  r.params.a = s.pick(c.a_opt, c.a, "a");
  r.params.b = s.pick(c.b_opt, c.b, "b");
  r.params.lambda = s.pick(c.lambda_opt, c.lambda, "lambda");
  r.params.validate();

  const std::string out = s.pick(c.out_opt, c.out, "out");
  std::vector<std::string> fmts;
  if (c.format_opt->count() > 0)
    fmts = c.formats;
  else if (s.cfg.contains("formats"))
    fmts = s.cfg.at("formats").get<std::vector<std::string>>();
  else
    fmts = default_formats;
  for (const std::string& f : fmts) {
    if (f != "csv" && f != "json" && f != "svg")
      throw gtd::Error("unknown format '" + f + "'");
    if (produced.count(f) > 0) r.formats.insert(f);
  }

  ctx.out_dir = out;
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec)
    throw gtd::Error("cannot create output directory '" + out +
                     "': " + ec.message());

  ctx.config["out"] = out;
  ctx.config["formats"] = std::vector<std::string>(r.formats.begin(),
                                                   r.formats.end());
  return r;
}

void record_params(RunContext& ctx, const gtd::VdwParams& p) {
  ctx.config["a"] = p.a;
  ctx.config["b"] = p.b;
  ctx.config["lambda"] = p.lambda;
}

json params_json(const gtd::VdwParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"lambda", p.lambda}};
}

// ---------------------------------------------------------------- curvature

int cmd_curvature(const Settings& s, const CommonFlags& c,
                  const std::string& u_flag, const CLI::Option* u_opt,
                  const std::string& v_flag, const CLI::Option* v_opt,
                  RunContext& ctx) {
  const Common common =
      resolve_common(s, c, ctx, {"csv", "json"}, {"csv", "json"});
  const Range ur = parse_range(s.pick(u_opt, u_flag, "u_range"));
  const Range vr = parse_range(s.pick(v_opt, v_flag, "v_range"));
  if (ur.n == 0 || vr.n == 0)
    throw gtd::Error("the grid needs at least one point per axis");
  record_params(ctx, common.params);
  ctx.config["u_range"] = ur.text;
  ctx.config["v_range"] = vr.text;

  const std::vector<double> us = linspace(ur);
  const std::vector<double> vs = linspace(vr);
  for (const double U : us)
    for (const double V : vs)
      if (!gtd::state_valid(common.params, {U, V})) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "grid point (U=%g, V=%g) lies outside the valid domain",
                      U, V);
        throw gtd::Error(msg);
      }

  const gtd::MetricField g = gtd::vdw_metric_closed(common.params);
  const gtd::CurvatureField curv = gtd::riemann(g);

  const std::size_t nu = us.size(), nv = vs.size();

  // Reference point for the proximity threshold: the largest denominator
  // magnitude on this grid.
  double ref = 0.0;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      ref = std::max(ref, std::abs(gtd::scalar_denominator_at(
                              curv, {us[i], vs[j]})));

  // Cells straddling a sign change of the locus polynomial sit within one
  // grid spacing of the singular curve; they are flagged regardless of the
  // local curvature value.
  std::vector<int> sgn(nu * nv);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      sgn[i * nv + j] =
          gtd::locus_polynomial(us[i], vs[j], common.params) >= 0.0 ? 1 : -1;
  std::vector<char> flag(nu * nv, 0);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      if (i + 1 < nu && sgn[i * nv + j] != sgn[(i + 1) * nv + j])
        flag[i * nv + j] = flag[(i + 1) * nv + j] = 1;
      if (j + 1 < nv && sgn[i * nv + j] != sgn[i * nv + j + 1])
        flag[i * nv + j] = flag[i * nv + j + 1] = 1;
    }

  std::string csv = "U,V,R\n";
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  std::size_t flagged = 0, regular = 0;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      bool f = flag[i * nv + j] != 0;
      double R = 0.0;
      if (!f) {
        try {
          R = gtd::scalar_curvature_at(curv, {us[i], vs[j]}, ref);
          if (!std::isfinite(R)) f = true;
        } catch (const gtd::SingularProximityError&) {
          f = true;
        }
      }
      if (f) {
        ++flagged;
      } else {
        min_abs = std::min(min_abs, std::abs(R));
        max_abs = std::max(max_abs, std::abs(R));
        ++regular;
      }
      csv += fmt_shortest(us[i]);
      csv += ',';
      csv += fmt_shortest(vs[j]);
      csv += ',';
      csv += f ? "inf" : fmt_shortest(R);
      csv += '\n';
    }

  json summary = {{"command", "curvature"},
                  {"params", params_json(common.params)},
                  {"grid",
                   {{"u_range", ur.text},
                    {"v_range", vr.text},
                    {"cells", nu * nv}}},
                  {"flagged_cells", flagged},
                  {"min_abs_curvature", regular > 0 ? json(min_abs) : json()},
                  {"max_abs_curvature", regular > 0 ? json(max_abs) : json()},
                  {"reference_denominator", ref}};

  if (common.formats.count("csv")) ctx.emit("curvature.csv", csv);
  if (common.formats.count("json"))
    ctx.emit("curvature_summary.json", dump_json(summary));
  return 0;
}

// ---------------------------------------------------------------- geodesics

std::string render_svg(const std::vector<gtd::ShotResult>& results) {
  double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
  double ulo = vlo, uhi = -vlo;
  bool any = false;
  for (const auto& res : results) {
    if (res.error) continue;
    for (const auto& smp : res.trajectory.samples) {
      ulo = std::min(ulo, smp.y[0]);
      uhi = std::max(uhi, smp.y[0]);
      vlo = std::min(vlo, smp.y[1]);
      vhi = std::max(vhi, smp.y[1]);
      any = true;
    }
  }
  if (!any) {
    vlo = ulo = 0.0;
    vhi = uhi = 1.0;
  }
  if (!(vhi > vlo)) {
    vlo -= 0.5;
    vhi += 0.5;
  }
  if (!(uhi > ulo)) {
    ulo -= 0.5;
    uhi += 0.5;
  }
  const double vpad = 0.04 * (vhi - vlo), upad = 0.04 * (uhi - ulo);
  vlo -= vpad;
  vhi += vpad;
  ulo -= upad;
  uhi += upad;

  const double x0 = 80, x1 = 870, y0 = 20, y1 = 580;
  const auto px = [&](double v) {
    return x0 + (v - vlo) / (vhi - vlo) * (x1 - x0);
  };
  const auto py = [&](double u) {
    return y1 - (u - ulo) / (uhi - ulo) * (y1 - y0);
  };

  char buf[256];
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" "
       "height=\"640\" viewBox=\"0 0 900 640\">\n";
  s += "<rect width=\"900\" height=\"640\" fill=\"white\"/>\n";
  s += "<line x1=\"80\" y1=\"580\" x2=\"870\" y2=\"580\" stroke=\"black\"/>\n";
  s += "<line x1=\"80\" y1=\"20\" x2=\"80\" y2=\"580\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double tv = vlo + (vhi - vlo) * k / 5.0;
    const double x = px(tv);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"580\" x2=\"%.2f\" y2=\"586\" "
                  "stroke=\"black\"/>\n"
                  "<text x=\"%.2f\" y=\"602\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\" font-size=\"12\">%.4g</text>\n",
                  x, x, x, tv);
    s += buf;
    const double tu = ulo + (uhi - ulo) * k / 5.0;
    const double y = py(tu);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"74\" y1=\"%.2f\" x2=\"80\" y2=\"%.2f\" "
                  "stroke=\"black\"/>\n"
                  "<text x=\"70\" y=\"%.2f\" text-anchor=\"end\" "
                  "font-family=\"sans-serif\" font-size=\"12\">%.4g</text>\n",
                  y, y, y + 4, tu);
    s += buf;
  }
  s += "<text x=\"475\" y=\"628\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">V</text>\n";
  s += "<text x=\"28\" y=\"300\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\" "
       "transform=\"rotate(-90 28 300)\">U</text>\n";

  const std::size_t count = results.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& res = results[i];
    if (res.error || res.trajectory.samples.size() < 2) continue;
    const unsigned hue =
        static_cast<unsigned>((i * 360) / std::max<std::size_t>(1, count));
    std::snprintf(buf, sizeof buf,
                  "<polyline fill=\"none\" stroke=\"hsl(%u, 65%%, 42%%)\" "
                  "stroke-width=\"1.2\" points=\"",
                  hue);
    s += buf;
    for (const auto& smp : res.trajectory.samples) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(smp.y[1]),
                    py(smp.y[0]));
      s += buf;
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

int cmd_geodesics(const Settings& s, const CommonFlags& c,
                  const std::string& u0_flag, const CLI::Option* u0_opt,
                  double v0_flag, const CLI::Option* v0_opt, double du0_flag,
                  const CLI::Option* du0_opt, double dv0_flag,
                  const CLI::Option* dv0_opt, double rtol_flag,
                  const CLI::Option* rtol_opt, double atol_flag,
                  const CLI::Option* atol_opt, double tmax_flag,
                  const CLI::Option* tmax_opt, RunContext& ctx) {
  const Common common =
      resolve_common(s, c, ctx, {"csv", "json", "svg"}, {"csv", "json"});
  const Range u0r = parse_range(s.pick(u0_opt, u0_flag, "u0_range"));
  const double v0 = s.pick(v0_opt, v0_flag, "v0");
  const double du0 = s.pick(du0_opt, du0_flag, "du0");
  const double dv0 = s.pick(dv0_opt, dv0_flag, "dv0");
  const double rtol = s.pick(rtol_opt, rtol_flag, "rtol");
  const double atol = s.pick(atol_opt, atol_flag, "atol");
  const double tau_max = s.pick(tmax_opt, tmax_flag, "tau_max");
  if (!(rtol > 0.0) || !(atol > 0.0))
    throw gtd::Error("tolerances must be positive");
  if (!(tau_max > 0.0)) throw gtd::Error("tau_max must be positive");

  record_params(ctx, common.params);
  ctx.config["u0_range"] = u0r.text;
  ctx.config["v0"] = v0;
  ctx.config["du0"] = du0;
  ctx.config["dv0"] = dv0;
  ctx.config["rtol"] = rtol;
  ctx.config["atol"] = atol;
  ctx.config["tau_max"] = tau_max;

  gtd::ShootConfig cfg;
  cfg.params = common.params;
  cfg.V0 = v0;
  cfg.dU0 = du0;
  cfg.dV0 = dv0;
  cfg.options.rtol = rtol;
  cfg.options.atol = atol;
  cfg.options.tau_max = tau_max;

  const std::vector<double> U0s = linspace(u0r);
  const std::vector<gtd::ShotResult> results = gtd::shoot_batch(cfg, U0s);

  json items = json::array();
  bool any_error = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const gtd::ShotResult& res = results[i];
    json item = {{"index", i}, {"U0", U0s[i]}};
    if (res.error) {
      any_error = true;
      item["error"] = *res.error;
    } else {
      item["error"] = nullptr;
      item["termination"] = gtd::to_string(res.trajectory.termination);
      item["classification"] = gtd::to_string(res.report.classification);
      item["U_end"] = res.report.U_end;
      item["V_end"] = res.report.V_end;
      item["residual"] = res.report.residual;
      item["tau_end"] = res.trajectory.tau_end;
      item["samples"] = res.trajectory.samples.size();
      item["steps_accepted"] = res.trajectory.steps_accepted;
      item["steps_rejected"] = res.trajectory.steps_rejected;
      if (common.formats.count("csv")) {
        char name[40];
        std::snprintf(name, sizeof name, "geodesic_%03zu.csv", i);
        std::string csv = "tau,U,V,dU,dV\n";
        for (const gtd::GeodesicSample& smp : res.trajectory.samples) {
          csv += fmt_sci17(smp.tau);
          for (int k = 0; k < 4; ++k) {
            csv += ',';
            csv += fmt_sci17(smp.y[static_cast<std::size_t>(k)]);
          }
          csv += '\n';
        }
        ctx.emit(name, csv);
        item["csv"] = name;
      }
    }
    items.push_back(std::move(item));
  }

  const json report = {{"command", "geodesics"},
                       {"params", params_json(common.params)},
                       {"sweep",
                        {{"u0_range", u0r.text},
                         {"count", U0s.size()},
                         {"v0", v0},
                         {"du0", du0},
                         {"dv0", dv0},
                         {"rtol", rtol},
                         {"atol", atol},
                         {"tau_max", tau_max}}},
                       {"items", items}};
  if (common.formats.count("json"))
    ctx.emit("geodesics_report.json", dump_json(report));
  if (common.formats.count("svg"))
    ctx.emit("geodesics.svg", render_svg(results));
  return any_error ? 1 : 0;
}

// -------------------------------------------------------------------- locus

int cmd_locus(const Settings& s, const CommonFlags& c, double p_flag,
              const CLI::Option* p_opt, RunContext& ctx) {
  const Common common = resolve_common(s, c, ctx, {"json"}, {"json"});
  const double P = s.pick(p_opt, p_flag, "pressure");
  if (std::isnan(P))
    throw gtd::Error(
        "locus requires a pressure (--pressure or config key 'pressure')");
  record_params(ctx, common.params);
  ctx.config["pressure"] = P;

  const gtd::SingularLocusReport rep = gtd::singular_locus(P, common.params);

  json roots = json::array();
  for (const gtd::LocusRoot& rt : rep.roots)
    roots.push_back({{"V", rt.V},
                     {"bracket_lo", rt.bracket_lo},
                     {"bracket_hi", rt.bracket_hi},
                     {"residual", rt.residual},
                     {"multiplicity", rt.multiplicity}});
  json out = {{"command", "locus"},
              {"params", params_json(common.params)},
              {"pressure", P},
              {"roots", roots}};
  if (common.params.b > 0.0)
    out["critical"] = {{"pressure", gtd::critical_pressure(common.params)},
                       {"volume", gtd::critical_volume(common.params)}};
  else
    out["critical"] = nullptr;

  if (common.formats.count("json")) ctx.emit("locus.json", dump_json(out));
  return 0;
}

// ----------------------------------------------------------------- legendre

int cmd_legendre(const Settings& s, const CommonFlags& c,
                 const std::string& metric_flag, const CLI::Option* m_opt,
                 std::size_t trials_flag, const CLI::Option* t_opt,
                 std::uint64_t seed_flag, const CLI::Option* seed_opt,
                 RunContext& ctx) {
  const Common common = resolve_common(s, c, ctx, {"json"}, {"json"});
  const std::string metric = s.pick(m_opt, metric_flag, "metric");
  const std::size_t trials = s.pick(t_opt, trials_flag, "trials");
  const std::uint64_t seed = s.pick(seed_opt, seed_flag, "seed");
  if (trials == 0) throw gtd::Error("trials must be positive");

  gtd::GtdMetricSpec spec;
  spec.lambda = common.params.lambda;
  gtd::MetricField G;
  if (metric == "gtd-first-order") {
    spec.chi = gtd::ChiKind::Identity;
    G = gtd::gtd_metric(spec, 2);
  } else if (metric == "gtd-second-order") {
    spec.chi = gtd::ChiKind::Lorentzian;
    G = gtd::gtd_metric(spec, 2);
  } else if (metric == "hessian") {
    G = gtd::hessian_phase_metric(2);
  } else if (metric == "flat") {
    G = gtd::flat_phase_metric(2);
  } else {
    throw gtd::Error(
        "metric must be one of gtd-first-order, gtd-second-order, hessian, "
        "flat");
  }

  ctx.config["lambda"] = common.params.lambda;
  ctx.config["metric"] = metric;
  ctx.config["trials"] = trials;
  ctx.config["seed"] = seed;

  const gtd::InvarianceReport rep =
      gtd::legendre_invariance_check(G, 2, trials, seed);

  const json out = {{"command", "legendre"},
                    {"metric", metric},
                    {"lambda", common.params.lambda},
                    {"trials", rep.trials},
                    {"seed", seed},
                    {"max_rel_deviation", rep.max_rel_deviation},
                    {"verdict", rep.pass ? "PASS" : "FAIL"}};
  if (common.formats.count("json")) ctx.emit("legendre.json", dump_json(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Thermodynamic-geometry workbench: curvature scans, geodesic shooting "
      "sweeps, singular-locus roots, and Legendre-invariance verdicts for "
      "the van der Waals system"};
  app.set_version_flag("--version", gtd::version);
  app.require_subcommand(1);

  CommonFlags ccur, cgeo, cloc, cleg;

  CLI::App* cur = app.add_subcommand(
      "curvature", "Scalar curvature over a rectangular (U, V) grid");
  add_common(cur, ccur);
  std::string u_range = "0.5:5:20", v_range = "0.5:5:20";
  const CLI::Option* u_opt =
      cur->add_option("--u-range", u_range, "U grid as lo:hi:n");
  const CLI::Option* v_opt =
      cur->add_option("--v-range", v_range, "V grid as lo:hi:n");

  CLI::App* geo = app.add_subcommand(
      "geodesics", "Shooting sweep of geodesics over initial energies");
  add_common(geo, cgeo);
  std::string u0_range = "0:140:15";
  double v0 = 0.1, du0 = 0.0, dv0 = 1.0;
  double rtol = 1e-8, atol = 1e-10, tau_max = 100.0;
  const CLI::Option* u0_opt = geo->add_option(
      "--u0-range", u0_range, "Initial energies U(0) as lo:hi:n");
  const CLI::Option* v0_opt =
      geo->add_option("--v0", v0, "Initial volume V(0)");
  const CLI::Option* du0_opt =
      geo->add_option("--du0", du0, "Initial dU/dtau");
  const CLI::Option* dv0_opt =
      geo->add_option("--dv0", dv0, "Initial dV/dtau");
  const CLI::Option* rtol_opt =
      geo->add_option("--rtol", rtol, "Relative step tolerance");
  const CLI::Option* atol_opt =
      geo->add_option("--atol", atol, "Absolute step tolerance");
  const CLI::Option* tmax_opt =
      geo->add_option("--tau-max", tau_max, "Affine-parameter horizon");

  CLI::App* loc = app.add_subcommand(
      "locus", "Roots of the phase-transition cubic at a given pressure");
  add_common(loc, cloc);
  double pressure = std::numeric_limits<double>::quiet_NaN();
  const CLI::Option* p_opt =
      loc->add_option("--pressure", pressure, "Pressure P > 0");

  CLI::App* leg = app.add_subcommand(
      "legendre",
      "Numerical Legendre-invariance verdict for a phase-space metric");
  add_common(leg, cleg);
  std::string metric = "gtd-first-order";
  std::size_t trials = 100;
  std::uint64_t seed = 2026;
  const CLI::Option* m_opt = leg->add_option(
      "--metric", metric, "gtd-first-order | gtd-second-order | hessian | flat");
  const CLI::Option* t_opt =
      leg->add_option("--trials", trials, "Number of random trials");
  const CLI::Option* seed_opt = leg->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunContext ctx;
    int code = 0;
    if (cur->parsed()) {
      Settings s;
      if (!ccur.config_path.empty()) s.load(ccur.config_path);
      ctx.command = "curvature";
      code = cmd_curvature(s, ccur, u_range, u_opt, v_range, v_opt, ctx);
    } else if (geo->parsed()) {
      Settings s;
      if (!cgeo.config_path.empty()) s.load(cgeo.config_path);
      ctx.command = "geodesics";
      code = cmd_geodesics(s, cgeo, u0_range, u0_opt, v0, v0_opt, du0,
                           du0_opt, dv0, dv0_opt, rtol, rtol_opt, atol,
                           atol_opt, tau_max, tmax_opt, ctx);
    } else if (loc->parsed()) {
      Settings s;
      if (!cloc.config_path.empty()) s.load(cloc.config_path);
      ctx.command = "locus";
      code = cmd_locus(s, cloc, pressure, p_opt, ctx);
    } else {
      Settings s;
      if (!cleg.config_path.empty()) s.load(cleg.config_path);
      ctx.command = "legendre";
      code = cmd_legendre(s, cleg, metric, m_opt, trials, t_opt, seed,
                          seed_opt, ctx);
    }
    ctx.write_manifest();
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
