#include "ladder_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ladder/dressed.hpp"
#include "ladder/errors.hpp"
#include "ladder/fock_window.hpp"
#include "ladder/parallel.hpp"
#include "ladder/splittings.hpp"
#include "ladder/trilevel.hpp"
#include "ladder/validation.hpp"
#include "ladder_cli/config.hpp"
#include "ladder_cli/csv.hpp"

namespace ladder::cli {
namespace {

struct Output {
  std::filesystem::path dir;
  std::string file;
  int precision = 15;

  std::filesystem::path path() const { return dir / file; }
  std::filesystem::path sibling(const std::string& suffix) const {
    const std::filesystem::path p(file);
    return dir / (p.stem().string() + suffix + p.extension().string());
  }
};

Output output_from(const Config& config, const Invocation& inv, const std::string& command) {
  Output out;
  const std::string dir = config.get_string("output", "dir", ".");
  out.dir = inv.out ? *inv.out : std::filesystem::path(dir);
  out.file = config.get_string("output", "file", command + ".csv");
  const std::int64_t precision = config.get_int("output", "precision", 15);
  if (precision < 1 || precision > 17) config.fail("output", "precision", "must be in 1..17");
  out.precision = static_cast<int>(precision);
  return out;
}

/// Run parameters echoed into the CSV header, in the order they were read.
class Echo {
 public:
  explicit Echo(int precision) : precision_(precision) {}
  void add(const std::string& key, double v) { add(key, format_double(v, precision_)); }
  void add(const std::string& key, std::int64_t v) { add(key, std::to_string(v)); }
  void add(const std::string& key, int v) { add(key, std::to_string(v)); }
  void add(const std::string& key, const std::string& v) {
    text_ += (text_.empty() ? "" : " ") + key + "=" + v;
  }
  void add_list(const std::string& key, const std::vector<int>& values) {
    std::string s;
    for (int v : values) s += (s.empty() ? "" : ";") + std::to_string(v);
    add(key, s);
  }
  const std::string& str() const { return text_; }

 private:
  int precision_;
  std::string text_;
};

void provenance(CsvTable& table, const std::string& command, const ModelParams* params,
                const Echo& run, int precision) {
  table.comment("ladder " + command);
  if (params != nullptr) {
    const auto f = [&](double v) { return format_double(v, precision); };
    table.comment("model e1=" + f(params->e1()) + " e2=" + f(params->e2()) + " e3=" +
                  f(params->e3()) + " n0=" + std::to_string(params->n0()) +
                  " min_gap=" + f(params->min_gap()));
    table.comment("derived u=" + f(params->u()) + " v=" + f(params->v()) + " g1=" +
                  f(params->g1()) + " g2=" + f(params->g2()));
  }
  if (!run.str().empty()) table.comment("run " + run.str());
}

std::string transition_label(int j, int k) { return std::to_string(j) + "-" + std::to_string(k); }

std::vector<double> checked_grid(const Config& config, Echo& echo, const std::string& prefix,
                                 double lo, double hi, int points) {
  std::vector<double> grid = grid_from_config(config, prefix, lo, hi, points);
  echo.add(prefix + "_min", grid.front());
  echo.add(prefix + "_max", grid.back());
  echo.add(prefix + "_points", static_cast<std::int64_t>(grid.size()));
  return grid;
}

std::vector<double> coupling_grid(const Config& config, Echo& echo, const std::string& prefix,
                                  double lo, double hi, int points) {
  std::vector<double> grid = checked_grid(config, echo, prefix, lo, hi, points);
  if (grid.front() < 0.0) config.fail("run", prefix + "_min", "couplings must be >= 0");
  return grid;
}

std::int64_t half_width_from(const Config& config, Echo& echo, std::int64_t center,
                             std::int64_t fallback) {
  const std::int64_t w = config.get_int("run", "half_width", fallback);
  if (w < 8) config.fail("run", "half_width", "must be >= 8");
  if (center - w < 0) {
    config.fail("run", "half_width", "window [n - W, n + W] reaches below n = 0");
  }
  echo.add("half_width", w);
  return w;
}

void report(std::ostream& log, const std::filesystem::path& path, std::size_t rows) {
  log << "wrote " << path.string() << " (" << rows << " rows)\n";
}

int cmd_levels(const Config& config, const Invocation& inv, std::ostream& log) {
  const ModelParams params = model_from_config(config);
  const Output out = output_from(config, inv, "levels");
  Echo echo(out.precision);
  const double turning = std::sqrt(2.0 * static_cast<double>(params.n0()) + 1.0);
  const std::vector<double> ys = checked_grid(config, echo, "y", -1.1 * turning, 1.1 * turning, 201);
  config.reject_unused();

  CsvTable table({"y", "E1", "E2", "E3"}, out.precision);
  provenance(table, "levels", &params, echo, out.precision);
  for (double y : ys) {
    const std::array<double, 3> e = eigenvalues_at(params, y);
    table.row({y, e[0], e[1], e[2]});
  }
  table.write(out.path());
  report(log, out.path(), table.rows());
  return 0;
}

int cmd_wkb(const Config& config, const Invocation& inv, std::ostream& log) {
  const ModelParams templ = model_from_config(config);
  const Output out = output_from(config, inv, "wkb");
  Echo echo(out.precision);
  const std::vector<double> g1s = coupling_grid(config, echo, "g1", 0.0, 1.0, 11);
  const std::vector<double> g2s = coupling_grid(config, echo, "g2", 0.0, 1.0, 11);
  const std::int64_t n = config.get_int("run", "n", templ.n0());
  if (n < 0) config.fail("run", "n", "must be >= 0");
  echo.add("n", n);
  WkbOptions wkb;
  wkb.tolerance = config.get_positive("run", "wkb_tolerance", wkb.tolerance);
  echo.add("wkb_tolerance", wkb.tolerance);
  const bool exact = config.get_bool("run", "exact", false);
  echo.add("exact", std::string(exact ? "true" : "false"));
  const std::int64_t w = exact ? half_width_from(config, echo, n, 400) : 0;
  const bool fd = config.get_bool("run", "fd", false);
  echo.add("fd", std::string(fd ? "true" : "false"));
  FdGrid grid;
  if (fd) {
    grid.tolerance = config.get_positive("run", "fd_tolerance", grid.tolerance);
    echo.add("fd_tolerance", grid.tolerance);
  }
  config.reject_unused();

  std::vector<std::string> columns{"g1", "g2", "n", "E1_wkb", "E2_wkb", "E3_wkb"};
  if (exact) {
    for (const char* c : {"E1_exact", "E2_exact", "E3_exact", "min_overlap", "window_change"}) {
      columns.emplace_back(c);
    }
  }
  if (fd) {
    for (const char* c : {"E1_fd", "E2_fd", "E3_fd"}) columns.emplace_back(c);
  }
  columns.emplace_back("valid");
  columns.emplace_back("error");

  const std::size_t count = g1s.size() * g2s.size();
  std::vector<std::vector<CsvCell>> rows(count);
  parallel_for(count, inv.threads, [&](std::size_t i) {
    const double g1 = g1s[i % g1s.size()];
    const double g2 = g2s[i / g1s.size()];
    std::vector<CsvCell> row{g1, g2, n};
    const double nan = std::nan("");
    std::string error;
    try {
      const ModelParams params = templ.with_couplings(g1, g2);
      const std::array<double, 3> e = wkb_dressed_energies(params, n, wkb);
      row.insert(row.end(), {e[0], e[1], e[2]});
      if (exact) {
        const std::array<ExactLevel, 3> levels = exact_dressed_levels(params, n, w);
        const double change = window_convergence(params, n, w);
        row.insert(row.end(), {levels[0].energy, levels[1].energy, levels[2].energy,
                               std::min({levels[0].overlap, levels[1].overlap, levels[2].overlap}),
                               change});
      }
      if (fd) {
        for (int j = 1; j <= 3; ++j) row.emplace_back(h0_level_fd(params, j, n, grid).energy);
      }
    } catch (const std::exception& ex) {
      error = ex.what();
    }
    row.resize(columns.size() - 2, nan);
    row.emplace_back(error.empty());
    row.emplace_back(error);
    rows[i] = std::move(row);
  });

  CsvTable table(columns, out.precision);
  provenance(table, "wkb", &templ, echo, out.precision);
  for (const auto& row : rows) table.row(row);
  table.write(out.path());
  report(log, out.path(), table.rows());
  return 0;
}

int cmd_contours(const Config& config, const Invocation& inv, std::ostream& log) {
  const ModelParams templ = model_from_config(config);
  const Output out = output_from(config, inv, "contours");
  Echo echo(out.precision);
  const auto [j, k] = transition_from_config(config, "transition", "1-2");
  echo.add("transition", transition_label(j, k));
  const std::vector<int> quanta = config.get_int_list("run", "quanta", std::vector<int>{11});
  for (int dn : quanta) {
    if (dn <= 0 || dn % 2 == 0) {
      config.fail("run", "quanta", "resonance orders must be odd and positive, got " +
                                       std::to_string(dn));
    }
  }
  echo.add_list("quanta", quanta);
  RaySet rays;
  rays.rays = static_cast<int>(config.get_int("run", "rays", rays.rays));
  if (rays.rays < 2) config.fail("run", "rays", "must be >= 2");
  rays.max_g = config.get_positive("run", "max_g", rays.max_g);
  rays.samples_per_ray =
      static_cast<int>(config.get_int("run", "samples_per_ray", rays.samples_per_ray));
  if (rays.samples_per_ray < 4) config.fail("run", "samples_per_ray", "must be >= 4");
  if (!config.get_bool("run", "arcs", true)) rays.arc_radii.clear();
  echo.add("rays", rays.rays);
  echo.add("max_g", rays.max_g);
  echo.add("samples_per_ray", rays.samples_per_ray);
  echo.add("arcs", std::string(rays.arc_radii.empty() ? "false" : "true"));
  config.reject_unused();

  std::vector<ResonanceContour> contours(quanta.size());
  parallel_for(quanta.size(), inv.threads, [&](std::size_t i) {
    contours[i] = resonance_contour(templ, j, k, quanta[i], rays);
  });

  CsvTable table({"transition", "dn", "g1", "g2", "residual", "multiple"}, out.precision);
  provenance(table, "contours", &templ, echo, out.precision);
  for (const ResonanceContour& c : contours) {
    table.comment("dn=" + std::to_string(c.quanta) + " points=" + std::to_string(c.points.size()) +
                  " missed_rays=" + std::to_string(c.missed_ray_angles.size()));
  }
  for (const ResonanceContour& c : contours) {
    for (const ContourPoint& p : c.points) {
      table.row({transition_label(c.j, c.k), c.quanta, p.g1, p.g2, p.residual, p.multiple});
    }
  }
  table.write(out.path());
  report(log, out.path(), table.rows());
  return 0;
}

int cmd_resonance_map(const Config& config, const Invocation& inv, std::ostream& log) {
  const ModelParams templ = model_from_config(config);
  const Output out = output_from(config, inv, "resonance-map");
  Echo echo(out.precision);
  const auto [j, k] = transition_from_config(config, "transition", "1-2");
  echo.add("transition", transition_label(j, k));
  const std::vector<double> g1s = coupling_grid(config, echo, "g1", 0.0, 1.0, 21);
  const std::vector<double> g2s = coupling_grid(config, echo, "g2", 0.0, 1.0, 21);
  const std::int64_t w = half_width_from(config, echo, templ.n0(), 200);
  config.reject_unused();

  const std::vector<SharpnessPoint> map =
      resonance_sharpness_map(templ, g1s, g2s, j, k, templ.n0(), w, inv.threads);
  CsvTable table({"g1", "g2", "valid", "transition", "nearest_odd", "detuning", "inverse", "error"},
                 out.precision);
  provenance(table, "resonance-map", &templ, echo, out.precision);
  table.comment("inverse capped at " + format_double(kSharpnessCap, out.precision));
  for (const SharpnessPoint& p : map) {
    table.row({p.g1, p.g2, p.valid, p.transition, p.nearest_odd, p.detuning, p.inverse, p.error});
  }
  table.write(out.path());
  report(log, out.path(), table.rows());
  return 0;
}

int cmd_splittings(const Config& config, const Invocation& inv, std::ostream& log) {
  const ModelParams templ = model_from_config(config);
  const Output out = output_from(config, inv, "splittings");
  Echo echo(out.precision);
  const auto [j, k] = transition_from_config(config, "transition", "1-2");
  echo.add("transition", transition_label(j, k));
  const double ratio = config.get_double("run", "ratio");
  if (!(ratio >= 0.0)) config.fail("run", "ratio", "must be >= 0");
  echo.add("ratio", ratio);
  const std::vector<int> quanta = config.get_int_list("run", "quanta");
  for (int dn : quanta) {
    if (dn <= 0 || dn % 2 == 0) {
      config.fail("run", "quanta", "resonance orders must be odd and positive, got " +
                                       std::to_string(dn));
    }
  }
  echo.add_list("quanta", quanta);
  SplittingOptions options;
  options.threads = inv.threads;
  options.half_width = half_width_from(config, echo, templ.n0(), options.half_width);
  try {
    options.states = parse_pt_states(config.get_string("run", "states", "adiabatic"));
  } catch (const InvalidArgument& ex) {
    config.fail("run", "states", ex.what());
  }
  echo.add("states", std::string(to_string(options.states)));
  try {
    options.method =
        parse_matrix_element_method(config.get_string("run", "method", "fock-window"));
  } catch (const InvalidArgument& ex) {
    config.fail("run", "method", ex.what());
  }
  echo.add("method", std::string(to_string(options.method)));
  GapOptions& gap = options.gap;
  gap.scan_points = static_cast<int>(config.get_int("run", "scan_points", gap.scan_points));
  if (gap.scan_points < 5) config.fail("run", "scan_points", "must be >= 5");
  gap.scan_fraction = config.get_positive("run", "scan_fraction", gap.scan_fraction);
  gap.g1_max = config.get_positive("run", "g1_max", gap.g1_max);
  gap.window_tolerance = config.get_positive("run", "window_tolerance", gap.window_tolerance);
  echo.add("scan_points", gap.scan_points);
  echo.add("scan_fraction", gap.scan_fraction);
  echo.add("g1_max", gap.g1_max);
  echo.add("window_tolerance", gap.window_tolerance);
  config.reject_unused();

  const std::vector<SplittingRecord> records = compare_splittings(templ, ratio, quanta, j, k, options);
  CsvTable table({"transition", "dn", "ratio", "g1_contour", "g1", "g2", "pt", "exact",
                  "pt_over_exact", "exact_minima", "anomalous", "valid", "error"},
                 out.precision);
  CsvTable minima({"transition", "dn", "g1", "g2", "gap", "depth", "mixing"}, out.precision);
  provenance(table, "splittings", &templ, echo, out.precision);
  provenance(minima, "splittings", &templ, echo, out.precision);
  for (const SplittingRecord& r : records) {
    table.row({transition_label(r.j, r.k), r.quanta, r.ratio, r.g1_contour, r.g1, r.g2, r.pt,
               r.exact, r.pt_over_exact, r.exact_minima, r.anomalous, r.valid, r.error});
    for (const GapMinimum& m : r.minima) {
      minima.row({transition_label(r.j, r.k), r.quanta, m.g1, m.g2, m.gap, m.depth, m.mixing});
    }
  }
  table.write(out.path());
  report(log, out.path(), table.rows());
  minima.write(out.sibling("_minima"));
  report(log, out.sibling("_minima"), minima.rows());
  const bool all_valid =
      std::all_of(records.begin(), records.end(), [](const SplittingRecord& r) { return r.valid; });
  return all_valid ? 0 : 1;
}

int cmd_validate(const Config& config, const Invocation& inv, std::ostream& log) {
  const Output out = output_from(config, inv, "validate");
  Echo echo(out.precision);
  ValidationOptions options;
  options.threads = inv.threads;
  options.inject_symmetry_fault = config.get_bool("run", "inject_symmetry_fault", false);
  echo.add("inject_symmetry_fault", std::string(options.inject_symmetry_fault ? "true" : "false"));
  config.reject_unused();

  const ValidationReport result = run_validation(options);
  // Timings vary run to run; everything else in the file is deterministic.
  CsvTable table({"check", "passed", "seconds", "detail"}, out.precision);
  provenance(table, "validate", nullptr, echo, out.precision);
  for (const CheckResult& c : result.checks) {
    table.row({c.name, c.passed, c.seconds, c.detail});
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << format_double(c.seconds, 3)
        << " s): " << c.detail << "\n";
  }
  table.write(out.path());
  report(log, out.path(), table.rows());
  log << (result.passed() ? "validation passed\n" : "validation FAILED\n");
  return result.passed() ? 0 : 1;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"levels",      "wkb",        "contours",
                                              "resonance-map", "splittings", "validate"};
  return names;
}

int run_command(std::string_view name, const Invocation& inv, std::ostream& log,
                std::ostream& err) {
  try {
    Config config;
    if (inv.config) {
      config = Config::load(*inv.config);
    } else if (name != "validate") {
      err << "error: --config is required for " << name << "\n";
      return 2;
    }
    if (name == "levels") return cmd_levels(config, inv, log);
    if (name == "wkb") return cmd_wkb(config, inv, log);
    if (name == "contours") return cmd_contours(config, inv, log);
    if (name == "resonance-map") return cmd_resonance_map(config, inv, log);
    if (name == "splittings") return cmd_splittings(config, inv, log);
    if (name == "validate") return cmd_validate(config, inv, log);
    err << "error: unknown command '" << name << "'\n";
    return 2;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace ladder::cli
