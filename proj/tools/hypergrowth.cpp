// hypergrowth: command-line front end to the hyperbolic growth library.
//
//   hypergrowth ingest     --csv F --region R --unit-scale S
//   hypergrowth fit        --csv F --unit-scale S --from T0 --to T1
//   hypergrowth segment    --csv F --unit-scale S [--min-side 2] [--from T0 --to T1]
//   hypergrowth diverge    --csv F --unit-scale S --from T0 --to T1 --scan-from T
//                          [--persistence 5] [--min-rel-residual 0.02]
//   hypergrowth stagnation --csv F --unit-scale S --from T0 --to T1
//   hypergrowth compare    --csv F --unit-scale S --from T0 --to T1
//   hypergrowth report     --csv F --config C --out DIR
//
// Results go to stdout as JSON. Exit codes: 0 success, 2 validation or
// usage error, 3 I/O error, 4 numerical error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hypergrowth/hypergrowth.hpp"

namespace hg = hypergrowth;

namespace {

struct SeriesArgs {
  std::string csv;
  std::string region = "series";
  double unit_scale = 0.0;
};

void add_series_options(CLI::App* cmd, SeriesArgs& args) {
  cmd->add_option("--csv", args.csv, "two-column year,value CSV")->required();
  cmd->add_option("--region", args.region, "region label");
  cmd->add_option("--unit-scale", args.unit_scale,
                  "factor converting file units to analysis units (0.001: millions -> billions)")
      ->required();
}

void add_window_options(CLI::App* cmd, hg::Window& w, bool required) {
  auto* from = cmd->add_option("--from", w.start, "first year of the fit window");
  auto* to = cmd->add_option("--to", w.end, "last year of the fit window");
  if (required) {
    from->required();
    to->required();
  } else {
    from->needs(to);
    to->needs(from);
  }
}

hg::TimeSeries load(const SeriesArgs& args) {
  return hg::load_series(args.csv, args.region, args.unit_scale).series;
}

void print(const hg::Json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic growth fitting, segmentation and divergence analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hg::kVersion));

  SeriesArgs series_args;
  hg::Window window;
  std::size_t min_side = 2;
  hg::DivergenceOptions divergence;
  std::string config_path;
  std::string out_dir;

  auto* ingest = app.add_subcommand("ingest", "parse a CSV and summarise the series");
  add_series_options(ingest, series_args);

  auto* fit = app.add_subcommand("fit", "fit 1/S = a - k t over a window");
  add_series_options(fit, series_args);
  add_window_options(fit, window, true);

  auto* segment = app.add_subcommand("segment", "exhaustive two-regime breakpoint search");
  add_series_options(segment, series_args);
  add_window_options(segment, window, false);
  segment->add_option("--min-side", min_side, "minimum points per segment")->capture_default_str();

  auto* diverge = app.add_subcommand("diverge", "scan for departure from an extrapolated fit");
  add_series_options(diverge, series_args);
  add_window_options(diverge, window, true);
  diverge->add_option("--scan-from", divergence.scan_from, "first year to scan")->required();
  diverge->add_option("--persistence", divergence.persistence, "consecutive points required")
      ->capture_default_str();
  diverge->add_option("--min-rel-residual", divergence.min_rel_residual,
                      "minimum |residual| relative to the predicted reciprocal")
      ->capture_default_str();

  auto* stagnation = app.add_subcommand("stagnation", "monotonicity and runs-test verdict");
  add_series_options(stagnation, series_args);
  add_window_options(stagnation, window, true);

  auto* compare = app.add_subcommand("compare", "AIC ranking of growth laws");
  add_series_options(compare, series_args);
  add_window_options(compare, window, true);

  auto* report = app.add_subcommand("report", "full analysis: report.json, fig1.csv, fig2.csv");
  report->add_option("--csv", series_args.csv, "two-column year,value CSV")->required();
  report->add_option("--config", config_path, "pipeline config JSON")->required();
  report->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const auto parsed = hg::load_series(series_args.csv, series_args.region, series_args.unit_scale);
      print(hg::Json(hg::summarize(parsed, series_args.unit_scale)));
    } else if (*fit) {
      print(hg::Json(hg::fit_hyperbolic(load(series_args), window)));
    } else if (*segment) {
      auto s = load(series_args);
      if (segment->count("--from") > 0) s = hg::select_range(s, window);
      print(hg::Json(hg::find_breakpoint(s, {}, min_side)));
    } else if (*diverge) {
      const auto s = load(series_args);
      const auto f = hg::fit_hyperbolic(s, window);
      const auto d = hg::detect_divergence(s, f, divergence);
      hg::Json j{{"fit", f}, {"divergence", d}, {"singularity_margin", nullptr}};
      if (d.detected() && f.is_growth()) j["singularity_margin"] = hg::singularity_margin(f, d);
      print(j);
    } else if (*stagnation) {
      print(hg::Json(hg::stagnation_report(load(series_args), window)));
    } else if (*compare) {
      print(hg::Json(hg::compare_models(load(series_args), window)));
    } else if (*report) {
      hg::Json config_json;
      try {
        config_json = hg::Json::parse(hg::read_file(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw hg::parse_error(fmt::format("config '{}': {}", config_path, e.what()));
      }
      const auto config = hg::config_from_json(config_json);
      const auto r = hg::run_pipeline(series_args.csv, config);

      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw hg::io_error(fmt::format("cannot create '{}': {}", out_dir, ec.message()));
      const std::filesystem::path dir(out_dir);
      hg::write_text_file(dir / "report.json", hg::to_json_text(r));
      hg::export_figure_data(r, hg::Figure::fig1, dir / "fig1.csv");
      hg::export_figure_data(r, hg::Figure::fig2, dir / "fig2.csv");
      print(hg::Json{{"report", (dir / "report.json").string()},
                     {"fig1", (dir / "fig1.csv").string()},
                     {"fig2", (dir / "fig2.csv").string()},
                     {"input_checksum", r.input_checksum}});
    }
  } catch (const hg::Error& e) {
    fmt::print(stderr, "error ({}): {}\n", hg::to_string(e.kind()), e.what());
    return hg::exit_code(e.kind());
  }
  return 0;
}
