#include "dmcs/cli.hpp"

#include "dmcs/design_io.hpp"
#include "dmcs/designer.hpp"
#include "dmcs/robustness.hpp"
#include "dmcs/sensitivity.hpp"
#include "dmcs/statistics.hpp"
#include "dmcs/su11.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dmcs {

namespace {

struct DeviationFlags {
  double epsilon = 0.0;
  double dT = 0.0;
  double dlambda = 0.0;
  double dtheta = 0.0;
  CLI::Option* opt_epsilon = nullptr;
  CLI::Option* opt_dT = nullptr;
  CLI::Option* opt_dlambda = nullptr;
  CLI::Option* opt_dtheta = nullptr;

  void attach(CLI::App* cmd) {
    opt_epsilon = cmd->add_option(
        "--epsilon", epsilon, "detuning deviation, rad/m");
    opt_dT = cmd->add_option("--dT", dT,
                             "temperature deviation from the work point, C");
    opt_dlambda =
        cmd->add_option("--dlambda", dlambda, "wavelength deviation, nm");
    opt_dtheta = cmd->add_option("--dtheta", dtheta, "angle deviation, deg");
  }

  int set_count() const {
    return static_cast<int>(opt_epsilon->count() + opt_dT->count() +
                            opt_dlambda->count() + opt_dtheta->count());
  }

  double resolve(const SensitivityCoefficients& coeffs) const {
    if (opt_epsilon->count()) return epsilon;
    if (opt_dT->count())
      return epsilon_from(coeffs, DeviationAxis::temperature, dT);
    if (opt_dlambda->count())
      return epsilon_from(coeffs, DeviationAxis::wavelength, dlambda);
    if (opt_dtheta->count())
      return epsilon_from(coeffs, DeviationAxis::angle, dtheta);
    return 0.0;
  }
};

SensitivityCoefficients coeffs_of(const DesignFile& file) {
  return file.sensitivity ? *file.sensitivity : default_sensitivity();
}

DeviationAxis axis_of(const std::string& name) {
  if (name == "temperature") return DeviationAxis::temperature;
  if (name == "wavelength") return DeviationAxis::wavelength;
  if (name == "angle") return DeviationAxis::angle;
  if (name == "epsilon") return DeviationAxis::epsilon;
  throw invalid_input("unknown axis: " + name);
}

void write_csv_row(std::ostream& out, const std::vector<double>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << format_sig12(cells[i]);
  }
  out << '\n';
}

int run_simulate(const std::string& path, const DeviationFlags& dev,
                 int samples, std::ostream& out) {
  const DesignFile file = load_design_file(path);
  const double eps = dev.resolve(coeffs_of(file));
  const auto points = trajectory(file.design, eps, samples);

  double peak = 0.0;
  for (const auto& p : points) peak = std::max(peak, p.mu);
  out << "z_m,mu,mu_normalized,u,v,w\n";
  for (const auto& p : points) {
    write_csv_row(out, {p.z, p.mu, peak > 0.0 ? p.mu / peak : 0.0,
                        p.point.u, p.point.v, p.point.w});
  }
  return 0;
}

int run_sweep(const std::string& path, const std::string& axis_name_,
              double range, int points, std::ostream& out, std::ostream& err) {
  const DesignFile file = load_design_file(path);
  const SensitivityCoefficients coeffs = coeffs_of(file);
  const DeviationAxis axis = axis_of(axis_name_);

  const auto rows = sweep(file.design, coeffs, axis, range, points);
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, r.mu);
  out << "deviation,mu,mu_normalized\n";
  for (const auto& r : rows)
    write_csv_row(out, {r.deviation, r.mu, peak > 0.0 ? r.mu / peak : 0.0});

  double width = std::numeric_limits<double>::quiet_NaN();
  if (range > 0.0 && points >= 9) {
    try {
      width = width_90(file.design, coeffs, axis, range, points).width();
    } catch (const numerical_error&) {
      // not bracketed inside the scan; report nan
    }
  }
  err << "width90=" << format_sig12(width) << "\n";
  return 0;
}

int run_design(const SolveOptions& options, const std::string& constraints_path,
               const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  const DesignConstraints constraints =
      constraints_path.empty() ? DesignConstraints{}
                               : load_constraints_file(constraints_path);
  const SensitivityCoefficients coeffs = default_sensitivity();

  SolveDiagnostics diag;
  const auto candidates = solve(options, constraints, coeffs, &diag);

  if (candidates.empty()) {
    out << "candidates=0\n";
    out << "starts=" << diag.starts << " converged=" << diag.converged
        << " unique=" << diag.unique << "\n";
    const std::pair<const char*, int> rejections[] = {
        {"efficiency_floor", diag.rejected_efficiency},
        {"flatness_threshold", diag.rejected_flatness},
        {"max_total_length", diag.rejected_length},
        {"fabrication", diag.rejected_fabrication},
        {"derivative_check", diag.rejected_derivative_check}};
    const auto* dominant = &rejections[0];
    for (const auto& r : rejections)
      if (r.second > dominant->second) dominant = &r;
    if (dominant->second > 0)
      out << "dominant_rejection=" << dominant->first << " ("
          << dominant->second << ")\n";
    else
      out << "dominant_rejection=none_converged\n";
    err << "no design candidates satisfied the constraints\n";
    return 3;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory " + out_dir);

  out << "rank,file,flatness,width90_temperature_c,efficiency_ratio,"
         "window_spread,total_length_m\n";
  int rank = 0;
  for (const auto& cand : candidates) {
    ++rank;
    DesignFile file;
    file.design = cand.design;
    file.design.metadata["generator"] = "multistart_dls";
    file.design.metadata["seed"] = std::to_string(options.seed);
    file.design.metadata["start_index"] = std::to_string(cand.start_index);
    file.design.metadata["residual_norm"] = format_sig12(cand.residual_norm);
    file.sensitivity = coeffs;
    file.constraints = constraints;

    const std::filesystem::path out_path =
        std::filesystem::path(out_dir) /
        ("candidate_" + std::to_string(rank) + ".json");
    save_design_file(file, out_path.string());

    double width = std::numeric_limits<double>::quiet_NaN();
    try {
      width = width_90(cand.design, coeffs, DeviationAxis::temperature,
                       4.0 * constraints.window_half_width_c, 961)
                  .width();
    } catch (const numerical_error&) {
    }
    out << rank << ',' << out_path.string() << ','
        << format_sig12(cand.report.flatness) << ',' << format_sig12(width)
        << ',' << format_sig12(cand.report.efficiency) << ','
        << format_sig12(cand.report.window_spread) << ','
        << format_sig12(cand.report.total_length) << '\n';
  }
  return 0;
}

int run_stats(const std::string& path, const DeviationFlags& dev, int nmax,
              std::ostream& out) {
  const DesignFile file = load_design_file(path);
  const double eps = dev.resolve(coeffs_of(file));
  const double mu = pair_mean(design_matrix(file.design, eps));
  const PhotonNumberDistribution dist = photon_statistics(mu, nmax);

  out << "mu=" << format_sig12(dist.mu) << "\n";
  out << "p=" << format_sig12(dist.p) << "\n";
  out << "mean=" << format_sig12(dist.mean) << "\n";
  out << "variance=" << format_sig12(dist.variance) << "\n";
  out << "multi_pair_probability=" << format_sig12(dist.multi_pair_probability)
      << "\n";
  out << "n,probability\n";
  for (std::size_t n = 0; n < dist.probabilities.size(); ++n)
    out << n << ',' << format_sig12(dist.probabilities[n]) << '\n';
  return 0;
}

int run_export_poling(const std::string& path, double dk_material,
                      double min_domain, std::ostream& out) {
  const DesignFile file = load_design_file(path);
  const PolingPattern pattern =
      poling_pattern(file.design, dk_material, min_domain);
  for (std::size_t i = 0; i < pattern.starts.size(); ++i)
    out << format_sig12(pattern.starts[i]) << ' '
        << (pattern.signs[i] > 0 ? "+1" : "-1") << '\n';
  return 0;
}

int run_scale(const std::string& path, double r, std::ostream& out,
              std::ostream& err) {
  DesignFile file = load_design_file(path);
  file.design = scale_design(file.design, r);
  out << to_canonical_json(file);
  err << "pump_power_factor=" << format_sig12(1.0 / (r * r)) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"design and analysis toolkit for robust composite SPDC crystals",
               "dmcs"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "propagate a design and emit the pair-mean trajectory");
  std::string sim_file;
  int sim_samples = 64;
  DeviationFlags sim_dev;
  sim->add_option("--design", sim_file, "design file (JSON)")->required();
  sim->add_option("--samples", sim_samples, "samples per segment")
      ->check(CLI::Range(2, 1 << 20));
  sim_dev.attach(sim);

  // sweep
  auto* swp = app.add_subcommand(
      "sweep", "pair mean over a deviation window on one axis");
  std::string swp_file, swp_axis = "temperature";
  double swp_range = 2.4;
  int swp_points = 481;
  swp->add_option("--design", swp_file, "design file (JSON)")->required();
  swp->add_option("--axis", swp_axis, "deviation axis")
      ->check(CLI::IsMember({"temperature", "wavelength", "angle", "epsilon"}));
  swp->add_option("--range", swp_range, "half range of the window")
      ->check(CLI::NonNegativeNumber);
  swp->add_option("--points", swp_points, "grid points")
      ->check(CLI::Range(1, 1 << 22));

  // design
  auto* dsg = app.add_subcommand(
      "design", "search for derivative-flattened composite designs");
  SolveOptions dsg_options;
  std::string dsg_constraints, dsg_out_dir = ".";
  dsg->add_option("--segments", dsg_options.segments, "segment count (even)")
      ->check(CLI::Range(2, 16));
  dsg->add_option("--omega", dsg_options.omega, "coupling strength, rad/m")
      ->check(CLI::PositiveNumber);
  dsg->add_option("--target-length", dsg_options.target_length,
                  "total crystal length, m")
      ->check(CLI::PositiveNumber);
  dsg->add_option("--order", dsg_options.order,
                  "highest derivative order to zero")
      ->check(CLI::Range(1, 4));
  dsg->add_option("--starts", dsg_options.starts, "multistart count")
      ->check(CLI::Range(1, 1 << 20));
  dsg->add_option("--seed", dsg_options.seed, "search seed");
  dsg->add_option("--max-candidates", dsg_options.max_candidates,
                  "candidates to keep")
      ->check(CLI::Range(1, 1024));
  dsg->add_option("--constraints", dsg_constraints,
                  "constraints file (JSON object)");
  dsg->add_option("--out-dir", dsg_out_dir, "directory for candidate files");

  // stats
  auto* sts = app.add_subcommand(
      "stats", "photon-number statistics at a deviation point");
  std::string sts_file;
  int sts_nmax = 8;
  DeviationFlags sts_dev;
  sts->add_option("--design", sts_file, "design file (JSON)")->required();
  sts->add_option("--nmax", sts_nmax, "highest photon number to print")
      ->check(CLI::Range(0, 65536));
  sts_dev.attach(sts);

  // export-poling
  auto* exp = app.add_subcommand(
      "export-poling", "emit the domain wall positions and signs");
  std::string exp_file;
  double exp_dk_material = 0.0;
  double exp_min_domain = 0.0;
  exp->add_option("--design", exp_file, "design file (JSON)")->required();
  exp->add_option("--dk-material", exp_dk_material,
                  "material phase mismatch to pole against, rad/m")
      ->required();
  exp->add_option("--min-domain", exp_min_domain,
                  "fabrication limit on domain width, m")
      ->check(CLI::NonNegativeNumber);

  // scale
  auto* scl = app.add_subcommand(
      "scale", "rescale a design (lengths by r, detunings and coupling by 1/r)");
  std::string scl_file;
  double scl_r = 1.0;
  scl->add_option("--design", scl_file, "design file (JSON)")->required();
  scl->add_option("--r", scl_r, "scale factor")
      ->required()
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("dmcs");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  for (const DeviationFlags* dev : {&sim_dev, &sts_dev}) {
    if (dev->set_count() > 1) {
      err << "usage error: at most one deviation flag\n";
      return 1;
    }
  }

  try {
    if (sim->parsed()) return run_simulate(sim_file, sim_dev, sim_samples, out);
    if (swp->parsed())
      return run_sweep(swp_file, swp_axis, swp_range, swp_points, out, err);
    if (dsg->parsed())
      return run_design(dsg_options, dsg_constraints, dsg_out_dir, out, err);
    if (sts->parsed()) return run_stats(sts_file, sts_dev, sts_nmax, out);
    if (exp->parsed())
      return run_export_poling(exp_file, exp_dk_material, exp_min_domain, out);
    if (scl->parsed()) return run_scale(scl_file, scl_r, out, err);
    err << "usage error: missing subcommand\n";
    return 1;
  } catch (const io_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const numerical_error& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace dmcs
