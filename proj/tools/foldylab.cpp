#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foldylab/bem_oracle.hpp"
#include "foldylab/capacitance.hpp"
#include "foldylab/dirichlet_exterior.hpp"
#include "foldylab/foldy_lax.hpp"
#include "foldylab/harness.hpp"
#include "foldylab/lippmann_schwinger.hpp"
#include "foldylab/newtonian_spectrum.hpp"

using namespace foldylab;

namespace {

Vector3 parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) throw InvalidArgument("expected x,y,z but got " + text);
  return Vector3(v[0], v[1], v[2]);
}

// "ball:R" or "cube:H" (H the half side), optionally followed by ":x,y,z".
DomainSpec parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("domain must look like ball:1 or cube:0.5");
  const std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  Point3 center = Point3::Zero();
  if (const auto c2 = rest.find(':'); c2 != std::string::npos) {
    center = parse_vector(rest.substr(c2 + 1));
    rest = rest.substr(0, c2);
  }
  const double size = std::stod(rest);
  return domain_kind_from_string(kind) == DomainKind::ball ? DomainSpec::ball(size, center) : DomainSpec::cube(size, center);
}

void emit(const FarFieldPattern& p, const std::string& path) {
  if (path.empty() || path == "-") write_csv(std::cout, p);
  else write_csv_file(path, p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-scatterer clouds, their effective media and the reference solvers"};
  app.require_subcommand(1);

  // capacitance
  auto* cap = app.add_subcommand("capacitance", "Capacitance of a closed surface mesh");
  std::string cap_mesh;
  double cap_scale = 1.0;
  cap->add_option("mesh", cap_mesh, "icosphere:<f>[:<r>], cube:<n>[:<side>] or an OFF file")->required();
  cap->add_option("--scale", cap_scale, "Uniform scale applied to the mesh");
  cap->callback([&] {
    const auto c = capacitance_of(mesh_from_spec(cap_mesh).scaled(cap_scale));
    std::cout << "panels," << c.panel_count << "\ncapacitance," << format_double(c.value) << "\nestimated_error,"
              << format_double(c.estimated_error) << '\n';
  });

  // cloud
  auto* cloud_cmd = app.add_subcommand("cloud", "Place one obstacle cloud from a sweep config");
  std::string cloud_config, cloud_out;
  double cloud_a = 0.0;
  cloud_cmd->add_option("config", cloud_config, "Sweep config file")->required()->check(CLI::ExistingFile);
  cloud_cmd->add_option("-a", cloud_a, "Obstacle size a")->required();
  cloud_cmd->add_option("-o,--out", cloud_out, "Output CSV (default stdout)");
  cloud_cmd->callback([&] {
    const auto rc = regime_config_from(Config::parse_file(cloud_config));
    PlacementOptions po;
    po.mode = rc.mode;
    po.seed = rc.seed;
    po.cbar = rc.cbar > 0.0 ? rc.cbar : reference_sphere_capacitance();
    const auto cloud = place_obstacles(partition_domain(rc.domain, cloud_a, rc.s, rc.alignment), cloud_a, rc.s, rc.t(), po);
    if (cloud_out.empty()) write_cloud_csv(std::cout, cloud);
    else write_cloud_csv_file(cloud_out, cloud);
  });

  // shared scattering options
  double kappa = 1.0;
  std::string theta_text = "0,0,1", out_path;
  int frequency = 4;
  auto scattering = [&](CLI::App* sub) {
    sub->add_option("-k,--kappa", kappa, "Wave number");
    sub->add_option("--theta", theta_text, "Incident direction x,y,z");
    sub->add_option("--directions", frequency, "Icosphere frequency of the direction grid (4: 162 directions)");
    sub->add_option("-o,--out", out_path, "Far-field CSV (default stdout)");
  };

  // foldy
  auto* foldy = app.add_subcommand("foldy", "Solve the Foldy-Lax system of a cloud and print its far field");
  std::string foldy_scene;
  foldy->add_option("scene", foldy_scene, "Cloud CSV")->required()->check(CLI::ExistingFile);
  scattering(foldy);
  foldy->callback([&] {
    const auto system = solve_foldy_lax(read_cloud_csv_file(foldy_scene), WaveNumber(kappa), unit(parse_vector(theta_text)));
    std::cerr << (system.method == SolveMethod::direct ? "direct" : "iterative") << " solve, iterations "
              << system.iterations << ", residual " << format_double(system.residual_norm) << '\n';
    emit(far_field(system, icosphere_directions(frequency)), out_path);
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Boundary-element far field of sound-soft bodies at the cloud centres");
  std::string oracle_scene;
  int oracle_frequency = 4;
  oracle->add_option("scene", oracle_scene, "Cloud CSV; each obstacle becomes a sphere of diameter a")->required()->check(CLI::ExistingFile);
  oracle->add_option("--mesh-frequency", oracle_frequency, "Icosphere frequency of each sphere");
  scattering(oracle);
  oracle->callback([&] {
    const auto cloud = read_cloud_csv_file(oracle_scene);
    const auto sol = solve_multibody(sphere_scene(cloud.centers, cloud.a / 2, oracle_frequency, kappa, unit(parse_vector(theta_text))));
    std::cerr << "panels " << sol.panels.size() << ", residual " << format_double(sol.residual_norm) << '\n';
    emit(far_field_of_densities(sol, icosphere_directions(frequency)), out_path);
  });

  // ls
  auto* ls = app.add_subcommand("ls", "Solve the volume integral equation of the effective medium");
  std::string ls_scene, ls_field;
  ls->add_option("scene", ls_scene, "Config with [domain] and [solver] sections; keys amplitude, coefficient, spacing")
      ->required()
      ->check(CLI::ExistingFile);
  ls->add_option("--field", ls_field, "Write the volume field CSV here");
  scattering(ls);
  ls->callback([&] {
    const Config c = Config::parse_file(ls_scene);
    const RegimeConfig rc = regime_config_from(c);
    LsProblem p;
    p.domain = rc.domain;
    p.kappa = rc.kappa;
    p.theta = rc.theta;
    p.spacing = rc.ls_spacing;
    p.amplitude = c.get_double("solver.amplitude", 1.0);
    p.coefficient = c.get_double("solver.coefficient", reference_sphere_capacitance());
    const VolumeField f = solve_ls(p);
    const NormReport n = norm_report(f);
    std::cerr << "iterations " << f.iterations << ", residual " << format_double(f.residual_norm) << ", L2 "
              << format_double(n.L2_interior) << ", H1 " << format_double(n.H1_interior) << ", trace "
              << format_double(n.L2_boundary_trace) << ", sup " << format_double(n.sup_norm) << '\n';
    if (!ls_field.empty()) {
      std::ofstream out(ls_field);
      if (!out) throw IoError("cannot write " + ls_field);
      write_volume_field_csv(out, f);
    }
    emit(ls_far_field(f, icosphere_directions(frequency)), out_path);
  });

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Eigenpairs of the Newtonian potential and their Robin residuals");
  std::string spectrum_domain;
  double spacing = 0.125, v0 = 1.0;
  int modes = 5, boundary_frequency = 8;
  std::string spectrum_out;
  spectrum->add_option("domain", spectrum_domain, "ball:<R> or cube:<half side>")->required();
  spectrum->add_option("--spacing", spacing, "Grid spacing");
  spectrum->add_option("--V0", v0, "Coefficient of the potential");
  spectrum->add_option("--modes", modes, "Number of leading modes to check");
  spectrum->add_option("--boundary-frequency", boundary_frequency, "Panel mesh for the boundary operators (balls)");
  spectrum->add_option("-o,--out", spectrum_out, "Spectrum CSV (default stdout)");
  spectrum->callback([&] {
    const DomainSpec domain = parse_domain(spectrum_domain);
    const auto op = assemble_R0(domain, v0, spacing);
    const auto dec = eigendecompose(op);
    const SurfaceMesh boundary = domain.kind == DomainKind::ball
                                     ? make_icosphere(boundary_frequency, domain.size, domain.center)
                                     : make_cube_mesh(boundary_frequency, 2.0 * domain.size, domain.center);
    const auto pair = boundary_operators(boundary);
    std::vector<RobinResidual> res;
    for (int n = 0; n < modes && n < dec.eigenvalues.size(); ++n) res.push_back(robin_correspondence_residual(op, dec, pair, n));
    const auto h1 = h1_proxy_interval(op, dec);
    std::cerr << "cells " << op.size() << ", orthonormality " << format_double(orthonormality_defect(op, dec))
              << ", H1 proxy [" << format_double(h1.low) << ", " << format_double(h1.high) << "]\n";
    if (spectrum_out.empty()) {
      write_spectrum_csv(std::cout, dec, res);
    } else {
      std::ofstream out(spectrum_out);
      if (!out) throw IoError("cannot write " + spectrum_out);
      write_spectrum_csv(out, dec, res);
    }
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run one regime sweep and write sweep.csv, rates.csv and plots");
  std::string regime_name, sweep_config, sweep_out = "report";
  sweep->add_option("regime", regime_name, "sub_one, one or super_one")->required();
  sweep->add_option("config", sweep_config, "Sweep config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", sweep_out, "Output directory");
  sweep->callback([&] {
    const auto rows = run_regime(regime_from_string(regime_name), regime_config_from(Config::parse_file(sweep_config)));
    for (const auto& path : emit_report(rows, sweep_out)) std::cerr << "wrote " << path << '\n';
    write_rates_csv(std::cout, summarize_rates(rows));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
