#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <numbers>
#include <string>

#include "sasmig/backproject.hpp"
#include "sasmig/enhance.hpp"
#include "sasmig/forward.hpp"
#include "sasmig/io.hpp"
#include "sasmig/migrate.hpp"
#include "sasmig/parallel.hpp"

namespace {

using namespace sasmig;

// Exit codes: 0 ok, 1 usage, 2 data/validation error, 3 numerical failure.

struct SimulateArgs {
  std::string scene_path, out_path;
  int n_traces = 128;
  double dx_track = 0.02;
  int n_samples = 512;
  double dt = 1e-5;
  double t0 = 0.0;
  double f = 15e3;
  std::string envelope = "raised_cosine";
  double duration = 2e-4;
  double c = 1500.0;
};

int run_simulate(const SimulateArgs& a) {
  PulseSpec pulse;
  pulse.center_frequency = a.f;
  pulse.envelope_duration = a.duration;
  if (a.envelope == "gaussian") pulse.envelope = PulseEnvelope::gaussian;
  else if (a.envelope == "raised_cosine") pulse.envelope = PulseEnvelope::raised_cosine;
  else throw std::invalid_argument("envelope: must be gaussian or raised_cosine");

  const ScattererList scene = read_scatterers(a.scene_path);
  const SasRecord rec = synthesize_sas(scene, a.n_traces, a.dx_track, a.n_samples,
                                       a.dt, a.t0, pulse, a.c);
  write_sas(rec, a.out_path);
  return 0;
}

struct MigrateArgs {
  std::string in_path, out_path;
  std::string variant = "15";
  double alpha = 0.0, beta = 0.0;
  bool alpha_set = false, beta_set = false;
  int M = 0; // 0 = derive from beam geometry
  double dz = 0.0;
  std::string grid; // "NXxNZ"
  double c = 0.0;   // 0 = record's nominal speed
  std::string layers_path;
  double beam_f = 0.0, beam_D = 0.0, beam_alpha_w = 1.0;
};

MigrationConfig build_migration_config(const MigrateArgs& a, const SasRecord& rec) {
  MigrationConfig cfg;
  if (a.variant == "15") cfg.variant = AngleVariant::deg15;
  else if (a.variant == "45") cfg.variant = AngleVariant::deg45;
  else if (a.variant == "65") cfg.variant = AngleVariant::deg65;
  else if (a.variant == "custom") cfg.variant = AngleVariant::custom;
  else throw std::invalid_argument("variant: must be one of 15, 45, 65, custom");

  if (cfg.variant == AngleVariant::custom) {
    if (!a.alpha_set) throw std::invalid_argument("alpha: required for --variant custom");
    cfg.alpha = a.alpha;
    cfg.beta = a.beta_set ? a.beta : 0.0;
  } else if (a.alpha_set || a.beta_set) {
    const auto [alpha, beta] = resolve_angles(cfg);
    std::fprintf(stderr,
                 "sasmig: warning: --variant %s fixes (alpha,beta)=(%g,%g); "
                 "ignoring --alpha/--beta\n",
                 a.variant.c_str(), alpha, beta);
  }

  int nx = rec.n_traces, nz = 0;
  if (std::sscanf(a.grid.c_str(), "%dx%d", &nx, &nz) != 2 || nx < 2 || nz < 1)
    throw std::invalid_argument("grid: expected NXxNZ with nx >= 2, nz >= 1");

  if (a.dz <= 0.0) throw std::invalid_argument("dz: required and positive");
  cfg.dz = a.dz;
  cfg.output_grid = make_grid(nx, nz, rec.dx_track, a.dz, 0.0, 0.0);

  if (!a.layers_path.empty()) cfg.speed = read_layers(a.layers_path);
  else cfg.speed = SpeedProfile::constant(a.c > 0.0 ? a.c : rec.c);

  if (a.M > 0) {
    cfg.focusing_steps = a.M;
  } else {
    double theta = 15.0 * std::numbers::pi / 180.0;
    if (a.beam_f > 0.0 && a.beam_D > 0.0)
      theta = beam_width(a.beam_f, a.beam_D, cfg.speed.reference(), a.beam_alpha_w);
    const double z_max = cfg.output_grid.z(nz - 1);
    cfg.focusing_steps = default_focusing_steps(theta, std::max(z_max, a.dz),
                                                cfg.output_grid.dx, nz);
  }
  return cfg;
}

int run_migrate(const MigrateArgs& a) {
  const SasRecord rec = read_sas(a.in_path);
  const MigrationConfig cfg = build_migration_config(a, rec);
  const Field2D image = cfg.variant == AngleVariant::deg15 ? migrate_alg1(rec, cfg)
                                                           : migrate_alg2(rec, cfg);
  write_field(image, a.out_path);
  return 0;
}

struct EnhanceArgs {
  std::string in_path, out_path;
  double beta = 1.0;
  std::string phi = "bv";
  double delta = 0.25;
  double eps = 1e-8;
  double tol = 1e-6;
  double linear_tol = 1e-10;
  int max_iters = 100;
};

int run_enhance(const EnhanceArgs& a) {
  EnhanceConfig cfg;
  cfg.beta = a.beta;
  if (a.phi == "gaussian") cfg.variant = PhiVariant::gaussian;
  else if (a.phi == "bv") cfg.variant = PhiVariant::bv;
  else if (a.phi == "hybrid") cfg.variant = PhiVariant::hybrid;
  else throw std::invalid_argument("phi: must be gaussian, bv or hybrid");
  cfg.delta = a.delta;
  cfg.epsilon = a.eps;
  cfg.fixedpoint_tol = a.tol;
  cfg.linear_tol = a.linear_tol;
  cfg.max_iters = a.max_iters;

  Field2D field = read_field(a.in_path);

  // The enhancement stage operates on the detected image scaled to [0,1];
  // --beta and --delta are quoted relative to that scale.
  field.values = field.values.cwiseAbs();
  const double peak = field.values.maxCoeff();
  if (peak > 0.0) field.values /= peak;

  const EnhanceResult res = enhance(field, cfg);
  if (!res.converged)
    std::fprintf(stderr,
                 "sasmig: warning: fixed point stopped at max_iters=%d with "
                 "residual %.3e\n",
                 res.iterations, res.residual);
  write_field(res.S, a.out_path);
  return 0;
}

struct PsfArgs {
  std::string in_path;
  std::string near; // "x,z"
  int radius = 5;
};

int run_psf(const PsfArgs& a) {
  double x = 0.0, z = 0.0;
  if (std::sscanf(a.near.c_str(), "%lf,%lf", &x, &z) != 2)
    throw std::invalid_argument("near: expected \"x,z\"");
  const Field2D field = read_field(a.in_path);
  const PsfReport r = psf_metrics(field, x, z, a.radius);
  nlohmann::ordered_json j;
  j["peak_pixel"] = {r.peak_i, r.peak_j};
  j["peak_value"] = r.peak_value;
  j["width_x_3db"] = r.width_x_3db;
  j["width_z_3db"] = r.width_z_3db;
  std::printf("%s\n", j.dump().c_str());
  return 0;
}

struct PgmArgs {
  std::string in_path, out_path;
  std::string fixed; // "lo,hi" or empty for minmax
};

int run_pgm(const PgmArgs& a) {
  const Field2D field = read_field(a.in_path);
  PgmNormalization norm = PgmNormalization::minmax();
  if (!a.fixed.empty()) {
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(a.fixed.c_str(), "%lf,%lf", &lo, &hi) != 2)
      throw std::invalid_argument("fixed: expected \"lo,hi\"");
    norm = PgmNormalization::fixed(lo, hi);
  }
  export_pgm(field, a.out_path, norm);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sasmig: synthetic aperture sonar imaging via one-way wave equations"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)")
      ->capture_default_str();

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "synthesize a SAS record from a scatterer scene");
  c_sim->add_option("scene", sim.scene_path, "scatterer CSV (x,z,amplitude)")->required();
  c_sim->add_option("output", sim.out_path, "output .sas file")->required();
  c_sim->add_option("--traces", sim.n_traces)->capture_default_str();
  c_sim->add_option("--dx-track", sim.dx_track, "trace spacing [m]")->capture_default_str();
  c_sim->add_option("--samples", sim.n_samples)->capture_default_str();
  c_sim->add_option("--dt", sim.dt, "sample period [s]")->capture_default_str();
  c_sim->add_option("--t0", sim.t0, "time of first sample [s]")->capture_default_str();
  c_sim->add_option("--f", sim.f, "pulse center frequency [Hz]")->capture_default_str();
  c_sim->add_option("--envelope", sim.envelope, "gaussian|raised_cosine")->capture_default_str();
  c_sim->add_option("--duration", sim.duration, "envelope duration [s]")->capture_default_str();
  c_sim->add_option("--c", sim.c, "sound speed [m/s]")->capture_default_str();

  MigrateArgs mig;
  auto* c_mig = app.add_subcommand("migrate", "image a SAS record with the one-way wave schemes");
  c_mig->add_option("input", mig.in_path, "input .sas file")->required();
  c_mig->add_option("output", mig.out_path, "output .fld file")->required();
  c_mig->add_option("--variant", mig.variant, "15|45|65|custom")->capture_default_str();
  c_mig->add_option("--alpha", mig.alpha)->each([&](const std::string&) { mig.alpha_set = true; });
  c_mig->add_option("--beta", mig.beta)->each([&](const std::string&) { mig.beta_set = true; });
  c_mig->add_option("--M", mig.M, "focusing steps per pixel (0 = from beam width)")
      ->capture_default_str();
  c_mig->add_option("--dz", mig.dz, "range pitch [m]")->required();
  c_mig->add_option("--grid", mig.grid, "output grid NXxNZ")->required();
  c_mig->add_option("--c", mig.c, "sound speed override [m/s]");
  c_mig->add_option("--layers", mig.layers_path, "layered speed CSV (z_top,c)");
  c_mig->add_option("--beam-f", mig.beam_f, "aperture frequency for default M [Hz]");
  c_mig->add_option("--beam-D", mig.beam_D, "aperture length for default M [m]");
  c_mig->add_option("--beam-alpha-w", mig.beam_alpha_w)->capture_default_str();

  EnhanceArgs enh;
  auto* c_enh = app.add_subcommand("enhance", "variational enhancement of a detected image");
  c_enh->add_option("input", enh.in_path, "input .fld file")->required();
  c_enh->add_option("output", enh.out_path, "output .fld file")->required();
  c_enh->add_option("--beta", enh.beta, "regularization weight")->capture_default_str();
  c_enh->add_option("--phi", enh.phi, "gaussian|bv|hybrid")->capture_default_str();
  c_enh->add_option("--delta", enh.delta, "hybrid branch point in (0,1)")->capture_default_str();
  c_enh->add_option("--eps", enh.eps, "gradient magnitude floor")->capture_default_str();
  c_enh->add_option("--tol", enh.tol, "fixed point tolerance")->capture_default_str();
  c_enh->add_option("--linear-tol", enh.linear_tol)->capture_default_str();
  c_enh->add_option("--max-iters", enh.max_iters)->capture_default_str();

  PsfArgs psf;
  auto* c_psf = app.add_subcommand("psf", "point-spread metrics near a location (JSON on stdout)");
  c_psf->add_option("input", psf.in_path, "input .fld file")->required();
  c_psf->add_option("--near", psf.near, "\"x,z\" location [m]")->required();
  c_psf->add_option("--radius", psf.radius, "search radius [pixels]")->capture_default_str();

  std::string info_path;
  auto* c_info = app.add_subcommand("info", "print a file's header JSON");
  c_info->add_option("path", info_path)->required();

  PgmArgs pgm;
  auto* c_pgm = app.add_subcommand("pgm", "export a field as 16-bit PGM");
  c_pgm->add_option("input", pgm.in_path, "input .fld file")->required();
  c_pgm->add_option("output", pgm.out_path, "output .pgm file")->required();
  c_pgm->add_option("--fixed", pgm.fixed, "fixed normalization \"lo,hi\" (default minmax)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  set_thread_count(threads);

  try {
    if (app.got_subcommand(c_sim)) return run_simulate(sim);
    if (app.got_subcommand(c_mig)) return run_migrate(mig);
    if (app.got_subcommand(c_enh)) return run_enhance(enh);
    if (app.got_subcommand(c_psf)) return run_psf(psf);
    if (app.got_subcommand(c_info)) {
      std::printf("%s\n", file_info_json(info_path).c_str());
      return 0;
    }
    if (app.got_subcommand(c_pgm)) return run_pgm(pgm);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "sasmig: numerical failure: %s (step %ld, row %ld)\n",
                 e.what(), e.step(), e.row());
    return 3;
  } catch (const ParseError& e) {
    if (e.byte_offset() >= 0)
      std::fprintf(stderr, "sasmig: %s (byte offset %lld)\n", e.what(),
                   static_cast<long long>(e.byte_offset()));
    else
      std::fprintf(stderr, "sasmig: %s\n", e.what());
    return 2;
  } catch (const NotFoundError& e) {
    std::fprintf(stderr, "sasmig: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "sasmig: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sasmig: error: %s\n", e.what());
    return 2;
  }
  return 1;
}
