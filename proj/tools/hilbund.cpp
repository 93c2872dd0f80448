// hilbund: renorming geometry toolkit CLI.
//
// Subcommands consume a JSON input, emit a versioned JSON report, and exit
// with 0 (ok), 2 (validation error) or 3 (solver non-convergence; the
// report still carries the best iterate).

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "hilbund/json_io.hpp"
#include "hilbund/svg.hpp"
#include "hilbund/version.hpp"

namespace {

using namespace hilbund;

struct CommonOpts {
  std::string input = "-";
  std::string output = "-";
  std::string svg_path;
  double epsilon = 1e-6;
  double tol = 1e-8;
  int max_iter = 0;
  uint64_t cap = 1000000;
  uint64_t seed = 20240901;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--input", opts->input, "Input JSON path ('-' for stdin)");
  cmd->add_option("--output", opts->output, "Report path ('-' for stdout)");
  cmd->add_option("--svg", opts->svg_path,
                  "Write a 2-d overlay SVG next to the report");
  cmd->add_option("--epsilon", opts->epsilon,
                  "Relative volume gap for ellipsoid solves");
  cmd->add_option("--tol", opts->tol, "Tolerance for checks and memberships");
  cmd->add_option("--max-iter", opts->max_iter,
                  "Iteration cap for the ellipsoid solver (0 = auto)");
  cmd->add_option("--cap", opts->cap, "Enumeration cap for hyperspace scans");
  cmd->add_option("--seed", opts->seed, "Seed for randomized probes");
}

MveeConfig solver_config(const CommonOpts& o) {
  MveeConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.max_iter = o.max_iter;
  cfg.oracle_tol = std::min(o.tol, o.epsilon);
  return cfg;
}

Json config_echo(const CommonOpts& o) {
  Json j;
  j["epsilon"] = o.epsilon;
  j["tol"] = o.tol;
  j["max_iter"] = o.max_iter;
  j["cap"] = o.cap;
  j["seed"] = o.seed;
  return j;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void maybe_svg_body_ellipse(const CommonOpts& opts, const SymmetricBody* body,
                            const Ellipsoid* ell) {
  if (opts.svg_path.empty()) return;
  const bool planar =
      (!body || body->dim() == 2) && (!ell || ell->dim() == 2) && (body || ell);
  if (!planar) {
    std::cerr << "warning: --svg ignored (objects are not 2-dimensional)\n";
    return;
  }
  SvgScene scene;
  if (body) scene.add_body(*body, "#1f6f43");
  if (ell) scene.add_ellipsoid(*ell, "#4757a5");
  write_svg(opts.svg_path, scene);
}

int run_mvee(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  std::vector<Vec> points;
  std::optional<SymmetricBody> body;
  if (input.contains("points")) {
    for (const Json& p : input.at("points")) points.push_back(vec_from_json(p));
  } else if (input.contains("body")) {
    body = body_from_json(input.at("body"));
    points = body->vertices();
  } else {
    throw ValidationError("mvee input needs 'points' or 'body'");
  }
  MveeConfig cfg = solver_config(opts);
  MveeResult res = mvee_points(points, cfg);

  Json results;
  results["ellipsoid"] = ellipsoid_to_json(res.ellipsoid);
  results["iterations"] = res.iterations;
  results["achieved_gap"] = res.achieved_gap;
  if (!body && !points.empty()) {
    // Points that form a body let us attach the identity-distortion data.
    try {
      body = convex_hull_points(static_cast<int>(points[0].size()), points);
    } catch (const Error&) {
      // Not a body (e.g. merely spanning sample); report the ellipsoid only.
    }
  }
  if (body) {
    LoewnerCertificate cert = john_check(*body, res.ellipsoid);
    cert.iterations = res.iterations;
    cert.achieved_gap = res.achieved_gap;
    results["certificate"] = certificate_to_json(cert);
  }
  Json report = make_report("mvee", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  maybe_svg_body_ellipse(opts, body ? &*body : nullptr, &res.ellipsoid);
  return 0;
}

int run_john(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  SymmetricBody body = body_from_json(input.at("body"));
  LoewnerCertificate cert =
      input.contains("ellipsoid")
          ? john_check(body, ellipsoid_from_json(input.at("ellipsoid")))
          : loewner_certify(body, solver_config(opts));
  Json results;
  results["certificate"] = certificate_to_json(cert);
  results["within_john_bound"] =
      cert.distortion <= cert.john_bound * (1.0 + opts.epsilon) + 1e-9;
  Json report = make_report("john", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  maybe_svg_body_ellipse(opts, &body, &cert.ellipsoid);
  return 0;
}

int run_renorm_build(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  Bundle bundle = bundle_from_json(input.at("bundle"));
  Renorming ren = build_renorming(bundle, solver_config(opts));
  Json results;
  results["renorming"] = renorming_to_json(ren);
  Json report = make_report("renorm-build", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return 0;
}

int run_renorm_verify(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  Bundle bundle = bundle_from_json(input.at("bundle"));
  MveeConfig cfg = solver_config(opts);
  Renorming ren = build_renorming(bundle, cfg);
  std::vector<LscNet> nets;
  for (const Json& jn : input.at("nets")) {
    LscNet net;
    net.limit = jn.at("limit").get<std::string>();
    for (const Json& v : jn.at("approaching"))
      net.approaching.push_back(v.get<std::string>());
    nets.push_back(std::move(net));
  }
  std::vector<std::string> probes;
  if (input.contains("probe_sections"))
    for (const Json& p : input.at("probe_sections"))
      probes.push_back(p.get<std::string>());
  else
    for (const Section& s : bundle.sections) probes.push_back(s.id);
  const double tol = input.value("tol", 1e-2);
  LscReport rep = verify_lsc(ren, bundle, nets, probes, tol, cfg);
  Json results;
  results["lsc_report"] = lsc_report_to_json(rep);
  results["distortion_sup"] = ren.distortion_sup;
  Json report = make_report("renorm-verify", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return rep.pass ? 0 : 3;
}

int run_renorm_select(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  Bundle bundle = bundle_from_json(input.at("bundle"));
  MveeConfig cfg = solver_config(opts);
  Renorming ren = build_renorming(bundle, cfg);
  const std::string root =
      input.value("root", bundle.base.vertices.front());
  Selection sel = select(ren, bundle, root);
  Json results;
  results["selection"] = selection_to_json(sel);
  results["distortion_sup"] = ren.distortion_sup;
  Json report = make_report("renorm-select", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return 0;
}

int run_hyper_build(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  FiniteMetricSpace z = metric_space_from_json(input.at("space"));
  const int n = input.at("n").get<int>();
  IncidenceSpace inc = build_incidence(z, n);
  Json results;
  results["hyperspace"] = hyperspace_to_json(inc.hyper);
  results["incidence"] = incidence_to_json(inc);
  Json report = make_report("hyper-build", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return 0;
}

int run_hyper_roundtrip(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  FiniteMetricSpace x = metric_space_from_json(input.at("X"));
  FiniteMetricSpace z = metric_space_from_json(input.at("Z"));
  const int n = input.at("n").get<int>();
  RoundtripReport rep = roundtrip_check(x, z, n, opts.cap);
  Json results;
  results["roundtrip"] = roundtrip_to_json(rep);
  Json report = make_report("hyper-roundtrip", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return rep.pass ? 0 : 3;
}

int run_hyper_slice(const CommonOpts& opts) {
  Stopwatch watch;
  Json input = read_json_input(opts.input);
  ConvexSelection sel = convex_selection_from_json(input.at("selection"));
  Json results;
  if (input.contains("x") && input.contains("A")) {
    std::vector<std::string> members;
    for (const Json& m : input.at("A")) members.push_back(m.get<std::string>());
    SliceResult slice =
        slice_selection(sel, input.at("x").get<std::string>(), members);
    Json js;
    js["f"] = slice.f;
    js["phi_x"] = vec_to_json(slice.phi_x);
    js["coeffs"] = vec_to_json(slice.coeffs);
    js["residual"] = slice.residual;
    results["slice"] = std::move(js);
  }
  if (input.contains("nets")) {
    std::vector<ContinuityNet> nets;
    for (const Json& jn : input.at("nets")) {
      ContinuityNet net;
      net.limit = jn.at("limit").get<std::string>();
      for (const Json& term : jn.at("terms")) {
        std::vector<std::string> ids;
        for (const Json& m : term) ids.push_back(m.get<std::string>());
        net.terms.push_back(std::move(ids));
      }
      if (jn.contains("slice_point"))
        net.slice_point = jn.at("slice_point").get<std::string>();
      nets.push_back(std::move(net));
    }
    const double tol = input.value("tol", 1e-2);
    results["continuity"] =
        continuity_to_json(check_singleton_continuity(sel, nets, tol));
  }
  require(!results.empty(),
          "hyper-slice input needs ('x' and 'A') and/or 'nets'");
  Json report = make_report("hyper-slice", config_echo(opts), results);
  attach_timing(&report, "total_s", watch.seconds());
  write_report(opts.output, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renorming geometry toolkit: Loewner ellipsoids, multi-valued "
               "Hilbert renormings over discrete bundles, and finite "
               "hyperspace checks"};
  app.set_version_flag("--version", std::string(hilbund::kToolVersion));
  app.require_subcommand(1);

  struct SubcommandSpec {
    const char* name;
    const char* help;
    int (*runner)(const CommonOpts&);
  };
  const std::vector<SubcommandSpec> specs = {
      {"mvee", "Minimum-volume enclosing ellipsoid of symmetric points",
       &run_mvee},
      {"john", "Distortion certificate of a body against an ellipsoid",
       &run_john},
      {"renorm-build", "Build the multi-valued renorming over a bundle",
       &run_renorm_build},
      {"renorm-verify", "Lower-semicontinuity check along vertex nets",
       &run_renorm_verify},
      {"renorm-select", "Extract a single-valued selection of the renorming",
       &run_renorm_select},
      {"hyper-build", "Hyperspace and incidence space of a finite metric space",
       &run_hyper_build},
      {"hyper-roundtrip", "Representability round trip maps <-> covers",
       &run_hyper_roundtrip},
      {"hyper-slice", "Slice a convex selection / continuity at singletons",
       &run_hyper_slice},
  };

  std::vector<std::pair<CLI::App*, CommonOpts>> parsed;
  parsed.reserve(specs.size());
  for (const auto& spec : specs) {
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    parsed.emplace_back(cmd, CommonOpts{});
    add_common(cmd, &parsed.back().second);
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < specs.size(); ++i) {
    if (!parsed[i].first->parsed()) continue;
    try {
      return specs[i].runner(parsed[i].second);
    } catch (const hilbund::ConvergenceError& e) {
      hilbund::Json diag;
      diag["error"] = "ConvergenceError";
      diag["message"] = e.what();
      diag["best_iterate"] = hilbund::ellipsoid_to_json(e.best.ellipsoid);
      std::cerr << diag.dump(2) << "\n";
      return 3;
    } catch (const hilbund::Error& e) {
      using namespace hilbund;
      auto type_name = [](const Error& err) -> const char* {
        if (dynamic_cast<const DimensionError*>(&err)) return "DimensionError";
        if (dynamic_cast<const DegenerateBodyError*>(&err))
          return "DegenerateBodyError";
        if (dynamic_cast<const DegenerateEllipsoidError*>(&err))
          return "DegenerateEllipsoidError";
        if (dynamic_cast<const DegenerateNormError*>(&err))
          return "DegenerateNormError";
        if (dynamic_cast<const NotEnclosingError*>(&err))
          return "NotEnclosingError";
        if (dynamic_cast<const SectionError*>(&err)) return "SectionError";
        if (dynamic_cast<const AnchorError*>(&err)) return "AnchorError";
        if (dynamic_cast<const CertificateError*>(&err))
          return "CertificateError";
        if (dynamic_cast<const NetError*>(&err)) return "NetError";
        if (dynamic_cast<const EnumerationCapError*>(&err))
          return "EnumerationCapError";
        if (dynamic_cast<const InternalError*>(&err)) return "InternalError";
        return "ValidationError";
      };
      Json diag;
      diag["error"] = type_name(e);
      diag["message"] = e.what();
      std::cerr << diag.dump(2) << "\n";
      return 2;
    }
  }
  return 2;
}
