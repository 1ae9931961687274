#include "sepnet/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "sepnet/csv.hpp"
#include "sepnet/serialize.hpp"
#include "sepnet/targets.hpp"
#include "sepnet/tietze.hpp"

namespace sepnet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct JobConfig {
  std::string activation = "logistic";
  std::optional<double> eps;
  std::optional<std::string> scheme;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int max_iter = 64;
  long long max_width = 2'000'000;
  int hole_retry_rounds = 8;
  bool finite = false;
  std::string target;
  std::string grid;
  std::vector<std::string> inputs;
  int dim = 0;
  std::optional<int> nodes;
};

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

QuadratureConfig quadrature_config(const JobConfig& cfg) {
  QuadratureConfig q;
  if (cfg.scheme) q.scheme = parse_scheme(*cfg.scheme);
  q.nodes = cfg.nodes;
  q.seed = cfg.seed;
  return q;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

fs::path prepare_out_dir(const JobConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

json hole_json(const Hole& hole) {
  const HoleParams& p = hole.params;
  const HoleCertificate& c = hole.certificate;
  return json{{"center", vector_json(p.center)},
              {"dist", p.dist},
              {"delta", p.delta},
              {"eps", p.eps},
              {"n_const", p.n_const},
              {"slope", p.slope},
              {"quadrature", {{"scheme", scheme_name(p.quadrature.scheme)}, {"nodes", p.quadrature.size()}}},
              {"min_on_far", c.min_on_far},
              {"max_on_near", c.max_on_near},
              {"rounds", c.rounds},
              {"verified", c.verified}};
}

json certificate_json(const Separator& sep, Activation act) {
  const SeparatorCertificate& c = sep.certificate;
  json centers = json::array();
  for (const Vector& v : c.cover_centers) centers.push_back(vector_json(v));
  json holes = json::array();
  for (const CoverEntry& e : sep.cover) holes.push_back(hole_json(e.hole));
  return json{{"activation", activation_name(act)},
              {"a", c.a},
              {"b", c.b},
              {"eps_used", c.eps_used},
              {"n_cover", c.n_cover},
              {"cover_centers", centers},
              {"max_on_B", c.max_on_B},
              {"min_on_A", c.min_on_A},
              {"verified", c.verified},
              {"holes", holes}};
}

json report_json(const SynthesisReport& r) {
  json iters = json::array();
  for (const IterationRecord& it : r.iterations) {
    iters.push_back(json{{"osc_before", it.osc_before},
                         {"osc_after", it.osc_after},
                         {"contraction", it.contraction},
                         {"a", it.a},
                         {"b", it.b},
                         {"c_step", it.c_step},
                         {"widths", it.widths},
                         {"n_cover", it.n_cover},
                         {"summand_sup", it.summand_sup},
                         {"centering_shift", it.centering_shift}});
  }
  return json{{"iterations", iters},
              {"final_constant", r.final_constant},
              {"final_sup_error", r.final_sup_error},
              {"eps_target", r.eps_target}};
}

std::string residual_csv(const SynthesisReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,osc_before,osc_after,contraction,c_step,a,b,n_cover,first_layer_width\n";
  for (std::size_t k = 0; k < r.iterations.size(); ++k) {
    const IterationRecord& it = r.iterations[k];
    out << k << ',' << it.osc_before << ',' << it.osc_after << ',' << it.contraction << ',' << it.c_step << ','
        << it.a << ',' << it.b << ',' << it.n_cover << ',' << (it.widths.empty() ? 0 : it.widths.front()) << '\n';
  }
  return out.str();
}

void write_values(const fs::path& path, const Network& net, const PointCloud& points) {
  const Vector values = net.eval_scalar(points.coords());
  write_csv(path, points, &values);
}

int cmd_separate(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 2) throw ConfigError("separate needs two point-cloud files: A B");
  const Activation act = parse_activation(cfg.activation);
  const double eps = cfg.eps.value_or(0.1);
  if (is_sigmoidal(act) && !(eps > 0.0 && eps < 0.5)) throw ConfigError("--eps must lie in (0, 1/2)");
  const PointCloud A = read_points_csv(cfg.inputs[0]);
  const PointCloud B = read_points_csv(cfg.inputs[1]);
  if (A.dim() != B.dim()) throw ShapeError("A and B have different dimensions");
  if (!(cloud_distance(A, B) > 0.0)) throw PreconditionError("A and B overlap (distance 0)");
  const fs::path dir = prepare_out_dir(cfg);

  SeparatorOptions options;
  options.hole.retry_rounds = cfg.hole_retry_rounds;
  Separator sep = [&] {
    try {
      return separate_sets(A, B, act, eps, quadrature_config(cfg), options);
    } catch (const HoleConstructionError& e) {
      const HoleCertificate& best = e.best();
      write_json(dir / "certificate.json",
                 json{{"activation", activation_name(act)},
                      {"verified", false},
                      {"error", e.what()},
                      {"best_hole", {{"min_on_far", best.min_on_far}, {"max_on_near", best.max_on_near}}}});
      throw;
    }
  }();
  save_network(sep.H, dir / "separator.json");
  write_json(dir / "certificate.json", certificate_json(sep, act));
  write_values(dir / "values.csv", sep.H, A.concat(B));

  const SeparatorCertificate& c = sep.certificate;
  out.precision(17);
  out << "a " << c.a << "\nb " << c.b << "\nmin_on_A " << c.min_on_A << "\nmax_on_B " << c.max_on_B << "\nn_cover "
      << c.n_cover << "\nverified " << (c.verified ? "true" : "false") << '\n';
  if (!c.verified) {
    err << "separate: certificate did not verify\n";
    return kExitConstructionFailure;
  }
  return kExitOk;
}

LabeledCloud synthesis_input(const JobConfig& cfg) {
  if (!cfg.target.empty() || !cfg.grid.empty()) {
    if (!cfg.inputs.empty()) throw ConfigError("give either a labeled-cloud file or --target with --grid");
    if (cfg.target.empty() || cfg.grid.empty()) throw ConfigError("--target and --grid go together");
    const Target& t = find_target(cfg.target);
    return sample_target(t, grid_points(parse_grid(cfg.grid)));
  }
  if (cfg.inputs.size() != 1) throw ConfigError("synthesize needs one labeled-cloud file or --target/--grid");
  return read_labeled_csv(cfg.inputs[0]);
}

int cmd_synthesize(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const Activation act = parse_activation(cfg.activation);
  const double eps = cfg.eps.value_or(0.05);
  if (!(eps > 0.0)) throw ConfigError("--eps must be positive");
  if (cfg.max_iter < 1 || cfg.max_width < 1) throw ConfigError("budgets must be positive");
  const LabeledCloud K = synthesis_input(cfg);
  validate(K);
  const QuadratureConfig quad = quadrature_config(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  out.precision(17);

  if (cfg.finite && K.size() <= kFiniteModeLimit) {
    HoleOptions hole_options;
    hole_options.retry_rounds = cfg.hole_retry_rounds;
    const Network F = synthesize_finite(K, act, eps, quad, hole_options);
    const VerifyResult v = verify(F, K);
    SynthesisReport report;
    report.eps_target = eps;
    report.final_sup_error = v.sup_error;
    report.final_constant = K.values.minCoeff();
    json doc = report_json(report);
    doc["mode"] = "finite";
    doc["activation"] = activation_name(act);
    doc["hidden_depth"] = F.hidden_depth();
    save_network(F, dir / "network.json");
    write_json(dir / "report.json", doc);
    write_values(dir / "values.csv", F, K.points);
    out << "mode finite\nhidden_depth " << F.hidden_depth() << "\nsup_error " << v.sup_error << '\n';
    return v.sup_error <= eps ? kExitOk : kExitConstructionFailure;
  }
  if (cfg.finite) {
    err << "synthesize: " << K.size() << " points exceed the finite-mode limit of " << kFiniteModeLimit
        << "; running the iterative construction\n";
  }

  SynthesisOptions options;
  options.budgets.max_iterations = cfg.max_iter;
  options.budgets.max_first_layer_width = cfg.max_width;
  options.budgets.hole_retry_rounds = cfg.hole_retry_rounds;
  options.quadrature = quad;
  try {
    const SynthesisResult r = synthesize(K, act, eps, options);
    json doc = report_json(r.report);
    doc["mode"] = "iterative";
    doc["activation"] = activation_name(act);
    doc["status"] = "converged";
    save_network(r.network, dir / "network.json");
    write_json(dir / "report.json", doc);
    write_text(dir / "residuals.csv", residual_csv(r.report));
    write_values(dir / "values.csv", r.network, K.points);
    out << "mode iterative\niterations " << r.report.iterations.size() << "\nhidden_depth "
        << r.network.hidden_depth() << "\nsup_error " << r.report.final_sup_error << '\n';
    return r.report.final_sup_error <= eps ? kExitOk : kExitConstructionFailure;
  } catch (const SynthesisError& e) {
    json doc = report_json(e.report());
    doc["mode"] = "iterative";
    doc["activation"] = activation_name(act);
    doc["status"] = "failed";
    doc["error"] = e.what();
    if (e.partial()) {
      save_network(*e.partial(), dir / "network.json");
      write_values(dir / "values.csv", *e.partial(), K.points);
    }
    write_json(dir / "report.json", doc);
    write_text(dir / "residuals.csv", residual_csv(e.report()));
    err << "synthesize: " << e.what() << '\n';
    return kExitConstructionFailure;
  }
}

int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 2) throw ConfigError("verify needs a network file and a labeled-cloud file");
  const Network net = load_network(cfg.inputs[0]);
  const LabeledCloud K = read_labeled_csv(cfg.inputs[1]);
  if (net.input_dim() != K.dim()) throw ShapeError("network input dimension differs from the cloud dimension");
  if (net.output_dim() != 1) throw ShapeError("verify needs a scalar-valued network");
  const VerifyResult v = verify(net, K);
  out.precision(17);
  out << "sup_error " << v.sup_error << "\nargmax_point";
  for (Eigen::Index i = 0; i < v.argmax_point.size(); ++i) out << (i ? "," : " ") << v.argmax_point(i);
  out << '\n';
  if (cfg.eps && v.sup_error > *cfg.eps) {
    err << "verify: sup error exceeds " << *cfg.eps << '\n';
    return kExitConstructionFailure;
  }
  return kExitOk;
}

int cmd_quad_info(const JobConfig& cfg, std::ostream& out) {
  if (cfg.dim < 1) throw ConfigError("quad-info needs --dim >= 1");
  const RotationQuadrature q = quadrature_config(cfg).build(cfg.dim);
  check_invariants(q);
  double weight_sum = 0.0;
  double orth = 0.0;
  for (std::size_t k = 0; k < q.rotations.size(); ++k) {
    weight_sum += q.weights[k];
    const Matrix& r = q.rotations[k];
    orth = std::max(orth, (r.transpose() * r - Matrix::Identity(q.n, q.n)).cwiseAbs().maxCoeff());
  }
  const json doc{{"n", q.n},
                 {"scheme", scheme_name(q.scheme)},
                 {"seed", q.seed},
                 {"requested_nodes", q.requested_nodes},
                 {"nodes", q.size()},
                 {"weight_sum", weight_sum},
                 {"min_weight", *std::min_element(q.weights.begin(), q.weights.end())},
                 {"max_weight", *std::max_element(q.weights.begin(), q.weights.end())},
                 {"max_orthogonality_error", orth}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, JobConfig& cfg) {
  cmd->add_option("--activation", cfg.activation, "logistic, tanh or relu")
      ->check(CLI::IsMember({"logistic", "tanh", "relu"}));
  cmd->add_option("--scheme", cfg.scheme, "rotation quadrature: trivial, circle, euler, mc-haar")
      ->check(CLI::IsMember({"trivial", "circle", "euler", "mc-haar"}));
  cmd->add_option("--seed", cfg.seed, "seed for randomized quadratures");
  cmd->add_option("--out-dir", cfg.out_dir, "directory for output artifacts");
  cmd->add_option("--hole-retries", cfg.hole_retry_rounds, "adaptive hole rounds after the first")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  CLI::App app{"Constructive weight synthesis for shallow networks"};
  app.require_subcommand(1);

  CLI::App* sep = app.add_subcommand("separate", "separate two point clouds with a network H");
  add_common(sep, cfg);
  sep->add_option("files", cfg.inputs, "A.csv B.csv (H is high on A, low on B)")->required()->expected(2);
  sep->add_option("--eps", cfg.eps, "separator tolerance (sigmoid), default 0.1");

  CLI::App* syn = app.add_subcommand("synthesize", "approximate sampled values with a network");
  add_common(syn, cfg);
  syn->add_option("file", cfg.inputs, "labeled-cloud CSV")->expected(0, 1);
  syn->add_option("--eps", cfg.eps, "target sup error, default 0.05");
  syn->add_option("--target", cfg.target, "built-in target: linear, sinprod, runge, step-smooth");
  syn->add_option("--grid", cfg.grid, "sampling grid lo:hi:count[,lo:hi:count...]");
  syn->add_flag("--finite", cfg.finite, "use the one-hidden-layer finite construction when |K| <= 64");
  syn->add_option("--max-iter", cfg.max_iter, "iteration budget");
  syn->add_option("--max-width", cfg.max_width, "first-layer width budget");

  CLI::App* ver = app.add_subcommand("verify", "sup error of a network on a labeled cloud");
  ver->add_option("files", cfg.inputs, "network.json cloud.csv")->required()->expected(2);
  ver->add_option("--eps", cfg.eps, "fail (exit 3) when the sup error exceeds this");

  CLI::App* quad = app.add_subcommand("quad-info", "describe a rotation quadrature");
  quad->add_option("--dim", cfg.dim, "dimension n")->required();
  quad->add_option("--nodes", cfg.nodes, "node budget");
  quad->add_option("--scheme", cfg.scheme, "trivial, circle, euler, mc-haar")
      ->check(CLI::IsMember({"trivial", "circle", "euler", "mc-haar"}));
  quad->add_option("--seed", cfg.seed, "seed for mc-haar");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (sep->parsed()) return cmd_separate(cfg, out, err);
    if (syn->parsed()) return cmd_synthesize(cfg, out, err);
    if (ver->parsed()) return cmd_verify(cfg, out, err);
    return cmd_quad_info(cfg, out);
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << '\n';
    return kExitConstructionFailure;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace sepnet
