// Command-line front end: every analysis in the library with reproducible,
// machine-readable output. JSON is the single source of truth; the human
// format renders the same payload. Exit codes: 0 success, 2 parse error,
// 3 guard violation, 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlc/nlc.hpp"

namespace {

using nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string canonical_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommandContext {
  std::string command;
  std::string digest_material;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void feed(const std::string& key, const std::string& value) {
    digest_material += key;
    digest_material += '=';
    digest_material += value;
    digest_material += ';';
  }
  void feed(const std::string& key, double value) { feed(key, canonical_double(value)); }
  void feed(const std::string& key, std::uint64_t value) { feed(key, std::to_string(value)); }
};

void render_human(const ordered_json& payload, std::ostream& out) {
  for (const auto& [key, value] : payload.items()) {
    if (value.is_string()) out << key << ": " << value.get<std::string>() << "\n";
    else out << key << ": " << value.dump() << "\n";
  }
}

void emit(const CommandContext& ctx, const ordered_json& payload) {
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - ctx.started)
                        .count();
  if (ctx.format == "human") {
    render_human(payload, std::cout);
    std::cerr << "# " << ctx.command << " digest=" << hex64(fnv1a(ctx.digest_material))
              << " wall_time_ms=" << ms << "\n";
    return;
  }
  ordered_json out;
  out["command"] = ctx.command;
  out["input_digest"] = hex64(fnv1a(ctx.digest_material));
  if (ctx.seed) out["seed"] = *ctx.seed;
  out["payload"] = payload;
  out["wall_time_ms"] = ms;
  std::cout << out.dump(2) << "\n";
}

nlc::BooleanFunction parse_fn_arg(CommandContext& ctx, const std::string& spec) {
  const nlc::BooleanFunction f = nlc::parse_function(spec);
  ctx.feed("fn", f.table_hex() + "@" + std::to_string(f.n()));
  return f;
}

nlc::PriorDistribution parse_prior_arg(CommandContext& ctx, const std::string& spec,
                                       unsigned n, bool renormalize) {
  const nlc::PriorDistribution prior = nlc::parse_prior(spec, n, renormalize);
  std::string canon;
  for (double v : prior.p()) {
    canon += canonical_double(v);
    canon += ',';
  }
  ctx.feed("prior", canon);
  return prior;
}

ordered_json bit_json(const nlc::BitString& s) {
  return ordered_json{{"value", s.value}, {"bits", s.to_string()}};
}

int cmd_value(CommandContext& ctx, const std::string& fn_spec, const std::string& prior_spec,
              bool renormalize) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
  const nlc::TaskValueReport report = nlc::classical_optimum(f, prior);

  ordered_json payload;
  payload["n"] = f.n();
  payload["classical_value"] = report.value;
  payload["quantum_bound"] = nlc::quantum_bound(f, prior);
  payload["strategy"] = {{"u", bit_json(report.strategy.u)}, {"delta", report.strategy.delta}};
  payload["spectrum_argmax"] = bit_json(report.spectrum_argmax);
  payload["coefficient"] = report.coefficient;
  payload["affine"] = nlc::is_affine(f);
  emit(ctx, payload);
  return 0;
}

int cmd_bruteforce(CommandContext& ctx, const std::string& fn_spec,
                   const std::string& prior_spec, bool renormalize) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
  const nlc::BruteForceResult brute = nlc::brute_force_optimum(f, prior);
  const double closed = nlc::classical_optimum(f, prior).value;
  if (std::abs(brute.value - closed) > 1e-9)
    throw nlc::numerical_error("brute force value " + std::to_string(brute.value) +
                               " disagrees with the closed form " + std::to_string(closed));

  ordered_json payload;
  payload["n"] = f.n();
  payload["value"] = brute.value;
  payload["closed_form_value"] = closed;
  payload["match"] = true;
  payload["a_table"] = brute.best.a_table;
  payload["b_table"] = brute.best.b_table;
  emit(ctx, payload);
  return 0;
}

int cmd_certificate(CommandContext& ctx, const std::string& game_path,
                    const std::string& fn_spec, const std::string& prior_spec,
                    bool renormalize, std::uint64_t seed, int seesaw_d, int restarts,
                    int max_iters, double tol) {
  std::optional<nlc::GameMatrix> game;
  if (!game_path.empty()) {
    game = nlc::load_game_csv(game_path);
    std::string canon;
    for (std::size_t x = 0; x < game->rows(); ++x)
      for (std::size_t y = 0; y < game->cols(); ++y) {
        canon += canonical_double((*game)(x, y));
        canon += ',';
      }
    ctx.feed("game", canon);
  } else {
    if (fn_spec.empty()) throw nlc::parse_error("certificate needs --game or --fn");
    const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
    const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
    game = nlc::game_from_nlc(f, prior);
  }
  ctx.seed = seed;
  ctx.feed("seed", seed);
  ctx.feed("seesaw_d", static_cast<std::uint64_t>(seesaw_d));
  ctx.feed("restarts", static_cast<std::uint64_t>(restarts));

  const nlc::CertificateReport cert = nlc::no_advantage_certificate(*game, tol);
  const nlc::ClassicalBiasResult classical = nlc::classical_bias(*game);
  const nlc::SeesawResult seesaw = nlc::seesaw_quantum_bias(
      *game, {.d = seesaw_d, .restarts = restarts, .max_iters = max_iters, .seed = seed});

  ordered_json payload;
  payload["rows"] = game->rows();
  payload["cols"] = game->cols();
  payload["hadamard_bias"] = cert.hadamard_bias;
  payload["classical_bias"] = classical.bias;
  payload["seesaw_bias"] = seesaw.bias;
  payload["norm_bound_bias"] = cert.norm_bound_bias;
  payload["classical_value"] = 0.5 * (1.0 + classical.bias);
  payload["quantum_value_bound"] = 0.5 * (1.0 + cert.norm_bound_bias);
  payload["passes"] = cert.passes;
  payload["witness_u"] = bit_json(cert.witness_u);
  payload["witness_v"] = bit_json(cert.witness_v);
  payload["seesaw_restart"] = seesaw.best_restart;
  emit(ctx, payload);
  return 0;
}

int cmd_bell(CommandContext& ctx, const std::string& fn_spec, const std::string& prior_spec,
             bool renormalize, const std::string& out_path) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
  ctx.feed("out", out_path);
  const nlc::BellInequality bell = nlc::bell_inequality(f, prior);
  nlc::save_bell_json(bell, out_path);

  ordered_json payload;
  payload["n"] = bell.n;
  payload["K"] = bell.K;
  payload["out"] = out_path;
  emit(ctx, payload);
  return 0;
}

struct ResolvedTarget {
  std::optional<nlc::CorrelationBox> box;
  std::optional<nlc::BoxProtocol> protocol;
};

ResolvedTarget resolve_protocol_spec(const std::string& spec) {
  ResolvedTarget t;
  if (spec == "pr-and") {
    t.protocol = nlc::and_protocol_from_two_boxes(nlc::pr_box(), nlc::pr_box());
  } else if (spec.rfind("noisy-pr-and:p=", 0) == 0) {
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(spec.substr(15), &used);
      if (used != spec.size() - 15) throw nlc::parse_error("");
    } catch (...) {
      throw nlc::parse_error("bad noise parameter in protocol spec: " + spec);
    }
    if (!(p >= 0.0 && p <= 1.0))
      throw nlc::parse_error("noise parameter must lie in [0, 1]: " + spec);
    t.protocol = nlc::and_protocol_from_two_boxes(nlc::noisy_pr_box(p), nlc::noisy_pr_box(p));
  } else if (spec.rfind("perfect:", 0) == 0) {
    t.box = nlc::perfect_nlc_box(nlc::parse_function(spec.substr(8)));
  } else if (spec.rfind("box:", 0) == 0) {
    t.box = nlc::load_box_json(spec.substr(4));
  } else if (spec.rfind("protocol:", 0) == 0) {
    t.protocol = nlc::load_protocol_json(spec.substr(9));
  } else {
    throw nlc::parse_error("unrecognized protocol spec: " + spec +
                           " (expected pr-and, noisy-pr-and:p=<p>, perfect:<fn>, "
                           "box:<file.json> or protocol:<file.json>)");
  }
  return t;
}

int cmd_boxes_simulate(CommandContext& ctx, const std::string& protocol_spec,
                       const std::string& fn_spec, const std::string& prior_spec,
                       bool renormalize, long long trials, std::uint64_t seed) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
  ctx.feed("protocol", protocol_spec);
  ctx.feed("trials", static_cast<std::uint64_t>(trials));
  ctx.feed("seed", seed);
  ctx.seed = seed;

  const ResolvedTarget target = resolve_protocol_spec(protocol_spec);
  double exact = 0.0;
  nlc::MonteCarloResult mc;
  if (target.box) {
    exact = nlc::box_success_exact(*target.box, f, prior);
    mc = nlc::monte_carlo_success(*target.box, f, prior, trials, seed);
  } else {
    exact = nlc::protocol_success_exact(*target.protocol, f, prior);
    mc = nlc::monte_carlo_success(*target.protocol, f, prior, trials, seed);
  }

  ordered_json payload;
  payload["protocol"] = protocol_spec;
  payload["n"] = f.n();
  payload["exact_value"] = exact;
  payload["estimate"] = mc.estimate;
  payload["standard_error"] = mc.standard_error;
  payload["trials"] = mc.trials;
  emit(ctx, payload);
  return 0;
}

int cmd_boxes_analyze(CommandContext& ctx, const std::string& box_path, double tol) {
  const nlc::CorrelationBox box = nlc::load_box_json(box_path);
  std::string canon;
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (std::uint32_t y = 0; y < box.y_count(); ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          canon += canonical_double(box.prob(x, y, a, b));
          canon += ',';
        }
  ctx.feed("box", canon);
  ctx.feed("tol", tol);

  ordered_json payload;
  payload["nx"] = box.nx();
  payload["ny"] = box.ny();
  payload["valid"] = box.is_valid();
  payload["nonsignalling"] = nlc::is_nonsignalling(box, tol);
  payload["marginals_uniform"] = nlc::marginals_uniform(box, tol);
  emit(ctx, payload);
  return 0;
}

int cmd_minimax(CommandContext& ctx, const std::string& fn_spec) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::MinimaxReport primal = nlc::worst_case_mixture(f);
  const nlc::MinimaxReport dual = nlc::worst_case_prior(f);

  ordered_json payload;
  payload["n"] = f.n();
  payload["worst_case_value"] = primal.worst_case_value;
  payload["dual_value"] = dual.worst_case_value;
  payload["duality_gap"] = primal.duality_gap;
  payload["worst_prior"] = dual.worst_prior.p();
  auto mixture = ordered_json::array();
  for (std::size_t s = 0; s < primal.optimal_mixture.size(); ++s) {
    if (primal.optimal_mixture[s] <= 1e-12) continue;
    const std::uint32_t u = static_cast<std::uint32_t>(s) & ((1u << f.n()) - 1u);
    const int delta = static_cast<int>(s >> f.n());
    mixture.push_back({{"u", bit_json(nlc::BitString(u, f.n()))},
                       {"delta", delta},
                       {"weight", primal.optimal_mixture[s]}});
  }
  payload["mixture"] = std::move(mixture);
  payload["mixture_min_success"] =
      nlc::mixture_worst_case_value(primal.optimal_mixture, f);
  emit(ctx, payload);
  return 0;
}

int cmd_multiparty(CommandContext& ctx, const std::string& fn_spec,
                   const std::string& prior_spec, bool renormalize, unsigned parties) {
  const nlc::BooleanFunction f = parse_fn_arg(ctx, fn_spec);
  const nlc::PriorDistribution prior = parse_prior_arg(ctx, prior_spec, f.n(), renormalize);
  ctx.feed("m", static_cast<std::uint64_t>(parties));

  const nlc::TaskValueReport two_party = nlc::classical_optimum(f, prior);
  const auto tables =
      nlc::multiparty_strategy(parties, two_party.strategy.u, two_party.strategy.delta);
  const double value = nlc::multiparty_value_exact(tables, f, prior, parties);
  if (std::abs(value - two_party.value) > 1e-9)
    throw nlc::numerical_error("m-party value " + std::to_string(value) +
                               " deviates from the 2-party optimum " +
                               std::to_string(two_party.value));

  ordered_json payload;
  payload["n"] = f.n();
  payload["m"] = parties;
  payload["value"] = value;
  payload["two_party_value"] = two_party.value;
  payload["strategy"] = {{"u", bit_json(two_party.strategy.u)},
                         {"delta", two_party.strategy.delta}};
  emit(ctx, payload);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal computation and XOR game toolkit"};
  app.require_subcommand(1);

  std::string fn_spec, prior_spec = "uniform", game_path, out_path, protocol_spec, box_path;
  std::string format = "json";
  bool renormalize = false;
  std::uint64_t seed = 0;
  long long trials = 0;
  unsigned parties = 2;
  int seesaw_d = 0, restarts = 16, max_iters = 10000;
  double cert_tol = 1e-7, ns_tol = 1e-9;

  const auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "json or human")
        ->check(CLI::IsMember({"json", "human"}));
  };

  CLI::App* value = app.add_subcommand("value", "classical value and quantum bound of a task");
  value->add_option("--fn", fn_spec, "function spec")->required();
  value->add_option("--prior", prior_spec, "prior spec (default uniform)");
  value->add_flag("--renormalize", renormalize, "accept prior sums within 1e-6");
  add_format(value);

  CLI::App* brute = app.add_subcommand("bruteforce", "exhaustive strategy search (n <= 3)");
  brute->add_option("--fn", fn_spec, "function spec")->required();
  brute->add_option("--prior", prior_spec, "prior spec");
  brute->add_flag("--renormalize", renormalize, "");
  add_format(brute);

  CLI::App* cert = app.add_subcommand("certificate",
                                      "no-quantum-advantage certificate for a game");
  cert->add_option("--game", game_path, "game matrix CSV");
  cert->add_option("--fn", fn_spec, "function spec (with --prior instead of --game)");
  cert->add_option("--prior", prior_spec, "prior spec");
  cert->add_flag("--renormalize", renormalize, "");
  cert->add_option("--seed", seed, "see-saw restart seed")->required();
  cert->add_option("--seesaw-d", seesaw_d, "see-saw vector dimension (0 = min(|X|,|Y|))");
  cert->add_option("--restarts", restarts, "see-saw restarts");
  cert->add_option("--max-iters", max_iters, "see-saw iteration cap");
  cert->add_option("--tol", cert_tol, "certificate tolerance");
  add_format(cert);

  CLI::App* bell = app.add_subcommand("bell", "export the induced Bell inequality");
  bell->add_option("--fn", fn_spec, "function spec")->required();
  bell->add_option("--prior", prior_spec, "prior spec");
  bell->add_flag("--renormalize", renormalize, "");
  bell->add_option("--out", out_path, "output JSON path")->required();
  add_format(bell);

  CLI::App* boxes = app.add_subcommand("boxes", "correlation box simulation and analysis");
  boxes->require_subcommand(1);
  CLI::App* simulate = boxes->add_subcommand("simulate", "Monte Carlo a box or protocol");
  simulate->add_option("--protocol", protocol_spec,
                       "pr-and | noisy-pr-and:p=<p> | perfect:<fn> | box:<file> | "
                       "protocol:<file>")
      ->required();
  simulate->add_option("--fn", fn_spec, "function spec")->required();
  simulate->add_option("--prior", prior_spec, "prior spec");
  simulate->add_flag("--renormalize", renormalize, "");
  simulate->add_option("--n", trials, "number of Monte Carlo trials")->required();
  simulate->add_option("--seed", seed, "generator seed")->required();
  add_format(simulate);
  CLI::App* analyze = boxes->add_subcommand("analyze", "validity and signalling checks");
  analyze->add_option("--box", box_path, "box JSON path")->required();
  analyze->add_option("--tol", ns_tol, "check tolerance");
  add_format(analyze);

  CLI::App* minimax = app.add_subcommand("minimax", "worst-case value, prior and mixture");
  minimax->add_option("--fn", fn_spec, "function spec")->required();
  add_format(minimax);

  CLI::App* multi = app.add_subcommand("multiparty", "m-party value of the optimal strategy");
  multi->add_option("--fn", fn_spec, "function spec")->required();
  multi->add_option("--prior", prior_spec, "prior spec");
  multi->add_flag("--renormalize", renormalize, "");
  multi->add_option("--m", parties, "party count")->required();
  add_format(multi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CommandContext ctx;
  ctx.format = format;
  try {
    if (app.got_subcommand(value)) {
      ctx.command = "value";
      return cmd_value(ctx, fn_spec, prior_spec, renormalize);
    }
    if (app.got_subcommand(brute)) {
      ctx.command = "bruteforce";
      return cmd_bruteforce(ctx, fn_spec, prior_spec, renormalize);
    }
    if (app.got_subcommand(cert)) {
      ctx.command = "certificate";
      return cmd_certificate(ctx, game_path, fn_spec, prior_spec, renormalize, seed, seesaw_d,
                             restarts, max_iters, cert_tol);
    }
    if (app.got_subcommand(bell)) {
      ctx.command = "bell";
      return cmd_bell(ctx, fn_spec, prior_spec, renormalize, out_path);
    }
    if (app.got_subcommand(boxes)) {
      if (boxes->got_subcommand(simulate)) {
        ctx.command = "boxes simulate";
        return cmd_boxes_simulate(ctx, protocol_spec, fn_spec, prior_spec, renormalize,
                                  trials, seed);
      }
      ctx.command = "boxes analyze";
      return cmd_boxes_analyze(ctx, box_path, ns_tol);
    }
    if (app.got_subcommand(minimax)) {
      ctx.command = "minimax";
      return cmd_minimax(ctx, fn_spec);
    }
    if (app.got_subcommand(multi)) {
      ctx.command = "multiparty";
      return cmd_multiparty(ctx, fn_spec, prior_spec, renormalize, parties);
    }
  } catch (const nlc::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const nlc::guard_error& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return 3;
  } catch (const nlc::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
