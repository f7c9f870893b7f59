#include "crowdbelief/cli.hpp"

#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "crowdbelief/aggregation.hpp"
#include "crowdbelief/campaign_io.hpp"
#include "crowdbelief/crowd_sim.hpp"
#include "crowdbelief/error.hpp"
#include "crowdbelief/monitor.hpp"
#include "text.hpp"

namespace crowdbelief::cli {

namespace {

struct CommonOptions {
  std::string contributions;
  std::string gold;
  std::string config;
  std::string out;
  std::string format;
};

CampaignConfig config_or_default(const std::string& path) {
  return path.empty() ? CampaignConfig{} : load_config(path);
}

OutputFormat resolve_format(const std::string& format, const std::string& out_path) {
  if (format == "csv") return OutputFormat::kCsv;
  if (format == "json") return OutputFormat::kJson;
  return std::filesystem::path(out_path).extension() == ".csv" ? OutputFormat::kCsv
                                                               : OutputFormat::kJson;
}

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int cmd_profile(const CommonOptions& o, std::ostream& out) {
  const CampaignConfig config = config_or_default(o.config);
  const auto contribs = load_contributions(o.contributions, config);
  const auto gold = load_gold(o.gold, config);
  const auto profiles =
      profile_all(contribs, config.answers, reference_times(gold), config.profiling());
  write_results(profiles, {}, config, o.out, resolve_format(o.format, o.out));

  out << std::left << std::setw(16) << "contributor" << std::setw(8) << "IP_c"
      << std::setw(8) << "P" << std::setw(8) << "R" << "decision\n";
  for (const auto& p : profiles) {
    const auto& probs = p.pignistic4.probs;
    out << std::setw(16) << p.contributor_id << std::setw(8)
        << fixed(p.qualification.ip_c) << std::setw(8) << fixed(probs[0] + probs[1])
        << std::setw(8) << fixed(probs[0] + probs[2]) << decision_name(p.decision)
        << "\n";
  }
  return kSuccess;
}

Grouping parse_grouping(const std::string& name) {
  if (name == "precision") return Grouping::kPrecision;
  if (name == "reflection") return Grouping::kReflection;
  if (name == "profile") return Grouping::kProfile;
  return Grouping::kAll;
}

int cmd_evaluate(const CommonOptions& o, const std::string& groups, std::ostream& out,
                 std::ostream& err) {
  const CampaignConfig config = config_or_default(o.config);
  const auto contribs = load_contributions(o.contributions, config);
  const auto gold = load_gold(o.gold, config);
  const Grouping grouping = parse_grouping(groups);

  std::vector<ContributorProfile> profiles;
  if (grouping != Grouping::kAll)
    profiles =
        profile_all(contribs, config.answers, reference_times(gold), config.profiling());

  std::vector<GroupCurve> curves;
  for (const auto& filter : make_groups(grouping, profiles, config.argmax_tol)) {
    try {
      curves.push_back({filter.label,
                        lambda_sweep(contribs, gold, config.lambda_grid, config.answers,
                                     filter, config.argmax_tol),
                        ""});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyGroup) throw;
      curves.push_back({filter.label, std::nullopt, e.what()});
      err << "warning: " << e.what() << "\n";
    }
  }
  write_results({}, curves, config, o.out, resolve_format(o.format, o.out));

  out << "error rate per lambda\n"
      << std::left << std::setw(14) << "group" << std::setw(6) << "n" << std::setw(8)
      << "MV";
  for (double l : config.lambda_grid) out << std::setw(7) << fixed(l, 2);
  out << "\n";
  for (const auto& g : curves) {
    out << std::setw(14) << g.group_label;
    if (!g.curve) {
      out << "(empty)\n";
      continue;
    }
    out << std::setw(6) << g.curve->n_contributors << std::setw(8)
        << fixed(g.curve->mv_error);
    for (double e : g.curve->error_rates) out << std::setw(7) << fixed(e, 2);
    out << "\n";
  }
  return kSuccess;
}

int cmd_aggregate(const CommonOptions& o, double lambda, std::ostream& out) {
  const CampaignConfig config = config_or_default(o.config);
  const auto contribs = load_contributions(o.contributions, config);

  std::map<std::string, std::vector<Contribution>> by_question;
  for (const auto& c : contribs) by_question[c.question_id].push_back(c);

  std::vector<AggregateResult> results;
  for (const auto& [qid, own] : by_question) {
    const auto agg = split_and_average(own, config.answers);
    auto mass = lambda_aggregate(agg, lambda);
    auto betp = pignistic(mass);
    const FocalSet decision = decide_argmax(betp, config.argmax_tol);
    results.push_back({qid, lambda, agg.n_precise, agg.n_imprecise, std::move(mass),
                       std::move(betp), decision});
  }
  write_aggregates(results, config, o.out, resolve_format(o.format, o.out));

  out << std::left << std::setw(16) << "question" << std::setw(6) << "n_p"
      << std::setw(6) << "n_ip" << "decision\n";
  for (const auto& r : results)
    out << std::setw(16) << r.question_id << std::setw(6) << r.n_precise << std::setw(6)
        << r.n_imprecise << config.answers.format(r.decision) << "\n";
  return kSuccess;
}

int cmd_simulate(const std::string& spec_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir, std::ostream& out) {
  const SimulationSpec spec =
      spec_path.empty() ? default_simulation_spec() : load_simulation_spec(spec_path);
  if (!seed) {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  out << "seed: " << *seed << "\n";
  const auto campaign = generate(spec.archetypes, spec.shape, spec.config, *seed);
  write_campaign(campaign, out_dir);
  out << "wrote " << campaign.data.contributions.size() << " contributions from "
      << campaign.intended.size() << " contributors to " << out_dir << "\n";
  return kSuccess;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kIo ? kIoFailure : kValidationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief-function profiling and aggregation of crowdsourced answers",
               "crowdbelief"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crowdbelief 0.1.0");

  const std::vector<std::string> formats = {"csv", "json"};
  auto add_common = [&](CLI::App* cmd, CommonOptions& o, bool needs_gold) {
    cmd->add_option("--contributions", o.contributions, "Contributions CSV")
        ->required();
    if (needs_gold)
      cmd->add_option("--gold", o.gold, "Gold / reference-time CSV")
          ->required();
    cmd->add_option("--config", o.config, "Campaign configuration JSON");
    cmd->add_option("--out", o.out, "Output file")->required();
    cmd->add_option("--format", o.format,
                    "Output format (default: from the --out extension, else json)")
        ->check(CLI::IsMember(formats));
  };

  CommonOptions profile_opts, evaluate_opts, aggregate_opts;
  auto* profile = app.add_subcommand("profile", "Estimate contributor profiles");
  add_common(profile, profile_opts, true);

  auto* evaluate = app.add_subcommand("evaluate", "Error rates on gold questions");
  add_common(evaluate, evaluate_opts, true);
  std::string groups = "all";
  evaluate->add_option("--groups", groups, "Contributor grouping")
      ->check(CLI::IsMember({"all", "precision", "reflection", "profile"}));

  auto* aggregate = app.add_subcommand("aggregate", "Aggregate answers per question");
  add_common(aggregate, aggregate_opts, false);
  double lambda = 0.0;
  aggregate->add_option("--lambda", lambda, "Weight of the precise answers")
      ->required()
      ->check(CLI::Range(0.0, 1.0));

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic campaign");
  std::string spec_path, out_dir;
  std::optional<std::uint64_t> seed;
  simulate->add_option("--spec", spec_path, "Simulation spec JSON");
  simulate->add_option("--seed", seed, "Random seed (drawn and printed if omitted)");
  simulate->add_option("--out-dir", out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*profile) return cmd_profile(profile_opts, out);
    if (*evaluate) return cmd_evaluate(evaluate_opts, groups, out, err);
    if (*aggregate) return cmd_aggregate(aggregate_opts, lambda, out);
    if (*simulate) return cmd_simulate(spec_path, seed, out_dir, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const Error& e) {
    err << error_code_name(e.code()) << " error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace crowdbelief::cli
