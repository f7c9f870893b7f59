#include "crowdbelief/campaign_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "crowdbelief/error.hpp"
#include "csv.hpp"
#include "text.hpp"

namespace crowdbelief {

using ordered_json = nlohmann::ordered_json;

std::vector<ConfidenceLevel> CampaignConfig::default_confidence_scale() {
  return {{"très sûr", 0.99},
          {"plutôt sûr", 0.75},
          {"moyennement sûr", 0.5},
          {"peu sûr", 0.25},
          {"pas sûr", 0.01}};
}

std::optional<double> CampaignConfig::confidence_weight(std::string_view label) const {
  for (const auto& level : confidence_scale)
    if (level.label == label) return level.weight;
  return std::nullopt;
}

std::optional<std::string> CampaignConfig::confidence_label(double weight) const {
  for (const auto& level : confidence_scale)
    if (level.weight == weight) return level.label;
  return std::nullopt;
}

std::vector<std::string> CampaignConfig::validate() const {
  std::vector<std::string> issues;
  if (answers.size() < 2)
    issues.push_back("answer_labels: need at least 2 labels, got " +
                     std::to_string(answers.size()));
  if (confidence_scale.empty()) issues.push_back("confidence_scale: must not be empty");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < confidence_scale.size(); ++i) {
    const auto& level = confidence_scale[i];
    if (level.label.empty())
      issues.push_back("confidence_scale[" + std::to_string(i) + "]: empty label");
    if (!seen.insert(level.label).second)
      issues.push_back("confidence_scale: duplicate label '" + level.label + "'");
    if (!(level.weight > 0.0 && level.weight < 1.0))
      issues.push_back("confidence_scale: weight " + text::format_double(level.weight) +
                       " of '" + level.label + "' must lie strictly between 0 and 1");
    if (i > 0 && !(level.weight < confidence_scale[i - 1].weight))
      issues.push_back("confidence_scale: weights must be strictly decreasing at '" +
                       level.label + "'");
  }
  if (!(beta >= 0.0 && beta <= 1.0))
    issues.push_back("beta: " + text::format_double(beta) + " is outside [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0))
    issues.push_back("eta: " + text::format_double(eta) + " is outside [0, 1]");
  if (lambda_grid.empty()) issues.push_back("lambda_grid: must not be empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0 && lambda_grid[i] <= 1.0))
      issues.push_back("lambda_grid: " + text::format_double(lambda_grid[i]) +
                       " is outside [0, 1]");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      issues.push_back("lambda_grid: values must be strictly increasing");
  }
  if (!(argmax_tol >= 0.0) || !std::isfinite(argmax_tol))
    issues.push_back("argmax_tol: must be a non-negative number");
  return issues;
}

std::map<std::string, double, std::less<>> reference_times(
    std::span<const GoldRecord> gold) {
  std::map<std::string, double, std::less<>> out;
  for (const auto& g : gold) out[g.question_id] = g.t0_seconds;
  return out;
}

// ---------------------------------------------------------------------------
// configuration

namespace {

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out,
                std::vector<std::string>& issues) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    issues.push_back(std::string(key) + ": unexpected type " + j.at(key).type_name());
  }
}

}  // namespace

CampaignConfig parse_config(const std::string& json_text, const std::string& source) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, source + ": " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::kParse, source + ": configuration must be a JSON object");

  CampaignConfig config;
  std::vector<std::string> issues;

  if (!j.contains("answer_labels")) {
    issues.push_back("answer_labels: required field is missing");
  } else {
    std::vector<std::string> labels;
    read_field(j, "answer_labels", labels, issues);
    if (issues.empty()) {
      try {
        config.answers = Frame(std::move(labels));
      } catch (const Error& e) {
        issues.push_back(std::string("answer_labels: ") + e.what());
      }
    }
  }

  if (j.contains("confidence_scale")) {
    const auto& scale = j.at("confidence_scale");
    if (!scale.is_array()) {
      issues.push_back("confidence_scale: expected an array of {label, weight}");
    } else {
      config.confidence_scale.clear();
      for (std::size_t i = 0; i < scale.size(); ++i) {
        const auto& entry = scale[i];
        if (!entry.is_object() || !entry.contains("label") ||
            !entry.at("label").is_string() || !entry.contains("weight") ||
            !entry.at("weight").is_number()) {
          issues.push_back("confidence_scale[" + std::to_string(i) +
                           "]: expected {\"label\": string, \"weight\": number}");
          continue;
        }
        config.confidence_scale.push_back(
            {entry.at("label").get<std::string>(), entry.at("weight").get<double>()});
      }
    }
  }
  read_field(j, "beta", config.beta, issues);
  read_field(j, "eta", config.eta, issues);
  read_field(j, "lambda_grid", config.lambda_grid, issues);
  read_field(j, "argmax_tol", config.argmax_tol, issues);

  if (issues.empty()) issues = config.validate();
  if (!issues.empty()) throw ValidationError(source, std::move(issues));
  return config;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

namespace {

ordered_json config_json(const CampaignConfig& config) {
  ordered_json scale = ordered_json::array();
  for (const auto& level : config.confidence_scale)
    scale.push_back({{"label", level.label}, {"weight", level.weight}});
  return ordered_json{{"answer_labels", config.answers.labels()},
                      {"confidence_scale", scale},
                      {"beta", config.beta},
                      {"eta", config.eta},
                      {"lambda_grid", config.lambda_grid},
                      {"argmax_tol", config.argmax_tol}};
}

}  // namespace

std::string config_to_json(const CampaignConfig& config) {
  return config_json(config).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV ingestion

std::optional<std::size_t> resolve_answer_label(const Frame& answers,
                                                std::string_view token) {
  if (auto index = answers.index_of(token)) return index;
  std::size_t position = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), position);
  if (res.ec == std::errc{} && res.ptr == token.data() + token.size() && position >= 1 &&
      position <= answers.size())
    return position - 1;
  return std::nullopt;
}

namespace {

class RowErrors {
 public:
  explicit RowErrors(std::string source) : source_(std::move(source)) {}

  void add(std::size_t line, const std::string& message) {
    issues_.push_back(source_ + ":" + std::to_string(line) + ": " + message);
  }
  bool empty() const { return issues_.empty(); }
  [[noreturn]] void raise() { throw ValidationError(source_, std::move(issues_)); }

 private:
  std::string source_;
  std::vector<std::string> issues_;
};

// Maps header names to column positions; reports missing columns.
std::optional<std::vector<std::size_t>> header_columns(
    const std::vector<csv::Row>& rows, const std::vector<std::string>& expected,
    RowErrors& errors) {
  if (rows.empty()) {
    errors.add(1, "missing header; expected " + csv::join(expected));
    return std::nullopt;
  }
  const auto& header = rows.front();
  std::vector<std::size_t> columns;
  bool ok = true;
  for (const auto& name : expected) {
    auto it = std::find_if(header.fields.begin(), header.fields.end(),
                           [&](const std::string& f) { return text::trim(f) == name; });
    if (it == header.fields.end()) {
      errors.add(header.line, "missing column '" + name + "'");
      ok = false;
    } else {
      columns.push_back(static_cast<std::size_t>(it - header.fields.begin()));
    }
  }
  if (!ok) return std::nullopt;
  return columns;
}

std::string_view cell(const csv::Row& row, std::size_t column) {
  return text::trim(row.fields[column]);
}

}  // namespace

std::vector<Contribution> load_contributions(const std::filesystem::path& path,
                                             const CampaignConfig& config) {
  const std::string source = path.string();
  const auto rows = csv::read_file(path);
  RowErrors errors(source);
  const std::vector<std::string> expected = {"contributor_id", "hit_id",
                                             "question_id",    "answer",
                                             "confidence",     "response_time_s"};
  auto columns = header_columns(rows, expected, errors);
  if (!columns) errors.raise();

  const Frame& answers = config.answers;
  std::vector<Contribution> out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != rows.front().fields.size()) {
      errors.add(row.line, "expected " + std::to_string(rows.front().fields.size()) +
                               " fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    bool row_ok = true;
    auto fail = [&](const std::string& message) {
      errors.add(row.line, message);
      row_ok = false;
    };

    Contribution c;
    c.contributor_id = std::string(cell(row, (*columns)[0]));
    c.hit_id = std::string(cell(row, (*columns)[1]));
    c.question_id = std::string(cell(row, (*columns)[2]));
    if (c.contributor_id.empty()) fail("empty contributor_id");
    if (c.question_id.empty()) fail("empty question_id");

    const std::string_view answer_cell = cell(row, (*columns)[3]);
    if (answer_cell.empty()) fail("empty answer");
    std::size_t start = 0;
    while (!answer_cell.empty() && start <= answer_cell.size()) {
      std::size_t end = answer_cell.find(';', start);
      if (end == std::string_view::npos) end = answer_cell.size();
      const auto token = text::trim(answer_cell.substr(start, end - start));
      if (token.empty()) {
        fail("empty label in answer '" + std::string(answer_cell) + "'");
      } else if (auto index = resolve_answer_label(answers, token)) {
        c.answer = c.answer | FocalSet::singleton(*index);
      } else {
        fail("unknown answer label '" + std::string(token) + "'");
      }
      start = end + 1;
    }
    if (row_ok && c.answer == answers.full())
      fail("answer '" + std::string(answer_cell) +
           "' covers every option; an answer must exclude at least one");

    const std::string_view conf_cell = cell(row, (*columns)[4]);
    if (conf_cell.empty()) {
      fail("missing confidence");
    } else if (auto w = config.confidence_weight(conf_cell)) {
      c.confidence_w = *w;
    } else if (auto v = text::parse_double(conf_cell)) {
      if (*v > 0.0 && *v < 1.0)
        c.confidence_w = *v;
      else
        fail("confidence " + std::string(conf_cell) +
             " must lie strictly between 0 and 1");
    } else {
      fail("unknown confidence label '" + std::string(conf_cell) + "'");
    }

    const std::string_view time_cell = cell(row, (*columns)[5]);
    auto t = text::parse_double(time_cell);
    if (!t)
      fail("response_time_s '" + std::string(time_cell) + "' is not a number");
    else if (!(*t > 0.0) || !std::isfinite(*t))
      fail("response_time_s " + std::string(time_cell) + " must be positive");
    else
      c.response_time_s = *t;

    if (!c.contributor_id.empty() && !c.question_id.empty()) {
      auto [it, inserted] =
          seen.emplace(std::make_pair(c.contributor_id, c.question_id), row.line);
      if (!inserted)
        fail("duplicate answer of '" + c.contributor_id + "' to '" + c.question_id +
             "' (first on line " + std::to_string(it->second) + ")");
    }
    if (row_ok) out.push_back(std::move(c));
  }
  if (!errors.empty()) errors.raise();
  return out;
}

std::vector<GoldRecord> load_gold(const std::filesystem::path& path,
                                  const CampaignConfig& config) {
  const std::string source = path.string();
  const auto rows = csv::read_file(path);
  RowErrors errors(source);
  auto columns = header_columns(rows, {"question_id", "true_answer", "t0_seconds"}, errors);
  if (!columns) errors.raise();

  std::vector<GoldRecord> out;
  std::map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != rows.front().fields.size()) {
      errors.add(row.line, "expected " + std::to_string(rows.front().fields.size()) +
                               " fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    bool row_ok = true;
    auto fail = [&](const std::string& message) {
      errors.add(row.line, message);
      row_ok = false;
    };
    GoldRecord g;
    g.question_id = std::string(cell(row, (*columns)[0]));
    if (g.question_id.empty()) fail("empty question_id");

    const auto truth = cell(row, (*columns)[1]);
    if (!truth.empty()) {
      if (auto index = resolve_answer_label(config.answers, truth))
        g.true_answer = *index;
      else
        fail("unknown answer label '" + std::string(truth) + "'");
    }

    const auto t0_cell = cell(row, (*columns)[2]);
    auto t0 = text::parse_double(t0_cell);
    if (!t0)
      fail("t0_seconds '" + std::string(t0_cell) + "' is not a number");
    else if (!(*t0 > 0.0) || !std::isfinite(*t0))
      fail("t0_seconds " + std::string(t0_cell) + " must be positive");
    else
      g.t0_seconds = *t0;

    if (!g.question_id.empty()) {
      auto [it, inserted] = seen.emplace(g.question_id, row.line);
      if (!inserted)
        fail("duplicate question '" + g.question_id + "' (first on line " +
             std::to_string(it->second) + ")");
    }
    if (row_ok) out.push_back(std::move(g));
  }
  if (!errors.empty()) errors.raise();
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

namespace {

std::string answer_cell(const Frame& answers, FocalSet set) {
  std::string out;
  for (auto i : set.indices()) {
    if (!out.empty()) out += ';';
    out += answers.label(i);
  }
  return out;
}

}  // namespace

void write_contributions(const std::filesystem::path& path,
                         std::span<const Contribution> contribs,
                         const CampaignConfig& config) {
  std::string out = "contributor_id,hit_id,question_id,answer,confidence,response_time_s\n";
  for (const auto& c : contribs) {
    auto label = config.confidence_label(c.confidence_w);
    out += csv::join({c.contributor_id, c.hit_id, c.question_id,
                      answer_cell(config.answers, c.answer),
                      label ? *label : text::format_double(c.confidence_w),
                      text::format_double(c.response_time_s)});
    out += '\n';
  }
  write_text_file(path, out);
}

void write_gold(const std::filesystem::path& path, std::span<const GoldRecord> gold,
                const CampaignConfig& config) {
  std::string out = "question_id,true_answer,t0_seconds\n";
  for (const auto& g : gold) {
    out += csv::join({g.question_id,
                      g.true_answer ? config.answers.label(*g.true_answer) : "",
                      text::format_double(g.t0_seconds)});
    out += '\n';
  }
  write_text_file(path, out);
}

// ---------------------------------------------------------------------------
// results

namespace {

ordered_json mass_json(const MassFunction& m) {
  ordered_json out = ordered_json::array();
  for (const auto& [set, mass] : m.masses()) {
    std::vector<std::string> labels;
    for (auto i : set.indices()) labels.push_back(m.frame().label(i));
    out.push_back({{"set", labels}, {"mass", mass}});
  }
  return out;
}

ordered_json distribution_json(const PignisticDistribution& p) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < p.probs.size(); ++i) out[p.frame.label(i)] = p.probs[i];
  return out;
}

std::vector<const ContributorProfile*> sorted_profiles(
    std::span<const ContributorProfile> profiles) {
  std::vector<const ContributorProfile*> out;
  for (const auto& p : profiles) out.push_back(&p);
  std::stable_sort(out.begin(), out.end(), [](auto* a, auto* b) {
    return a->contributor_id < b->contributor_id;
  });
  return out;
}

std::string mass_cell(const MassFunction& m) {
  std::string out;
  for (const auto& [set, mass] : m.masses()) {
    if (!out.empty()) out += ';';
    out += m.frame().format(set) + ":" + text::format_double(mass);
  }
  return out;
}

}  // namespace

std::string profiles_csv(std::span<const ContributorProfile> profiles) {
  std::string out =
      "contributor_id,ip_c,m2_P,m2_NP,m2_Omega,m3_R,m3_NR,m3_Omega,"
      "betP_P_R,betP_P_NR,betP_NP_R,betP_NP_NR,decision\n";
  const FocalSet p = FocalSet::singleton(kPrecise), np = FocalSet::singleton(kImprecise);
  const FocalSet r = FocalSet::singleton(kReflective),
                 nr = FocalSet::singleton(kNonReflective);
  for (const auto* prof : sorted_profiles(profiles)) {
    const auto& m2 = prof->qualification.mass_omega2;
    const auto& m3 = prof->reflection.mass_omega3;
    std::vector<std::string> row = {prof->contributor_id,
                                    text::format_double(prof->qualification.ip_c),
                                    text::format_double(m2.at(p)),
                                    text::format_double(m2.at(np)),
                                    text::format_double(m2.at(m2.frame().full())),
                                    text::format_double(m3.at(r)),
                                    text::format_double(m3.at(nr)),
                                    text::format_double(m3.at(m3.frame().full()))};
    for (double prob : prof->pignistic4.probs) row.push_back(text::format_double(prob));
    row.push_back(decision_name(prof->decision));
    out += csv::join(row) + "\n";
  }
  return out;
}

std::string curves_csv(std::span<const GroupCurve> curves) {
  std::string out = "group,lambda,error_rate,mv_error\n";
  for (const auto& g : curves) {
    if (!g.curve) {
      out += csv::join({g.group_label, "", "", ""}) + "\n";
      continue;
    }
    for (std::size_t i = 0; i < g.curve->lambda_grid.size(); ++i)
      out += csv::join({g.group_label, text::format_double(g.curve->lambda_grid[i]),
                        text::format_double(g.curve->error_rates[i]),
                        text::format_double(g.curve->mv_error)}) +
             "\n";
  }
  return out;
}

std::string results_json(std::span<const ContributorProfile> profiles,
                         std::span<const GroupCurve> curves,
                         const CampaignConfig& config) {
  ordered_json profiles_j = ordered_json::array();
  for (const auto* p : sorted_profiles(profiles)) {
    std::vector<std::string> decision;
    for (auto i : p->decision.indices())
      decision.emplace_back(profile_name(static_cast<Profile>(i)));
    profiles_j.push_back({{"contributor_id", p->contributor_id},
                          {"ip_c", p->qualification.ip_c},
                          {"m_omega2", mass_json(p->qualification.mass_omega2)},
                          {"m_omega3", mass_json(p->reflection.mass_omega3)},
                          {"m_omega4", mass_json(p->mass_omega4)},
                          {"betp_omega4", distribution_json(p->pignistic4)},
                          {"decision", decision},
                          {"decision_pairs", decision_pairs(p->decision)}});
  }
  ordered_json curves_j = ordered_json::array();
  for (const auto& g : curves) {
    if (!g.curve) {
      curves_j.push_back(
          {{"group", g.group_label}, {"curve", nullptr}, {"warning", g.warning}});
      continue;
    }
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < g.curve->lambda_grid.size(); ++i)
      points.push_back({{"lambda", g.curve->lambda_grid[i]},
                        {"error_rate", g.curve->error_rates[i]}});
    curves_j.push_back({{"group", g.group_label},
                        {"curve",
                         {{"n_contributors", g.curve->n_contributors},
                          {"mv_error", g.curve->mv_error},
                          {"points", points}}}});
  }
  ordered_json root = {{"config", config_json(config)},
                       {"profiles", profiles_j},
                       {"curves", curves_j}};
  return root.dump(2) + "\n";
}

void write_results(std::span<const ContributorProfile> profiles,
                   std::span<const GroupCurve> curves, const CampaignConfig& config,
                   const std::filesystem::path& path, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    write_text_file(path, results_json(profiles, curves, config));
    return;
  }
  if (!curves.empty() && profiles.empty()) {
    write_text_file(path, curves_csv(curves));
    return;
  }
  write_text_file(path, profiles_csv(profiles));
  if (!curves.empty()) {
    auto curves_path = path;
    curves_path.replace_filename(path.stem().string() + ".curves.csv");
    write_text_file(curves_path, curves_csv(curves));
  }
}

void write_aggregates(std::span<const AggregateResult> results,
                      const CampaignConfig& config, const std::filesystem::path& path,
                      OutputFormat format) {
  std::vector<const AggregateResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return a->question_id < b->question_id;
  });

  if (format == OutputFormat::kJson) {
    ordered_json items = ordered_json::array();
    for (const auto* r : sorted) {
      std::vector<std::string> decision;
      for (auto i : r->decision.indices()) decision.push_back(config.answers.label(i));
      items.push_back({{"question_id", r->question_id},
                       {"lambda", r->lambda},
                       {"n_precise", r->n_precise},
                       {"n_imprecise", r->n_imprecise},
                       {"mass", mass_json(r->mass)},
                       {"betp", distribution_json(r->betp)},
                       {"decision", decision}});
    }
    ordered_json root = {{"config", config_json(config)}, {"questions", items}};
    write_text_file(path, root.dump(2) + "\n");
    return;
  }

  std::vector<std::string> header = {"question_id", "lambda", "n_precise",
                                     "n_imprecise", "mass"};
  for (const auto& label : config.answers.labels()) header.push_back("betP_" + label);
  header.push_back("decision");
  std::string out = csv::join(header) + "\n";
  for (const auto* r : sorted) {
    std::vector<std::string> row = {r->question_id, text::format_double(r->lambda),
                                    std::to_string(r->n_precise),
                                    std::to_string(r->n_imprecise), mass_cell(r->mass)};
    for (double p : r->betp.probs) row.push_back(text::format_double(p));
    std::string decision;
    for (auto i : r->decision.indices()) {
      if (!decision.empty()) decision += ';';
      decision += config.answers.label(i);
    }
    row.push_back(decision);
    out += csv::join(row) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace crowdbelief
