// lfree: seeded batch runs of the word, moment, closed-form and matrix-model
// operations. Exit status: 0 ok, 1 invalid input, 2 a checked bound failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lfree/closedform.hpp"
#include "lfree/constructions.hpp"
#include "lfree/experiments.hpp"
#include "lfree/moments.hpp"
#include "lfree/words.hpp"

using namespace lfree;
using experiments::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kAssertion = 2;

struct Common {
  std::uint64_t seed = 0;
  int trials = 1;
  std::string output;
  std::string format = "json";
  std::string calibration;
  bool no_timestamp = false;
};

void add_common(CLI::App* app, Common& c, bool with_trials) {
  app->add_option("--seed", c.seed, "Base RNG seed")->capture_default_str();
  if (with_trials) {
    app->add_option("--trials", c.trials, "Number of independent trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  app->add_option("--output,-o", c.output, "Write the report here instead of stdout");
  app->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_option("--calibration", c.calibration,
                  "Calibration fixture (default: $LFREE_CALIBRATION or the bundled one)");
  app->add_flag("--no-timestamp", c.no_timestamp,
                "Omit the timestamp so identical runs give identical bytes");
}

experiments::Calibration load_calibration(const Common& c) {
  return experiments::Calibration::load(
      c.calibration.empty() ? std::nullopt : std::optional<std::string>(c.calibration));
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw std::runtime_error("cannot write " + c.output);
  out << text;
}

Json envelope(const std::string& command, const Common& c, Json config) {
  Json j;
  j["command"] = command;
  j["version"] = experiments::version();
  if (!c.no_timestamp) j["timestamp"] = experiments::utc_timestamp();
  config["seed"] = c.seed;
  config["format"] = c.format;
  j["config"] = std::move(config);
  return j;
}

std::string csv_rows(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int finish_report(const Common& c, experiments::Report& rep, const Json& config) {
  for (auto& [k, v] : config.items()) rep.params[k] = v;
  rep.params["trials"] = c.trials;
  if (c.format == "csv") {
    emit(c, rep.to_csv());
  } else {
    emit(c, rep.to_json(!c.no_timestamp).dump(2) + "\n");
  }
  return rep.pass() ? kOk : kAssertion;
}

std::vector<double> parse_traces(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto g = GaussianRational::parse(item);
    if (!g.is_real()) throw std::invalid_argument("trace must be real: " + item);
    out.push_back(g.re.get_d());
  }
  return out;
}

// Commands ------------------------------------------------------------------

struct LeinertArgs {
  std::string group;
  std::string words;
  std::string mode = "exact";
  int depth = 6;
};

int run_leinert(const Common& c, const LeinertArgs& a) {
  auto list = words::read_word_list_file(a.words);
  if (!a.group.empty()) {
    const auto pres = words::GroupPresentation::parse(a.group);
    if (!(pres == list.presentation)) {
      throw std::invalid_argument("--group " + a.group + " does not match the file header " +
                                  list.presentation.to_string());
    }
  }
  const auto& pres = list.presentation;
  const auto ws = list.words();
  std::string mode = a.mode;
  if (mode == "auto") mode = pres.is_free() ? "exact" : "bounded";
  const auto verdict =
      mode == "exact" ? words::leinert_exact(ws, pres) : words::leinert_bounded(ws, pres, a.depth);

  Json j = envelope("leinert", c,
                    {{"group", pres.to_string()}, {"words_file", a.words}, {"mode", mode},
                     {"depth", a.depth}});
  Json wl = Json::array();
  for (const auto& w : ws) wl.push_back(words::render(w, pres));
  j["words"] = wl;
  Json v;
  v["status"] = std::string(words::to_string(verdict.status));
  v["method"] = std::string(words::to_string(verdict.method));
  if (verdict.witness) {
    v["witness"] = *verdict.witness;
    v["witness_verified"] = words::verify_witness(ws, *verdict.witness, pres);
  } else {
    v["witness"] = nullptr;
  }
  if (!verdict.note.empty()) v["note"] = verdict.note;
  v["provenance"] = "exact";
  j["verdict"] = v;

  if (c.format == "csv") {
    std::string witness;
    if (verdict.witness) {
      for (std::size_t i = 0; i < verdict.witness->size(); ++i) {
        witness += (i ? " " : "") + std::to_string((*verdict.witness)[i]);
      }
    }
    emit(c, csv_rows({"status", "method", "witness", "provenance"},
                     {{std::string(words::to_string(verdict.status)),
                       std::string(words::to_string(verdict.method)), witness, "exact"}}));
  } else {
    emit(c, j.dump(2) + "\n");
  }
  return kOk;
}

struct MomentArgs {
  std::string group;
  std::string words;
  int laplacian = 0;
  int max_m = 10;
  std::string arithmetic = "exact";
  std::size_t support_cap = 10'000'000;
};

moments::Convolver convolver_from(const MomentArgs& a, std::optional<double>& target,
                                  std::string& target_name) {
  if ((a.laplacian > 0) == !a.words.empty()) {
    throw std::invalid_argument("give exactly one of --laplacian or --words");
  }
  if (a.laplacian > 0) {
    if (!a.group.empty() &&
        !(words::GroupPresentation::parse(a.group) == words::GroupPresentation::free_group(a.laplacian))) {
      throw std::invalid_argument("--laplacian k lives on the free group with k generators");
    }
    target = closedform::kesten_norm(a.laplacian);
    target_name = "kesten_norm";
    return moments::kesten_laplacian(a.laplacian);
  }
  const auto list = words::read_word_list_file(a.words);
  std::vector<moments::Term> terms;
  bool all_one = true;
  for (const auto& e : list.entries) {
    const auto coef = e.coefficient ? GaussianRational::parse(*e.coefficient) : GaussianRational(1);
    all_one = all_one && coef == GaussianRational(1);
    terms.push_back({coef, e.word});
  }
  moments::Convolver L(list.presentation, terms);
  const auto ws = list.words();
  if (all_one && ws.size() >= 2 && list.presentation.is_free() &&
      L.support_size() == ws.size() &&
      words::leinert_exact(ws, list.presentation).status == words::LeinertStatus::leinert) {
    target = closedform::leinert_norm(static_cast<int>(ws.size())).value;
    target_name = "leinert_norm";
  }
  return L;
}

int run_moment(const Common& c, const MomentArgs& a, bool norm_bound_only) {
  std::optional<double> target;
  std::string target_name;
  const auto L = convolver_from(a, target, target_name);
  moments::MomentOptions opts;
  opts.support_cap = a.support_cap;
  opts.arithmetic = a.arithmetic == "float" ? moments::Arithmetic::floating : moments::Arithmetic::exact;
  const auto recs = moments::moment_sequence(L, a.max_m, opts);
  const auto run = moments::running_max_bounds(recs);

  Json config{{"group", L.presentation().to_string()},
              {"max_m", a.max_m},
              {"arithmetic", a.arithmetic},
              {"support_cap", a.support_cap}};
  if (a.laplacian > 0) config["laplacian"] = a.laplacian;
  if (!a.words.empty()) config["words_file"] = a.words;
  Json j = envelope(norm_bound_only ? "norm-bound" : "moment", c, config);

  bool ok = true;
  if (target) ok = run.back() <= *target + 1e-12;
  if (norm_bound_only) {
    j["m"] = a.max_m;
    j["lower_bound"] = run.back();
    j["provenance"] = recs.back().exact ? "exact" : "float";
  } else {
    Json arr = Json::array();
    for (std::size_t i = 0; i < recs.size(); ++i) {
      arr.push_back({{"m", recs[i].m},
                     {"value", recs[i].value_string()},
                     {"lower_bound", recs[i].lower_bound},
                     {"running_max", run[i]},
                     {"engine", recs[i].engine},
                     {"provenance", recs[i].exact ? "exact" : "float"}});
    }
    j["records"] = arr;
  }
  if (target) {
    j["target"] = {{"name", target_name}, {"paper_value", *target}, {"provenance", "float"}};
  }
  j["pass"] = ok;

  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (norm_bound_only && i + 1 != recs.size()) continue;
      rows.push_back({std::to_string(recs[i].m), recs[i].value_string(), num(recs[i].lower_bound),
                      num(run[i]), recs[i].exact ? "exact" : "float"});
    }
    emit(c, csv_rows({"m", "value", "lower_bound", "running_max", "provenance"}, rows));
  } else {
    emit(c, j.dump(2) + "\n");
  }
  return ok ? kOk : kAssertion;
}

struct ClosedFormArgs {
  std::string formula;
  int k = 2;
  int n = 2;
  double tau_p = 0.5;
  double tau_q = 0.5;
  double epsilon = 1.0;
  std::string alphas;
};

int run_closed_form(const Common& c, const ClosedFormArgs& a) {
  Json config{{"formula", a.formula}};
  Json result;
  if (a.formula == "kesten") {
    config["k"] = a.k;
    result["value"] = closedform::kesten_norm(a.k);
  } else if (a.formula == "leinert") {
    config["n"] = a.n;
    const auto v = closedform::leinert_norm(a.n);
    result["value"] = v.value;
    if (v.warning) result["warning"] = *v.warning;
  } else if (a.formula == "coefficient") {
    config["n"] = a.n;
    std::vector<std::complex<double>> alphas;
    std::stringstream ss(a.alphas);
    for (std::string item; std::getline(ss, item, ',');) {
      alphas.push_back(GaussianRational::parse(item).to_complex());
    }
    config["alphas"] = a.alphas;
    result["value"] = closedform::coefficient_bound(a.n, alphas);
  } else if (a.formula == "qpq") {
    config["tau_p"] = a.tau_p;
    config["tau_q"] = a.tau_q;
    result["value"] = closedform::qpq_norm(a.tau_p, a.tau_q);
  } else if (a.formula == "qvq") {
    config["tau_q"] = a.tau_q;
    result["value"] = closedform::qvq_norm(a.tau_q);
  } else if (a.formula == "paving-bound") {
    config["n"] = a.n;
    result["value"] = closedform::paving_norm_bound(a.n).bound;
  } else {
    config["epsilon"] = a.epsilon;
    const auto s = closedform::paving_size(a.epsilon);
    result["n"] = s.n;
    result["vacuous"] = s.vacuous;
  }
  result["provenance"] = "float";
  Json j = envelope("closed-form", c, config);
  j["result"] = result;
  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (auto& [k, v] : result.items()) rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    emit(c, csv_rows({"key", "value"}, rows));
  } else {
    emit(c, j.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leinert sets, L-free families and paving: exact and matrix-model computations"};
  app.set_version_flag("--version", experiments::version());
  app.require_subcommand(1);

  Common common;

  LeinertArgs la;
  auto* leinert = app.add_subcommand("leinert", "Decide whether a word list is a Leinert set");
  add_common(leinert, common, false);
  leinert->add_option("--group", la.group, "Presentation, e.g. Z,Z or Z,C2 (must match the file)");
  leinert->add_option("--words", la.words, "Word list file")->required()->check(CLI::ExistingFile);
  leinert->add_option("--mode", la.mode, "exact (free groups), bounded, or auto")
      ->check(CLI::IsMember({"exact", "bounded", "auto"}))
      ->capture_default_str();
  leinert->add_option("--depth", la.depth, "Pairs searched in bounded mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  MomentArgs ma;
  auto* moment = app.add_subcommand("moment", "Exact trace moments tau((L*L)^m), m = 1..max-m");
  auto* norm_bound = app.add_subcommand("norm-bound", "Certified lower bound on ||L|| from moments");
  for (auto* sub : {moment, norm_bound}) {
    add_common(sub, common, false);
    sub->add_option("--group", ma.group, "Presentation (checked against the input)");
    sub->add_option("--words", ma.words, "Word list with optional coefficients")
        ->check(CLI::ExistingFile);
    sub->add_option("--laplacian", ma.laplacian, "Use the Laplacian on the free group F_k")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-m", ma.max_m, "Largest moment")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--arithmetic", ma.arithmetic)
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    sub->add_option("--support-cap", ma.support_cap, "Abort when a state exceeds this many words")
        ->capture_default_str();
  }

  ClosedFormArgs ca;
  auto* closed = app.add_subcommand("closed-form", "Evaluate a closed-form norm or paving value");
  add_common(closed, common, false);
  closed->add_option("--formula", ca.formula)
      ->required()
      ->check(CLI::IsMember(
          {"kesten", "leinert", "coefficient", "qpq", "qvq", "paving-bound", "paving-size"}));
  closed->add_option("--k", ca.k);
  closed->add_option("--n", ca.n);
  closed->add_option("--tau-p", ca.tau_p);
  closed->add_option("--tau-q", ca.tau_q);
  closed->add_option("--epsilon", ca.epsilon);
  closed->add_option("--alphas", ca.alphas, "Comma-separated coefficients, e.g. 1/2,1/2i");

  int n = 3;
  int d = 300;
  int max_len = 6;
  int targets = 5;
  std::string traces = "1/3,1/3,1/3";
  double tau_p = 0.5;
  double tau_q = 1.0 / 3;

  auto* dilate = app.add_subcommand("dilate", "Dilate random contractions; measure L-freeness and norm bounds");
  add_common(dilate, common, true);
  dilate->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
  dilate->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  dilate->add_option("--max-len", max_len, "Longest alternating word")->capture_default_str();

  auto* pave = app.add_subcommand("pave", "Paving norms against the bound, one partition for several targets");
  add_common(pave, common, true);
  pave->add_option("--n", n)->check(CLI::Range(2, 1000))->capture_default_str();
  pave->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();
  pave->add_option("--targets", targets)->check(CLI::PositiveNumber)->capture_default_str();

  auto* sharp = app.add_subcommand("sharpness", "Paving a rotated symmetry with given traces");
  add_common(sharp, common, true);
  sharp->add_option("--n", n)->capture_default_str();
  sharp->add_option("--traces", traces, "Comma-separated traces summing to 1")->capture_default_str();
  sharp->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();

  auto* qpq = app.add_subcommand("qpq", "Norm of qpq for independently rotated projections");
  add_common(qpq, common, true);
  qpq->add_option("--tau-p", tau_p)->capture_default_str();
  qpq->add_option("--tau-q", tau_q)->capture_default_str();
  qpq->add_option("--d", d)->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (leinert->parsed()) return run_leinert(common, la);
    if (moment->parsed()) return run_moment(common, ma, false);
    if (norm_bound->parsed()) return run_moment(common, ma, true);
    if (closed->parsed()) return run_closed_form(common, ca);

    const auto cal = load_calibration(common);
    const Json cal_info{{"calibration", cal.source}, {"calibration_version", cal.version}};
    if (dilate->parsed()) {
      auto rep = experiments::dilation_defect(n, d, max_len, common.trials, common.seed,
                                              cal.lfree_defect_median);
      auto bounds = experiments::dilation_bounds(n, d, common.trials, common.seed, cal.dilation_sum);
      rep.extra["bounds"] = bounds.to_json(false);
      if (!bounds.pass()) rep.failure = "dilation norm bounds violated";
      Json config = cal_info;
      return finish_report(common, rep, config);
    }
    if (pave->parsed()) {
      auto rep = experiments::paving_experiment(n, d, common.trials, targets, common.seed, cal.paving);
      return finish_report(common, rep, cal_info);
    }
    if (sharp->parsed()) {
      const auto ts = parse_traces(traces);
      auto rep = experiments::sharpness(n, ts, d, common.trials, common.seed, cal.sharpness_equal,
                                        cal.sharpness_margin);
      return finish_report(common, rep, cal_info);
    }
    if (qpq->parsed()) {
      auto rep = experiments::qpq_experiment(tau_p, tau_q, d, common.trials, common.seed, cal.qpq);
      return finish_report(common, rep, cal_info);
    }
  } catch (const constructions::AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << '\n';
    return kAssertion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
