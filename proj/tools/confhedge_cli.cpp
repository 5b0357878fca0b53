// confhedge: streaming expert aggregation under signed unbounded losses.
//
// Subcommands:
//   allocate    run the loss-allocation learner over a loss stream
//   forecast    run the forecast-aggregation learner over a forecast stream
//   synthetic   generate a segment-mean synthetic stream and run allocation,
//               with an inline prefix check against the shifting-regret bound
//   fuzz-bounds randomized bound-verification harness
//
// Exit codes: 0 success, 1 I/O error, 2 validation error, 3 bound violation.

#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>

#include "confhedge/confhedge1.hpp"
#include "confhedge/confhedge2.hpp"
#include "confhedge/fuzz.hpp"
#include "confhedge/io.hpp"

using namespace confhedge;

namespace {

struct CommonFlags {
  std::string mixing = "fixed-share";
  std::string alpha = "inverse-t";
  bool confidence_off = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--mixing", f.mixing, "weight sharing scheme")
      ->check(CLI::IsMember({"none", "fixed-share", "uniform-past"}))
      ->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "mixing rate: inverse-t or const:<v>")
      ->capture_default_str();
  cmd->add_flag("--confidence-off", f.confidence_off,
                "force all confidence levels to 1 (plain adaptive-Hedge baseline)");
}

MixingScheme parse_scheme(const CommonFlags& f) {
  MixingScheme scheme;
  if (f.mixing == "none")
    scheme.variant = MixingVariant::None;
  else if (f.mixing == "fixed-share")
    scheme.variant = MixingVariant::FixedShare;
  else
    scheme.variant = MixingVariant::UniformPast;
  if (f.alpha == "inverse-t") {
    scheme.alpha = AlphaSchedule::inverse_t();
  } else if (f.alpha.rfind("const:", 0) == 0) {
    scheme.alpha = AlphaSchedule::constant(std::stod(f.alpha.substr(6)));
  } else {
    throw std::invalid_argument("--alpha must be inverse-t or const:<v>");
  }
  return scheme;
}

LossFunction parse_loss(const std::string& s) {
  if (s == "abs") return LossFunction::absolute();
  if (s.rfind("biased:", 0) == 0) {
    const auto body = s.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("--loss biased:<mu1>,<mu2> needs two values");
    return LossFunction::biased_absolute(std::stod(body.substr(0, comma)),
                                         std::stod(body.substr(comma + 1)));
  }
  throw std::invalid_argument("--loss must be abs or biased:<mu1>,<mu2>");
}

void print_report(const RegretLedger& ledger, MixingVariant variant, std::ostream& os) {
  os << fmt::format("rounds={} switches={} regret={}\n", ledger.rounds(),
                    ledger.switches(), format_double(ledger.regret()));
  os << fmt::format("H={} Delta={} V={} S={}\n", format_double(ledger.cum_hedge_loss()),
                    format_double(ledger.cum_gap()), format_double(ledger.cum_variance()),
                    format_double(ledger.max_range()));
  if (variant == MixingVariant::None) {
    os << "bounds: unavailable for --mixing none (empirical regret only)\n";
    return;
  }
  const auto b = bound_values_map(ledger, ledger.n_experts(), variant);
  os << "bounds:";
  for (const auto& [name, value] : b) os << ' ' << name << '=' << format_double(value);
  os << '\n';
}

int cmd_allocate(const std::string& input, const std::string& comparator,
                 const std::string& out, const CommonFlags& flags) {
  const auto scheme = parse_scheme(flags);
  auto stream = read_loss_stream(input);
  if (stream.rounds.empty()) throw std::invalid_argument(input + ": no rounds");
  const std::size_t n = stream.rounds.front().size();
  ComparatorSequence q;
  if (!comparator.empty()) {
    q = read_comparators(comparator, n);
    if (q.size() != stream.rounds.size())
      throw std::invalid_argument(comparator + ": comparator rows != stream rounds");
  }

  LearnerState state = LearnerState::initial(n);
  RegretLedger ledger(n);
  std::vector<RoundRecord> records;
  std::vector<WeightDistribution> posteriors;
  for (std::size_t t = 0; t < stream.rounds.size(); ++t) {
    RoundInput in = stream.rounds[t];
    if (flags.confidence_off) in.confidences.assign(n, 1.0);
    posteriors.push_back(state.posterior);
    const auto step_out = step(state, in, scheme);
    ledger.add_round(step_out.record, in.losses, in.confidences,
                     q.empty() ? nullptr : &q[t]);
    records.push_back(step_out.record);
    state = step_out.next_state;
  }
  write_round_records(out, records, posteriors);
  if (!q.empty()) print_report(ledger, scheme.variant, std::cout);
  return 0;
}

int cmd_forecast(const std::string& input, const std::string& loss_flag,
                 const std::string& profiles_path, const std::string& out,
                 const CommonFlags& flags) {
  const auto scheme = parse_scheme(flags);
  const auto loss = parse_loss(loss_flag);
  auto stream = read_forecast_stream(input);
  if (stream.rounds.empty()) throw std::invalid_argument(input + ": no rounds");
  const std::size_t n = stream.rounds.front().size();

  if (!profiles_path.empty()) {
    const auto profiles = read_profiles(profiles_path);
    for (const auto& name : stream.expert_names)
      if (!profiles.count(name))
        throw std::invalid_argument(profiles_path + ": no profile for expert '" + name + "'");
    for (std::size_t t = 0; t < stream.rounds.size(); ++t)
      for (std::size_t i = 0; i < n; ++i)
        stream.rounds[t].confidences[i] =
            profile_eval(profiles.at(stream.expert_names[i]), stream.features[t]);
  }

  LearnerState state = LearnerState::initial(n);
  std::vector<RoundRecord> records;
  std::vector<WeightDistribution> posteriors;
  std::vector<double> gammas;
  double abs_err = 0.0;
  std::size_t warnings = 0;
  for (const auto& round : stream.rounds) {
    ForecastRound r = round;
    if (flags.confidence_off) r.confidences.assign(n, 1.0);
    posteriors.push_back(state.posterior);
    const auto step_out = step(state, r, loss, scheme);
    if (step_out.convexity_warning) ++warnings;
    gammas.push_back(step_out.forecast);
    abs_err += std::abs(r.outcome - step_out.forecast);
    records.push_back(step_out.record);
    state = step_out.next_state;
  }
  write_round_records(out, records, posteriors);

  // companion file: per-round forecast, outcome, and per-expert losses
  std::filesystem::path detail = out;
  detail.replace_extension(".experts.csv");
  std::ofstream os(detail);
  if (!os) throw std::runtime_error(detail.string() + ": cannot open for writing");
  os << "t,gamma,omega";
  for (const auto& name : stream.expert_names) os << ",l_" << name;
  os << '\n';
  for (std::size_t t = 0; t < stream.rounds.size(); ++t) {
    os << (t + 1) << ',' << format_double(gammas[t]) << ','
       << format_double(stream.rounds[t].outcome);
    for (double c : stream.rounds[t].forecasts)
      os << ',' << format_double(evaluate_loss(loss, stream.rounds[t].outcome, c));
    os << '\n';
  }

  if (warnings > 0)
    std::cout << "warning: loss function failed the midpoint convexity spot check on "
              << warnings << " round(s)\n";
  std::cout << fmt::format("MAE={}\n",
                           format_double(abs_err / static_cast<double>(stream.rounds.size())));
  return 0;
}

SyntheticSpec parse_synthetic_spec(std::size_t experts, std::size_t horizon,
                                   const std::string& means_flag, double noise,
                                   std::uint64_t seed) {
  SyntheticSpec spec{experts, horizon, {}, noise, seed};
  std::stringstream segs(means_flag);
  std::string seg;
  while (std::getline(segs, seg, ';')) {
    Vec means;
    std::stringstream vals(seg);
    std::string v;
    while (std::getline(vals, v, ',')) means.push_back(std::stod(v));
    if (means.size() != experts)
      throw std::invalid_argument("--means: each segment needs one mean per expert");
    spec.segment_means.push_back(std::move(means));
  }
  if (spec.segment_means.empty()) throw std::invalid_argument("--means: no segments");
  return spec;
}

int cmd_synthetic(const SyntheticSpec& spec, const std::string& out,
                  const std::string& stream_out, const CommonFlags& flags) {
  const auto scheme = parse_scheme(flags);
  const auto rounds = generate_synthetic(spec);
  if (!stream_out.empty()) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec.n_experts; ++i)
      names.push_back("e" + std::to_string(i + 1));
    write_loss_stream(stream_out, names, rounds);
  }

  // segment-wise best comparator: unit mass on the expert with the lowest
  // segment mean
  ComparatorSequence q;
  for (std::size_t t = 1; t <= spec.horizon; ++t) {
    const Vec& means = spec.segment_means[spec.segment_of(t)];
    Vec v(spec.n_experts, 0.0);
    v[std::min_element(means.begin(), means.end()) - means.begin()] = 1.0;
    q.emplace_back(std::move(v));
  }

  LearnerState state = LearnerState::initial(spec.n_experts);
  RegretLedger ledger(spec.n_experts);
  std::vector<RoundRecord> records;
  std::vector<WeightDistribution> posteriors;
  bool prefix_ok = true;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    posteriors.push_back(state.posterior);
    const auto step_out = step(state, rounds[t], scheme);
    ledger.add_round(step_out.record, rounds[t].losses, rounds[t].confidences, &q[t]);
    records.push_back(step_out.record);
    state = step_out.next_state;
    if (scheme.variant != MixingVariant::None) {
      const auto b = bound_values(ledger, spec.n_experts, scheme.variant);
      prefix_ok = prefix_ok && ledger.regret() <= b.eq8 + 1e-9;
    }
  }
  write_round_records(out, records, posteriors);
  print_report(ledger, scheme.variant, std::cout);
  if (scheme.variant != MixingVariant::None) {
    std::cout << "prefix check (regret <= shifting bound at every T): "
              << (prefix_ok ? "pass" : "VIOLATED") << '\n';
    if (!prefix_ok) return 3;
  }
  return 0;
}

int thread_cap_from_env() {
  if (const char* env = std::getenv("CONFHEDGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // runtime default
}

void dump_trial(const Trial& trial, std::size_t id, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t n = trial.rounds.front().size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  write_loss_stream(dir / fmt::format("trial_{}_losses.csv", id), names, trial.rounds);
  std::ofstream qs(dir / fmt::format("trial_{}_comparator.csv", id));
  qs << "t";
  for (const auto& name : names) qs << ",q_" << name;
  qs << '\n';
  for (std::size_t t = 0; t < trial.comparators.size(); ++t) {
    qs << (t + 1);
    for (std::size_t i = 0; i < n; ++i) qs << ',' << format_double(trial.comparators[t][i]);
    qs << '\n';
  }
}

int cmd_fuzz(std::size_t trials, std::uint64_t seed, const std::string& out, bool serial,
             const std::string& dump_dir) {
  if (trials == 0) throw std::invalid_argument("--trials must be positive");
  FuzzConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  const auto results =
      serial ? run_fuzz_serial(cfg) : run_fuzz(cfg, thread_cap_from_env());

  std::ofstream os(out);
  if (!os) throw std::runtime_error(out + ": cannot open for writing");
  os << "trial,n,horizon,switches,regret,eq7,eq8,eq9,eq10,eq11,bounds_ok,lemmas_ok\n";
  std::size_t violations = 0;
  for (const auto& r : results) {
    if (!r.bounds_ok()) ++violations;
    os << r.id << ',' << r.n_experts << ',' << r.horizon << ',' << r.switches << ','
       << format_double(r.regret) << ',' << format_double(r.bounds.eq7) << ','
       << format_double(r.bounds.eq8) << ',' << format_double(r.bounds.eq9) << ','
       << format_double(r.bounds.eq10) << ',' << format_double(r.bounds.eq11) << ','
       << (r.bounds_ok() ? 1 : 0) << ','
       << (r.lemma3_ok && r.lemma4_ok && r.lemma5_ok && r.lemma6_ok ? 1 : 0) << '\n';
  }
  std::cout << fmt::format("trials={} bound_violations={}\n", results.size(), violations);
  if (violations > 0) {
    for (const auto& r : results)
      if (!r.bounds_ok()) dump_trial(generate_trial(cfg, r.id), r.id, dump_dir);
    std::cout << "offending streams dumped to " << dump_dir << " for replay\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming aggregation of expert predictions with confidence levels"};
  app.require_subcommand(1);

  CommonFlags alloc_flags, fc_flags, syn_flags;
  std::string alloc_in, alloc_q, alloc_out = "run.csv";
  auto* alloc = app.add_subcommand("allocate", "run the loss-allocation learner");
  alloc->add_option("--input", alloc_in, "loss stream CSV")->required();
  alloc->add_option("--comparator", alloc_q, "comparator CSV (q_* columns)");
  alloc->add_option("--out", alloc_out, "round-record output (.csv or .jsonl)")
      ->capture_default_str();
  add_common(alloc, alloc_flags);

  std::string fc_in, fc_loss = "abs", fc_profiles, fc_out = "run.csv";
  auto* fc = app.add_subcommand("forecast", "run the forecast-aggregation learner");
  fc->add_option("--input", fc_in, "forecast stream CSV")->required();
  fc->add_option("--loss", fc_loss, "abs or biased:<mu1>,<mu2>")->capture_default_str();
  fc->add_option("--profiles", fc_profiles,
                 "confidence profile JSON (replaces p_* columns)");
  fc->add_option("--out", fc_out, "round-record output")->capture_default_str();
  add_common(fc, fc_flags);

  // defaults reproduce the bundled rotating-leader fixture
  std::size_t syn_n = 3, syn_T = 3000;
  std::string syn_means = "-1,0,1;1,-1,0;0,1,-1";
  double syn_noise = 1.0;
  std::uint64_t syn_seed = 424242;
  std::string syn_out = "run.csv", syn_stream;
  auto* syn = app.add_subcommand("synthetic", "segment-mean synthetic experiment");
  syn->add_option("--experts", syn_n)->capture_default_str();
  syn->add_option("--horizon", syn_T)->capture_default_str();
  syn->add_option("--means", syn_means, "per-segment means, ';' between segments")
      ->capture_default_str();
  syn->add_option("--noise", syn_noise, "noise standard deviation")->capture_default_str();
  syn->add_option("--seed", syn_seed)->capture_default_str();
  syn->add_option("--out", syn_out)->capture_default_str();
  syn->add_option("--stream-out", syn_stream, "also write the generated loss stream");
  add_common(syn, syn_flags);

  std::size_t fz_trials = 1000;
  std::uint64_t fz_seed = 1;
  std::string fz_out = "trials.csv", fz_dump = "fuzz_violations";
  bool fz_serial = false;
  auto* fz = app.add_subcommand("fuzz-bounds", "randomized bound verification");
  fz->add_option("--trials", fz_trials)->capture_default_str();
  fz->add_option("--seed", fz_seed)->capture_default_str();
  fz->add_option("--out", fz_out, "per-trial report CSV")->capture_default_str();
  fz->add_option("--dump-dir", fz_dump, "directory for violating-trial dumps")
      ->capture_default_str();
  fz->add_flag("--serial", fz_serial, "use the serial reference path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (alloc->parsed()) return cmd_allocate(alloc_in, alloc_q, alloc_out, alloc_flags);
    if (fc->parsed()) return cmd_forecast(fc_in, fc_loss, fc_profiles, fc_out, fc_flags);
    if (syn->parsed())
      return cmd_synthetic(parse_synthetic_spec(syn_n, syn_T, syn_means, syn_noise, syn_seed),
                           syn_out, syn_stream, syn_flags);
    if (fz->parsed()) return cmd_fuzz(fz_trials, fz_seed, fz_out, fz_serial, fz_dump);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
