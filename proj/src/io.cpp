#include "confhedge/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "confhedge/rng.hpp"

namespace confhedge {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& context, std::size_t lineno) {
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": malformed number '" + s + "' at line " +
                             std::to_string(lineno));
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

bool is_jsonl(const std::filesystem::path& path) { return path.extension() == ".jsonl"; }

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

void SyntheticSpec::validate() const {
  if (n_experts == 0 || horizon == 0)
    throw std::invalid_argument("SyntheticSpec: n_experts and horizon must be positive");
  if (segment_means.empty())
    throw std::invalid_argument("SyntheticSpec: need at least one segment");
  if (segment_means.size() > horizon)
    throw std::invalid_argument("SyntheticSpec: more segments than rounds");
  for (const auto& m : segment_means)
    if (m.size() != n_experts)
      throw std::invalid_argument("SyntheticSpec: segment mean dimension mismatch");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("SyntheticSpec: negative noise std");
}

std::size_t SyntheticSpec::segment_of(std::size_t t) const {
  const std::size_t k = segment_means.size();
  const std::size_t base = horizon / k, extra = horizon % k;
  // first `extra` segments have base+1 rounds
  const std::size_t pivot = extra * (base + 1);
  if (t - 1 < pivot) return (t - 1) / (base + 1);
  return extra + (t - 1 - pivot) / base;
}

std::vector<RoundInput> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<RoundInput> out;
  out.reserve(spec.horizon);
  for (std::size_t t = 1; t <= spec.horizon; ++t) {
    const Vec& means = spec.segment_means[spec.segment_of(t)];
    RoundInput in;
    in.losses.resize(spec.n_experts);
    in.confidences.assign(spec.n_experts, 1.0);
    for (std::size_t i = 0; i < spec.n_experts; ++i)
      in.losses[i] = means[i] + spec.noise_std * rng.normal();
    out.push_back(std::move(in));
  }
  return out;
}

LossStream read_loss_stream(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  LossStream stream;
  std::vector<std::size_t> loss_cols, conf_cols;
  std::vector<std::string> conf_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("l_", 0) == 0) {
      stream.expert_names.push_back(header[c].substr(2));
      loss_cols.push_back(c);
    } else if (header[c].rfind("p_", 0) == 0) {
      conf_names.push_back(header[c].substr(2));
      conf_cols.push_back(c);
    } else if (header[c] != "t") {
      throw std::runtime_error(path.string() + ": unexpected column '" + header[c] + "'");
    }
  }
  if (loss_cols.empty()) throw std::runtime_error(path.string() + ": no l_* columns");
  if (!conf_cols.empty() && conf_names != stream.expert_names)
    throw std::runtime_error(path.string() + ": p_* columns do not match l_* columns");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw std::runtime_error(path.string() + ": wrong field count at line " +
                               std::to_string(lineno));
    RoundInput r;
    for (std::size_t c : loss_cols)
      r.losses.push_back(parse_double(fields[c], path.string(), lineno));
    if (conf_cols.empty()) {
      r.confidences.assign(r.losses.size(), 1.0);
    } else {
      for (std::size_t c : conf_cols)
        r.confidences.push_back(parse_double(fields[c], path.string(), lineno));
    }
    try {
      r.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ": " + e.what() + " at line " +
                               std::to_string(lineno));
    }
    stream.rounds.push_back(std::move(r));
  }
  return stream;
}

ForecastStream read_forecast_stream(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  ForecastStream stream;
  std::vector<std::size_t> fc_cols, conf_cols, feat_cols;
  std::vector<std::string> conf_names;
  std::size_t omega_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("c_", 0) == 0) {
      stream.expert_names.push_back(header[c].substr(2));
      fc_cols.push_back(c);
    } else if (header[c].rfind("p_", 0) == 0) {
      conf_names.push_back(header[c].substr(2));
      conf_cols.push_back(c);
    } else if (header[c] == "omega") {
      omega_col = c;
    } else if (header[c] != "t") {
      stream.feature_names.push_back(header[c]);
      feat_cols.push_back(c);
    }
  }
  if (fc_cols.empty()) throw std::runtime_error(path.string() + ": no c_* columns");
  if (omega_col == header.size()) throw std::runtime_error(path.string() + ": no omega column");
  if (!conf_cols.empty() && conf_names != stream.expert_names)
    throw std::runtime_error(path.string() + ": p_* columns do not match c_* columns");
  stream.has_confidences = !conf_cols.empty();

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw std::runtime_error(path.string() + ": wrong field count at line " +
                               std::to_string(lineno));
    ForecastRound r;
    for (std::size_t c : fc_cols)
      r.forecasts.push_back(parse_double(fields[c], path.string(), lineno));
    r.outcome = parse_double(fields[omega_col], path.string(), lineno);
    if (stream.has_confidences) {
      for (std::size_t c : conf_cols)
        r.confidences.push_back(parse_double(fields[c], path.string(), lineno));
    } else {
      r.confidences.assign(r.forecasts.size(), 1.0);
    }
    std::map<std::string, double> feats;
    for (std::size_t j = 0; j < feat_cols.size(); ++j)
      feats[stream.feature_names[j]] = parse_double(fields[feat_cols[j]], path.string(), lineno);
    stream.rounds.push_back(std::move(r));
    stream.features.push_back(std::move(feats));
  }
  return stream;
}

ComparatorSequence read_comparators(const std::filesystem::path& path, std::size_t n_experts) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  std::vector<std::size_t> q_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c].rfind("q_", 0) == 0) q_cols.push_back(c);
  if (q_cols.size() != n_experts)
    throw std::runtime_error(path.string() + ": expected " + std::to_string(n_experts) +
                             " q_* columns, found " + std::to_string(q_cols.size()));
  ComparatorSequence seq;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    Vec q;
    for (std::size_t c : q_cols) q.push_back(parse_double(fields[c], path.string(), lineno));
    try {
      seq.emplace_back(std::move(q));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ": " + e.what() + " at line " +
                               std::to_string(lineno));
    }
  }
  return seq;
}

namespace {

std::vector<std::string> record_header(std::size_t n, bool forecasting) {
  std::vector<std::string> h{"t"};
  if (forecasting) h.push_back("a");
  for (const char* base : {"h", "m", "delta", "eta", "l_min", "l_max", "s", "v"})
    h.emplace_back(base);
  for (std::size_t i = 1; i <= n; ++i) h.push_back("w_" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) h.push_back("wstar_" + std::to_string(i));
  return h;
}

std::vector<double> record_row(const RoundRecord& rec, const WeightDistribution& posterior,
                               bool forecasting) {
  std::vector<double> row;
  if (forecasting) row.push_back(rec.forecast_loss.value_or(0.0));
  row.insert(row.end(), {rec.hedge_loss, rec.mixloss, rec.gap, rec.learning_rate_used,
                         rec.loss_min, rec.loss_max, rec.loss_range, rec.weight_variance});
  for (std::size_t i = 0; i < posterior.size(); ++i) row.push_back(posterior[i]);
  for (std::size_t i = 0; i < rec.prediction.size(); ++i) row.push_back(rec.prediction[i]);
  return row;
}

}  // namespace

void write_round_records(const std::filesystem::path& path,
                         const std::vector<RoundRecord>& records,
                         const std::vector<WeightDistribution>& posteriors) {
  if (records.size() != posteriors.size())
    throw std::invalid_argument("write_round_records: misaligned sequences");
  const bool forecasting = !records.empty() && records.front().forecast_loss.has_value();
  const std::size_t n = posteriors.empty() ? 0 : posteriors.front().size();
  auto out = open_out(path);
  const auto header = record_header(n, forecasting);
  if (is_jsonl(path)) {
    for (std::size_t t = 0; t < records.size(); ++t) {
      nlohmann::ordered_json obj;
      obj["t"] = t + 1;
      const auto row = record_row(records[t], posteriors[t], forecasting);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (std::isinf(row[c]))
          obj[header[c + 1]] = "inf";
        else
          obj[header[c + 1]] = row[c];
      }
      out << obj.dump() << "\n";
    }
  } else {
    for (std::size_t c = 0; c < header.size(); ++c)
      out << (c ? "," : "") << header[c];
    out << "\n";
    for (std::size_t t = 0; t < records.size(); ++t) {
      out << (t + 1);
      for (double v : record_row(records[t], posteriors[t], forecasting))
        out << "," << format_double(v);
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RoundRecordRow> read_round_records(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  auto col = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return c;
    return header.size();
  };
  const std::size_t ca = col("a");
  std::vector<std::size_t> w_cols, ws_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("w_", 0) == 0) w_cols.push_back(c);
    if (header[c].rfind("wstar_", 0) == 0) ws_cols.push_back(c);
  }
  std::vector<RoundRecordRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    auto num = [&](std::size_t c) { return parse_double(f[c], path.string(), lineno); };
    RoundRecordRow row{static_cast<std::size_t>(num(col("t"))), RoundRecord{}, {}};
    RoundRecord& r = row.record;
    if (ca != header.size()) r.forecast_loss = num(ca);
    r.hedge_loss = num(col("h"));
    r.mixloss = num(col("m"));
    r.gap = num(col("delta"));
    r.learning_rate_used = num(col("eta"));
    r.loss_min = num(col("l_min"));
    r.loss_max = num(col("l_max"));
    r.loss_range = num(col("s"));
    r.weight_variance = num(col("v"));
    for (std::size_t c : w_cols) row.posterior.push_back(num(c));
    Vec wstar;
    for (std::size_t c : ws_cols) wstar.push_back(num(c));
    r.prediction = WeightDistribution(std::move(wstar));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_loss_stream(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<RoundInput>& rounds) {
  auto out = open_out(path);
  if (is_jsonl(path)) {
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      nlohmann::ordered_json obj;
      obj["t"] = t + 1;
      for (std::size_t i = 0; i < names.size(); ++i) obj["l_" + names[i]] = rounds[t].losses[i];
      for (std::size_t i = 0; i < names.size(); ++i)
        obj["p_" + names[i]] = rounds[t].confidences[i];
      out << obj.dump() << "\n";
    }
  } else {
    out << "t";
    for (const auto& n : names) out << ",l_" << n;
    for (const auto& n : names) out << ",p_" << n;
    out << "\n";
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      out << (t + 1);
      for (double v : rounds[t].losses) out << "," << format_double(v);
      for (double v : rounds[t].confidences) out << "," << format_double(v);
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::map<std::string, ConfidenceProfile> read_profiles(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("experts") || !doc["experts"].is_object())
    throw std::runtime_error(path.string() + ": missing 'experts' object");
  std::map<std::string, ConfidenceProfile> out;
  for (const auto& [name, factors] : doc["experts"].items()) {
    ConfidenceProfile profile;
    for (const auto& f : factors) {
      Trapezoid t;
      t.plateau_start = f.at("plateau").at(0).get<double>();
      t.plateau_end = f.at("plateau").at(1).get<double>();
      t.slope_width = f.at("slope").get<double>();  // required, no default
      if (f.contains("period")) t.cyclic_period = f["period"].get<double>();
      t.validate();
      profile.factors.emplace_back(f.at("feature").get<std::string>(), t);
    }
    if (profile.factors.empty())
      throw std::runtime_error(path.string() + ": profile '" + name + "' has no factors");
    out[name] = std::move(profile);
  }
  return out;
}

}  // namespace confhedge
