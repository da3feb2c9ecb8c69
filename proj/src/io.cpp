#include "tsqc/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

namespace tsqc {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) field_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "/" + key, "missing field");
  return *it;
}

const Json& require_array(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require(obj, path, key);
  if (!v.is_array()) field_error(path + "/" + key, "expected an array");
  return v;
}

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

Complex as_complex(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) field_error(path, "expected [re, im]");
  return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
}

std::vector<Complex> as_amplitudes(const Json& v, const std::string& path, std::size_t dim) {
  if (!v.is_array()) field_error(path, "expected a list of [re, im] pairs");
  if (v.size() != dim) field_error(path, "expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(v.size()));
  std::vector<Complex> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_complex(v[i], path + "/" + std::to_string(i)));
  return out;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json amplitudes_json(std::span<const Complex> v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

// Constructs a library object, turning its errors into field-anchored ones.
template <class F>
auto at_field(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

ProjectiveMeasurement measurement_from_json(const Json& j, const std::string& path, std::size_t dim,
                                            const std::vector<std::string>& basis_labels, const Tolerances& tol) {
  const std::string name = as_string(require(j, path, "name"), path + "/name");
  const bool has_partition = j.contains("partition");
  const bool has_projectors = j.contains("projectors");
  if (has_partition == has_projectors) field_error(path, "give exactly one of 'partition' or 'projectors'");

  if (has_partition) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < basis_labels.size(); ++i) index[basis_labels[i]] = i;
    const Json& groups_json = require_array(j, path, "partition");
    std::vector<ProjectiveMeasurement::Group> groups;
    for (std::size_t g = 0; g < groups_json.size(); ++g) {
      const std::string gpath = path + "/partition/" + std::to_string(g);
      ProjectiveMeasurement::Group group;
      group.label = as_string(require(groups_json[g], gpath, "label"), gpath + "/label");
      const Json& members = require_array(groups_json[g], gpath, "basis");
      for (std::size_t m = 0; m < members.size(); ++m) {
        const std::string mpath = gpath + "/basis/" + std::to_string(m);
        const std::string label = as_string(members[m], mpath);
        const auto it = index.find(label);
        if (it == index.end()) field_error(mpath, "unknown basis label '" + label + "'");
        group.members.push_back(it->second);
      }
      groups.push_back(std::move(group));
    }
    std::vector<Ket> basis;
    for (std::size_t i = 0; i < dim; ++i) basis.push_back(Ket::basis(dim, i));
    return at_field(path, [&] { return ProjectiveMeasurement::from_partition(name, basis, groups, tol); });
  }

  const Json& ps = require_array(j, path, "projectors");
  std::vector<Projector> projectors;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const std::string ppath = path + "/projectors/" + std::to_string(k);
    const std::string label = as_string(require(ps[k], ppath, "label"), ppath + "/label");
    const Json& rows = require_array(ps[k], ppath, "matrix");
    if (rows.size() != dim) field_error(ppath + "/matrix", "expected " + std::to_string(dim) + " rows");
    std::vector<Complex> data;
    for (std::size_t r = 0; r < dim; ++r) {
      const auto row = as_amplitudes(rows[r], ppath + "/matrix/" + std::to_string(r), dim);
      data.insert(data.end(), row.begin(), row.end());
    }
    projectors.push_back(at_field(ppath, [&] { return Projector(label, Matrix(dim, std::move(data))); }));
  }
  return at_field(path, [&] { return ProjectiveMeasurement(name, std::move(projectors), tol); });
}

Json projector_json(const Projector& p) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < p.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < p.dim(); ++c) row.push_back(complex_json(p.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"label", p.label()}, {"matrix", std::move(rows)}};
}

Json measurement_json(const ProjectiveMeasurement& m) {
  Json ps = Json::array();
  for (const auto& p : m.projectors()) ps.push_back(projector_json(p));
  return Json{{"name", m.name()}, {"projectors", std::move(ps)}};
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace

Scenario scenario_from_json(const Json& j, const Tolerances& tol) {
  if (!j.is_object()) field_error("", "scenario file must hold a JSON object");
  const int version = static_cast<int>(as_number(require(j, "", "format_version"), "/format_version"));
  if (version != kFormatVersion) field_error("/format_version", "unsupported version " + std::to_string(version));

  const double dim_raw = as_number(require(j, "", "dim"), "/dim");
  if (dim_raw < 2 || dim_raw != static_cast<double>(static_cast<std::size_t>(dim_raw))) {
    field_error("/dim", "expected an integer >= 2");
  }
  const auto dim = static_cast<std::size_t>(dim_raw);

  std::vector<std::string> basis_labels;
  if (j.contains("basis_labels")) {
    const Json& bl = require_array(j, "", "basis_labels");
    if (bl.size() != dim) field_error("/basis_labels", "expected " + std::to_string(dim) + " labels");
    for (std::size_t i = 0; i < bl.size(); ++i) basis_labels.push_back(as_string(bl[i], "/basis_labels/" + std::to_string(i)));
  } else {
    for (std::size_t i = 0; i < dim; ++i) basis_labels.push_back(std::to_string(i));
  }

  const auto pre_amp = as_amplitudes(require(j, "", "pre"), "/pre", dim);
  const auto post_amp = as_amplitudes(require(j, "", "post"), "/post", dim);
  const double t_a = j.contains("t_a") ? as_number(j["t_a"], "/t_a") : 0.0;
  const double t_b = j.contains("t_b") ? as_number(j["t_b"], "/t_b") : 1.0;
  const Ket pre = at_field("/pre", [&] { return Ket(pre_amp, Ket::Normalization::automatic, tol); });
  const Ket post = at_field("/post", [&] { return Ket(post_amp, Ket::Normalization::automatic, tol); });
  TwoState ts = at_field("/t_a", [&] { return TwoState(pre, post, t_a, t_b); });

  const Json& ms = require_array(j, "", "measurements");
  std::vector<ProjectiveMeasurement> candidates;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    candidates.push_back(measurement_from_json(ms[i], "/measurements/" + std::to_string(i), dim, basis_labels, tol));
  }

  const Json& fin = require(j, "", "final");
  const Json& fbasis = require_array(fin, "/final", "basis");
  std::vector<Ket> final_basis;
  for (std::size_t i = 0; i < fbasis.size(); ++i) {
    const std::string path = "/final/basis/" + std::to_string(i);
    const auto amp = as_amplitudes(fbasis[i], path, dim);
    final_basis.push_back(at_field(path, [&] { return Ket(amp, Ket::Normalization::automatic, tol); }));
  }
  std::vector<std::string> final_labels;
  if (fin.contains("labels")) {
    const Json& fl = require_array(fin, "/final", "labels");
    for (std::size_t i = 0; i < fl.size(); ++i) final_labels.push_back(as_string(fl[i], "/final/labels/" + std::to_string(i)));
  } else {
    for (std::size_t i = 0; i < final_basis.size(); ++i) final_labels.push_back("f" + std::to_string(i));
  }
  const std::string final_name = fin.contains("name") ? as_string(fin["name"], "/final/name") : "final";
  auto final_measurement = at_field("/final", [&] {
    return ProjectiveMeasurement::from_basis(final_name, final_basis, final_labels, tol);
  });

  Scenario s{
      .name = j.contains("name") ? as_string(j["name"], "/name") : "unnamed",
      .two_state = std::move(ts),
      .candidates = std::move(candidates),
      .final_measurement = std::move(final_measurement),
      .b_label = as_string(require(fin, "/final", "b_label"), "/final/b_label"),
      .notes = j.contains("notes") ? as_string(j["notes"], "/notes") : "",
      .basis_labels = std::move(basis_labels),
  };
  validate_scenario(s, tol);
  return s;
}

Scenario parse_scenario(std::string_view text, const Tolerances& tol) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse_error, "line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                                            ": " + e.what());
  }
  return scenario_from_json(j, tol);
}

Scenario load_scenario(const std::filesystem::path& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), tol);
}

Json scenario_to_json(const Scenario& s) {
  const std::size_t dim = s.two_state.dim();
  Json labels = Json::array();
  for (std::size_t i = 0; i < dim; ++i) labels.push_back(s.basis_labels.empty() ? std::to_string(i) : s.basis_labels[i]);
  Json ms = Json::array();
  for (const auto& m : s.candidates) ms.push_back(measurement_json(m));

  Json fbasis = Json::array();
  Json flabels = Json::array();
  for (const auto& p : s.final_measurement.projectors()) {
    fbasis.push_back(amplitudes_json(p.range_ket().amplitudes()));
    flabels.push_back(p.label());
  }
  return Json{
      {"format_version", kFormatVersion},
      {"name", s.name},
      {"notes", s.notes},
      {"dim", dim},
      {"basis_labels", std::move(labels)},
      {"pre", amplitudes_json(s.two_state.pre().amplitudes())},
      {"post", amplitudes_json(s.two_state.post().amplitudes())},
      {"t_a", s.two_state.t_a()},
      {"t_b", s.two_state.t_b()},
      {"measurements", std::move(ms)},
      {"final",
       {{"name", s.final_measurement.name()}, {"basis", std::move(fbasis)}, {"labels", std::move(flabels)}, {"b_label", s.b_label}}},
  };
}

// --- reports ---------------------------------------------------------------

namespace {

Json labeled_json(std::span<const LabeledValue> entries, const char* value_key) {
  Json out = Json::array();
  for (const auto& e : entries) out.push_back(Json{{"label", e.label}, {value_key, e.value}});
  return out;
}

std::vector<LabeledValue> labeled_from_json(const Json& j, const char* value_key) {
  std::vector<LabeledValue> out;
  for (const auto& e : j) out.push_back({e.at("label").get<std::string>(), e.at(value_key).get<double>()});
  return out;
}

Json distribution_json(const std::optional<Distribution>& d) {
  return d ? labeled_json(d->entries(), "p") : Json(nullptr);
}

std::optional<Distribution> distribution_from_json(const Json& j, const Tolerances& tol) {
  if (j.is_null()) return std::nullopt;
  return Distribution(labeled_from_json(j, "p"), tol);
}

Json verdict_json(const Verdict& v) {
  Json outcomes = Json::array();
  for (const auto& c : v.outcomes) {
    outcomes.push_back(Json{{"label", c.label},
                            {"count", c.count},
                            {"frequency", c.frequency},
                            {"expected", c.expected},
                            {"deviation", c.deviation},
                            {"bound", c.bound},
                            {"exact_rule", c.exact_rule},
                            {"pass", c.pass}});
  }
  return Json{{"k_sigma", v.k_sigma}, {"pass", v.pass}, {"note", v.note}, {"outcomes", std::move(outcomes)}};
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.k_sigma = j.at("k_sigma").get<double>();
  v.pass = j.at("pass").get<bool>();
  v.note = j.at("note").get<std::string>();
  for (const auto& c : j.at("outcomes")) {
    v.outcomes.push_back(OutcomeCheck{c.at("label").get<std::string>(), c.at("count").get<std::uint64_t>(),
                                      c.at("frequency").get<double>(), c.at("expected").get<double>(),
                                      c.at("deviation").get<double>(), c.at("bound").get<double>(),
                                      c.at("exact_rule").get<bool>(), c.at("pass").get<bool>()});
  }
  return v;
}

}  // namespace

Json ensemble_to_json(const EnsembleReport& r) {
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back(
        Json{{"label", o.label}, {"count", o.count}, {"frequency", o.frequency}, {"std_error", o.std_error}});
  }
  return Json{{"mode", to_string(r.mode)},
              {"trials_total", r.trials_total},
              {"trials_kept", r.trials_kept},
              {"seed", r.seed},
              {"generator", r.generator},
              {"block_size", kBlockSize},
              {"outcomes", std::move(outcomes)}};
}

EnsembleReport ensemble_from_json(const Json& j) {
  EnsembleReport r;
  r.mode = selection_mode_from_string(j.at("mode").get<std::string>());
  r.trials_total = j.at("trials_total").get<std::uint64_t>();
  r.trials_kept = j.at("trials_kept").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.generator = j.at("generator").get<std::string>();
  for (const auto& o : j.at("outcomes")) {
    r.outcomes.push_back(OutcomeTally{o.at("label").get<std::string>(), o.at("count").get<std::uint64_t>(),
                                      o.at("frequency").get<double>(), o.at("std_error").get<double>()});
  }
  return r;
}

Json report_to_json(const ReportDocument& doc) {
  const auto& rep = doc.report;
  Json record = Json::array();
  for (const auto& e : rep.actual_record) record.push_back(Json{{"what", e.what}, {"time", e.time}});

  Json candidates = Json::array();
  for (const auto& c : rep.candidates) {
    Json kastner = nullptr;
    if (c.kastner) {
      kastner = Json{{"weights", labeled_json(c.kastner->entries, "w")},
                     {"sum", c.kastner->total()},
                     {"normalized", c.kastner->normalized}};
    }
    candidates.push_back(Json{
        {"measurement", c.measurement},
        {"time", c.time},
        {"added_measurements", c.added_measurements},
        {"labels", c.labels},
        {"impossible_postselection", c.impossible_postselection},
        {"abl", distribution_json(c.abl)},
        {"kastner", std::move(kastner)},
        {"kastner_error", c.kastner_error},
        {"born_predictive", distribution_json(c.born_predictive)},
        {"born_retrodictive", distribution_json(c.born_retrodictive)},
        {"oracle", ensemble_to_json(c.oracle)},
        {"verdict", c.verdict ? verdict_json(*c.verdict) : Json(nullptr)},
        {"consistent", c.consistent()},
    });
  }

  return Json{
      {"tool", "tsqc"},
      {"tool_version", doc.tool_version},
      {"format_version", kFormatVersion},
      {"created_utc", doc.created_utc},
      {"scenario", rep.scenario},
      {"generator", rep.generator},
      {"block_size", kBlockSize},
      {"seed", rep.seed},
      {"trials", rep.trials},
      {"k_sigma", rep.k_sigma},
      {"tolerances",
       {{"structural", doc.tolerances.structural},
        {"aggregate", doc.tolerances.aggregate},
        {"null_weight", doc.tolerances.null_weight},
        {"strict_norm", doc.tolerances.strict_norm}}},
      {"actual_record", std::move(record)},
      {"candidates", std::move(candidates)},
  };
}

ReportDocument report_from_json(const Json& j) {
  try {
    ReportDocument doc;
    doc.tool_version = j.at("tool_version").get<std::string>();
    doc.created_utc = j.at("created_utc").get<std::string>();
    const auto& t = j.at("tolerances");
    doc.tolerances = Tolerances{t.at("structural").get<double>(), t.at("aggregate").get<double>(),
                                t.at("null_weight").get<double>(), t.at("strict_norm").get<double>()};
    auto& rep = doc.report;
    rep.scenario = j.at("scenario").get<std::string>();
    rep.generator = j.at("generator").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.trials = j.at("trials").get<std::uint64_t>();
    rep.k_sigma = j.at("k_sigma").get<double>();
    for (const auto& e : j.at("actual_record")) {
      rep.actual_record.push_back({e.at("what").get<std::string>(), e.at("time").get<double>()});
    }
    for (const auto& cj : j.at("candidates")) {
      CandidateReport c;
      c.measurement = cj.at("measurement").get<std::string>();
      c.time = cj.at("time").get<double>();
      c.added_measurements = cj.at("added_measurements").get<std::vector<std::string>>();
      c.labels = cj.at("labels").get<std::vector<std::string>>();
      c.impossible_postselection = cj.at("impossible_postselection").get<bool>();
      c.abl = distribution_from_json(cj.at("abl"), doc.tolerances);
      if (const auto& k = cj.at("kastner"); !k.is_null()) {
        c.kastner = OutcomeWeights{labeled_from_json(k.at("weights"), "w"), k.at("normalized").get<bool>()};
      }
      c.kastner_error = cj.at("kastner_error").get<std::string>();
      c.born_predictive = distribution_from_json(cj.at("born_predictive"), doc.tolerances);
      c.born_retrodictive = distribution_from_json(cj.at("born_retrodictive"), doc.tolerances);
      c.oracle = ensemble_from_json(cj.at("oracle"));
      if (const auto& v = cj.at("verdict"); !v.is_null()) c.verdict = verdict_from_json(v);
      rep.candidates.push_back(std::move(c));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("report document: ") + e.what());
  }
}

Json raffle_to_json(const RaffleReport& r) {
  return Json{
      {"tool", "tsqc"},
      {"tool_version", kToolVersion},
      {"format_version", kFormatVersion},
      {"generator", r.generator},
      {"block_size", kBlockSize},
      {"seed", r.seed},
      {"n_coins", r.config.n_coins},
      {"raffle_held", r.config.raffle_held},
      {"alpha", complex_json(r.config.alpha)},
      {"beta", complex_json(r.config.beta)},
      {"counts", {{"heads", r.heads}, {"tails", r.tails}, {"null", r.null_count}}},
      {"per_coin", distribution_json(r.per_coin)},
      {"heads_std_error", r.heads_std_error},
      {"stipulation", r.stipulation},
      {"stipulation_probability", r.stipulation_probability},
      {"contradiction", r.contradiction},
      {"consistent", r.consistent},
  };
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace tsqc
