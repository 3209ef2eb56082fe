#include "jcqrc/manifest.hpp"

#include "jcqrc/error.hpp"

#include <fstream>
#include <set>

namespace jcqrc {

namespace {

using nlohmann::json;

// Reads one JSON object section, rejecting keys that were never asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong value type");
    }
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.contains(item.key())) throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_config(Section s, ReservoirConfig& c) {
  if (s.has("model")) {
    std::string name;
    s.read("model", name);
    c.model = parse_model(name);
  }
  s.read("delta_b", c.delta_b);
  s.read("delta", c.delta);
  s.read("chi", c.chi);
  s.read("alpha", c.alpha);
  s.read("kappa", c.kappa);
  s.read("dt", c.dt);
  s.read("virtual_nodes", c.virtual_nodes);
  s.read("n_levels", c.n_levels);
  s.read("ridge_lambda", c.ridge_lambda);
  s.read("seed", c.seed);
  s.finish();
}

void read_mg(Section s, MgOptions& mg) {
  s.read("tau_delay", mg.tau_delay);
  s.read("h", mg.h);
  s.read("sampling", mg.sampling);
  s.read("washout_discard", mg.washout_discard);
  s.read("history", mg.history);
  s.read("perturbation", mg.perturbation);
  s.finish();
}

void read_task(Section s, TaskSpec& t) {
  if (s.has("kind")) {
    std::string name;
    s.read("kind", name);
    t.kind = parse_task_kind(name);
  }
  s.read("delays", t.delays);
  s.read("autonomous", t.autonomous);
  s.read("horizon", t.horizon);
  s.read("early_window", t.early_window);
  s.read("segment", t.segment);
  s.read("segment_stride", t.segment_stride);
  s.read("input_scale", t.input_scale);
  s.read("input_offset", t.input_offset);
  s.read("clip_min", t.clip_min);
  s.read("clip_max", t.clip_max);
  if (s.has("mackey_glass")) read_mg(Section(s.at("mackey_glass"), s.path("mackey_glass")), t.mg);
  s.finish();
}

void read_grid(Section s, WignerGrid& g) {
  s.read("x_min", g.x_min);
  s.read("x_max", g.x_max);
  s.read("p_min", g.p_min);
  s.read("p_max", g.p_max);
  s.read("resolution", g.resolution);
  s.finish();
}

json grid_json(const WignerGrid& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"p_min", g.p_min}, {"p_max", g.p_max}, {"resolution", g.resolution}};
}

}  // namespace

SweepSpec RunManifest::sweep() const {
  SweepSpec s;
  s.base = experiment;
  s.axes = axes;
  s.aggregation = aggregation;
  s.segments = segments;
  return s;
}

ExperimentSpec experiment_from_json(const json& j) {
  ExperimentSpec spec;
  Section s(j, "experiment");
  if (s.has("reservoir")) read_config(Section(s.at("reservoir"), "reservoir"), spec.config);
  if (s.has("observables")) {
    Section o(s.at("observables"), "observables");
    if (o.has("kind")) {
      std::string name;
      o.read("kind", name);
      spec.observables.kind = parse_observable_kind(name);
    }
    o.read("truncate_rdm_small", spec.observables.truncate_rdm_small);
    o.finish();
  }
  if (s.has("task")) read_task(Section(s.at("task"), "task"), spec.task);
  if (s.has("split")) {
    Section sp(s.at("split"), "split");
    Split split = spec.resolved_split();
    sp.read("washout", split.washout);
    sp.read("train", split.train);
    sp.read("test", split.test);
    sp.finish();
    spec.split = split;
  }
  if (s.has("propagation")) {
    Section p(s.at("propagation"), "propagation");
    if (p.has("method")) {
      std::string name;
      p.read("method", name);
      spec.propagation.method = parse_propagation_method(name);
    }
    p.read("rk4_substeps_per_node", spec.propagation.rk4_substeps_per_node);
    p.read("action_tolerance", spec.propagation.action_tolerance);
    p.read("action_substep_norm", spec.propagation.action_substep_norm);
    p.read("superop_cache_size", spec.propagation.superop_cache_size);
    p.finish();
  }
  if (s.has("ridge")) {
    Section r(s.at("ridge"), "ridge");
    if (r.has("solver")) {
      std::string name;
      r.read("solver", name);
      spec.ridge.solver = parse_ridge_solver(name);
    }
    r.read("standardize", spec.ridge.standardize);
    r.finish();
  }
  if (s.has("monitoring")) {
    Section m(s.at("monitoring"), "monitoring");
    m.read("positivity_tolerance", spec.monitoring.positivity_tolerance);
    m.read("population_threshold", spec.monitoring.population_threshold);
    m.finish();
  }
  // Keys belonging to the enclosing manifest are checked by the caller.
  for (const char* key : {"schema", "command", "sweep", "wigner", "fading_memory", "convergence", "output"}) s.has(key);
  s.finish();
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  const auto& c = spec.config;
  const auto& t = spec.task;
  const Split split = spec.resolved_split();
  return {
      {"reservoir",
       {{"model", std::string(to_string(c.model))},
        {"delta_b", c.delta_b},
        {"delta", c.delta},
        {"chi", c.chi},
        {"alpha", c.alpha},
        {"kappa", c.kappa},
        {"dt", c.dt},
        {"virtual_nodes", c.virtual_nodes},
        {"n_levels", c.n_levels},
        {"ridge_lambda", c.ridge_lambda},
        {"seed", c.seed}}},
      {"observables",
       {{"kind", std::string(to_string(spec.observables.kind))},
        {"truncate_rdm_small", spec.observables.truncate_rdm_small}}},
      {"task",
       {{"kind", std::string(to_string(t.kind))},
        {"delays", t.delays},
        {"autonomous", t.autonomous},
        {"horizon", t.horizon},
        {"early_window", t.early_window},
        {"segment", t.segment},
        {"segment_stride", t.segment_stride},
        {"input_scale", t.input_scale},
        {"input_offset", t.input_offset},
        {"clip_min", t.clip_min},
        {"clip_max", t.clip_max},
        {"mackey_glass",
         {{"tau_delay", t.mg.tau_delay},
          {"h", t.mg.h},
          {"sampling", t.mg.sampling},
          {"washout_discard", t.mg.washout_discard},
          {"history", t.mg.history},
          {"perturbation", t.mg.perturbation}}}}},
      {"split", {{"washout", split.washout}, {"train", split.train}, {"test", split.test}}},
      {"propagation",
       {{"method", std::string(to_string(spec.propagation.method))},
        {"rk4_substeps_per_node", spec.propagation.rk4_substeps_per_node},
        {"action_tolerance", spec.propagation.action_tolerance},
        {"action_substep_norm", spec.propagation.action_substep_norm},
        {"superop_cache_size", spec.propagation.superop_cache_size}}},
      {"ridge",
       {{"solver", std::string(to_string(spec.ridge.solver))}, {"standardize", spec.ridge.standardize}}},
      {"monitoring",
       {{"positivity_tolerance", spec.monitoring.positivity_tolerance},
        {"population_threshold", spec.monitoring.population_threshold}}},
  };
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.experiment = experiment_from_json(j);
  Section s(j, "manifest");
  for (const char* key : {"reservoir", "observables", "task", "split", "propagation", "ridge", "monitoring"}) s.has(key);
  if (s.has("schema")) {
    int schema = 0;
    s.read("schema", schema);
    if (schema != kManifestSchema)
      throw ConfigError("manifest: unsupported schema " + std::to_string(schema) + ", expected " +
                        std::to_string(kManifestSchema));
  }
  s.read("command", m.command);
  if (s.has("sweep")) {
    Section w(s.at("sweep"), "sweep");
    if (w.has("axes")) {
      const json& axes = w.at("axes");
      if (!axes.is_array()) throw ConfigError("sweep.axes: expected an array");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        Section a(axes[i], "sweep.axes[" + std::to_string(i) + "]");
        SweepAxis axis;
        a.read("parameter", axis.parameter);
        a.read("values", axis.values);
        a.finish();
        m.axes.push_back(std::move(axis));
      }
    }
    if (w.has("aggregation")) {
      std::string name;
      w.read("aggregation", name);
      m.aggregation = parse_aggregation(name);
    }
    w.read("segments", m.segments);
    w.finish();
  }
  if (s.has("wigner")) {
    Section w(s.at("wigner"), "wigner");
    w.read("snapshot_step", m.wigner.snapshot_step);
    if (w.has("grid")) read_grid(Section(w.at("grid"), "wigner.grid"), m.wigner.grid);
    w.finish();
  }
  if (s.has("fading_memory")) {
    Section f(s.at("fading_memory"), "fading_memory");
    f.read("flip_step", m.fading.flip_step);
    f.read("altered_value", m.fading.altered_value);
    if (f.has("original_value") && !f.at("original_value").is_null()) {
      double v = 0.0;
      f.read("original_value", v);
      m.fading.original_value = v;
    }
    f.read("horizon", m.fading.horizon);
    f.finish();
  }
  if (s.has("convergence")) {
    Section c(s.at("convergence"), "convergence");
    c.read("levels", m.convergence.levels);
    c.read("kappas", m.convergence.kappas);
    c.finish();
  }
  if (s.has("output")) {
    Section o(s.at("output"), "output");
    std::string dir = m.output_dir.string();
    o.read("dir", dir);
    m.output_dir = dir;
    if (o.has("emit")) {
      std::vector<std::string> emit;
      o.read("emit", emit);
      m.emit = {false, false, false};
      for (const auto& e : emit) {
        if (e == "csv") m.emit.csv = true;
        else if (e == "json") m.emit.json = true;
        else if (e == "svg") m.emit.svg = true;
        else throw ConfigError("output.emit: unknown format '" + e + "'");
      }
    }
    o.read("workers", m.workers);
    o.finish();
  }
  s.finish();
  m.wigner.grid.validate();
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

json to_json(const RunManifest& m) {
  json j = to_json(m.experiment);
  j["schema"] = kManifestSchema;
  j["command"] = m.command;
  json axes = json::array();
  for (const auto& a : m.axes) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
  j["sweep"] = {{"axes", axes}, {"aggregation", std::string(to_string(m.aggregation))}, {"segments", m.segments}};
  j["wigner"] = {{"snapshot_step", m.wigner.snapshot_step}, {"grid", grid_json(m.wigner.grid)}};
  j["fading_memory"] = {
      {"flip_step", m.fading.flip_step},
      {"altered_value", m.fading.altered_value},
      {"original_value", m.fading.original_value ? json(*m.fading.original_value) : json(nullptr)},
      {"horizon", m.fading.horizon}};
  j["convergence"] = {{"levels", m.convergence.levels}, {"kappas", m.convergence.kappas}};
  std::vector<std::string> emit;
  if (m.emit.csv) emit.emplace_back("csv");
  if (m.emit.json) emit.emplace_back("json");
  if (m.emit.svg) emit.emplace_back("svg");
  j["output"] = {{"dir", m.output_dir.string()}, {"emit", emit}, {"workers", m.workers}};
  return j;
}

json to_json(const RunDiagnostics& d) {
  return {{"steps", d.steps},
          {"max_trace_defect", d.max_trace_defect},
          {"max_hermiticity_defect", d.max_hermiticity_defect},
          {"min_eigenvalue", d.min_eigenvalue},
          {"max_top_population", d.max_top_population},
          {"positivity_violations", d.positivity_violations},
          {"population_violations", d.population_violations}};
}

json to_json(const ExperimentResult& r) {
  json metrics = json::array();
  for (const auto& m : r.metrics) {
    json e = {{"name", m.name}, {"delay", m.delay}};
    e["train"] = m.train ? json(*m.train) : json(nullptr);
    e["test"] = m.test ? json(*m.test) : json(nullptr);
    if (!m.note.empty()) e["note"] = m.note;
    metrics.push_back(std::move(e));
  }
  json models = json::array();
  for (const auto& model : r.models) models.push_back(to_json(model));
  return {{"schema", kManifestSchema},
          {"version", r.version},
          {"spec", to_json(r.spec)},
          {"metrics", metrics},
          {"models", models},
          {"diagnostics", to_json(r.diagnostics)},
          {"warnings", r.warnings},
          {"seconds", r.seconds}};
}

}  // namespace jcqrc
