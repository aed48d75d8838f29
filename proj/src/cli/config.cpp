#include "liftrom/cli/config.hpp"

#include "liftrom/errors.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace liftrom::cli {

using nlohmann::json;

std::string to_string(ModelKind m) { return m == ModelKind::FHN ? "fhn" : "tubular"; }

std::string to_string(Form f) {
  switch (f) {
    case Form::Fom: return "fom";
    case Form::LiftedQB: return "lifted-qb";
    case Form::Quartic: return "quartic";
    case Form::QBDAE: return "qbdae";
  }
  return "";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::None: return "none";
    case Method::Pod: return "pod";
    case Method::PodDeim: return "pod-deim";
  }
  return "";
}

namespace {

json toml_to_json(const toml::node& node, const std::string& where) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) {
      const std::string key(k.str());
      out[key] = toml_to_json(v, where.empty() ? key : where + "." + key);
    }
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v, where));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ConfigError("config key '" + where + "': dates and times are not supported");
}

std::string type_name(const json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "float";
  return j.type_name();
}

/// Read access to one config table that remembers which keys were consumed.
class Table {
 public:
  Table(const json* j, std::string path) : j_(j), path_(std::move(path)) {
    if (j_ && !j_->is_object()) throw ConfigError("config key '" + path_ + "': expected a table");
  }

  bool has(const std::string& key) const { return j_ && j_->contains(key); }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* get(const std::string& key) {
    used_.insert(key);
    if (!j_) return nullptr;
    const auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }

  [[noreturn]] void type_error(const std::string& key, const std::string& want, const json& got) const {
    throw ConfigError("config key '" + full(key) + "': expected " + want + ", got " + type_name(got));
  }

  double number(const std::string& key, double def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_number()) type_error(key, "a number", *v);
    return v->get<double>();
  }

  Index integer(const std::string& key, Index def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_number_integer()) type_error(key, "an integer", *v);
    return v->get<Index>();
  }

  Index count(const std::string& key, Index def, Index min = 0) {
    const Index v = integer(key, def);
    if (v < min) {
      throw ConfigError("config key '" + full(key) + "' must be at least " + std::to_string(min));
    }
    return v;
  }

  std::optional<Index> opt_count(const std::string& key, Index min) {
    if (!has(key)) {
      used_.insert(key);
      return std::nullopt;
    }
    return count(key, 0, min);
  }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) {
      used_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_boolean()) type_error(key, "a boolean", *v);
    return v->get<bool>();
  }

  std::optional<bool> opt_boolean(const std::string& key) {
    if (!has(key)) {
      used_.insert(key);
      return std::nullopt;
    }
    return boolean(key, false);
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = get(key);
    if (!v) return def;
    if (!v->is_string()) type_error(key, "a string", *v);
    return v->get<std::string>();
  }

  std::vector<Index> count_list(const std::string& key, Index min) {
    const json* v = get(key);
    if (!v) return {};
    if (!v->is_array()) type_error(key, "an array of integers", *v);
    std::vector<Index> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer()) type_error(key, "an array of integers", e);
      const Index x = e.get<Index>();
      if (x < min) {
        throw ConfigError("config key '" + full(key) + "': entries must be at least " +
                          std::to_string(min));
      }
      out.push_back(x);
    }
    return out;
  }

  std::vector<std::string> string_list(const std::string& key) {
    const json* v = get(key);
    if (!v) return {};
    if (!v->is_array()) type_error(key, "an array of strings", *v);
    std::vector<std::string> out;
    for (const auto& e : *v) {
      if (!e.is_string()) type_error(key, "an array of strings", e);
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  Table sub(const std::string& key) {
    const json* v = get(key);
    return Table(v, full(key));
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    if (j_) {
      for (auto it = j_->begin(); it != j_->end(); ++it) out.push_back(it.key());
    }
    return out;
  }

  /// Raises on the first key that was never read.
  void finish() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError("unknown config key '" + full(it.key()) + "'");
    }
  }

 private:
  const json* j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<std::string> form_variables(ModelKind model, Form form) {
  if (model == ModelKind::FHN) {
    return form == Form::Fom ? std::vector<std::string>{"v", "w"}
                             : std::vector<std::string>{"v", "w", "z"};
  }
  switch (form) {
    case Form::Fom: return {"psi", "theta"};
    case Form::Quartic: return {"psi", "theta", "w1", "w2", "w3"};
    default: return {"psi", "theta", "w1", "w2", "w3", "w4", "w5", "w6"};
  }
}

void check_variable(const std::vector<std::string>& vars, const std::string& name,
                    const std::string& key) {
  if (std::find(vars.begin(), vars.end(), name) == vars.end()) {
    std::string list;
    for (const auto& v : vars) list += (list.empty() ? "" : ", ") + v;
    throw ConfigError("config key '" + key + "': unknown variable '" + name + "' (expected one of " +
                      list + ")");
  }
}

void parse_fhn(Table t, FHNConfig& c) {
  c.l = t.number("l", c.l);
  c.c = t.number("c", c.c);
  c.gamma = t.number("gamma", c.gamma);
  c.h = t.number("h", c.h);
  c.epsilon = t.number("epsilon", c.epsilon);
  c.n = t.count("n", c.n, 3);
  c.t_f = t.number("t_f", c.t_f);
  c.quadratic_coeff = t.number("quadratic_coeff", c.quadratic_coeff);
  c.uniform_mass = t.boolean("uniform_mass", c.uniform_mass);
  t.finish();
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid [fhn] table: ") + e.what());
  }
}

void parse_tubular(Table t, RunConfig& cfg, const std::filesystem::path& base) {
  TubularConfig& c = cfg.tubular;
  c.pe = t.number("pe", c.pe);
  c.damkohler = t.number("damkohler", c.damkohler);
  c.b_const = t.number("b_const", c.b_const);
  c.beta = t.number("beta", c.beta);
  c.gamma = t.number("gamma", c.gamma);
  c.theta_ref = t.number("theta_ref", c.theta_ref);
  c.mu = t.number("mu", c.mu);
  c.n = t.count("n", c.n, 3);
  c.t_f = t.number("t_f", c.t_f);
  const std::string conv = t.string("convection", "upwind");
  if (conv == "upwind") {
    c.convection = Convection::Upwind;
  } else if (conv == "central") {
    c.convection = Convection::Central;
  } else {
    throw ConfigError("config key 'tubular.convection': expected \"upwind\" or \"central\", got \"" +
                      conv + "\"");
  }
  if (t.has("psi0_profile")) cfg.psi0_profile = t.string("psi0_profile", "");
  if (t.has("theta0_profile")) cfg.theta0_profile = t.string("theta0_profile", "");
  t.finish();
  const Vector grid = tubular_grid(c);
  auto resolve = [&base](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
  };
  if (cfg.psi0_profile) c.psi0 = read_profile_csv(resolve(*cfg.psi0_profile), grid);
  if (cfg.theta0_profile) c.theta0 = read_profile_csv(resolve(*cfg.theta0_profile), grid);
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid [tubular] table: ") + e.what());
  }
}

void parse_integrator(Table t, IntegratorOptions& o) {
  o.scheme = parse_scheme(t.string("scheme", to_string(o.scheme)));
  o.dt = t.number("dt", o.dt);
  o.newton_tol = t.number("newton_tol", o.newton_tol);
  o.max_newton_iterations = static_cast<int>(t.count("max_newton_iterations", o.max_newton_iterations, 1));
  o.damping = t.number("damping", o.damping);
  o.max_damping_halvings = static_cast<int>(t.count("max_damping_halvings", o.max_damping_halvings));
  o.reuse_jacobian = t.boolean("reuse_jacobian", o.reuse_jacobian);
  o.slow_newton_iterations =
      static_cast<int>(t.count("slow_newton_iterations", o.slow_newton_iterations, 1));
  t.finish();
  if (!(o.dt > 0.0)) throw ConfigError("config key 'integrator.dt' must be positive");
  if (!(o.newton_tol > 0.0)) throw ConfigError("config key 'integrator.newton_tol' must be positive");
  if (!(o.damping > 0.0 && o.damping < 1.0)) {
    throw ConfigError("config key 'integrator.damping' must lie in (0, 1)");
  }
}

Method parse_method(const std::string& s) {
  if (s == "none") return Method::None;
  if (s == "pod") return Method::Pod;
  if (s == "pod-deim") return Method::PodDeim;
  throw ConfigError("config key 'reduction.method': expected \"none\", \"pod\" or \"pod-deim\", got \"" +
                    s + "\"");
}

void parse_reduction(Table t, RunConfig& cfg) {
  ReductionConfig& r = cfg.reduction;
  const auto vars = form_variables(cfg.model, cfg.form);
  r.method = parse_method(t.string("method", "none"));
  r.r = t.count("r", 0);

  Table ranks = t.sub("ranks");
  for (const auto& name : ranks.keys()) {
    check_variable(vars, name, "reduction.ranks." + name);
    r.ranks[name] = ranks.count(name, 0, 1);
  }
  ranks.finish();

  Table modes = t.sub("modes");
  for (const auto& name : modes.keys()) {
    check_variable(vars, name, "reduction.modes." + name);
    std::vector<Index> list = modes.count_list(name, 1);
    if (list.empty()) throw ConfigError("config key 'reduction.modes." + name + "' is empty");
    for (Index& m : list) --m;
    r.modes[name] = std::move(list);
  }
  modes.finish();

  r.identity = t.string_list("identity");
  for (const auto& name : r.identity) {
    check_variable(vars, name, "reduction.identity");
    if (cfg.form != Form::QBDAE || (name != "w4" && name != "w5" && name != "w6")) {
      throw ConfigError("config key 'reduction.identity': only the QB-DAE constrained variables "
                        "w4, w5, w6 can stay unreduced");
    }
    if (r.ranks.count(name) || r.modes.count(name)) {
      throw ConfigError("config key 'reduction.identity': variable '" + name +
                        "' also has a rank or mode list");
    }
  }
  r.r_deim = t.count("r_deim", 0);
  r.training = t.opt_count("training", 1);
  r.training_end = t.opt_number("training_end");
  if (r.training && r.training_end) {
    throw ConfigError("config keys 'reduction.training' and 'reduction.training_end' are exclusive");
  }
  r.max_rank = t.count("max_rank", r.max_rank, 1);
  r.allow_large = t.boolean("allow_large", r.allow_large);
  r.substitution_budget =
      static_cast<std::uint64_t>(t.count("substitution_budget", static_cast<Index>(r.substitution_budget), 1));
  t.finish();

  if (r.method == Method::PodDeim && cfg.form != Form::Fom) {
    throw ConfigError("config key 'reduction.method': pod-deim applies to form \"fom\" only");
  }
  if (r.method == Method::PodDeim && r.r_deim < 1) {
    throw ConfigError("config key 'reduction.r_deim' must be at least 1 for pod-deim");
  }
  if (r.method != Method::None) {
    for (const auto& name : vars) {
      const bool listed = r.ranks.count(name) || r.modes.count(name) ||
                          std::find(r.identity.begin(), r.identity.end(), name) != r.identity.end();
      if (!listed && r.r < 1) {
        throw ConfigError("config key 'reduction.r': no basis size for variable '" + name + "'");
      }
    }
  }
}

void parse_experiment(Table t, RunConfig& cfg) {
  SweepConfig& s = cfg.experiment;
  const bool fhn = cfg.model == ModelKind::FHN;
  const std::vector<std::string> fhn_keys = {"training", "qb_ranks", "qoi_rank"};
  const std::vector<std::string> tub_keys = {"training_end", "quartic_ranks", "qbdae_r1", "qbdae_r2",
                                             "pod_ranks", "qoi_r1", "qoi_r2"};
  for (const auto& key : fhn ? tub_keys : fhn_keys) {
    if (t.has(key)) {
      throw ConfigError("config key 'experiment." + key + "' does not apply to model " +
                        to_string(cfg.model));
    }
  }
  if (fhn) {
    s.training = t.opt_count("training", 1);
    s.qb_ranks = t.count_list("qb_ranks", 1);
    s.qoi_rank = t.opt_count("qoi_rank", 1);
  } else {
    s.training_end = t.opt_number("training_end");
    s.quartic_ranks = t.count_list("quartic_ranks", 1);
    s.qbdae_r1 = t.count_list("qbdae_r1", 1);
    s.qbdae_r2 = t.count_list("qbdae_r2", 0);
    s.pod_ranks = t.count_list("pod_ranks", 1);
    s.qoi_r1 = t.opt_count("qoi_r1", 1);
    s.qoi_r2 = t.opt_count("qoi_r2", 0);
  }
  s.deim_ranks = t.count_list("deim_ranks", 1);
  s.r_deim = t.count_list("r_deim", 1);
  s.r_deim_equal_r = t.opt_boolean("r_deim_equal_r");
  t.finish();
}

json list_json(const std::vector<Index>& v) { return json(v); }

json normalize(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["model"] = to_string(cfg.model);
  j["form"] = to_string(cfg.form);
  j["snapshots"] = cfg.snapshots;
  if (cfg.model == ModelKind::FHN) {
    const FHNConfig& c = cfg.fhn;
    j["fhn"] = {{"l", c.l}, {"c", c.c}, {"gamma", c.gamma}, {"h", c.h}, {"epsilon", c.epsilon},
                {"n", c.n}, {"t_f", c.t_f}, {"quadratic_coeff", c.quadratic_coeff},
                {"uniform_mass", c.uniform_mass}};
  } else {
    const TubularConfig& c = cfg.tubular;
    j["tubular"] = {{"pe", c.pe}, {"damkohler", c.damkohler}, {"b_const", c.b_const},
                    {"beta", c.beta}, {"gamma", c.gamma}, {"theta_ref", c.theta_ref},
                    {"mu", c.mu}, {"n", c.n}, {"t_f", c.t_f},
                    {"convection", c.convection == Convection::Upwind ? "upwind" : "central"}};
    if (cfg.psi0_profile) {
      j["tubular"]["psi0_profile"] = *cfg.psi0_profile;
      j["tubular"]["psi0_values"] = std::vector<double>(c.psi0.begin(), c.psi0.end());
    }
    if (cfg.theta0_profile) {
      j["tubular"]["theta0_profile"] = *cfg.theta0_profile;
      j["tubular"]["theta0_values"] = std::vector<double>(c.theta0.begin(), c.theta0.end());
    }
  }
  const IntegratorOptions& o = cfg.integrator;
  j["integrator"] = {{"scheme", to_string(o.scheme)},
                     {"dt", o.dt},
                     {"newton_tol", o.newton_tol},
                     {"max_newton_iterations", o.max_newton_iterations},
                     {"damping", o.damping},
                     {"max_damping_halvings", o.max_damping_halvings},
                     {"reuse_jacobian", o.reuse_jacobian},
                     {"slow_newton_iterations", o.slow_newton_iterations}};
  const ReductionConfig& r = cfg.reduction;
  json red = {{"method", to_string(r.method)}, {"r", r.r}, {"r_deim", r.r_deim},
              {"max_rank", r.max_rank}, {"allow_large", r.allow_large},
              {"substitution_budget", r.substitution_budget}};
  red["ranks"] = json::object();
  for (const auto& [k, v] : r.ranks) red["ranks"][k] = v;
  red["modes"] = json::object();
  for (const auto& [k, v] : r.modes) {
    std::vector<Index> one_based = v;
    for (Index& m : one_based) ++m;
    red["modes"][k] = one_based;
  }
  red["identity"] = r.identity;
  if (r.training) red["training"] = *r.training;
  if (r.training_end) red["training_end"] = *r.training_end;
  j["reduction"] = red;
  if (cfg.model == ModelKind::FHN) {
    const FHNExperimentConfig e = fhn_experiment_config(cfg);
    j["experiment"] = {{"training", e.training},       {"qb_ranks", list_json(e.qb_ranks)},
                       {"deim_ranks", list_json(e.deim_ranks)}, {"r_deim", list_json(e.r_deim)},
                       {"r_deim_equal_r", e.r_deim_equal_r}, {"qoi_rank", e.qoi_rank}};
  } else {
    const TubularExperimentConfig e = tubular_experiment_config(cfg);
    j["experiment"] = {{"training_end", e.training_end},
                       {"quartic_ranks", list_json(e.quartic_ranks)},
                       {"qbdae_r1", list_json(e.qbdae_r1)},
                       {"qbdae_r2", list_json(e.qbdae_r2)},
                       {"deim_ranks", list_json(e.deim_ranks)},
                       {"r_deim", list_json(e.r_deim)},
                       {"r_deim_equal_r", e.r_deim_equal_r},
                       {"pod_ranks", list_json(e.pod_ranks)},
                       {"qoi_r1", e.qoi_r1},
                       {"qoi_r2", e.qoi_r2},
                       {"substitution_budget", e.substitution_budget}};
  }
  return j;
}

}  // namespace

Index RunConfig::training_count(const std::vector<double>& grid) const {
  if (reduction.training) {
    if (*reduction.training > static_cast<Index>(grid.size())) {
      throw ConfigError("config key 'reduction.training' exceeds the snapshot count " +
                        std::to_string(grid.size()));
    }
    return *reduction.training;
  }
  if (reduction.training_end) return window_count(grid, *reduction.training_end);
  if (model == ModelKind::FHN) return std::min<Index>(100, static_cast<Index>(grid.size()));
  return window_count(grid, std::min(20.0, tubular.t_f));
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config root must be a table");
  Table root(&doc, "");
  RunConfig cfg;
  const Index seed = root.count("seed", 0);
  cfg.seed = static_cast<std::uint64_t>(seed);

  const json* model = root.get("model");
  if (!model) throw ConfigError("config key 'model' is required (\"fhn\" or \"tubular\")");
  if (!model->is_string()) root.type_error("model", "a string", *model);
  const std::string m = model->get<std::string>();
  if (m == "fhn") {
    cfg.model = ModelKind::FHN;
  } else if (m == "tubular") {
    cfg.model = ModelKind::Tubular;
  } else {
    throw ConfigError("config key 'model': expected \"fhn\" or \"tubular\", got \"" + m + "\"");
  }

  const std::string form = root.string("form", "fom");
  if (form == "fom") {
    cfg.form = Form::Fom;
  } else if (form == "lifted-qb" && cfg.model == ModelKind::FHN) {
    cfg.form = Form::LiftedQB;
  } else if (form == "quartic" && cfg.model == ModelKind::Tubular) {
    cfg.form = Form::Quartic;
  } else if (form == "qbdae" && cfg.model == ModelKind::Tubular) {
    cfg.form = Form::QBDAE;
  } else {
    throw ConfigError("config key 'form': \"" + form + "\" is not a form of model " + m +
                      (cfg.model == ModelKind::FHN ? " (fom, lifted-qb)" : " (fom, quartic, qbdae)"));
  }

  const std::string other = cfg.model == ModelKind::FHN ? "tubular" : "fhn";
  if (root.has(other)) throw ConfigError("config table [" + other + "] does not apply to model " + m);
  if (cfg.model == ModelKind::FHN) {
    parse_fhn(root.sub("fhn"), cfg.fhn);
  } else {
    parse_tubular(root.sub("tubular"), cfg, base_dir);
  }
  cfg.snapshots = root.count("snapshots", cfg.model == ModelKind::FHN ? 150 : 3000, 1);
  parse_integrator(root.sub("integrator"), cfg.integrator);
  parse_reduction(root.sub("reduction"), cfg);
  parse_experiment(root.sub("experiment"), cfg);
  root.finish();
  cfg.normalized = normalize(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  json doc;
  if (path.extension() == ".json") {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("config " + path.string() + ": " + e.what());
    }
  } else {
    try {
      const toml::table t = toml::parse(text, path.string());
      doc = toml_to_json(t, "");
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << "config " << path.string() << ":" << e.source().begin.line << ": " << e.description();
      throw ConfigError(msg.str());
    }
  }
  return parse_config(doc, path.parent_path());
}

RunConfig default_config(ModelKind model) {
  return parse_config(json{{"model", to_string(model)}});
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(cfg.normalized.dump()); }

FHNExperimentConfig fhn_experiment_config(const RunConfig& cfg) {
  FHNExperimentConfig e;
  e.model = cfg.fhn;
  e.integrator = cfg.integrator;
  e.snapshots = cfg.snapshots;
  const SweepConfig& s = cfg.experiment;
  e.training = s.training.value_or(std::min<Index>(e.training, cfg.snapshots));
  if (e.training > cfg.snapshots) {
    throw ConfigError("config key 'experiment.training' exceeds the snapshot count");
  }
  if (!s.qb_ranks.empty()) e.qb_ranks = s.qb_ranks;
  if (!s.deim_ranks.empty()) e.deim_ranks = s.deim_ranks;
  if (!s.r_deim.empty()) e.r_deim = s.r_deim;
  e.r_deim_equal_r = s.r_deim_equal_r.value_or(e.r_deim_equal_r);
  e.qoi_rank = s.qoi_rank.value_or(e.qoi_rank);
  return e;
}

TubularExperimentConfig tubular_experiment_config(const RunConfig& cfg) {
  TubularExperimentConfig e;
  e.model = cfg.tubular;
  e.integrator = cfg.integrator;
  e.snapshots = cfg.snapshots;
  const SweepConfig& s = cfg.experiment;
  e.training_end = s.training_end.value_or(std::min(e.training_end, cfg.tubular.t_f));
  if (!s.quartic_ranks.empty()) e.quartic_ranks = s.quartic_ranks;
  if (!s.qbdae_r1.empty()) e.qbdae_r1 = s.qbdae_r1;
  if (!s.qbdae_r2.empty()) e.qbdae_r2 = s.qbdae_r2;
  if (!s.deim_ranks.empty()) e.deim_ranks = s.deim_ranks;
  if (!s.r_deim.empty()) e.r_deim = s.r_deim;
  e.r_deim_equal_r = s.r_deim_equal_r.value_or(e.r_deim_equal_r);
  if (!s.pod_ranks.empty()) e.pod_ranks = s.pod_ranks;
  e.qoi_r1 = s.qoi_r1.value_or(e.qoi_r1);
  e.qoi_r2 = s.qoi_r2.value_or(e.qoi_r2);
  e.substitution_budget = cfg.reduction.substitution_budget;
  return e;
}

}  // namespace liftrom::cli
