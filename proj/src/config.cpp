#include "metastab/config.hpp"

#include <fstream>
#include <sstream>

#include "metastab/errors.hpp"

namespace metastab {

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Bond: return "bond";
    case ModelKind::Site: return "site";
    case ModelKind::Rgg: return "rgg";
    case ModelKind::Gw: return "gw";
    case ModelKind::Gff: return "gff";
    case ModelKind::RiOccupied: return "ri-occupied";
    case ModelKind::RiVacant: return "ri-vacant";
  }
  return "bond";
}

ModelKind model_kind_from_name(const std::string& s) {
  if (s == "bond") return ModelKind::Bond;
  if (s == "site") return ModelKind::Site;
  if (s == "rgg") return ModelKind::Rgg;
  if (s == "gw") return ModelKind::Gw;
  if (s == "gff") return ModelKind::Gff;
  if (s == "ri-occupied") return ModelKind::RiOccupied;
  if (s == "ri-vacant") return ModelKind::RiVacant;
  throw ConfigError("unknown model '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool split_kv(const std::string& line, std::string& key, std::string& val) {
  std::size_t eq = line.find('=');
  if (eq == std::string::npos) return false;
  key = trim(line.substr(0, eq));
  val = trim(line.substr(eq + 1));
  return !key.empty();
}

double parse_num(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool in_model = false;
  bool saw_model = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "model {") {
      if (in_model) throw ConfigError(line_no, "nested model block");
      in_model = true;
      saw_model = true;
      continue;
    }
    if (line == "}") {
      if (!in_model) throw ConfigError(line_no, "unmatched '}'");
      in_model = false;
      continue;
    }
    std::string key, val;
    if (!split_kv(line, key, val)) throw ConfigError(line_no, "expected 'key = value'");
    if (in_model) {
      if (key == "model") cfg.model.kind = model_kind_from_name(val);
      else if (key == "d") cfg.model.d = static_cast<int>(parse_long(val, line_no));
      else if (key == "p") cfg.model.p = parse_num(val, line_no);
      else if (key == "R") cfg.model.R = parse_num(val, line_no);
      else if (key == "u") cfg.model.u = parse_num(val, line_no);
      else if (key == "h") cfg.model.h = parse_num(val, line_no);
      else if (key == "pad_factor") cfg.model.pad_factor = static_cast<int>(parse_long(val, line_no));
      else if (key == "kill_radius") cfg.model.kill_radius = parse_long(val, line_no);
      else if (key == "nu") cfg.model.nu = val;
      else throw ConfigError(line_no, "unknown model key '" + key + "'");
    } else {
      if (key == "lambda") cfg.lambda = parse_num(val, line_no);
      else if (key == "n_list") {
        cfg.n_list.clear();
        std::istringstream ns(val);
        std::string tok;
        while (std::getline(ns, tok, ',')) {
          tok = trim(tok);
          if (!tok.empty()) cfg.n_list.push_back(parse_long(tok, line_no));
        }
        if (cfg.n_list.empty()) throw ConfigError(line_no, "n_list is empty");
        for (std::size_t i = 1; i < cfg.n_list.size(); ++i) {
          if (cfg.n_list[i] <= cfg.n_list[i - 1])
            throw ConfigError(line_no, "n_list must be strictly ascending");
        }
      } else if (key == "seeds_per_n") {
        long v = parse_long(val, line_no);
        if (v < 1) throw ConfigError(line_no, "seeds_per_n must be >= 1");
        cfg.seeds_per_n = static_cast<std::size_t>(v);
      } else if (key == "trials") {
        long v = parse_long(val, line_no);
        if (v < 1) throw ConfigError(line_no, "trials must be >= 1");
        cfg.trials = static_cast<std::size_t>(v);
      } else if (key == "time_cap") {
        if (val == "none") cfg.time_cap.reset();
        else cfg.time_cap = parse_num(val, line_no);
      } else if (key == "out_dir") cfg.out_dir = val;
      else if (key == "master_seed") {
        try { cfg.master_seed = std::stoull(val); }
        catch (const std::exception&) { throw ConfigError(line_no, "bad seed '" + val + "'"); }
      } else if (key == "resume") cfg.resume = parse_bool(val, line_no);
      else if (key == "workers") cfg.workers = static_cast<int>(parse_long(val, line_no));
      else throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  if (in_model) throw ConfigError(line_no, "unterminated model block");
  if (!saw_model) throw ConfigError("config has no model block");
  if (cfg.n_list.empty()) throw ConfigError("config has no n_list");
  if (cfg.lambda < 0) throw ConfigError("lambda must be >= 0");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  out += "lambda = " + format_double(cfg.lambda) + "\n";
  out += "n_list = ";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cfg.n_list[i]);
  }
  out += "\n";
  out += "seeds_per_n = " + std::to_string(cfg.seeds_per_n) + "\n";
  out += "trials = " + std::to_string(cfg.trials) + "\n";
  out += "time_cap = " + (cfg.time_cap ? format_double(*cfg.time_cap) : std::string("none")) + "\n";
  out += "out_dir = " + cfg.out_dir + "\n";
  out += "master_seed = " + std::to_string(cfg.master_seed) + "\n";
  out += "resume = " + std::string(cfg.resume ? "true" : "false") + "\n";
  out += "workers = " + std::to_string(cfg.workers) + "\n";
  // every model key is written so that parse(serialize(c)) == c holds for
  // configs built in code, not only for ones that came from a file
  out += "model {\n";
  const ModelSpec& m = cfg.model;
  out += "  model = " + model_kind_name(m.kind) + "\n";
  out += "  d = " + std::to_string(m.d) + "\n";
  out += "  p = " + format_double(m.p) + "\n";
  out += "  R = " + format_double(m.R) + "\n";
  out += "  u = " + format_double(m.u) + "\n";
  out += "  h = " + format_double(m.h) + "\n";
  out += "  pad_factor = " + std::to_string(m.pad_factor) + "\n";
  out += "  kill_radius = " + std::to_string(m.kill_radius) + "\n";
  out += "  nu = " + m.nu + "\n";
  out += "}\n";
  return out;
}

}  // namespace metastab
