#include "remote_track/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "remote_track/errors.hpp"
#include "remote_track/vanderpol.hpp"

namespace rtrack {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

SectionMap tokenize(const std::string& text, const std::string& name) {
  SectionMap doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": key '" + key + "' outside any section");
    }
    doc[section][key] = Entry{trim(line.substr(eq + 1)), lineno, false};
  }
  return doc;
}

class Reader {
 public:
  Reader(SectionMap doc, std::string name)
      : doc_(std::move(doc)), name_(std::move(name)) {}

  bool has_section(const std::string& sec) const { return doc_.count(sec) > 0; }

  Entry* find(const std::string& sec, const std::string& key) {
    auto s = doc_.find(sec);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.consumed = true;
    return &k->second;
  }

  std::string require(const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) {
      throw ConfigError(name_ + ": missing key '" + key + "' in [" + sec + "]");
    }
    return e->value;
  }

  double require_double(const std::string& sec, const std::string& key) {
    return to_double(require(sec, key), sec, key);
  }

  double get_double(const std::string& sec, const std::string& key,
                    double fallback) {
    Entry* e = find(sec, key);
    return e ? to_double(e->value, sec, key) : fallback;
  }

  long get_long(const std::string& sec, const std::string& key, long fallback) {
    Entry* e = find(sec, key);
    return e ? to_long(e->value, sec, key) : fallback;
  }

  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& fallback) {
    Entry* e = find(sec, key);
    return e ? e->value : fallback;
  }

  std::optional<double> optional_double(const std::string& sec,
                                        const std::string& key) {
    Entry* e = find(sec, key);
    if (!e || e->value == "auto") return std::nullopt;
    return to_double(e->value, sec, key);
  }

  std::optional<long> optional_long(const std::string& sec,
                                    const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    return to_long(e->value, sec, key);
  }

  Vec require_vec(const std::string& sec, const std::string& key) {
    return to_vec(require(sec, key), sec, key);
  }

  Vec get_vec(const std::string& sec, const std::string& key, Vec fallback) {
    Entry* e = find(sec, key);
    return e ? to_vec(e->value, sec, key) : fallback;
  }

  void reject_unknown() const {
    static const char* known_sections[] = {
        "exosystem", "channel", "plant",      "internal_model",
        "gains",     "simulation", "second_level", "thresholds"};
    for (const auto& [sec, keys] : doc_) {
      bool ok = false;
      for (const char* s : known_sections) ok = ok || sec == s;
      if (!ok) {
        throw ConfigError(name_ + ": unknown section [" + sec + "]");
      }
      for (const auto& [key, entry] : keys) {
        if (!entry.consumed) {
          throw ConfigError(name_ + ":" + std::to_string(entry.line) +
                            ": unknown key '" + key + "' in [" + sec + "]");
        }
      }
    }
  }

 private:
  double to_double(const std::string& v, const std::string& sec,
                   const std::string& key) {
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError(name_ + ": key '" + key + "' in [" + sec +
                        "]: not a number: '" + v + "'");
    }
  }

  long to_long(const std::string& v, const std::string& sec,
               const std::string& key) {
    try {
      std::size_t pos = 0;
      const long out = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError(name_ + ": key '" + key + "' in [" + sec +
                        "]: not an integer: '" + v + "'");
    }
  }

  Vec to_vec(const std::string& v, const std::string& sec,
             const std::string& key) {
    Vec out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(to_double(tok, sec, key));
    if (out.empty()) {
      throw ConfigError(name_ + ": key '" + key + "' in [" + sec +
                        "]: empty vector");
    }
    return out;
  }

  SectionMap doc_;
  std::string name_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& name) {
  Reader rd(tokenize(text, name), name);
  ScenarioConfig cfg;

  cfg.exo_type = rd.get_string("exosystem", "type", "vanderpol");
  cfg.epsilon = rd.get_double("exosystem", "epsilon", 1.5);
  cfg.a = rd.get_double("exosystem", "a", 1.0);
  cfg.w0_min = rd.require_vec("exosystem", "w0_min");
  cfg.w0_max = rd.require_vec("exosystem", "w0_max");
  cfg.w_margin = rd.optional_double("exosystem", "w_margin");

  cfg.bits_per_sample =
      static_cast<int>(rd.get_long("channel", "bits_per_sample", 0));
  cfg.sampling_interval = rd.require_double("channel", "sampling_interval");
  cfg.expansion_pairs =
      static_cast<int>(rd.get_long("channel", "expansion_pairs", 2000));
  cfg.expansion_seed = static_cast<std::uint64_t>(
      rd.get_long("channel", "expansion_seed", 1));
  cfg.m_t = rd.optional_double("channel", "m_t");
  if (auto lv = rd.optional_long("channel", "levels")) {
    cfg.levels = static_cast<int>(*lv);
  }
  if (cfg.bits_per_sample == 0 && !cfg.levels) {
    throw ConfigError(name + ": missing key 'bits_per_sample' in [channel]");
  }

  cfg.plant_type = rd.get_string("plant", "type", "integrator");
  cfg.y_init = rd.require_double("plant", "y_init");

  cfg.blend_width = rd.get_double("internal_model", "blend_width", 0.5);
  cfg.support_inflation =
      rd.get_double("internal_model", "support_inflation", 1.25);

  cfg.kappa = rd.require_double("gains", "kappa");
  cfg.hurwitz_c = rd.require_vec("gains", "hurwitz_c");
  cfg.k = rd.require_double("gains", "k");

  cfg.t_end = rd.require_double("simulation", "t_end");
  cfg.step = rd.get_double("simulation", "step", 1e-3);
  cfg.t_tail = rd.get_double("simulation", "t_tail", 0.0);
  cfg.w_init = rd.require_vec("simulation", "w_init");
  cfg.codec_init = rd.require_vec("simulation", "codec_init");
  cfg.xi_init = rd.require_vec("simulation", "xi_init");
  cfg.state_ceiling = rd.get_double("simulation", "state_ceiling", 1e3);

  if (rd.has_section("second_level")) {
    if (auto e = rd.optional_long("second_level", "ell")) {
      cfg.ell = static_cast<int>(*e);
    }
    cfg.t_bar = rd.optional_double("second_level", "t_bar");
    cfg.t_star = rd.optional_double("second_level", "t_star");
    if (!cfg.t_bar) {
      throw ConfigError(name + ": missing key 't_bar' in [second_level]");
    }
    if (!cfg.ell && !cfg.t_star) {
      throw ConfigError(name +
                        ": [second_level] needs either 'ell' or 't_star'");
    }
  }

  cfg.tracking_tail = rd.get_double("thresholds", "tracking_tail", 0.05);
  cfg.decoder_tail = rd.get_double("thresholds", "decoder_tail", 0.02);

  rd.reject_unknown();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

namespace {

std::string vec_str(const Vec& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << v[i];
  }
  return out.str();
}

std::string num_str(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[exosystem]\n"
      << "type = " << cfg.exo_type << "\n"
      << "epsilon = " << num_str(cfg.epsilon) << "\n"
      << "a = " << num_str(cfg.a) << "\n"
      << "w0_min = " << vec_str(cfg.w0_min) << "\n"
      << "w0_max = " << vec_str(cfg.w0_max) << "\n"
      << "w_margin = "
      << (cfg.w_margin ? num_str(*cfg.w_margin) : std::string("auto")) << "\n\n";

  out << "[channel]\n"
      << "bits_per_sample = " << cfg.bits_per_sample << "\n"
      << "sampling_interval = " << num_str(cfg.sampling_interval) << "\n"
      << "expansion_pairs = " << cfg.expansion_pairs << "\n"
      << "expansion_seed = " << cfg.expansion_seed << "\n";
  if (cfg.m_t) out << "m_t = " << num_str(*cfg.m_t) << "\n";
  if (cfg.levels) out << "levels = " << *cfg.levels << "\n";
  out << "\n[plant]\n"
      << "type = " << cfg.plant_type << "\n"
      << "y_init = " << num_str(cfg.y_init) << "\n\n";

  out << "[internal_model]\n"
      << "blend_width = " << num_str(cfg.blend_width) << "\n"
      << "support_inflation = " << num_str(cfg.support_inflation) << "\n\n";

  out << "[gains]\n"
      << "kappa = " << num_str(cfg.kappa) << "\n"
      << "hurwitz_c = " << vec_str(cfg.hurwitz_c) << "\n"
      << "k = " << num_str(cfg.k) << "\n\n";

  out << "[simulation]\n"
      << "t_end = " << num_str(cfg.t_end) << "\n"
      << "step = " << num_str(cfg.step) << "\n"
      << "t_tail = " << num_str(cfg.t_tail) << "\n"
      << "w_init = " << vec_str(cfg.w_init) << "\n"
      << "codec_init = " << vec_str(cfg.codec_init) << "\n"
      << "xi_init = " << vec_str(cfg.xi_init) << "\n"
      << "state_ceiling = " << num_str(cfg.state_ceiling) << "\n";

  if (cfg.t_bar) {
    out << "\n[second_level]\n";
    if (cfg.ell) out << "ell = " << *cfg.ell << "\n";
    out << "t_bar = " << num_str(*cfg.t_bar) << "\n";
    if (cfg.t_star) out << "t_star = " << num_str(*cfg.t_star) << "\n";
  }

  out << "\n[thresholds]\n"
      << "tracking_tail = " << num_str(cfg.tracking_tail) << "\n"
      << "decoder_tail = " << num_str(cfg.decoder_tail) << "\n";
  return out.str();
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  if (cfg.exo_type != "vanderpol") {
    throw ConfigError("unsupported exosystem type: " + cfg.exo_type);
  }
  if (cfg.plant_type != "integrator") {
    throw ConfigError("unsupported plant type: " + cfg.plant_type);
  }
  if (cfg.w0_min.size() != 2 || cfg.w0_max.size() != 2) {
    throw ConfigError("vanderpol exosystem needs 2-dimensional w0 boxes");
  }

  Scenario sc;
  sc.exo.r = 2;
  sc.exo.s = vdp_field(cfg.epsilon, cfg.a);
  sc.exo.y_r = [](std::span<const double> w) { return vdp_reference(w); };
  sc.exo.w0_box = Box{cfg.w0_min, cfg.w0_max};
  if (cfg.w_margin) {
    sc.auto_margin = false;
    sc.exo.w_margin = *cfg.w_margin;
  }

  sc.n_bits = cfg.bits_per_sample;
  sc.T = cfg.sampling_interval;
  sc.expansion_pairs = cfg.expansion_pairs;
  sc.expansion_seed = cfg.expansion_seed;
  sc.m_t_override = cfg.m_t;
  sc.levels_override = cfg.levels;

  sc.plant.n = 0;
  sc.plant.mu = {};

  sc.im.d = 2;
  sc.im.phi = vdp_phi(cfg.epsilon, cfg.a);
  sc.im.blend_width = cfg.blend_width;
  sc.im.support_box = vdp_support_box(cfg.epsilon, cfg.a, sc.exo.w0_box,
                                      cfg.support_inflation, cfg.step);

  sc.gains.kappa = cfg.kappa;
  sc.gains.c.assign(cfg.hurwitz_c.begin(), cfg.hurwitz_c.end());
  sc.gains.k = cfg.k;

  if (cfg.t_bar) {
    SecondLevel sl;
    sl.t_bar = *cfg.t_bar;
    sl.ell = cfg.ell ? *cfg.ell : check_dwell_compat(*cfg.t_star, *cfg.t_bar);
    sc.second_level = sl;
  }

  sc.t_end = cfg.t_end;
  sc.h = cfg.step;
  sc.t_tail = cfg.t_tail;
  sc.w_init = cfg.w_init;
  sc.codec_init = cfg.codec_init;
  sc.z_init = {};
  sc.xi_init = cfg.xi_init;
  sc.y_init = cfg.y_init;
  sc.state_ceiling = cfg.state_ceiling;
  return sc;
}

}  // namespace rtrack
