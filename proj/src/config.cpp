#include "mwmusic/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mwmusic/errors.hpp"

namespace mwmusic {
namespace {

namespace pt = boost::property_tree;

double parse_number(const std::string& text, const std::string& field) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ValidationError(field + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& field) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(field + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, child] : tree_) {
      if (!ok.count(key)) throw ValidationError("[" + name_ + "]: unknown key '" + key + "'");
      if (!child.empty()) throw ValidationError("[" + name_ + "] " + key + ": nested values are not supported");
    }
  }

  std::optional<std::string> text(const char* key) const {
    if (auto v = tree_.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }

  std::string required(const char* key) const {
    auto v = text(key);
    if (!v) throw ValidationError("[" + name_ + "]: missing key '" + key + "'");
    return *v;
  }

  double number(const char* key) const { return parse_number(required(key), field(key)); }

  double number_or(const char* key, double fallback) const {
    auto v = text(key);
    return v ? parse_number(*v, field(key)) : fallback;
  }

  std::string field(const char* key) const { return "[" + name_ + "] " + key; }

 private:
  std::string name_;
  const pt::ptree& tree_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::string token;
  while (in >> token) {
    const auto dash = token.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_count(token, "index list"));
      continue;
    }
    const auto lo = parse_count(token.substr(0, dash), "index range");
    const auto hi = parse_count(token.substr(dash + 1), "index range");
    require(lo <= hi, "index range '" + token + "' is decreasing");
    for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
  }
  return out;
}

AntennaArray ExperimentConfig::array() const { return uniform_circle_array(antenna_count, array_radius); }

RoiGrid ExperimentConfig::grid() const { return roi_grid(grid_radius, grid_step); }

const SplitSpec& ExperimentConfig::split_spec(const std::string& name) const {
  for (const auto& s : splits) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& s : splits) known += (known.empty() ? "" : ", ") + s.name;
  throw ValidationError("unknown split '" + name + "' (configured: " + known + ")");
}

ArraySplit ExperimentConfig::split(const std::string& name) const {
  const auto& s = split_spec(name);
  return split_array(array(), s.tx, s.rx);
}

ImagingOptions ExperimentConfig::imaging_options(unsigned workers) const {
  ImagingOptions o;
  o.threshold = imaging.threshold;
  o.clamp = imaging.clamp;
  o.field_model = imaging.test_field_model.value_or(imaging.field_model);
  o.workers = workers;
  return o;
}

void ExperimentConfig::validate() const {
  medium.validate();
  require(antenna_count >= 1, "[array] count: must be at least 1");
  require(array_radius > 0.0, "[array] radius: must be positive");
  require(grid_radius > 0.0, "[grid] radius: must be positive");
  require(grid_step > 0.0 && grid_step <= grid_radius, "[grid] step: must lie in (0, radius]");
  require(grid_radius < array_radius, "[grid] radius: imaging disk must lie inside the antenna circle");
  require(imaging.threshold > 0.0 && imaging.threshold < 1.0, "[imaging] threshold: must lie in (0, 1)");
  require(imaging.clamp > 0.0, "[imaging] clamp: must be positive");
  require(std::is_sorted(zetas.begin(), zetas.end()), "[metric] zeta: must be sorted ascending");
  for (double z : zetas) require(z >= 0.0 && z <= 1.0, "[metric] zeta: values must lie in [0, 1]");

  for (std::size_t i = 0; i < anomalies.size(); ++i) {
    const auto& a = anomalies[i];
    const std::string where = "[anomaly:" + anomaly_ids.at(i) + "]";
    try {
      a.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    require(norm(a.center) < grid_radius, where + ": center must lie strictly inside the imaging disk");
  }

  std::set<std::string> names;
  for (const auto& s : splits) {
    const std::string where = "[split:" + s.name + "]";
    require(names.insert(s.name).second, where + ": defined twice");
    try {
      split_array(array(), s.tx, s.rx);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  ExperimentConfig cfg;
  bool have_medium = false;
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ValidationError("config: key '" + name + "' outside any section");
    Section sec(name, body);
    if (name == "medium") {
      sec.allow({"eps_r", "sigma", "frequency", "mu_r"});
      cfg.medium = MediumSpec::relative(sec.number("eps_r"), sec.number("sigma"), sec.number("frequency"),
                                        sec.number_or("mu_r", 1.0) * kVacuumPermeability);
      have_medium = true;
    } else if (name == "array") {
      sec.allow({"count", "radius"});
      if (auto c = sec.text("count")) cfg.antenna_count = parse_count(*c, sec.field("count"));
      cfg.array_radius = sec.number_or("radius", cfg.array_radius);
    } else if (name == "grid") {
      sec.allow({"radius", "step"});
      cfg.grid_radius = sec.number_or("radius", cfg.grid_radius);
      cfg.grid_step = sec.number_or("step", cfg.grid_step);
    } else if (name == "imaging") {
      sec.allow({"threshold", "clamp", "field_model", "test_field_model"});
      cfg.imaging.threshold = sec.number_or("threshold", cfg.imaging.threshold);
      cfg.imaging.clamp = sec.number_or("clamp", cfg.imaging.clamp);
      if (auto m = sec.text("field_model")) cfg.imaging.field_model = parse_field_model(*m);
      if (auto m = sec.text("test_field_model")) cfg.imaging.test_field_model = parse_field_model(*m);
    } else if (name == "metric") {
      sec.allow({"zeta"});
      if (auto z = sec.text("zeta")) {
        cfg.zetas.clear();
        std::istringstream zs(*z);
        std::string tok;
        while (zs >> tok) cfg.zetas.push_back(parse_number(tok, sec.field("zeta")));
        require(!cfg.zetas.empty(), "[metric] zeta: empty list");
      }
    } else if (name.rfind("anomaly:", 0) == 0) {
      sec.allow({"x", "y", "radius", "eps_r", "sigma"});
      cfg.anomalies.push_back({{sec.number("x"), sec.number("y")},
                               sec.number("radius"),
                               sec.number("eps_r") * kVacuumPermittivity,
                               sec.number("sigma")});
      cfg.anomaly_ids.push_back(name.substr(8));
    } else if (name.rfind("split:", 0) == 0) {
      sec.allow({"tx", "rx"});
      SplitSpec s{name.substr(6), parse_index_list(sec.required("tx")), parse_index_list(sec.required("rx"))};
      require(!s.name.empty(), "[split:]: split name is empty");
      cfg.splits.push_back(std::move(s));
    } else {
      throw ValidationError("config: unknown section [" + name + "]");
    }
  }
  require(have_medium, "config: missing [medium] section");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  try {
    return parse_config(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace mwmusic
