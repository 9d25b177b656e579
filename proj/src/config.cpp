#include "dsca/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dsca {

InstanceParams ExperimentConfig::instance_params() const {
  std::vector<int> ids(nodes);
  for (int i = 0; i < nodes; ++i) ids[i] = i;
  InstanceParams ip{InterferenceGraph(ids, edges), channels, users_per_bs,
                    noise, Eigen::VectorXd(), sig_scale, intf_scale};
  ip.budgets.resize(nodes);
  if (budget.size() == 1)
    ip.budgets.setConstant(budget[0]);
  else if (static_cast<int>(budget.size()) == nodes)
    for (int b = 0; b < nodes; ++b) ip.budgets(b) = budget[b];
  else
    throw std::invalid_argument("config: budget needs 1 or nodes values");
  return ip;
}

AlgorithmConfig ExperimentConfig::algorithm_config(AlgorithmTag tag) const {
  AlgorithmConfig c;
  c.tag = tag;
  c.schedule = schedule;
  c.stop = stop;
  c.sc_rounds = sc_rounds;
  c.sc_tol = sc_tol;
  c.cm_inner_floor = cm_inner_floor;
  c.cm_tau0 = cm_tau0;
  c.init_power_frac = init_power_frac;
  return c;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  int i = static_cast<int>(d);
  if (i != d) throw std::invalid_argument("config: '" + key + "' must be integer");
  return i;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  bool any = false;

  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    any = true;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      if (section != "topology" && section != "instance" &&
          section != "schedule" && section != "algorithm" &&
          section != "experiment")
        throw std::invalid_argument("config: unknown section [" + section + "]");
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    std::string qual = section + "." + key;

    if (qual == "topology.nodes") cfg.nodes = to_int(qual, val);
    else if (qual == "topology.edges") {
      cfg.edges.clear();
      for (const std::string& e : split(val, ',')) {
        auto ends = split(trim(e), '-');
        if (ends.size() != 2)
          throw std::invalid_argument("config: edge '" + e + "' not 'a-b'");
        cfg.edges.push_back({to_int(qual, trim(ends[0])), to_int(qual, trim(ends[1]))});
      }
    }
    else if (qual == "instance.channels") cfg.channels = to_int(qual, val);
    else if (qual == "instance.users_per_bs") cfg.users_per_bs = to_int(qual, val);
    else if (qual == "instance.noise") cfg.noise = to_double(qual, val);
    else if (qual == "instance.budget") {
      cfg.budget.clear();
      for (const std::string& b : split(val, ','))
        cfg.budget.push_back(to_double(qual, trim(b)));
    }
    else if (qual == "instance.sig_scale") cfg.sig_scale = to_double(qual, val);
    else if (qual == "instance.intf_scale") cfg.intf_scale = to_double(qual, val);
    else if (qual == "schedule.alpha0") cfg.schedule.alpha0 = to_double(qual, val);
    else if (qual == "schedule.beta") cfg.schedule.beta = to_double(qual, val);
    else if (qual == "schedule.eps0") cfg.schedule.eps0 = to_double(qual, val);
    else if (qual == "schedule.gamma") cfg.schedule.gamma = to_double(qual, val);
    else if (qual == "schedule.L0") cfg.schedule.L0 = to_double(qual, val);
    else if (qual == "schedule.lambda") cfg.schedule.lambda = to_double(qual, val);
    else if (qual == "schedule.tau0") cfg.schedule.tau0 = to_double(qual, val);
    else if (qual == "schedule.delta") cfg.schedule.delta = to_double(qual, val);
    else if (qual == "algorithm.algorithms") {
      cfg.algorithms.clear();
      for (const std::string& a : split(val, ','))
        cfg.algorithms.push_back(algorithm_from_string(trim(a)));
    }
    else if (qual == "algorithm.max_iters") cfg.stop.max_iters = to_int(qual, val);
    else if (qual == "algorithm.consensus_tol")
      cfg.stop.consensus_tol = to_double(qual, val);
    else if (qual == "algorithm.stationarity_tol")
      cfg.stop.stationarity_tol = to_double(qual, val);
    else if (qual == "algorithm.sc_rounds") cfg.sc_rounds = to_int(qual, val);
    else if (qual == "algorithm.sc_tol") cfg.sc_tol = to_double(qual, val);
    else if (qual == "algorithm.cm_inner_floor")
      cfg.cm_inner_floor = to_double(qual, val);
    else if (qual == "algorithm.cm_tau0") cfg.cm_tau0 = to_double(qual, val);
    else if (qual == "algorithm.init_power_frac")
      cfg.init_power_frac = to_double(qual, val);
    else if (qual == "experiment.alphas") {
      cfg.alphas.clear();
      for (const std::string& a : split(val, ','))
        cfg.alphas.push_back(to_double(qual, trim(a)));
    }
    else if (qual == "experiment.seeds") {
      cfg.seeds.clear();
      for (const std::string& s : split(val, ','))
        cfg.seeds.push_back(static_cast<uint64_t>(to_int(qual, trim(s))));
    }
    else if (qual == "experiment.T") cfg.horizon = to_int(qual, val);
    else if (qual == "experiment.qos_weight") cfg.qos_weight = to_double(qual, val);
    else if (qual == "experiment.out_dir") cfg.out_dir = val;
    else
      throw std::invalid_argument("config: unknown key '" + qual + "'");
  }

  if (!any) throw std::invalid_argument("config: empty file");
  if (cfg.nodes <= 0) throw std::invalid_argument("config: topology.nodes missing");
  if (cfg.budget.empty()) throw std::invalid_argument("config: instance.budget missing");
  if (cfg.algorithms.empty())
    throw std::invalid_argument("config: algorithm.algorithms missing");
  if (cfg.alphas.empty()) throw std::invalid_argument("config: experiment.alphas missing");
  if (cfg.seeds.empty()) throw std::invalid_argument("config: experiment.seeds missing");
  if (cfg.horizon <= 0) throw std::invalid_argument("config: experiment.T must be >= 1");
  for (double a : cfg.alphas)
    if (a > 1.0) throw std::invalid_argument("config: fairness alpha must be <= 1");

  ScheduleReport rep = validate_schedules(cfg.schedule);
  if (!rep.pass)
    throw std::invalid_argument("config: schedule validation failed\n" +
                                rep.summary());
  cfg.instance_params();  // validates topology + budgets
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  return parse_config(f);
}

void serialize_config(const ExperimentConfig& cfg, std::ostream& os) {
  os.precision(17);
  os << "[topology]\n";
  os << "nodes = " << cfg.nodes << "\n";
  os << "edges = ";
  for (size_t i = 0; i < cfg.edges.size(); ++i)
    os << (i ? "," : "") << cfg.edges[i].first << "-" << cfg.edges[i].second;
  os << "\n\n[instance]\n";
  os << "channels = " << cfg.channels << "\n";
  os << "users_per_bs = " << cfg.users_per_bs << "\n";
  os << "noise = " << cfg.noise << "\n";
  os << "budget = ";
  for (size_t i = 0; i < cfg.budget.size(); ++i)
    os << (i ? "," : "") << cfg.budget[i];
  os << "\n";
  os << "sig_scale = " << cfg.sig_scale << "\n";
  os << "intf_scale = " << cfg.intf_scale << "\n";
  os << "\n[schedule]\n";
  os << "alpha0 = " << cfg.schedule.alpha0 << "\n";
  os << "beta = " << cfg.schedule.beta << "\n";
  os << "eps0 = " << cfg.schedule.eps0 << "\n";
  os << "gamma = " << cfg.schedule.gamma << "\n";
  os << "L0 = " << cfg.schedule.L0 << "\n";
  os << "lambda = " << cfg.schedule.lambda << "\n";
  os << "tau0 = " << cfg.schedule.tau0 << "\n";
  os << "delta = " << cfg.schedule.delta << "\n";
  os << "\n[algorithm]\n";
  os << "algorithms = ";
  for (size_t i = 0; i < cfg.algorithms.size(); ++i)
    os << (i ? "," : "") << to_string(cfg.algorithms[i]);
  os << "\n";
  os << "max_iters = " << cfg.stop.max_iters << "\n";
  os << "consensus_tol = " << cfg.stop.consensus_tol << "\n";
  os << "stationarity_tol = " << cfg.stop.stationarity_tol << "\n";
  os << "sc_rounds = " << cfg.sc_rounds << "\n";
  os << "sc_tol = " << cfg.sc_tol << "\n";
  os << "cm_inner_floor = " << cfg.cm_inner_floor << "\n";
  os << "cm_tau0 = " << cfg.cm_tau0 << "\n";
  os << "init_power_frac = " << cfg.init_power_frac << "\n";
  os << "\n[experiment]\n";
  os << "alphas = ";
  for (size_t i = 0; i < cfg.alphas.size(); ++i)
    os << (i ? "," : "") << cfg.alphas[i];
  os << "\n";
  os << "seeds = ";
  for (size_t i = 0; i < cfg.seeds.size(); ++i)
    os << (i ? "," : "") << cfg.seeds[i];
  os << "\n";
  os << "T = " << cfg.horizon << "\n";
  os << "qos_weight = " << cfg.qos_weight << "\n";
  os << "out_dir = " << cfg.out_dir << "\n";
}

}  // namespace dsca
