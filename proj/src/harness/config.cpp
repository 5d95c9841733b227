#include "riskrl/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riskrl::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean value for " + key + ": '" + value + "'");
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    seeds.push_back(parse_u64("seeds", item));
  }
  return seeds;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "env") env = value;
  else if (key == "risk_mode") risk_mode = value;
  else if (key == "schedule_steps") schedule_steps = parse_u64(key, value);
  else if (key == "eps_start") eps_start = parse_double(key, value);
  else if (key == "eps_end") eps_end = parse_double(key, value);
  else if (key == "eps_steps") eps_steps = parse_u64(key, value);
  else if (key == "gamma") gamma = parse_double(key, value);
  else if (key == "lr") lr = parse_double(key, value);
  else if (key == "lr_end") lr_end = parse_double(key, value);
  else if (key == "kappa") kappa = parse_double(key, value);
  else if (key == "num_quantiles") num_quantiles = static_cast<int>(parse_u64(key, value));
  else if (key == "bootstrap") bootstrap = value;
  else if (key == "total_steps") total_steps = parse_u64(key, value);
  else if (key == "eval_interval") eval_interval = parse_u64(key, value);
  else if (key == "eval_episodes") eval_episodes = static_cast<int>(parse_u64(key, value));
  else if (key == "seeds") seeds = parse_seed_list(value);
  else if (key == "out_dir") out_dir = value;
  else if (key == "threads") threads = static_cast<int>(parse_u64(key, value));
  else if (key == "write_checkpoints") write_checkpoints = parse_bool(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> kEnvs = {"kiting", "focusfire", "bandit"};
  static const std::vector<std::string> kModes = {"static-averse", "static-neutral",
                                                  "static-seeking", "sched-averse",
                                                  "sched-neutral"};
  if (std::find(kEnvs.begin(), kEnvs.end(), env) == kEnvs.end())
    throw std::invalid_argument("config: unknown env '" + env + "'");
  if (std::find(kModes.begin(), kModes.end(), risk_mode) == kModes.end())
    throw std::invalid_argument("config: unknown risk_mode '" + risk_mode + "'");
  if (bootstrap != "neutral" && bootstrap != "scheduled")
    throw std::invalid_argument("config: bootstrap must be neutral or scheduled");
  if (risk_mode.rfind("sched-", 0) == 0 && schedule_steps == 0)
    throw std::invalid_argument("config: scheduled risk modes need schedule_steps > 0");
  if (!(1.0 >= eps_start && eps_start >= eps_end && eps_end >= 0.0))
    throw std::invalid_argument("config: need 1 >= eps_start >= eps_end >= 0");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("config: gamma must be in [0, 1]");
  if (!(lr > 0.0)) throw std::invalid_argument("config: lr must be positive");
  if (lr_end >= 0.0 && lr_end > lr)
    throw std::invalid_argument("config: lr_end must not exceed lr");
  if (!(kappa > 0.0)) throw std::invalid_argument("config: kappa must be positive");
  if (num_quantiles < 1) throw std::invalid_argument("config: num_quantiles must be >= 1");
  if (total_steps == 0) throw std::invalid_argument("config: total_steps must be positive");
  if (eval_interval == 0 || eval_interval > total_steps)
    throw std::invalid_argument("config: need 1 <= eval_interval <= total_steps");
  if (eval_episodes < 1) throw std::invalid_argument("config: eval_episodes must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir must be non-empty");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

RiskSchedule ExperimentConfig::risk_schedule() const {
  if (risk_mode == "static-averse") return RiskSchedule::fixed(RiskProfile::averse());
  if (risk_mode == "static-neutral") return RiskSchedule::fixed(RiskProfile::neutral());
  if (risk_mode == "static-seeking") return RiskSchedule::fixed(RiskProfile::seeking());
  if (risk_mode == "sched-averse")
    return RiskSchedule::seeking_to(RiskProfile::averse(), schedule_steps);
  if (risk_mode == "sched-neutral")
    return RiskSchedule::seeking_to(RiskProfile::neutral(), schedule_steps);
  throw std::invalid_argument("config: unknown risk_mode '" + risk_mode + "'");
}

EpsilonSchedule ExperimentConfig::epsilon_schedule() const {
  return EpsilonSchedule(eps_start, eps_end, eps_steps);
}

RiskInterval ExperimentConfig::eval_interval_policy() const {
  return risk_schedule().target.interval;
}

LearnerConfig ExperimentConfig::learner_config() const {
  LearnerConfig cfg;
  cfg.gamma = gamma;
  cfg.lr = lr;
  cfg.num_quantiles = num_quantiles;
  cfg.kappa = kappa;
  return cfg;
}

double ExperimentConfig::lr_at_step(std::uint64_t t) const {
  if (lr_end < 0.0 || total_steps == 0) return lr;
  const double frac = std::min(1.0, static_cast<double>(t) / static_cast<double>(total_steps));
  return lr + (lr_end - lr) * frac;
}

std::string ExperimentConfig::to_key_values() const {
  std::ostringstream out;
  out << "env = " << env << "\n";
  out << "risk_mode = " << risk_mode << "\n";
  out << "schedule_steps = " << schedule_steps << "\n";
  out << "eps_start = " << eps_start << "\n";
  out << "eps_end = " << eps_end << "\n";
  out << "eps_steps = " << eps_steps << "\n";
  out << "gamma = " << gamma << "\n";
  out << "lr = " << lr << "\n";
  out << "lr_end = " << lr_end << "\n";
  out << "kappa = " << kappa << "\n";
  out << "num_quantiles = " << num_quantiles << "\n";
  out << "bootstrap = " << bootstrap << "\n";
  out << "total_steps = " << total_steps << "\n";
  out << "eval_interval = " << eval_interval << "\n";
  out << "eval_episodes = " << eval_episodes << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n";
  out << "out_dir = " << out_dir << "\n";
  out << "threads = " << threads << "\n";
  out << "write_checkpoints = " << (write_checkpoints ? "true" : "false") << "\n";
  return out.str();
}

std::string ExperimentConfig::run_basename() const { return env + "_" + risk_mode; }

}  // namespace riskrl::harness
