#include "riskrl/agent.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace riskrl {

QuantileTable::QuantileTable(int num_quantiles, int num_actions, double initial_value)
    : num_quantiles_(num_quantiles),
      num_actions_(num_actions),
      initial_value_(initial_value),
      default_slice_(static_cast<std::size_t>(num_quantiles), initial_value) {
  if (num_quantiles < 1) throw std::invalid_argument("QuantileTable: num_quantiles must be >= 1");
  if (num_actions < 1) throw std::invalid_argument("QuantileTable: num_actions must be >= 1");
  if (!std::isfinite(initial_value))
    throw std::invalid_argument("QuantileTable: initial_value must be finite");
}

void QuantileTable::check_action(int action) const {
  if (action < 0 || action >= num_actions_)
    throw std::invalid_argument("QuantileTable: action index out of range");
}

std::span<const double> QuantileTable::values(StateKey state, int action) const {
  check_action(action);
  const auto it = rows_.find(state);
  if (it == rows_.end()) return default_slice_;
  const std::size_t offset = static_cast<std::size_t>(action) * num_quantiles_;
  return std::span<const double>(it->second).subspan(offset, num_quantiles_);
}

QuantileDistribution QuantileTable::distribution(StateKey state, int action) const {
  const auto slice = values(state, action);
  return QuantileDistribution(std::vector<double>(slice.begin(), slice.end()));
}

double QuantileTable::action_expectation(StateKey state, int action) const {
  return expectation(values(state, action));
}

double QuantileTable::action_interval_expectation(StateKey state, int action,
                                                  const RiskInterval& interval) const {
  return interval_expectation(values(state, action), interval);
}

std::span<double> QuantileTable::mutable_values(StateKey state, int action) {
  check_action(action);
  auto [it, inserted] = rows_.try_emplace(state);
  if (inserted)
    it->second.assign(static_cast<std::size_t>(num_actions_) * num_quantiles_, initial_value_);
  const std::size_t offset = static_cast<std::size_t>(action) * num_quantiles_;
  return std::span<double>(it->second).subspan(offset, num_quantiles_);
}

void QuantileTable::sort_values(StateKey state, int action) {
  auto slice = mutable_values(state, action);
  std::sort(slice.begin(), slice.end());
}

std::vector<StateKey> QuantileTable::sorted_state_keys() const {
  std::vector<StateKey> keys;
  keys.reserve(rows_.size());
  for (const auto& [key, row] : rows_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void QuantileTable::save(std::ostream& out) const {
  out << "riskrl-table v1\n";
  out << "quantiles " << num_quantiles_ << "\n";
  out << "actions " << num_actions_ << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", initial_value_);
  out << "initial " << buf << "\n";
  out << "states " << rows_.size() << "\n";
  for (StateKey key : sorted_state_keys()) {
    const auto& row = rows_.at(key);
    for (int a = 0; a < num_actions_; ++a) {
      std::snprintf(buf, sizeof(buf), "%" PRIx64, key);
      out << buf << " " << a;
      for (int q = 0; q < num_quantiles_; ++q) {
        std::snprintf(buf, sizeof(buf), "%a",
                      row[static_cast<std::size_t>(a) * num_quantiles_ + q]);
        out << " " << buf;
      }
      out << "\n";
    }
  }
}

namespace {

std::string expect_token(std::istream& in, const std::string& what) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("table checkpoint: missing " + what);
  return token;
}

double parse_hex_double(const std::string& token, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0')
    throw std::runtime_error("table checkpoint: bad " + what + " '" + token + "'");
  return v;
}

}  // namespace

QuantileTable QuantileTable::load(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "riskrl-table" || version != "v1")
    throw std::runtime_error("table checkpoint: unrecognized header");

  auto expect_keyword = [&](const char* keyword) {
    const std::string token = expect_token(in, keyword);
    if (token != keyword)
      throw std::runtime_error(std::string("table checkpoint: expected '") + keyword + "'");
  };

  expect_keyword("quantiles");
  int num_quantiles = 0;
  in >> num_quantiles;
  expect_keyword("actions");
  int num_actions = 0;
  in >> num_actions;
  expect_keyword("initial");
  const double initial = parse_hex_double(expect_token(in, "initial value"), "initial value");
  expect_keyword("states");
  std::size_t num_states = 0;
  in >> num_states;
  if (!in) throw std::runtime_error("table checkpoint: truncated header");

  QuantileTable table(num_quantiles, num_actions, initial);
  for (std::size_t s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      const std::string key_token = expect_token(in, "state key");
      StateKey key = 0;
      if (std::sscanf(key_token.c_str(), "%" SCNx64, &key) != 1)
        throw std::runtime_error("table checkpoint: bad state key '" + key_token + "'");
      int action = -1;
      in >> action;
      if (!in || action != a)
        throw std::runtime_error("table checkpoint: unexpected action index");
      auto slice = table.mutable_values(key, action);
      for (int q = 0; q < num_quantiles; ++q)
        slice[q] = parse_hex_double(expect_token(in, "quantile value"), "quantile value");
    }
  }
  return table;
}

void QuantileTable::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open table checkpoint for writing: " + path);
  save(out);
  if (!out) throw std::runtime_error("failed writing table checkpoint: " + path);
}

QuantileTable QuantileTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table checkpoint: " + path);
  return load(in);
}

int greedy_target_action(const QuantileTable& table, StateKey state, std::span<const int> legal) {
  if (legal.empty()) throw std::invalid_argument("greedy_target_action: empty legal set");
  int best = legal[0];
  double best_value = table.action_expectation(state, legal[0]);
  for (std::size_t k = 1; k < legal.size(); ++k) {
    const double value = table.action_expectation(state, legal[k]);
    if (value > best_value || (value == best_value && legal[k] < best)) {
      best = legal[k];
      best_value = value;
    }
  }
  return best;
}

namespace {

int greedy_interval_action(const QuantileTable& table, StateKey state, std::span<const int> legal,
                           const RiskInterval& interval) {
  int best = legal[0];
  double best_value = table.action_interval_expectation(state, legal[0], interval);
  for (std::size_t k = 1; k < legal.size(); ++k) {
    const double value = table.action_interval_expectation(state, legal[k], interval);
    if (value > best_value || (value == best_value && legal[k] < best)) {
      best = legal[k];
      best_value = value;
    }
  }
  return best;
}

}  // namespace

double qr_update(QuantileTable& table, const Transition& transition, const LearnerConfig& cfg) {
  if (cfg.lr < 0.0) throw std::invalid_argument("qr_update: lr must be non-negative");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
    throw std::invalid_argument("qr_update: gamma must be in [0, 1]");

  std::vector<double> targets;
  if (transition.terminal) {
    targets.push_back(transition.reward);
  } else {
    if (transition.next_legal_actions.empty())
      throw std::invalid_argument("qr_update: non-terminal transition needs legal next actions");
    const std::span<const int> legal(transition.next_legal_actions);
    const int next_action =
        cfg.bootstrap_interval
            ? greedy_interval_action(table, transition.next_state, legal, *cfg.bootstrap_interval)
            : greedy_target_action(table, transition.next_state, legal);
    const auto next_values = table.values(transition.next_state, next_action);
    targets.reserve(next_values.size());
    for (double v : next_values) targets.push_back(transition.reward + cfg.gamma * v);
  }

  auto pred = table.mutable_values(transition.state, transition.action);
  std::vector<double> grad(pred.size());
  const double loss =
      quantile_huber_loss(std::span<const double>(pred.data(), pred.size()), targets, cfg.kappa, grad);
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] -= cfg.lr * grad[i];
  table.sort_values(transition.state, transition.action);
  return loss;
}

int act(const QuantileTable& table, StateKey state, std::span<const int> legal,
        const RiskInterval& interval, double epsilon, Rng& rng) {
  if (legal.empty()) throw std::invalid_argument("act: empty legal set");
  std::vector<QuantileDistribution> dists;
  dists.reserve(legal.size());
  for (int a : legal) dists.push_back(table.distribution(state, a));
  const int index = select_action(dists, interval, epsilon, rng);
  return legal[static_cast<std::size_t>(index)];
}

}  // namespace riskrl
