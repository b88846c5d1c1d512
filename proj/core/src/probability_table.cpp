#include "mrtest/probability_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrtest/error.hpp"

namespace mrtest {

std::string to_string(TableKind kind) {
  switch (kind) {
    case TableKind::Single: return "single";
    case TableKind::Sequential: return "sequential";
    case TableKind::Quasi: return "quasi";
    case TableKind::Joint: return "joint";
  }
  return "unknown";
}

TableKind table_kind_from_string(const std::string& s) {
  if (s == "single") return TableKind::Single;
  if (s == "sequential") return TableKind::Sequential;
  if (s == "quasi") return TableKind::Quasi;
  if (s == "joint") return TableKind::Joint;
  throw ParseError("unknown table kind '" + s + "'");
}

ProbabilityTable::ProbabilityTable(TableKind kind, std::vector<std::size_t> time_indices,
                                   std::vector<double> weights)
    : kind_(kind), time_indices_(std::move(time_indices)), weights_(std::move(weights)) {
  const std::size_t k = time_indices_.size();
  if (k < 1 || k > 4) throw ValidationError("table arity must lie in [1, 4]");
  if (!std::is_sorted(time_indices_.begin(), time_indices_.end()) ||
      std::adjacent_find(time_indices_.begin(), time_indices_.end()) != time_indices_.end()) {
    throw ValidationError("table time indices must be strictly increasing");
  }
  if (weights_.size() != (std::size_t{1} << k)) {
    throw ValidationError("table needs 2^k weights");
  }
}

ProbabilityTable ProbabilityTable::with_kind(TableKind kind) const {
  ProbabilityTable t = *this;
  t.kind_ = kind;
  return t;
}

int ProbabilityTable::sign_at(std::size_t flat, std::size_t pos) const {
  const std::size_t bit = arity() - 1 - pos;
  return ((flat >> bit) & 1U) ? +1 : -1;
}

double ProbabilityTable::weight(std::span<const int> signs) const {
  if (signs.size() != arity()) throw std::invalid_argument("weight: wrong number of signs");
  std::size_t flat = 0;
  for (int s : signs) flat = (flat << 1) | (s > 0 ? 1U : 0U);
  return weights_[flat];
}

std::string ProbabilityTable::outcome_key(std::size_t flat) const {
  std::string key(arity(), '-');
  for (std::size_t pos = 0; pos < arity(); ++pos)
    if (sign_at(flat, pos) > 0) key[pos] = '+';
  return key;
}

std::vector<int> ProbabilityTable::signs_from_key(const std::string& key) {
  std::vector<int> signs;
  signs.reserve(key.size());
  for (char c : key) {
    if (c == '+') signs.push_back(+1);
    else if (c == '-') signs.push_back(-1);
    else throw ParseError("bad outcome key '" + key + "'");
  }
  return signs;
}

double ProbabilityTable::total() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double ProbabilityTable::min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

double ProbabilityTable::moment(std::span<const std::size_t> positions) const {
  double acc = 0.0;
  for (std::size_t flat = 0; flat < weights_.size(); ++flat) {
    int prod = 1;
    for (std::size_t pos : positions) prod *= sign_at(flat, pos);
    acc += prod * weights_[flat];
  }
  return acc;
}

ProbabilityTable ProbabilityTable::marginalize(std::size_t time_index) const {
  const auto it = std::find(time_indices_.begin(), time_indices_.end(), time_index);
  if (it == time_indices_.end()) throw ValidationError("marginalize: time index not in table");
  if (arity() == 1) throw ValidationError("marginalize: cannot remove the only time");
  const std::size_t pos = static_cast<std::size_t>(it - time_indices_.begin());
  const std::size_t bit = arity() - 1 - pos;

  std::vector<std::size_t> kept = time_indices_;
  kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pos));
  std::vector<double> out(weights_.size() / 2, 0.0);
  for (std::size_t flat = 0; flat < weights_.size(); ++flat) {
    const std::size_t low = flat & ((std::size_t{1} << bit) - 1);
    const std::size_t high = flat >> (bit + 1);
    out[(high << bit) | low] += weights_[flat];
  }
  return ProbabilityTable(kind_, std::move(kept), std::move(out));
}

double ProbabilityTable::max_abs_difference(const ProbabilityTable& other) const {
  if (other.time_indices_ != time_indices_) {
    throw ValidationError("tables cover different time indices");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    worst = std::max(worst, std::abs(weights_[i] - other.weights_[i]));
  return worst;
}

}  // namespace mrtest
