#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrtest {

/// Joint marks a reconstructed underlying distribution (a feasibility witness).
enum class TableKind { Single, Sequential, Quasi, Joint };

std::string to_string(TableKind kind);
TableKind table_kind_from_string(const std::string& s);

/// Weights over outcome tuples in {-1,+1}^k for measurements at k of the
/// model's times. Outcomes are stored in lexicographic order with -1 < +1,
/// i.e. bit (k-1-pos) of the flat index is set when position pos is +1.
class ProbabilityTable {
 public:
  ProbabilityTable() = default;
  /// time_indices are 0-based and strictly increasing; weights has 2^k entries.
  ProbabilityTable(TableKind kind, std::vector<std::size_t> time_indices, std::vector<double> weights);

  TableKind kind() const { return kind_; }
  std::size_t arity() const { return time_indices_.size(); }
  const std::vector<std::size_t>& time_indices() const { return time_indices_; }
  std::span<const double> weights() const { return weights_; }
  ProbabilityTable with_kind(TableKind kind) const;

  double weight(std::span<const int> signs) const;
  double weight_at(std::size_t flat) const { return weights_[flat]; }

  /// Sign (+1/-1) of position pos in outcome flat.
  int sign_at(std::size_t flat, std::size_t pos) const;
  /// Outcome key such as "+-+" (ASCII '-').
  std::string outcome_key(std::size_t flat) const;
  static std::vector<int> signs_from_key(const std::string& key);

  double total() const;
  double min_weight() const;
  /// <prod_{pos in positions} s_pos>, positions indexing into time_indices.
  double moment(std::span<const std::size_t> positions) const;
  /// Sum over the outcome at the given model time index. Result keeps kind.
  ProbabilityTable marginalize(std::size_t time_index) const;
  /// Largest |this - other| over outcomes; index sets must match.
  double max_abs_difference(const ProbabilityTable& other) const;

 private:
  TableKind kind_ = TableKind::Single;
  std::vector<std::size_t> time_indices_;
  std::vector<double> weights_;
};

}  // namespace mrtest
